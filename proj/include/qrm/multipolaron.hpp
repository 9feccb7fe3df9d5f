#pragma once

#include <array>

#include "qrm/model.hpp"
#include "qrm/polaron.hpp"
#include "qrm/qfi.hpp"

namespace qrm {

/// Two packets per spin. Basis order: (up, polaron), (up, anti-polaron),
/// (down, polaron), (down, anti-polaron).
struct MultiAnsatz {
    PolaronAnsatz ansatz;
    std::array<double, 8> theta{};  // (ln xi, mu) per basis packet
    std::array<double, 4> c{};      // weights, normalized with the overlap metric
    double energy = 0;
    double gradient_norm = 0;
    int iterations = 0;
    bool reseeded = false;
};

struct MultiOptions {
    double grad_tol = 0;  // 0 -> 1e-9 omega
    int max_iter = 3000;
};

/// Variational energy for nonlinear parameters theta; fills the analytic
/// gradient and the weights when requested.
double multipolaron_energy(const ModelParams& p, const std::array<double, 8>& theta,
                           std::array<double, 8>* grad = nullptr, std::array<double, 4>* c = nullptr);

/// Adiabatic seed: same-spin polaron plus a copy of the opposite spin's polaron.
std::array<double, 8> multipolaron_seed(const ModelParams& p);

MultiAnsatz variational_ground(const ModelParams& p, const MultiOptions& opt = {},
                               const std::array<double, 8>* start = nullptr);

/// Six-component QFI with respect to g2 from finite differences of the
/// re-optimized ansatz (step 0 -> 1e-3 gT).
QfiBreakdown qfi_decompose_multi(const ModelParams& p, double step = 0, const MultiOptions& opt = {});

}  // namespace qrm
