#pragma once

#include <array>

namespace qrm {

/// Normalized packet phi(x) = (xi/pi)^{1/4} exp(-xi (x - mu)^2 / 2).
struct Packet {
    double xi = 1;
    double mu = 0;
};

double packet_value(const Packet& a, double x);

/// Matrix elements between two packets <a|O|b> in closed form.
struct PairElements {
    double S;   // overlap
    double x;   // <a|x|b>
    double x2;  // <a|x^2|b>
    double p2;  // <a|p^2|b>
};

PairElements pair_elements(const Packet& a, const Packet& b);
double overlap(const Packet& a, const Packet& b);

/// Index of a packet parameter: 0 -> xi, 1 -> mu.
/// d_bra[i]    = <d_i phi_a | phi_b>
/// d_ket[j]    = <phi_a | d_j phi_b>
/// d_both[i][j] = <d_i phi_a | d_j phi_b>
struct OverlapDerivatives {
    double S;
    std::array<double, 2> d_bra, d_ket;
    std::array<std::array<double, 2>, 2> d_both;
};

OverlapDerivatives overlap_derivatives(const Packet& a, const Packet& b);

}  // namespace qrm
