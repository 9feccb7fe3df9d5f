#include "qrm/gaussian.hpp"

#include <cmath>
#include <numbers>

namespace qrm {

double packet_value(const Packet& a, double x) {
    double u = x - a.mu;
    return std::pow(a.xi / std::numbers::pi, 0.25) * std::exp(-0.5 * a.xi * u * u);
}

double overlap(const Packet& a, const Packet& b) {
    const double A = a.xi + b.xi, D = a.mu - b.mu, P = a.xi * b.xi / A;
    return std::pow(a.xi * b.xi, 0.25) * std::sqrt(2.0 / A) * std::exp(-0.5 * P * D * D);
}

PairElements pair_elements(const Packet& a, const Packet& b) {
    const double A = a.xi + b.xi, D = a.mu - b.mu, P = a.xi * b.xi / A;
    const double S = overlap(a, b);
    const double m = (a.xi * a.mu + b.xi * b.mu) / A;
    return {S, S * m, S * (m * m + 1.0 / A), S * P * (1.0 - P * D * D)};
}

OverlapDerivatives overlap_derivatives(const Packet& a, const Packet& b) {
    // log-derivatives of S with respect to (xi_a, mu_a) and (xi_b, mu_b)
    const double xa = a.xi, xb = b.xi;
    const double A = xa + xb, A2 = A * A, D = a.mu - b.mu, P = xa * xb / A;
    const double S = overlap(a, b);

    const double L_xa = 1 / (4 * xa) - 1 / (2 * A) - D * D * xb * xb / (2 * A2);
    const double L_xb = 1 / (4 * xb) - 1 / (2 * A) - D * D * xa * xa / (2 * A2);
    const double L_ma = -P * D, L_mb = P * D;

    const double L_xa_xb = 1 / (2 * A2) - D * D * xa * xb / (A2 * A);
    const double L_xa_mb = D * xb * xb / A2;
    const double L_ma_xb = -D * xa * xa / A2;
    const double L_ma_mb = P;

    OverlapDerivatives r;
    r.S = S;
    r.d_bra = {S * L_xa, S * L_ma};
    r.d_ket = {S * L_xb, S * L_mb};
    r.d_both[0][0] = S * (L_xa * L_xb + L_xa_xb);
    r.d_both[0][1] = S * (L_xa * L_mb + L_xa_mb);
    r.d_both[1][0] = S * (L_ma * L_xb + L_ma_xb);
    r.d_both[1][1] = S * (L_ma * L_mb + L_ma_mb);
    return r;
}

}  // namespace qrm
