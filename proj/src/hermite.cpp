#include "qrm/hermite.hpp"

#include <cmath>
#include <numbers>

namespace qrm {

namespace {

// h_n = m_n * exp(log_scale); the mantissas are rescaled when they grow.
template <class Visit>
void recur(int nmax, double x, Visit&& visit) {
    double log_scale = -0.5 * x * x;
    double hm1 = 0;
    double h = std::pow(std::numbers::pi, -0.25);
    visit(0, h, log_scale);
    for (int n = 0; n < nmax; ++n) {
        double hn = std::sqrt(2.0 / (n + 1)) * x * h - std::sqrt(double(n) / (n + 1)) * hm1;
        hm1 = h;
        h = hn;
        double a = std::abs(h);
        if (a > 1e150) {
            h /= 1e150;
            hm1 /= 1e150;
            log_scale += std::log(1e150);
        } else if (a < 1e-150 && a > 0 && std::abs(hm1) < 1e-150) {
            h *= 1e150;
            hm1 *= 1e150;
            log_scale -= std::log(1e150);
        }
        visit(n + 1, h, log_scale);
    }
}

}  // namespace

double hermite_series(const std::vector<double>& c, double x) {
    if (c.empty()) return 0;
    // accumulate per scale exponent; the scale only changes in discrete jumps
    double acc = 0, acc_scale = 0;
    bool started = false;
    recur(static_cast<int>(c.size()) - 1, x, [&](int n, double m, double ls) {
        if (!started) {
            acc_scale = ls;
            started = true;
        }
        if (ls != acc_scale) {
            acc *= std::exp(acc_scale - ls);
            acc_scale = ls;
        }
        acc += c[n] * m;
    });
    return acc * std::exp(acc_scale);
}

std::vector<double> hermite_functions(int nmax, double x) {
    std::vector<double> h(nmax + 1);
    recur(nmax, x, [&](int n, double m, double ls) { h[n] = m * std::exp(ls); });
    return h;
}

}  // namespace qrm
