#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "qrm/error.hpp"
#include "qrm/fockspace.hpp"

using namespace qrm;

namespace {

// Dense Hamiltonian assembled independently from ladder-operator matrices.
Eigen::MatrixXd dense_oracle(const ModelParams& p, int N) {
    const int nb = N + 1;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(nb, nb);
    for (int n = 1; n < nb; ++n) a(n - 1, n) = std::sqrt(double(n));
    Eigen::MatrixXd X = a + a.transpose();
    // (a + a^dag)^2 in the truncated space differs in the last diagonal entry;
    // build it from the full ladder algebra instead of squaring the truncation
    Eigen::MatrixXd X2 = Eigen::MatrixXd::Zero(nb, nb);
    for (int n = 0; n < nb; ++n) {
        X2(n, n) = 2.0 * n + 1.0;
        if (n + 2 < nb) X2(n + 2, n) = X2(n, n + 2) = std::sqrt((n + 1.0) * (n + 2.0));
    }
    Eigen::MatrixXd num = Eigen::MatrixXd::Zero(nb, nb);
    for (int n = 0; n < nb; ++n) num(n, n) = n;
    Eigen::MatrixXd I = Eigen::MatrixXd::Identity(nb, nb);
    Eigen::Matrix2d sz, sx;
    sz << 1, 0, 0, -1;
    sx << 0, 1, 1, 0;
    auto kron = [](const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
        Eigen::MatrixXd K(A.rows() * B.rows(), A.cols() * B.cols());
        for (int i = 0; i < A.rows(); ++i)
            for (int j = 0; j < A.cols(); ++j) K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
        return K;
    };
    // spin is the fast index, matching the interleaved ordering
    Eigen::MatrixXd H = p.omega() * kron(num, Eigen::Matrix2d::Identity()) + 0.5 * p.Omega() * kron(I, sx) +
                        p.g1() * kron(X, sz) + p.g2() * kron(X2, sz) - p.epsilon() * kron(I, sz);
    return H;
}

}  // namespace

TEST_CASE("band storage reproduces the dense Hamiltonian") {
    ModelParams p(1, 0.37, 0.21, 0.13, -0.08);
    const int N = 12;
    auto H = build_hamiltonian(p, N);
    auto D = dense_oracle(p, N);
    for (int i = 0; i < H.size(); ++i)
        for (int j = 0; j < H.size(); ++j) {
            CHECK(H.get(i, j) == doctest::Approx(D(i, j)).epsilon(1e-14));
            CHECK(H.get(i, j) == H.get(j, i));
        }
}

TEST_CASE("ladder matrix elements") {
    ModelParams p(1, 0, 0, 0.1, 0);
    auto H = build_hamiltonian(p, 10);
    for (int n = 0; n <= 8; ++n) {
        CHECK(H.get(fock_index(n + 2, Spin::plus), fock_index(n, Spin::plus)) ==
              doctest::Approx(0.1 * std::sqrt((n + 1.0) * (n + 2.0))));
        CHECK(H.get(fock_index(n, Spin::plus), fock_index(n, Spin::plus)) == doctest::Approx(n + 0.1 * (2 * n + 1)));
        CHECK(H.get(fock_index(n, Spin::minus), fock_index(n, Spin::minus)) == doctest::Approx(n - 0.1 * (2 * n + 1)));
    }
}

TEST_CASE("decoupled blocks at N=1") {
    ModelParams p(1, 0.3, 0, 0, 0);
    auto s = spectrum(p, 1, 4);
    CHECK(s.energies[0] == doctest::Approx(-0.15));
    CHECK(s.energies[1] == doctest::Approx(0.15));
    CHECK(s.energies[2] == doctest::Approx(0.85));
    CHECK(s.energies[3] == doctest::Approx(1.15));
}

TEST_CASE("banded eigenpairs match dense diagonalization") {
    for (auto p : {ModelParams(1, 0.01, 0.02, 0.2, 0.05), ModelParams(1, 1.0, 0.1, 0.24, 0.33),
                   ModelParams(0.01, 1.0, 0.05, 0.0, 0.0)}) {
        const int N = 120;
        auto D = dense_oracle(p, N);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(D);
        auto s = spectrum(p, N, 3);
        for (int k = 0; k < 3; ++k) {
            CHECK(s.energies[k] == doctest::Approx(es.eigenvalues()(k)).epsilon(1e-11).scale(1));
            Eigen::VectorXd v(2 * (N + 1));
            for (int n = 0; n <= N; ++n) {
                v(2 * n) = s.vectors[k].plus[n];
                v(2 * n + 1) = s.vectors[k].minus[n];
            }
            CHECK(std::abs(std::abs(v.dot(es.eigenvectors().col(k))) - 1) < 1e-9);
        }
    }
}

TEST_CASE("ground energy against a large-cutoff dense oracle") {
    ModelParams p(1, 0.01, 0, 0.5 * 0.25, 0);
    auto D = dense_oracle(p, 200);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(D, Eigen::EigenvaluesOnly);
    CHECK(ground_energy(p, 60) == doctest::Approx(es.eigenvalues()(0)).epsilon(1e-12));
}

TEST_CASE("orthonormal eigenvectors") {
    ModelParams p(1, 0.2, 0.1, 0.2, 0.1);
    auto s = spectrum(p, 80, 4);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) CHECK(std::abs(s.vectors[a].dot(s.vectors[b]) - (a == b)) < 1e-10);
    for (int a = 1; a < 4; ++a) CHECK(s.energies[a] >= s.energies[a - 1]);
}

TEST_CASE("gauge fix makes the largest coefficient positive") {
    ModelParams p(1, 0.2, 0.1, 0.2, 0.1);
    auto v = spectrum(p, 80, 1).vectors[0];
    double mx = 0, sgn = 0;
    for (std::size_t n = 0; n < v.plus.size(); ++n)
        for (double c : {v.plus[n], v.minus[n]})
            if (std::abs(c) > mx * (1 + 1e-10)) {
                mx = std::abs(c);
                sgn = c;
            }
    CHECK(sgn > 0);
}

TEST_CASE("ground energy never increases with cutoff") {
    ModelParams p(1, 0.01, 0.03, 0.9 * 0.25, 0.1);
    double prev = ground_energy(p, 8);
    for (int N = 16; N <= 256; N *= 2) {
        double e = ground_energy(p, N);
        CHECK(e <= prev + 1e-12);
        prev = e;
    }
}

TEST_CASE("photon parity at zero bias and linear coupling") {
    ModelParams p(1, 0.01, 0, 0.7 * 0.25, 0);
    auto v = spectrum(p, 100, 1).vectors[0];
    double odd = 0;
    for (int n = 1; n <= 100; n += 2) odd = std::max({odd, std::abs(v.plus[n]), std::abs(v.minus[n])});
    CHECK(odd < 1e-10);
}

TEST_CASE("degenerate ground state tie break prefers spin up") {
    // Omega = 0 and no bias: both spin sectors share the vacuum energy
    ModelParams p(1, 0, 0, 0, 0);
    auto s = spectrum(p, 10, 2);
    CHECK(s.energies[0] == doctest::Approx(s.energies[1]));
    CHECK(sigma_z(s.vectors[0]) == doctest::Approx(1.0));
    CHECK(sigma_z(s.vectors[1]) == doctest::Approx(-1.0));
}

TEST_CASE("reversed energy ordering after the transition") {
    ModelParams p = ModelParams::from_scaled(1, 0.01, 0.1, 0.998, 0.33);
    int N = converge_cutoff(p);
    auto v = spectrum(p, N, 1).vectors[0];
    double wm = 0;
    for (double c : v.minus) wm += c * c;
    CHECK(wm > 0.9);
}

TEST_CASE("converge_cutoff behaviour") {
    CHECK(converge_cutoff(ModelParams(1, 0.01, 0, 0, 0)) == 16);
    ModelParams a = ModelParams::from_scaled(1, 0.01, 0, 0.9, 0);
    ModelParams b = ModelParams::from_scaled(1, 0.01, 0, 0.999, 0);
    int na = converge_cutoff(a);
    CHECK(na == converge_cutoff(a));
    CHECK(converge_cutoff(b) > na);
    CutoffOptions tight;
    tight.ceiling = 64;
    CHECK_THROWS_AS(converge_cutoff(ModelParams::from_scaled(1, 0.01, 0, 0.9999, 0), tight), NumericalError);
}

TEST_CASE("sigma_z range and simple cases") {
    SpinorFockVector v;
    v.cutoff = 1;
    v.plus = {1, 0};
    v.minus = {0, 0};
    CHECK(sigma_z(v) == 1.0);
    v.plus = {std::sqrt(0.5), 0};
    v.minus = {std::sqrt(0.5), 0};
    CHECK(sigma_z(v) == doctest::Approx(0.0));
    for (double e : {-0.5, 0.0, 0.33})
        for (double g : {0.0, 0.5, 0.95}) {
            double sz = sigma_z(spectrum(ModelParams::from_scaled(1, 0.1, 0.3, g, e), 128, 1).vectors[0]);
            CHECK(sz <= 1.0 + 1e-12);
            CHECK(sz >= -1.0 - 1e-12);
        }
}

TEST_CASE("sigma_z changes sign across the biased transition") {
    double gb2 = 0.99, e = 0.33;
    double gc = transition_g1(1, 0.01, gb2, e);
    int N = 512;
    double below = sigma_z(spectrum(ModelParams::from_scaled(1, 0.01, 0.9 * gc, gb2, e), N, 1).vectors[0]);
    double above = sigma_z(spectrum(ModelParams::from_scaled(1, 0.01, 1.1 * gc, gb2, e), N, 1).vectors[0]);
    CHECK(below * above < 0);
}

TEST_CASE("gap of the bare two-level system") {
    CHECK(gap_ed(ModelParams(1, 0.3, 0, 0, 0), 16) == doctest::Approx(0.3));
    CHECK(gap_ed(ModelParams(1, 0.01, 0, 0, 0), 16) == doctest::Approx(0.01));
}

TEST_CASE("linear model gap closes at low frequency") {
    // omega/Omega = 0.01: the gap collapses once gbar1 passes 1
    double lo = gap_ed(ModelParams::from_scaled(0.01, 1, 0.5, 0, 0), 200);
    double hi = gap_ed(ModelParams::from_scaled(0.01, 1, 1.15, 0, 0), 200);
    CHECK(hi < 1e-2 * lo);
}

TEST_CASE("mixed coupling gap stays of order omega") {
    for (double g : {0.2, 0.5, 0.8, 0.95}) {
        double d = gap_ed(ModelParams::from_scaled(1, 1, 0.1, g, 0.33), 256);
        CHECK(d > 0.05);
    }
}
