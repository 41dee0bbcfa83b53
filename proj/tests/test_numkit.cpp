#include <doctest.h>

#include <cmath>
#include <random>

#include "resetctl/numkit.hpp"

using namespace resetctl;

namespace {

double max_abs_diff(const CMatrix& a, const CMatrix& b) {
    return (a - b).max_abs();
}

CMatrix rotation_generator(double theta) {
    return CMatrix{{0.0, theta}, {-theta, 0.0}};
}

/// Closed-form oracle: exp of theta*[[0,1],[-1,0]] is a rotation by theta.
CMatrix rotation_matrix(double theta) {
    return CMatrix{{std::cos(theta), std::sin(theta)},
                   {-std::sin(theta), std::cos(theta)}};
}

} // namespace

TEST_SUITE("numkit") {

TEST_CASE("mat_exp of zero matrix is identity") {
    const CMatrix z = CMatrix::zeros(2, 2);
    CHECK(max_abs_diff(mat_exp(z), CMatrix::identity(2)) < 1e-15);
}

TEST_CASE("mat_exp of diagonal matrix exponentiates the diagonal") {
    const CMatrix d = CMatrix::diagonal({-1.0, -2.0});
    const CMatrix e = mat_exp(d);
    CHECK(std::abs(e(0, 0) - std::exp(-1.0)) < 1e-14);
    CHECK(std::abs(e(1, 1) - std::exp(-2.0)) < 1e-14);
    CHECK(std::abs(e(0, 1)) < 1e-15);
    CHECK(std::abs(e(1, 0)) < 1e-15);
}

TEST_CASE("mat_exp rotation by pi gives -I") {
    const CMatrix e = mat_exp(rotation_generator(M_PI));
    CHECK(max_abs_diff(e, -CMatrix::identity(2)) < 1e-13);
}

TEST_CASE("mat_exp holds 1e-12 relative accuracy up to norm 50") {
    for (double theta : {0.3, 5.0, 17.5, 50.0}) {
        const CMatrix e = mat_exp(rotation_generator(theta));
        CHECK(max_abs_diff(e, rotation_matrix(theta)) < 1e-12);
    }
}

TEST_CASE("mat_exp multiplicativity on commuting pairs") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        CMatrix a(3, 3);
        for (std::size_t r = 0; r < 3; ++r) {
            for (std::size_t c = 0; c < 3; ++c) {
                a(r, c) = Complex{dist(rng), dist(rng)};
            }
        }
        // Polynomials in the same matrix commute.
        const CMatrix b = a * a * 0.3 + a * 0.1;
        const CMatrix lhs = mat_exp(a + b);
        const CMatrix rhs = mat_exp(a) * mat_exp(b);
        CHECK(max_abs_diff(lhs, rhs) < 1e-10 * std::max(1.0, rhs.max_abs()));
    }
}

TEST_CASE("mat_exp rejects bad input") {
    CHECK_THROWS_AS((void)mat_exp(CMatrix::zeros(2, 3)), DimensionError);
    CMatrix bad = CMatrix::zeros(2, 2);
    bad(0, 0) = Complex{std::nan(""), 0.0};
    CHECK_THROWS_AS((void)mat_exp(bad), ParamError);
}

TEST_CASE("mat_inv of identity and diagonal") {
    CHECK(max_abs_diff(mat_inv(CMatrix::identity(3)), CMatrix::identity(3)) < 1e-15);
    const CMatrix inv = mat_inv(CMatrix::diagonal({2.0, 4.0}));
    CHECK(std::abs(inv(0, 0) - 0.5) < 1e-15);
    CHECK(std::abs(inv(1, 1) - 0.25) < 1e-15);
}

TEST_CASE("mat_inv residual below 1e-10 on random well-conditioned matrices") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (std::size_t n = 1; n <= 4; ++n) {
        for (int trial = 0; trial < 25; ++trial) {
            CMatrix m(n, n);
            for (std::size_t r = 0; r < n; ++r) {
                for (std::size_t c = 0; c < n; ++c) {
                    m(r, c) = Complex{dist(rng), dist(rng)};
                }
                m(r, r) += Complex{4.0, 0.0}; // diagonally dominant
            }
            const CMatrix residual = m * mat_inv(m) - CMatrix::identity(n);
            CHECK(residual.max_abs() < 1e-10);
        }
    }
}

TEST_CASE("mat_inv reports singular matrices") {
    CHECK_THROWS_AS((void)mat_inv(CMatrix::zeros(2, 2)), SingularMatrixError);
    // Rank-1 matrix.
    const CMatrix rank1{{1.0, 2.0}, {2.0, 4.0}};
    CHECK_THROWS_AS((void)mat_inv(rank1), SingularMatrixError);
    try {
        (void)mat_inv(rank1);
    } catch (const SingularMatrixError& e) {
        CHECK(e.rcond() < 1e-12);
    }
}

TEST_CASE("single_bin_dft recovers a pure tone") {
    Signal s;
    s.dt = 1.0 / 256.0;
    for (int k = 0; k < 256 * 4; ++k) {
        s.samples.push_back(std::sin(2.0 * M_PI * 1.0 * s.dt * k));
    }
    const Complex c = single_bin_dft(s, 1.0, 0.0);
    CHECK(std::abs(std::abs(c) - 1.0) < 1e-6);
    CHECK(std::abs(std::arg(c)) < 1e-6);
}

TEST_CASE("single_bin_dft recovers amplitude and phase at 3 Hz") {
    Signal s;
    s.dt = 1.0 / 300.0;
    for (int k = 0; k < 300 * 2; ++k) {
        const double t = s.dt * k;
        s.samples.push_back(0.5 * std::sin(2.0 * M_PI * 3.0 * t + M_PI / 4.0));
    }
    const Complex c = single_bin_dft(s, 3.0, 0.0);
    CHECK(std::abs(std::abs(c) - 0.5) < 1e-6);
    CHECK(std::abs(std::arg(c) - M_PI / 4.0) < 1e-6);
}

TEST_CASE("single_bin_dft separates tones over integer periods") {
    Signal s;
    s.dt = 1.0 / 240.0;
    for (int k = 0; k < 240 * 3; ++k) {
        const double t = s.dt * k;
        s.samples.push_back(std::sin(2.0 * M_PI * 1.0 * t) +
                            0.25 * std::sin(2.0 * M_PI * 3.0 * t + 0.3));
    }
    const Complex c = single_bin_dft(s, 3.0, 0.0);
    CHECK(std::abs(std::abs(c) - 0.25) < 1e-6);
    CHECK(std::abs(std::arg(c) - 0.3) < 1e-6);
}

TEST_CASE("single_bin_dft is linear in the signal") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Signal a;
    Signal b;
    a.dt = b.dt = 1.0 / 128.0;
    for (int k = 0; k < 256; ++k) {
        a.samples.push_back(dist(rng));
        b.samples.push_back(dist(rng));
    }
    Signal mix = a;
    for (int k = 0; k < 256; ++k) {
        mix.samples[k] = 2.0 * a.samples[k] - 0.5 * b.samples[k];
    }
    const Complex ca = single_bin_dft(a, 4.0, 0.0);
    const Complex cb = single_bin_dft(b, 4.0, 0.0);
    const Complex cm = single_bin_dft(mix, 4.0, 0.0);
    CHECK(std::abs(cm - (2.0 * ca - 0.5 * cb)) < 1e-12);
}

TEST_CASE("single_bin_dft window and frequency validation") {
    Signal s;
    s.dt = 0.01;
    s.samples.assign(50, 0.0); // half a second: shorter than one 1 Hz period
    CHECK_THROWS_AS((void)single_bin_dft(s, 1.0, 0.0), WindowError);
    CHECK_THROWS_AS((void)single_bin_dft(s, -1.0, 0.0), WindowError);
    CHECK_THROWS_AS((void)single_bin_dft(s, 0.0, 0.0), WindowError);
    // skip that discards everything
    CHECK_THROWS_AS((void)single_bin_dft(s, 10.0, 1.0), WindowError);
}

TEST_CASE("log_grid endpoints and monotonicity") {
    const auto g = log_grid(0.1, 10.0, 21);
    CHECK(g.size() == 21);
    CHECK(g.front() == doctest::Approx(0.1));
    CHECK(g.back() == doctest::Approx(10.0));
    for (std::size_t i = 0; i + 1 < g.size(); ++i) {
        CHECK(g[i] < g[i + 1]);
    }
    CHECK_THROWS_AS((void)log_grid(0.0, 1.0, 5), ParamError);
}

} // TEST_SUITE
