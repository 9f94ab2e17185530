#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "hylambda/theta.hpp"

using namespace hylambda;

namespace {

SiegelPoint diag_point(const std::vector<Complex>& entries) {
    const int g = static_cast<int>(entries.size());
    MatrixXc tau = MatrixXc::Zero(g, g);
    for (int i = 0; i < g; ++i) tau(i, i) = entries[i];
    return validate_siegel(tau);
}

SiegelPoint random_point(int g, unsigned seed, double min_im = 0.9) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    MatrixXc tau = MatrixXc::Zero(g, g);
    for (int i = 0; i < g; ++i)
        for (int j = i; j < g; ++j) {
            const Complex v(u(rng), 0.25 * u(rng));
            tau(i, j) = tau(j, i) = v;
        }
    for (int i = 0; i < g; ++i) tau(i, i) += Complex(0, min_im + 0.5);
    return validate_siegel(tau);
}

// Plain box-truncated lattice sum, written independently of the library's
// ellipsoid enumeration.  Valid to ~1e-15 once Im tau >= 0.9 and the box
// radius is 8.
Complex box_sum(const SiegelPoint& pt, const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                int radius = 8) {
    const int g = pt.genus;
    std::vector<int> n(g, -radius);
    std::complex<long double> acc(0, 0);
    const long double pi = 3.14159265358979323846264338327950288L;
    while (true) {
        std::complex<long double> q(0, 0);
        for (int i = 0; i < g; ++i) {
            const long double vi = n[i] + (long double)a(i);
            for (int j = 0; j < g; ++j) {
                const long double vj = n[j] + (long double)a(j);
                q += vi * vj *
                     std::complex<long double>(pt.tau(i, j).real(), pt.tau(i, j).imag());
            }
        }
        long double phase = 0;
        for (int i = 0; i < g; ++i) phase += (n[i] + (long double)a(i)) * (long double)b(i);
        const std::complex<long double> e =
            std::complex<long double>(0, 1) * (pi * q + 2.0L * pi * phase);
        acc += std::exp(e);

        int k = 0;
        while (k < g && ++n[k] > radius) n[k++] = -radius;
        if (k == g) break;
    }
    return Complex(static_cast<double>(acc.real()), static_cast<double>(acc.imag()));
}

Eigen::VectorXd half_vec(int g, std::uint32_t bits) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(g);
    for (int i = 0; i < g; ++i) v(i) = ((bits >> i) & 1u) ? 0.5 : 0.0;
    return v;
}

}  // namespace

TEST_CASE("parity matches the shared-half-entry count") {
    CHECK(theta_parity_even(ThetaChar{1, 0, 0}));
    CHECK(theta_parity_even(ThetaChar{1, 0, 1}));
    CHECK(theta_parity_even(ThetaChar{1, 1, 0}));
    CHECK_FALSE(theta_parity_even(ThetaChar{1, 1, 1}));

    int even = 0;
    for (std::uint32_t top = 0; top < 16; ++top)
        for (std::uint32_t bot = 0; bot < 16; ++bot)
            even += theta_parity_even(ThetaChar{2, top & 3u, bot & 3u}) ? 0 : 0;
    even = 0;
    for (std::uint32_t top = 0; top < 4; ++top)
        for (std::uint32_t bot = 0; bot < 4; ++bot)
            even += theta_parity_even(ThetaChar{2, top, bot}) ? 1 : 0;
    CHECK(even == 10);  // 2^(g-1) (2^g + 1) for g = 2
}

TEST_CASE("theta at the unit diagonal point matches the classical constant") {
    SiegelPoint pt = diag_point({Complex(0, 1)});
    const Complex v = theta_constant(ThetaChar{1, 0, 0}, pt, 1e-13);
    // pi^(1/4) / Gamma(3/4)
    CHECK(v.real() == doctest::Approx(1.0864348112133080).epsilon(1e-13));
    CHECK(std::abs(v.imag()) < 1e-13);
}

TEST_CASE("lattice sum agrees with an independent box sum") {
    for (int g = 1; g <= 3; ++g) {
        SiegelPoint pt = random_point(g, 500 + g);
        for (std::uint32_t top = 0; top < (1u << g); ++top)
            for (std::uint32_t bot = 0; bot < (1u << g); ++bot) {
                const ThetaChar chr{g, top, bot};
                if (!theta_parity_even(chr)) continue;
                const Complex lib = theta_constant(chr, pt, 1e-13);
                const Complex ref = box_sum(pt, half_vec(g, top), half_vec(g, bot));
                CHECK(std::abs(lib - ref) < 1e-11);
            }
    }
}

TEST_CASE("odd characteristics return exact zero without summing") {
    for (int g = 1; g <= 4; ++g) {
        SiegelPoint pt = random_point(g, 900 + g);
        for (std::uint32_t top = 0; top < (1u << g); ++top)
            for (std::uint32_t bot = 0; bot < (1u << g); ++bot) {
                const ThetaChar chr{g, top, bot};
                if (theta_parity_even(chr)) continue;
                ThetaStats stats;
                const Complex v = theta_constant(chr, pt, 1e-12, &stats);
                CHECK(v == Complex(0, 0));
                CHECK(stats.terms == 0);
            }
    }
}

TEST_CASE("diagonal tau factorizes theta into a product of elliptic values") {
    std::vector<Complex> taus = {Complex(0.2, 1.1), Complex(-0.3, 0.9), Complex(0.1, 1.4)};
    SiegelPoint pt3 = diag_point(taus);
    for (std::uint32_t top = 0; top < 8; ++top)
        for (std::uint32_t bot = 0; bot < 8; ++bot) {
            const ThetaChar chr{3, top, bot};
            if (!theta_parity_even(chr)) continue;
            Complex prod(1, 0);
            bool odd_factor = false;
            for (int i = 0; i < 3; ++i) {
                const ThetaChar c1{1, (top >> i) & 1u, (bot >> i) & 1u};
                if (!theta_parity_even(c1)) odd_factor = true;
                prod *= theta_constant(c1, diag_point({taus[i]}), 1e-13);
            }
            const Complex whole = theta_constant(chr, pt3, 1e-13);
            if (odd_factor) {
                CHECK(std::abs(whole) < 1e-11);
            } else {
                CHECK(std::abs(whole - prod) < 1e-11 * std::max(1.0, std::abs(prod)));
            }
        }
}

TEST_CASE("integer shifts of the characteristic leave the 8th power invariant") {
    SiegelPoint pt = random_point(2, 321);
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<int> shift(-2, 2);
    for (std::uint32_t top = 0; top < 4; ++top)
        for (std::uint32_t bot = 0; bot < 4; ++bot) {
            Eigen::VectorXd a = half_vec(2, top), b = half_vec(2, bot);
            const Complex base = theta_constant_raw(a, b, pt, 1e-13);
            Eigen::VectorXd a2 = a, b2 = b;
            for (int i = 0; i < 2; ++i) {
                a2(i) += shift(rng);
                b2(i) += shift(rng);
            }
            const Complex moved = theta_constant_raw(a2, b2, pt, 1e-13);
            const auto p8 = [](Complex z) {
                Complex w = z * z;
                w = w * w;
                return w * w;
            };
            CHECK(std::abs(p8(moved) - p8(base)) <=
                  1e-8 * std::max(1e-30, std::abs(p8(base))));
            // top shifts alone reindex the sum and preserve the value itself
            Eigen::VectorXd a3 = a;
            a3(0) += 1;
            a3(1) -= 2;
            const Complex reindexed = theta_constant_raw(a3, b, pt, 1e-13);
            CHECK(std::abs(reindexed - base) < 1e-11 * std::max(1.0, std::abs(base)));
        }
}

TEST_CASE("truncation radius certifies the requested tail") {
    SiegelPoint pt = random_point(3, 77);
    const double r1 = truncation_radius(pt, 1e-8);
    const double r2 = truncation_radius(pt, 1e-14);
    CHECK(r1 > 0);
    CHECK(r2 > r1);  // tighter eps, larger radius

    const ThetaChar chr{3, 1, 2};
    const Complex coarse = theta_constant(chr, pt, 1e-8);
    const Complex fine = theta_constant(chr, pt, 1e-13);
    CHECK(std::abs(coarse - fine) < 2e-8);
}

TEST_CASE("skewed points from group translates still evaluate cleanly") {
    // push a point to lower lambda_min to exercise the certified radius
    MatrixXc tau(2, 2);
    tau << Complex(0.4, 0.35), Complex(0.2, 0.25), Complex(0.2, 0.25), Complex(-0.3, 0.6);
    SiegelPoint pt = validate_siegel(tau);
    const ThetaChar chr{2, 2, 1};
    ThetaStats stats;
    const Complex v1 = theta_constant(chr, pt, 1e-10, &stats);
    const Complex v2 = theta_constant(chr, pt, 1e-13);
    CHECK(stats.terms > 0);
    CHECK(std::abs(v1 - v2) < 2e-10);
}

TEST_CASE("eps domain is enforced") {
    SiegelPoint pt = diag_point({Complex(0, 1)});
    const ThetaChar chr{1, 0, 0};
    CHECK_THROWS_WITH_AS(theta_constant(chr, pt, 1e-2), doctest::Contains("InvalidArgument"),
                         Error);
    CHECK_THROWS_WITH_AS(theta_constant(chr, pt, 1e-30),
                         doctest::Contains("PrecisionExhausted"), Error);
    CHECK_THROWS_AS(theta_constant(ThetaChar{2, 0, 0}, pt, 1e-12), Error);  // genus mismatch
}

TEST_CASE("long double path agrees with the double path") {
    SiegelPoint pt = random_point(2, 4242);
    MatrixXcl tau_l(2, 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            tau_l(i, j) = ComplexL(pt.tau(i, j).real(), pt.tau(i, j).imag());
    const ThetaChar chr{2, 1, 0};
    const Complex d = theta_constant(chr, pt, 1e-13);
    const ComplexL l = theta_constant_ld(chr, tau_l, 1e-16L);
    CHECK(std::abs(d - Complex(double(l.real()), double(l.imag()))) < 1e-12);
}
