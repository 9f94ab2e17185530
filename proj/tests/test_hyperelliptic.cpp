#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "hylambda/discriminant.hpp"
#include "hylambda/hyperelliptic.hpp"

using namespace hylambda;

namespace {

// Complete elliptic integral K(k) by the arithmetic-geometric mean, an
// oracle independent of the quadrature engine.
double elliptic_k(double k) {
    double a = 1.0, b = std::sqrt(1.0 - k * k);
    while (std::abs(a - b) > 1e-15 * a) {
        const double an = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = an;
    }
    return M_PI / (2.0 * a);
}

std::vector<BranchPoint> finite_points(const std::vector<Complex>& zs) {
    std::vector<BranchPoint> pts;
    for (Complex z : zs) pts.push_back(BranchPoint::at(z));
    return pts;
}

HyperellipticCurve random_curve(int g, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::vector<Complex> zs;
    while (static_cast<int>(zs.size()) < 2 * g + 2) {
        const Complex z(u(rng), u(rng));
        bool ok = true;
        for (Complex w : zs) ok = ok && std::abs(z - w) > 0.3;
        if (ok) zs.push_back(z);
    }
    return curve_from_roots(finite_points(zs));
}

// Thomae's relation: |theta[eta_{T o U}]|^4 over the absolute product of
// branch differences within T and within its complement (in all 2g+2
// indices, pairs touching an infinite point dropped) is the same for every
// (g+1)-subset T.  This ties the period matrix, the homology marking and
// the characteristic table together; any mismatch between those three
// conventions scatters the ratios.
double thomae_ratio_spread(const HyperellipticCurve& curve, const SiegelPoint& pt,
                           double eps = 1e-12) {
    DiscriminantContext ctx = make_discriminant_context(curve.genus);
    const int total = 2 * curve.genus + 2;
    const int nfinite = static_cast<int>(curve.chain.size());

    double lo = 0, hi = 0;
    bool first = true;
    for (std::size_t t = 0; t < ctx.tsets.size(); ++t) {
        std::vector<char> in_t(total + 1, 0);
        for (int i : ctx.tsets[t]) in_t[i] = 1;

        double log_prod = 0;
        for (int i = 1; i <= total; ++i)
            for (int j = i + 1; j <= total; ++j) {
                if (in_t[i] != in_t[j]) continue;
                if (i > nfinite || j > nfinite) continue;  // infinite index
                log_prod += std::log(std::abs(curve.chain[i - 1] - curve.chain[j - 1]));
            }

        const double log_theta4 =
            4.0 * std::log(std::abs(theta_constant(ctx.tchars[t], pt, eps)));
        const double ratio = log_theta4 - log_prod;
        if (first) {
            lo = hi = ratio;
            first = false;
        } else {
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
        }
    }
    return hi - lo;  // spread of log ratios
}

}  // namespace

TEST_CASE("square lattice from the curve y^2 = x^3 - x") {
    PeriodResult res = period_matrix_from_chain({Complex(-1, 0), Complex(0, 0), Complex(1, 0)},
                                                true);
    CHECK(std::abs(res.tau.tau(0, 0) - Complex(0, 1)) < 1e-9);
    CHECK_FALSE(res.b_flipped);
    CHECK(res.symmetry_residual == 0);  // 1x1
}

TEST_CASE("Legendre curves match the AGM period ratio") {
    for (double lam : {0.3, 0.77}) {
        PeriodResult res = period_matrix_from_chain(
            {Complex(0, 0), Complex(lam, 0), Complex(1, 0)}, true);
        const double expect = elliptic_k(std::sqrt(1.0 - lam)) / elliptic_k(std::sqrt(lam));
        CHECK(std::abs(res.tau.tau(0, 0).real()) < 1e-9);
        CHECK(res.tau.tau(0, 0).imag() == doctest::Approx(expect).epsilon(1e-9));
    }
}

TEST_CASE("even-degree elliptic model matches the AGM period ratio") {
    for (double a : {2.0, 3.5}) {
        PeriodResult res = period_matrix_from_chain(
            {Complex(-a, 0), Complex(-1, 0), Complex(1, 0), Complex(a, 0)}, false);
        const double kp = std::sqrt(1.0 - 1.0 / (a * a));
        const double expect = 2.0 * elliptic_k(1.0 / a) / elliptic_k(kp);
        CHECK(std::abs(res.tau.tau(0, 0).real()) < 1e-9);
        CHECK(res.tau.tau(0, 0).imag() == doctest::Approx(expect).epsilon(1e-9));
    }
}

TEST_CASE("Thomae ratios are constant for real branch points") {
    HyperellipticCurve curve = curve_from_roots(finite_points(
        {Complex(0, 0), Complex(0.3, 0), Complex(1, 0), Complex(1.7, 0), Complex(2.4, 0),
         Complex(3.1, 0)}));
    PeriodResult res = period_matrix(curve);
    CHECK(thomae_ratio_spread(curve, res.tau) < 1e-6);
}

TEST_CASE("Thomae ratios are constant for complex configurations") {
    std::mt19937_64 rng(9137);
    std::uniform_real_distribution<double> u(-0.2, 0.2);
    std::vector<Complex> zs = {Complex(0, 0),   Complex(0.9, 0), Complex(1.8, 0),
                               Complex(2.6, 0), Complex(3.5, 0), Complex(4.2, 0)};
    for (Complex& z : zs) z += Complex(u(rng), u(rng));
    HyperellipticCurve curve = curve_from_roots(finite_points(zs));
    PeriodResult res = period_matrix(curve);
    CHECK(thomae_ratio_spread(curve, res.tau) < 1e-6);
}

TEST_CASE("Thomae ratios are constant with a branch point at infinity") {
    // y^2 = x^5 - x, branch points 0, +-1, +-i and infinity
    HyperellipticCurve curve = curve_from_roots(
        {BranchPoint::at(Complex(-1, 0)), BranchPoint::at(Complex(0, -1)),
         BranchPoint::at(Complex(0, 0)), BranchPoint::at(Complex(0, 1)),
         BranchPoint::at(Complex(1, 0)), BranchPoint::inf()});
    CHECK(curve.has_infinity);
    PeriodResult res = period_matrix(curve);
    CHECK(thomae_ratio_spread(curve, res.tau) < 1e-6);
}

TEST_CASE("Thomae ratios are constant at genus 3") {
    HyperellipticCurve curve = curve_from_roots(finite_points(
        {Complex(-3.1, 0.1), Complex(-2.2, -0.2), Complex(-1.4, 0.15), Complex(-0.3, -0.1),
         Complex(0.6, 0.2), Complex(1.5, -0.15), Complex(2.4, 0.1), Complex(3.3, 0)}));
    PeriodResult res = period_matrix(curve);
    CHECK(thomae_ratio_spread(curve, res.tau) < 1e-6);
}

TEST_CASE("curve construction validates input") {
    std::vector<Complex> five = {Complex(0, 0), Complex(1, 0), Complex(2, 0), Complex(3, 0),
                                 Complex(4, 0)};
    CHECK_THROWS_AS(curve_from_roots(finite_points(five)), Error);  // not 2g+2

    std::vector<BranchPoint> dup = finite_points(
        {Complex(0, 0), Complex(0, 0), Complex(1, 0), Complex(2, 0), Complex(3, 0),
         Complex(4, 0)});
    CHECK_THROWS_WITH_AS(curve_from_roots(dup), doctest::Contains("DuplicateRoot"), Error);

    std::vector<BranchPoint> two_inf = {BranchPoint::inf(),
                                        BranchPoint::inf(),
                                        BranchPoint::at(Complex(1, 0)),
                                        BranchPoint::at(Complex(2, 0)),
                                        BranchPoint::at(Complex(3, 0)),
                                        BranchPoint::at(Complex(4, 0))};
    CHECK_THROWS_AS(curve_from_roots(two_inf), Error);

    std::vector<BranchPoint> with_inf = {BranchPoint::inf(),
                                         BranchPoint::at(Complex(0, 0)),
                                         BranchPoint::at(Complex(1, 0)),
                                         BranchPoint::at(Complex(2, 0)),
                                         BranchPoint::at(Complex(3, 0)),
                                         BranchPoint::at(Complex(4, 0))};
    // explicit ordering that does not put infinity last
    std::vector<int> bad_order = {0, 1, 2, 3, 4, 5};
    CHECK_THROWS_WITH_AS(curve_from_roots(with_inf, bad_order),
                         doctest::Contains("OrderingNotRealizable"), Error);
    // default ordering moves it last
    HyperellipticCurve ok = curve_from_roots(with_inf);
    CHECK(ok.has_infinity);
    CHECK(ok.chain.size() == 5);
    CHECK(ok.ordering.back() == 0);

    std::vector<int> not_perm = {0, 0, 1, 2, 3, 4};
    CHECK_THROWS_AS(curve_from_roots(finite_points(
                        {Complex(0, 0), Complex(1, 0), Complex(2, 0), Complex(3, 0),
                         Complex(4, 0), Complex(5, 0)}),
                    not_perm),
                    Error);
}

TEST_CASE("derived geometry fields") {
    HyperellipticCurve curve = curve_from_roots(finite_points(
        {Complex(4, 0), Complex(0, 0), Complex(1, 0), Complex(2, 0), Complex(3, 0),
         Complex(10, 0)}));
    CHECK(curve.genus == 2);
    CHECK(curve.scale == doctest::Approx(10.0));
    CHECK(curve.min_separation == doctest::Approx(1.0));
    // default ordering sorts by real part
    CHECK(curve.chain.front() == Complex(0, 0));
    CHECK(curve.chain.back() == Complex(10, 0));
}

TEST_CASE("chain simplicity detects crossings and doubling back") {
    std::vector<Complex> simple = {Complex(0, 0), Complex(1, 0), Complex(1, 1), Complex(0, 1)};
    CHECK(chain_is_simple(simple, 1.0));

    // segment 3 crosses segment 1
    std::vector<Complex> crossing = {Complex(0, 0), Complex(1, 0), Complex(1, 1),
                                     Complex(0.5, -1)};
    CHECK_FALSE(chain_is_simple(crossing, 1.0));

    // adjacent segments that reverse along the same line overlap
    std::vector<Complex> reversal = {Complex(0, 0), Complex(2, 0), Complex(1, 0),
                                     Complex(1, 1)};
    CHECK_FALSE(chain_is_simple(reversal, 1.0));
}

TEST_CASE("moebius maps act on branch points") {
    HyperellipticCurve curve = curve_from_roots(finite_points(
        {Complex(0, 0), Complex(1, 0), Complex(2, 0), Complex(3, 0), Complex(4, 0),
         Complex(5, 0)}));

    MoebiusMap shift{Complex(1, 0), Complex(0.5, 0.25), Complex(0, 0), Complex(1, 0)};
    HyperellipticCurve moved = moebius(curve, shift);
    CHECK(moved.chain[0] == Complex(0.5, 0.25));
    CHECK(moved.chain[5] == Complex(5.5, 0.25));

    MoebiusMap degenerate{Complex(1, 0), Complex(2, 0), Complex(2, 0), Complex(4, 0)};
    CHECK_THROWS_WITH_AS(moebius(curve, degenerate), doctest::Contains("DegenerateMap"), Error);

    // send the last branch point to infinity; ordering stays realizable
    MoebiusMap invert{Complex(0, 0), Complex(1, 0), Complex(1, 0), Complex(-5, 0)};
    HyperellipticCurve odd_model = moebius(curve, invert);
    CHECK(odd_model.has_infinity);
    CHECK(odd_model.chain.size() == 5);
}

TEST_CASE("homology basis has the standard intersection pairing") {
    for (unsigned seed : {11u, 12u, 13u}) {
        for (int g = 2; g <= 4; ++g) {
            HyperellipticCurve curve = random_curve(g, 1000 * g + seed);
            HomologyBasis basis = canonical_basis(curve);
            Eigen::MatrixXi j = basis.intersection();
            Eigen::MatrixXi expect = Eigen::MatrixXi::Zero(2 * g, 2 * g);
            for (int k = 0; k < g; ++k) {
                expect(k, g + k) = 1;
                expect(g + k, k) = -1;
            }
            CHECK(j == expect);
        }
    }
}

TEST_CASE("random curves satisfy the period matrix contract") {
    for (unsigned seed = 1; seed <= 5; ++seed) {
        HyperellipticCurve curve = random_curve(2, seed);
        PeriodResult res = period_matrix(curve);
        CHECK(res.symmetry_residual < 1e-9);
        CHECK(res.refine_delta < 1e-9);
        CHECK_FALSE(res.b_flipped);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(res.tau.tau.imag());
        CHECK(es.eigenvalues().minCoeff() > 0);
    }
    HyperellipticCurve curve3 = random_curve(3, 77);
    PeriodResult res3 = period_matrix(curve3);
    CHECK(res3.symmetry_residual < 1e-9);
    CHECK_FALSE(res3.b_flipped);
}

TEST_CASE("close branch points trigger the extended engine under auto precision") {
    std::vector<BranchPoint> pts = finite_points(
        {Complex(0, 0), Complex(1e-8, 0), Complex(1, 0), Complex(2, 0), Complex(3, 0),
         Complex(4, 0)});
    HyperellipticCurve curve = curve_from_roots(pts);
    CHECK(curve.min_separation < 1e-6 * curve.scale);

    PeriodResult res = period_matrix(curve);
    CHECK(res.used_extended);

    PrecisionProfile dbl;
    dbl.prec = Precision::Double;
    // forcing the double engine onto this surface needs the node headroom
    // the auto promotion would have granted
    dbl.max_nodes = 1 << 21;
    PeriodResult res2 = period_matrix(curve, dbl);
    CHECK_FALSE(res2.used_extended);
    // both engines see the same surface
    CHECK((res.tau.tau - res2.tau.tau).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("long double reference path agrees with the double path") {
    HyperellipticCurve curve = random_curve(2, 31);
    PeriodResult d = period_matrix(curve);
    PeriodResultL l = period_matrix_ld(curve);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const Complex lv(static_cast<double>(l.tau(i, j).real()),
                             static_cast<double>(l.tau(i, j).imag()));
            CHECK(std::abs(lv - d.tau.tau(i, j)) < 1e-9);
        }
}
