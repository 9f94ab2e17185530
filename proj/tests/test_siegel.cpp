#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "hylambda/siegel.hpp"

using namespace hylambda;

namespace {

SiegelPoint sample_point(int g, unsigned seed) {
    // Symmetric random tau with diagonally dominant imaginary part.
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    MatrixXc tau = MatrixXc::Zero(g, g);
    for (int i = 0; i < g; ++i)
        for (int j = i; j < g; ++j) {
            const Complex v(0.5 * u(rng), 0.3 * u(rng));
            tau(i, j) = v;
            tau(j, i) = v;
        }
    for (int i = 0; i < g; ++i) tau(i, i) += Complex(0, 1.5);
    return validate_siegel(tau);
}

}  // namespace

TEST_CASE("validation accepts symmetric points and symmetrizes tiny noise") {
    MatrixXc tau(2, 2);
    tau << Complex(0.1, 1.0), Complex(0.2, 0.3), Complex(0.2 + 1e-12, 0.3), Complex(-0.4, 2.0);
    SiegelPoint pt = validate_siegel(tau);
    CHECK(pt.tau(0, 1) == pt.tau(1, 0));
    CHECK(det_im(pt) > 0);
}

TEST_CASE("validation rejects gross asymmetry") {
    MatrixXc tau(2, 2);
    tau << Complex(0, 1), Complex(2, 0), Complex(0, 0), Complex(0, 1);
    CHECK_THROWS_WITH_AS(validate_siegel(tau), doctest::Contains("NotSymmetric"), Error);
}

TEST_CASE("validation rejects indefinite imaginary part") {
    MatrixXc tau(2, 2);
    tau << Complex(0, 1), Complex(0, 0), Complex(0, 0), Complex(0, -1);
    CHECK_THROWS_AS(validate_siegel(tau), Error);
}

TEST_CASE("symplectic construction checks the relations exactly") {
    MatrixXi64 id = MatrixXi64::Identity(2, 2);
    MatrixXi64 zero = MatrixXi64::Zero(2, 2);
    MatrixXi64 bad(2, 2);
    bad << 1, 2, 3, 4;  // not symmetric
    CHECK_THROWS_AS(SymplecticMatrix::from_blocks(id, bad, zero, id), Error);
    MatrixXi64 sym(2, 2);
    sym << 2, 1, 1, 0;
    CHECK_NOTHROW(SymplecticMatrix::from_blocks(id, sym, zero, id));
}

TEST_CASE("group action composes: gamma1 (gamma2 tau) = (gamma1 gamma2) tau") {
    for (int g = 1; g <= 3; ++g) {
        SiegelPoint pt = sample_point(g, 11 * g);
        SymplecticMatrix g1 = random_level2(g, 100 + g, 6);
        SymplecticMatrix g2 = random_level2(g, 200 + g, 6);
        SiegelPoint lhs = symplectic_act(g1, symplectic_act(g2, pt));
        SiegelPoint rhs = symplectic_act(g1 * g2, pt);
        const double scale = std::max(1.0, rhs.tau.cwiseAbs().maxCoeff());
        CHECK((lhs.tau - rhs.tau).cwiseAbs().maxCoeff() < 1e-8 * scale);
    }
}

TEST_CASE("identity acts trivially") {
    SiegelPoint pt = sample_point(3, 5);
    SiegelPoint moved = symplectic_act(SymplecticMatrix::identity(3), pt);
    CHECK((moved.tau - pt.tau).cwiseAbs().maxCoeff() == 0);
}

TEST_CASE("det Im transforms by |det(C tau + D)|^-2") {
    SiegelPoint pt = sample_point(2, 42);
    SymplecticMatrix gamma = random_level2(2, 77, 8);
    SiegelPoint moved = symplectic_act(gamma, pt);
    MatrixXc denom = gamma.c.cast<double>() * pt.tau + gamma.d.cast<double>().cast<Complex>();
    const double expected = det_im(pt) / std::norm(denom.determinant());
    CHECK(std::abs(det_im(moved) - expected) < 1e-9 * std::abs(expected));
}

TEST_CASE("near-singular denominator is rejected") {
    MatrixXc tau = MatrixXc::Zero(2, 2);
    tau(0, 0) = Complex(1e8, 1.0);
    tau(1, 1) = Complex(0, 1e-8);
    SiegelPoint pt = validate_siegel(tau);
    MatrixXi64 id = MatrixXi64::Identity(2, 2);
    MatrixXi64 zero = MatrixXi64::Zero(2, 2);
    // [[0, -I], [I, 0]]: denominator is tau itself, condition ~ 1e16
    SymplecticMatrix j = SymplecticMatrix::from_blocks(zero, -id, id, zero);
    CHECK_THROWS_WITH_AS(symplectic_act(j, pt), doctest::Contains("SingularDenominator"), Error);
}

TEST_CASE("level-2 membership: even translations in, odd translations out") {
    MatrixXi64 id = MatrixXi64::Identity(2, 2);
    MatrixXi64 zero = MatrixXi64::Zero(2, 2);
    MatrixXi64 twos = MatrixXi64::Constant(2, 2, 2);
    CHECK(is_level2(SymplecticMatrix::from_blocks(id, twos, zero, id)));
    CHECK_FALSE(is_level2(SymplecticMatrix::from_blocks(id, id, zero, id)));
    CHECK(is_level2(SymplecticMatrix::identity(2)));
}

TEST_CASE("random level-2 words are level 2, deterministic, and varied") {
    for (int g = 1; g <= 4; ++g) {
        SymplecticMatrix a = random_level2(g, 1234, 10);
        SymplecticMatrix b = random_level2(g, 1234, 10);
        SymplecticMatrix c = random_level2(g, 4321, 10);
        CHECK(is_level2(a));
        CHECK(is_level2(c));
        CHECK(a.full() == b.full());
        CHECK(a.full() != c.full());
    }
}

TEST_CASE("cholesky factor reproduces Im tau and its smallest eigenvalue") {
    SiegelPoint pt = sample_point(3, 99);
    CholeskyIm ch = cholesky_im(pt);
    Eigen::MatrixXd im = pt.tau.imag();
    CHECK((ch.lower * ch.lower.transpose() - im).cwiseAbs().maxCoeff() < 1e-12);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(im);
    CHECK(ch.lambda_min == doctest::Approx(es.eigenvalues()(0)).epsilon(1e-12));
}
