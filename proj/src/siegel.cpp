#include "hylambda/siegel.hpp"

#include <random>

#include <Eigen/Eigenvalues>

namespace hylambda {

SiegelPoint validate_siegel(const MatrixXc& entries) {
    if (entries.rows() != entries.cols() || entries.rows() < 1)
        fail(ErrorKind::WrongCount, "tau must be a nonempty square matrix");
    const int g = static_cast<int>(entries.rows());

    double scale = 0, asym = 0;
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j) {
            scale = std::max(scale, std::abs(entries(i, j)));
            asym = std::max(asym, std::abs(entries(i, j) - entries(j, i)));
        }
    if (asym > 1e-10 * (1.0 + scale))
        fail(ErrorKind::NotSymmetric,
             "asymmetry " + std::to_string(asym) + " exceeds tolerance");

    SiegelPoint pt;
    pt.genus = g;
    pt.tau = 0.5 * (entries + entries.transpose());

    Eigen::MatrixXd im = pt.tau.imag();
    Eigen::LLT<Eigen::MatrixXd> llt(im);
    if (llt.info() != Eigen::Success)
        fail(ErrorKind::NotPositiveDefinite, "Im(tau) is not positive definite");
    return pt;
}

SymplecticMatrix SymplecticMatrix::from_blocks(const MatrixXi64& a, const MatrixXi64& b,
                                               const MatrixXi64& c, const MatrixXi64& d) {
    const auto g = a.rows();
    if (a.cols() != g || b.rows() != g || b.cols() != g || c.rows() != g ||
        c.cols() != g || d.rows() != g || d.cols() != g || g < 1)
        fail(ErrorKind::WrongCount, "blocks must be square and equally sized");

    // Symplectic relations, checked exactly in integer arithmetic.
    MatrixXi64 atc = a.transpose() * c;
    MatrixXi64 btd = b.transpose() * d;
    MatrixXi64 atd_ctb = a.transpose() * d - c.transpose() * b;
    MatrixXi64 id = MatrixXi64::Identity(g, g);
    if (atc != MatrixXi64(atc.transpose()) || btd != MatrixXi64(btd.transpose()) ||
        atd_ctb != id)
        fail(ErrorKind::InvalidArgument, "blocks do not satisfy the symplectic relations");

    SymplecticMatrix m;
    m.genus = static_cast<int>(g);
    m.a = a;
    m.b = b;
    m.c = c;
    m.d = d;
    return m;
}

SymplecticMatrix SymplecticMatrix::from_full(const MatrixXi64& m) {
    if (m.rows() != m.cols() || m.rows() % 2 != 0 || m.rows() < 2)
        fail(ErrorKind::WrongCount, "full matrix must be 2g x 2g");
    const auto g = m.rows() / 2;
    return from_blocks(m.topLeftCorner(g, g), m.topRightCorner(g, g),
                       m.bottomLeftCorner(g, g), m.bottomRightCorner(g, g));
}

SymplecticMatrix SymplecticMatrix::identity(int g) {
    return from_blocks(MatrixXi64::Identity(g, g), MatrixXi64::Zero(g, g),
                       MatrixXi64::Zero(g, g), MatrixXi64::Identity(g, g));
}

MatrixXi64 SymplecticMatrix::full() const {
    MatrixXi64 m(2 * genus, 2 * genus);
    m << a, b, c, d;
    return m;
}

SymplecticMatrix SymplecticMatrix::operator*(const SymplecticMatrix& rhs) const {
    if (genus != rhs.genus)
        fail(ErrorKind::WrongCount, "genus mismatch in symplectic product");
    return from_full(full() * rhs.full());
}

SiegelPoint symplectic_act(const SymplecticMatrix& gamma, const SiegelPoint& pt) {
    if (gamma.genus != pt.genus)
        fail(ErrorKind::WrongCount, "genus mismatch between gamma and tau");
    const int g = pt.genus;

    MatrixXc denom = gamma.c.cast<double>() * pt.tau + gamma.d.cast<double>().cast<Complex>();
    Eigen::JacobiSVD<MatrixXc> svd(denom);
    const double smin = svd.singularValues()(g - 1);
    const double smax = svd.singularValues()(0);
    if (smin <= 0 || smax / smin > 1e12)
        fail(ErrorKind::SingularDenominator,
             "C tau + D condition number above threshold");

    MatrixXc numer = gamma.a.cast<double>() * pt.tau + gamma.b.cast<double>().cast<Complex>();
    // tau' = numer * denom^{-1}, solved as denom^T x^T = numer^T.
    MatrixXc result = denom.transpose().partialPivLu().solve(numer.transpose()).transpose();
    return validate_siegel(result);
}

bool is_level2(const SymplecticMatrix& gamma) {
    const int g = gamma.genus;
    auto even = [](std::int64_t v) { return ((v % 2) + 2) % 2 == 0; };
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j) {
            if (!even(gamma.a(i, j) - (i == j ? 1 : 0))) return false;
            if (!even(gamma.d(i, j) - (i == j ? 1 : 0))) return false;
            if (!even(gamma.b(i, j)) || !even(gamma.c(i, j))) return false;
        }
    return true;
}

namespace {

// Symplectic transvection squared: T_v^2 = I - 2 v v^T J with
// J = [[0, I], [-I, 0]].  Always congruent to I mod 2.
MatrixXi64 transvection_squared(int g, const Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>& v) {
    const int n = 2 * g;
    MatrixXi64 j = MatrixXi64::Zero(n, n);
    j.topRightCorner(g, g) = MatrixXi64::Identity(g, g);
    j.bottomLeftCorner(g, g) = -MatrixXi64::Identity(g, g);
    return MatrixXi64::Identity(n, n) - 2 * (v * (v.transpose() * j));
}

}  // namespace

SymplecticMatrix random_level2(int g, std::uint64_t seed, int word_length) {
    if (g < 1) fail(ErrorKind::WrongCount, "genus must be >= 1");
    if (word_length < 0) fail(ErrorKind::InvalidArgument, "word length must be >= 0");

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> coeff(-2, 2);
    std::uniform_int_distribution<int> small(-1, 1);
    std::uniform_int_distribution<int> kind(0, 2);

    SymplecticMatrix word = SymplecticMatrix::identity(g);
    for (int step = 0; step < word_length; ++step) {
        MatrixXi64 id = MatrixXi64::Identity(g, g);
        SymplecticMatrix gen = SymplecticMatrix::identity(g);
        switch (kind(rng)) {
            case 0: {  // tau -> tau + 2S
                MatrixXi64 s(g, g);
                for (int i = 0; i < g; ++i)
                    for (int j = i; j < g; ++j) s(i, j) = s(j, i) = coeff(rng);
                gen = SymplecticMatrix::from_blocks(id, 2 * s, MatrixXi64::Zero(g, g), id);
                break;
            }
            case 1: {  // lower unipotent
                MatrixXi64 s(g, g);
                for (int i = 0; i < g; ++i)
                    for (int j = i; j < g; ++j) s(i, j) = s(j, i) = coeff(rng);
                gen = SymplecticMatrix::from_blocks(id, MatrixXi64::Zero(g, g), 2 * s, id);
                break;
            }
            default: {
                Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1> v(2 * g);
                do {
                    for (int i = 0; i < 2 * g; ++i) v(i) = small(rng);
                } while (v.isZero());
                gen = SymplecticMatrix::from_full(transvection_squared(g, v));
                break;
            }
        }
        word = word * gen;
    }
    return word;
}

double det_im(const SiegelPoint& pt) {
    Eigen::MatrixXd im = pt.tau.imag();
    return im.determinant();
}

CholeskyIm cholesky_im(const SiegelPoint& pt) {
    Eigen::MatrixXd im = pt.tau.imag();
    Eigen::LLT<Eigen::MatrixXd> llt(im);
    if (llt.info() != Eigen::Success)
        fail(ErrorKind::NotPositiveDefinite, "Im(tau) lost positive definiteness");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(im, Eigen::EigenvaluesOnly);
    CholeskyIm out;
    out.lower = llt.matrixL();
    out.lambda_min = es.eigenvalues()(0);
    if (out.lambda_min <= 0)
        fail(ErrorKind::NotPositiveDefinite, "Im(tau) has a nonpositive eigenvalue");
    return out;
}

}  // namespace hylambda
