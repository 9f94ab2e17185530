#pragma once

// Points of the Siegel upper half space and the integral symplectic group
// acting on them.  A point is a complex symmetric g x g matrix tau with
// positive definite imaginary part; the group Sp(2g,Z) acts through
// tau -> (A tau + B)(C tau + D)^{-1}.  The level-2 principal congruence
// subgroup (gamma == identity mod 2) is what the discriminant modular form
// lives on, so membership testing and random sampling of that subgroup are
// provided here.

#include <cstdint>
#include <complex>

#include <Eigen/Dense>

#include "hylambda/errors.hpp"

namespace hylambda {

using Complex = std::complex<double>;
using MatrixXc = Eigen::MatrixXcd;
using MatrixXi64 = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

// 80-bit scalar aliases for the high-accuracy code paths.
using ComplexL = std::complex<long double>;
using MatrixXcl = Eigen::Matrix<ComplexL, Eigen::Dynamic, Eigen::Dynamic>;

struct SiegelPoint {
    int genus = 0;
    MatrixXc tau;  // exactly symmetric (symmetrized on validation)

    int g() const { return genus; }
};

// Accepts a numerically symmetric matrix, symmetrizes it by averaging and
// checks that the imaginary part is positive definite.  Tolerance for the
// asymmetry is 1e-10 * (1 + max |entry|).
SiegelPoint validate_siegel(const MatrixXc& entries);

// Integer 2g x 2g matrix in block form [[A, B], [C, D]], kept exact.
// Construction verifies the symplectic relations A^T C = C^T A,
// B^T D = D^T B, A^T D - C^T B = I in integer arithmetic.
struct SymplecticMatrix {
    int genus = 0;
    MatrixXi64 a, b, c, d;

    static SymplecticMatrix from_blocks(const MatrixXi64& a, const MatrixXi64& b,
                                        const MatrixXi64& c, const MatrixXi64& d);
    static SymplecticMatrix from_full(const MatrixXi64& m);
    static SymplecticMatrix identity(int g);

    MatrixXi64 full() const;
    SymplecticMatrix operator*(const SymplecticMatrix& rhs) const;
};

// (A tau + B)(C tau + D)^{-1}; throws SingularDenominator when C tau + D has
// condition number above 1e12, NotPositiveDefinite if positivity is lost.
SiegelPoint symplectic_act(const SymplecticMatrix& gamma, const SiegelPoint& pt);

// gamma == identity mod 2, entrywise.
bool is_level2(const SymplecticMatrix& gamma);

// Deterministic random word in generators of the level-2 subgroup:
// translations tau -> tau + 2S (S integer symmetric) via upper or lower
// unipotent blocks, and squares of symplectic transvections.  Same seed,
// same matrix.
SymplecticMatrix random_level2(int g, std::uint64_t seed, int word_length = 8);

double det_im(const SiegelPoint& pt);

struct CholeskyIm {
    Eigen::MatrixXd lower;   // L with L L^T = Im tau
    double lambda_min = 0;   // smallest eigenvalue of Im tau
};

// Cholesky factor and extreme eigenvalue of Im tau; throws
// NotPositiveDefinite when the factorization fails.
CholeskyIm cholesky_im(const SiegelPoint& pt);

}  // namespace hylambda
