#pragma once

// Theta constants with half-integer characteristics,
//
//   theta[eta](tau) = sum_{n in Z^g} exp(pi i (n+a)^T tau (n+a) + 2 pi i (n+a)^T b),
//
// where eta = (a, b) with entries in {0, 1/2}.  The characteristic is odd
// when the count of slots with a_i = b_i = 1/2 is odd; odd characteristics
// give an exactly vanishing constant and are short-circuited without any
// summation.  Even ones are evaluated by enumerating lattice points inside
// the ellipsoid (n+a)^T Im(tau) (n+a) <= R^2, with R certified against a
// comparison-integral tail bound so the neglected mass is below eps.

#include <complex>
#include <cstddef>
#include <cstdint>

#include <Eigen/Dense>

#include "hylambda/siegel.hpp"

namespace hylambda {

// Half-integer characteristic stored as two bit vectors; bit i set means
// the i-th entry equals 1/2.  Addition mod 1 is XOR.
struct ThetaChar {
    int genus = 0;
    std::uint32_t top = 0;
    std::uint32_t bottom = 0;

    bool top_bit(int i) const { return (top >> i) & 1u; }
    bool bottom_bit(int i) const { return (bottom >> i) & 1u; }

    ThetaChar operator^(const ThetaChar& rhs) const {
        return ThetaChar{genus, top ^ rhs.top, bottom ^ rhs.bottom};
    }
    bool operator==(const ThetaChar& rhs) const = default;
};

// Even iff popcount(top & bottom) is even.
bool theta_parity_even(const ThetaChar& c);

// Smallest certified radius R (measured in the Cholesky frame, i.e. on
// |L^T (n+a)| where Im tau = L L^T) with lattice tail below eps.
double truncation_radius(const SiegelPoint& pt, double eps);

struct ThetaStats {
    std::size_t terms = 0;  // lattice points actually summed
    double radius = 0;      // truncation radius used
};

// Theta constant at z = 0.  Legal eps range is (50*machine_eps, 1e-3];
// smaller values throw PrecisionExhausted, larger InvalidArgument.
Complex theta_constant(const ThetaChar& chr, const SiegelPoint& pt, double eps,
                       ThetaStats* stats = nullptr);

// Same sum for arbitrary real characteristic vectors (used by the
// integer-shift identities, where entries leave [0, 1/2]).
Complex theta_constant_raw(const Eigen::VectorXd& top, const Eigen::VectorXd& bottom,
                           const SiegelPoint& pt, double eps, ThetaStats* stats = nullptr);

// 80-bit path for the high-accuracy pipeline.  tau must already be
// validated; only the summation differs from the double version.
ComplexL theta_constant_ld(const ThetaChar& chr, const MatrixXcl& tau, long double eps,
                           ThetaStats* stats = nullptr);

}  // namespace hylambda
