#pragma once

// The discriminant modular form on the level-2 group and its Petersson norm.
//
// Branch indices 1..2g+2 of a marked hyperelliptic curve get half-integer
// characteristics via the classical table: for k = 1..g,
//
//   eta_{2k-1} = [ e_k ; e_1 + ... + e_{k-1} ],
//   eta_{2k}   = [ e_k ; e_1 + ... + e_k     ],
//
// with eta_{2g+1} = [0; e_1 + ... + e_g] and eta_{2g+2} = 0, everything
// mod 1 (bitwise XOR on the half-entries).  With U = {1, 3, ..., 2g+1} and
// T running over the (g+1)-element subsets of {1, ..., 2g+1}, the form is
//
//   Delta_g(tau) = 2^{-(4g+4) n} * prod_T theta[eta_{T o U}](0, tau)^8,
//
// n = binom(2g, g+1), a modular form of weight 4r, r = binom(2g+1, g+1).
// Each characteristic eta_{T o U} is even; the constructor re-checks that,
// so a wrong table cannot fail silently.  The norm is
// (det Im tau)^{2r} |Delta_g(tau)|, computed in log space because the
// product of r eighth powers underflows quickly as tau degenerates.

#include <complex>
#include <vector>

#include "hylambda/theta.hpp"

namespace hylambda {

ThetaChar eta_base(int g, int k);                          // k in 1..2g+2
ThetaChar eta_subset(int g, const std::vector<int>& s);    // XOR over s

struct DiscriminantContext {
    int genus = 0;
    long long n_exp = 0;   // binom(2g, g+1), exponent scale in the 2-power prefactor
    long long r_count = 0; // binom(2g+1, g+1), number of theta factors
    std::vector<std::vector<int>> tsets;   // the (g+1)-subsets of {1..2g+1}
    std::vector<ThetaChar> tchars;          // eta_{T o U}, aligned with tsets
};

// g >= 2.  Builds the subset list and characteristics and verifies evenness
// and pairwise distinctness of the characteristics.
DiscriminantContext make_discriminant_context(int g);

struct DiscriminantValue {
    Complex value;    // exp of the log data; underflows to 0 harmlessly
    double log_abs;   // log |Delta_g(tau)|, finite unless a factor vanishes
    double phase;     // arg Delta_g(tau) in (-pi, pi]
};

DiscriminantValue discriminant_form(const DiscriminantContext& ctx, const SiegelPoint& pt,
                                    double eps);

struct PeterssonValue {
    double norm;      // (det Im tau)^{2r} |Delta_g|
    double log_norm;  // its log, the quantity the invariants consume
};

PeterssonValue petersson_norm(const DiscriminantContext& ctx, const SiegelPoint& pt,
                              double eps);

// log of the Petersson norm with all internal sums in long double.
long double petersson_log_ld(const DiscriminantContext& ctx, const MatrixXcl& tau,
                             long double eps);

// Per-factor theta tail budget used inside the product (exposed so reports
// can state the tolerance actually applied).
double theta_tail_budget(double eps, long long r_count);

}  // namespace hylambda
