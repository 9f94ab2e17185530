#pragma once

// Closed-form invariants of a semistable hyperelliptic fiber.
//
// Archimedean side: with n = binom(2g, g+1), the lambda invariant of a
// complex curve is
//
//   lambda = -g log(2 pi) - g log||Delta_g|| / ((8g+4) n),
//
// the additive constant being exactly zero.  Non-archimedean side: the
// reduction data (xi0, xi_j, delta_i) counts the double points of the
// special fiber by type under the hyperelliptic involution, and determines
//
//   psi    = (g-1)/(2g+1) xi0 + sum_j (6j(g-j-1)+2g-2)/(2g+1) xi_j
//            + sum_i (12i(g-i)/(2g+1) - 1) delta_i,
//   lambda = (psi + delta)/12,   delta = xi0 + 2 sum_j xi_j + sum_i delta_i,
//
// with the equivalent closed form
//
//   (8g+4) lambda = g xi0 + sum_j 2(j+1)(g-j) xi_j + sum_i 4i(g-i) delta_i.
//
// Everything non-archimedean is exact rational arithmetic; the identities
// between these formulas are tested exactly, never in floating point.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hylambda/rational.hpp"
#include "hylambda/siegel.hpp"

namespace hylambda {

struct ReductionData {
    int g = 2;
    long long xi0 = 0;
    std::vector<long long> xi;     // xi[j-1] holds xi_j, j = 1..floor((g-1)/2)
    std::vector<long long> delta;  // delta[i-1] holds delta_i, i = 1..floor(g/2)
};

// Throws WrongCount/InvalidArgument unless lengths match the genus and all
// counts are nonnegative.
void validate_reduction(const ReductionData& data);

// Total number of singular points, xi0 + 2 sum xi_j + sum delta_i; always
// derived, never user-supplied.
long long total_delta(const ReductionData& data);

Rational psi_na(const ReductionData& data);
Rational lambda_na(const ReductionData& data);
Rational lambda_na_closed(const ReductionData& data);

// Lower-bound right-hand side c(g) delta0 + sum_i 2i(g-i)/g delta_i.  The
// elementary flag selects c(g) = (g-1)/(6g); otherwise the caller must
// supply the constant or MissingConstant is thrown.
Rational zhang_bound_rhs(long long delta0, const std::vector<long long>& delta_i, int g,
                         bool elementary, std::optional<Rational> c_of_g = std::nullopt);

// lambda from log||Delta_g||; constant_offset defaults to the proven 0 and
// exists only for sensitivity studies.
double lambda_arch(double log_petersson, int g, double constant_offset = 0.0);

// phi = (6(2g+1)/(g-1)) (lambda - delta/12) with delta = delta_F - 4g log(2 pi).
double phi_from_lambda(double lambda, double delta_f, int g);

// (g-1)/(6(2g+1)) <Delta_xi, Delta_xi> + sum_v lambda_v log Nv.
double height_decomposition(double gs_self_intersection,
                            const std::vector<std::pair<double, double>>& local_terms, int g);

struct InvariantReport {
    int genus = 0;
    double lambda = 0;
    double log_petersson = 0;
    SiegelPoint tau;
    std::map<std::string, double> diagnostics;
    std::optional<double> phi;
};

}  // namespace hylambda
