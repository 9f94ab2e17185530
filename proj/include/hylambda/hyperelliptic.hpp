#pragma once

// Marked hyperelliptic curves y^2 = prod (x - b_i) and their period matrices.
//
// A curve is given by 2g+2 pairwise distinct branch points on the Riemann
// sphere (at most one infinite) together with an ordering.  The ordering
// induces a polygonal chain b_1 -> b_2 -> ... -> b_{2g+2}; consecutive pairs
// (b_1 b_2), (b_3 b_4), ... are the branch cuts of the double cover, the
// segments between cuts are the gaps.  The chain must be simple (no two
// non-adjacent segments may cross), which makes the configuration
// homeomorphic to the standard collinear picture; the canonical homology
// basis is the standard one transported through that homeomorphism:
// A_k encircles cut k, B_k passes through cuts k and g+1 and travels the
// gaps k..g on both sheets.  Periods of x^{a-1} dx / y over this basis are
// reduced to Gauss-Chebyshev integrals along the cut and gap segments with
// numerically determined sheet-matching signs.

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "hylambda/siegel.hpp"

namespace hylambda {

struct BranchPoint {
    Complex z{0, 0};
    bool infinite = false;

    static BranchPoint at(Complex v) { return BranchPoint{v, false}; }
    static BranchPoint inf() { return BranchPoint{Complex(0, 0), true}; }
};

struct HyperellipticCurve {
    int genus = 0;
    std::vector<BranchPoint> points;  // as supplied, size 2g+2
    std::vector<int> ordering;        // ordering[i] = index into points of the i-th marked point

    // Derived, filled by curve_from_roots:
    std::vector<Complex> chain;       // finite points in marked order (infinity dropped from the end)
    bool has_infinity = false;
    double scale = 0;                 // diameter of the finite configuration
    double min_separation = 0;        // smallest pairwise distance between finite points
};

// Validates count (2g+2, g >= 2), distinctness, the ordering (a permutation;
// an infinite point must be ordered last) and simplicity of the chain.
// Default ordering sorts finite points by real part then imaginary part.
HyperellipticCurve curve_from_roots(const std::vector<BranchPoint>& pts,
                                    const std::optional<std::vector<int>>& ordering = std::nullopt);

struct MoebiusMap {
    Complex a{1, 0}, b{0, 0}, c{0, 0}, d{1, 0};
};

// x -> (a x + b)/(c x + d) applied to every branch point, ordering kept in
// place.  Throws DegenerateMap when a d - b c vanishes (relatively).
HyperellipticCurve moebius(const HyperellipticCurve& curve, const MoebiusMap& map);

// Combinatorial support of one homology cycle in the cut/gap picture.
struct CyclePath {
    enum class Kind { ALoop, BLoop };
    Kind kind = Kind::ALoop;
    int index = 0;                    // 1-based cut index (A) or pairing index (B)
    int encircled_cut = 0;            // A only: the cut the loop surrounds
    std::vector<int> gap_segments;    // B only: 1-based gap indices traversed on both sheets
    std::vector<int> crossed_cuts;    // B only: cuts where the path changes sheet
};

struct HomologyBasis {
    int genus = 0;
    std::vector<CyclePath> a_cycles, b_cycles;

    // Intersection pairing computed from the stored combinatorics: A loops
    // have disjoint supports, an A and a B meet exactly when B crosses the
    // encircled cut, two B loops only overlap along shared gap travel and
    // their crossings on the common final cut cancel by nesting.
    Eigen::MatrixXi intersection() const;
};

HomologyBasis canonical_basis(const HyperellipticCurve& curve);

enum class Precision { Auto, Double, Extended };

struct PrecisionProfile {
    Precision prec = Precision::Auto;
    double quad_tol = 1e-11;      // target relative change under node doubling
    int max_nodes = 1 << 18;      // per-segment cap before QuadratureNotConverged
    int node_multiplier = 1;      // scales the initial node count (refinement studies)
};

struct PeriodResult {
    SiegelPoint tau;
    double symmetry_residual = 0;  // max |tau_ab - tau_ba| before averaging
    double refine_delta = 0;       // worst relative change on the final node doubling
    double condition_a = 0;        // condition number of the A-period matrix
    bool b_flipped = false;        // orientation fallback engaged (logged, not expected)
    bool used_extended = false;
    int max_nodes_used = 0;
};

PeriodResult period_matrix(const HyperellipticCurve& curve,
                           const PrecisionProfile& profile = {});

// Same computation carried out entirely in long double, for high-accuracy
// reference values.  tau is returned without rounding to double.
struct PeriodResultL {
    MatrixXcl tau;
    double symmetry_residual = 0;
    double refine_delta = 0;
    double condition_a = 0;
    bool b_flipped = false;
    int max_nodes_used = 0;
};

PeriodResultL period_matrix_ld(const HyperellipticCurve& curve,
                               const PrecisionProfile& profile = {});

// Periods straight from a finite chain in marked order (with has_infinity
// the chain holds 2g+1 points and the last branch point is infinite).
// Accepts any genus >= 1; used for elliptic cross-checks.
PeriodResult period_matrix_from_chain(const std::vector<Complex>& chain, bool has_infinity,
                                      const PrecisionProfile& profile = {});

// True when no two non-adjacent chain segments intersect.
bool chain_is_simple(const std::vector<Complex>& chain, double scale);

}  // namespace hylambda
