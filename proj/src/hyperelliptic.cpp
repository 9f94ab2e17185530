#include "hylambda/hyperelliptic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace hylambda {

namespace {

double cross2(Complex a, Complex b) { return a.real() * b.imag() - a.imag() * b.real(); }

// Open-segment intersection with a small absolute margin; collinear
// overlapping segments count as crossing.  Only called for non-adjacent
// segment pairs, so shared endpoints never occur legitimately.
bool segments_cross(Complex p1, Complex q1, Complex p2, Complex q2, double margin) {
    const Complex d1 = q1 - p1, d2 = q2 - p2;
    const double c1 = cross2(d1, p2 - p1);
    const double c2 = cross2(d1, q2 - p1);
    const double c3 = cross2(d2, p1 - p2);
    const double c4 = cross2(d2, q1 - p2);
    const double area_margin = margin * (std::abs(d1) + std::abs(d2));

    auto sgn = [&](double v) { return (v > area_margin) - (v < -area_margin); };
    const int s1 = sgn(c1), s2 = sgn(c2), s3 = sgn(c3), s4 = sgn(c4);

    if (s1 == 0 && s2 == 0 && s3 == 0 && s4 == 0) {
        // collinear: compare parameter intervals along d1
        const double len2 = std::norm(d1);
        if (len2 == 0) return true;
        auto t = [&](Complex z) {
            return ((z - p1).real() * d1.real() + (z - p1).imag() * d1.imag()) / len2;
        };
        double a = t(p2), b = t(q2);
        if (a > b) std::swap(a, b);
        const double tol = margin / std::sqrt(len2);
        return b > -tol && a < 1 + tol;
    }
    if (s1 * s2 <= 0 && s3 * s4 <= 0) return true;  // proper or grazing crossing
    return false;
}

// Distance from z to the closed segment [p, q].
double point_segment_distance(Complex z, Complex p, Complex q) {
    const Complex d = q - p;
    const double len2 = std::norm(d);
    if (len2 == 0) return std::abs(z - p);
    double t = ((z - p).real() * d.real() + (z - p).imag() * d.imag()) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return std::abs(z - (p + t * d));
}

}  // namespace

bool chain_is_simple(const std::vector<Complex>& chain, double scale) {
    const double margin = 1e-12 * std::max(scale, 1e-300);
    const int n = static_cast<int>(chain.size());
    for (int i = 0; i + 1 < n; ++i)
        for (int j = i + 2; j + 1 < n; ++j) {
            if (segments_cross(chain[i], chain[i + 1], chain[j], chain[j + 1], margin))
                return false;
        }
    // No vertex may sit on a segment it does not bound.  This covers chains
    // that double back along their own line (the crossing test above skips
    // adjacent pairs) and it is what lets the quadrature assume every other
    // branch point stays off each integration segment.
    for (int k = 0; k < n; ++k)
        for (int i = 0; i + 1 < n; ++i) {
            if (k == i || k == i + 1) continue;
            if (point_segment_distance(chain[k], chain[i], chain[i + 1]) <= margin)
                return false;
        }
    return true;
}

HyperellipticCurve curve_from_roots(const std::vector<BranchPoint>& pts,
                                    const std::optional<std::vector<int>>& ordering) {
    const int count = static_cast<int>(pts.size());
    if (count < 6 || count % 2 != 0)
        fail(ErrorKind::WrongCount,
             "need 2g+2 branch points with g >= 2, got " + std::to_string(count));
    const int g = count / 2 - 1;

    int inf_count = 0;
    for (const auto& p : pts) inf_count += p.infinite ? 1 : 0;
    if (inf_count > 1)
        fail(ErrorKind::DuplicateRoot, "more than one branch point at infinity");

    HyperellipticCurve curve;
    curve.genus = g;
    curve.points = pts;
    curve.has_infinity = inf_count == 1;

    if (ordering) {
        if (static_cast<int>(ordering->size()) != count)
            fail(ErrorKind::WrongCount, "ordering length must equal the point count");
        std::vector<char> seen(count, 0);
        for (int idx : *ordering) {
            if (idx < 0 || idx >= count)
                fail(ErrorKind::IndexOutOfRange, "ordering index out of range");
            if (seen[idx]++)
                fail(ErrorKind::IndexOutOfRange, "ordering repeats an index");
        }
        curve.ordering = *ordering;
    } else {
        curve.ordering.resize(count);
        std::iota(curve.ordering.begin(), curve.ordering.end(), 0);
        std::sort(curve.ordering.begin(), curve.ordering.end(), [&](int i, int j) {
            if (pts[i].infinite != pts[j].infinite) return !pts[i].infinite;  // infinity last
            if (pts[i].z.real() != pts[j].z.real()) return pts[i].z.real() < pts[j].z.real();
            return pts[i].z.imag() < pts[j].z.imag();
        });
    }

    if (curve.has_infinity && !pts[curve.ordering.back()].infinite)
        fail(ErrorKind::OrderingNotRealizable,
             "a branch point at infinity must be ordered last");

    for (int idx : curve.ordering)
        if (!pts[idx].infinite) curve.chain.push_back(pts[idx].z);

    curve.scale = 0;
    curve.min_separation = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < curve.chain.size(); ++i)
        for (std::size_t j = i + 1; j < curve.chain.size(); ++j) {
            const double d = std::abs(curve.chain[i] - curve.chain[j]);
            curve.scale = std::max(curve.scale, d);
            curve.min_separation = std::min(curve.min_separation, d);
        }
    if (!(curve.min_separation > 1e-13 * curve.scale))
        fail(ErrorKind::DuplicateRoot, "branch points coincide or nearly coincide");

    if (!chain_is_simple(curve.chain, curve.scale))
        fail(ErrorKind::OrderingNotRealizable,
             "the ordering's polygonal chain intersects itself");
    return curve;
}

HyperellipticCurve moebius(const HyperellipticCurve& curve, const MoebiusMap& map) {
    const double det_scale = std::abs(map.a) * std::abs(map.d) + std::abs(map.b) * std::abs(map.c);
    const Complex det = map.a * map.d - map.b * map.c;
    if (std::abs(det) <= 1e-14 * std::max(det_scale, 1e-300))
        fail(ErrorKind::DegenerateMap, "a d - b c vanishes");

    std::vector<BranchPoint> image;
    image.reserve(curve.points.size());
    for (const auto& p : curve.points) {
        if (p.infinite) {
            if (std::abs(map.c) == 0)
                image.push_back(BranchPoint::inf());
            else
                image.push_back(BranchPoint::at(map.a / map.c));
            continue;
        }
        const Complex num = map.a * p.z + map.b;
        const Complex den = map.c * p.z + map.d;
        const double den_scale = std::abs(map.c * p.z) + std::abs(map.d);
        if (std::abs(den) <= 1e-14 * std::max(den_scale, 1e-300))
            image.push_back(BranchPoint::inf());
        else
            image.push_back(BranchPoint::at(num / den));
    }
    return curve_from_roots(image, curve.ordering);
}

HomologyBasis canonical_basis(const HyperellipticCurve& curve) {
    HomologyBasis basis;
    basis.genus = curve.genus;
    for (int k = 1; k <= curve.genus; ++k) {
        CyclePath a;
        a.kind = CyclePath::Kind::ALoop;
        a.index = k;
        a.encircled_cut = k;
        basis.a_cycles.push_back(a);

        CyclePath b;
        b.kind = CyclePath::Kind::BLoop;
        b.index = k;
        for (int m = k; m <= curve.genus; ++m) b.gap_segments.push_back(m);
        b.crossed_cuts = {k, curve.genus + 1};
        basis.b_cycles.push_back(b);
    }
    return basis;
}

Eigen::MatrixXi HomologyBasis::intersection() const {
    const int g = genus;
    Eigen::MatrixXi m = Eigen::MatrixXi::Zero(2 * g, 2 * g);

    // A loops: each supported on its own cut only, so they never meet.
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j) {
            if (i != j && a_cycles[i].encircled_cut == a_cycles[j].encircled_cut)
                throw std::logic_error("two A loops share a cut");
        }

    // A_i meets B_j once for every time B_j changes sheet at cut i.
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j) {
            int crossings = 0;
            for (int cut : b_cycles[j].crossed_cuts)
                if (cut == a_cycles[i].encircled_cut) ++crossings;
            m(i, g + j) = crossings;
            m(g + j, i) = -crossings;
        }

    // B loops pairwise: they share the final cut, but their gap supports are
    // nested, so the two crossing points there carry opposite signs.
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j) {
            if (i == j) continue;
            const auto& gi = b_cycles[i].gap_segments;
            const auto& gj = b_cycles[j].gap_segments;
            const bool nested = std::includes(gi.begin(), gi.end(), gj.begin(), gj.end()) ||
                                std::includes(gj.begin(), gj.end(), gi.begin(), gi.end());
            if (!nested) throw std::logic_error("B loop supports are not nested");
            m(g + i, g + j) = 0;
        }
    return m;
}

}  // namespace hylambda
