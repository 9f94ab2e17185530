#include "hylambda/hyperelliptic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

// Reduction of the canonical periods to segment integrals.
//
// With the chain simple, the configuration is homeomorphic to the collinear
// one, where y has square-root branch cuts along the segments
// (b_1 b_2), (b_3 b_4), ...  A global branch y_I of sqrt(prod (x - b_i)) on
// the cut plane is assembled from per-cut factors
//
//   s_k(x) = m_k sqrt(w - 1) sqrt(w + 1),   w = (x - c_k)/m_k,
//
// (c_k midpoint, m_k half-difference) whose only discontinuity is the cut
// segment itself; for a branch point at infinity the leftover linear factor
// gets a single sqrt cut along a ray chosen to miss the chain.  The cycle
// A_k contracts onto cut k, giving twice the one-sided integral along the
// cut; B_k, crossing at cuts k and g+1, collapses onto the gaps k..g run on
// both sheets, giving twice the sum of gap integrals in the global branch.
// Each segment integral is done by Gauss-Chebyshev in the local parameter
// x = c + m u: the endpoint square roots become the Chebyshev weight and the
// remaining factor
//
//   h(u) = prod_j sqrt(m) sqrt(u - u_j),   u_j = (o_j - c)/m,
//
// is analytic on [-1, 1] (each principal sqrt(u - u_j) is continuous there
// because u_j never lies on the open interval).  The local and global
// branches differ by a sign per segment, evaluated at the segment midpoint:
// on the gap directly, on a cut from the left side of the directed segment,
// continuing each sqrt factor off the axis by nearest-value matching.

namespace hylambda {

namespace {

template <typename Real>
struct SegmentFrame {
    std::complex<Real> center, half;            // c and m
    std::vector<std::complex<Real>> others;     // u_j for every non-endpoint branch point
    std::complex<Real> sqrt_half;               // sqrt(m), fixed branch for h
    std::complex<Real> h_mid;                   // h(0)
    Real rho_min = 0;                           // Bernstein radius of nearest singularity
};

template <typename Real>
struct EngineResult {
    Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic> tau;
    Real symmetry_residual = 0;
    Real refine_delta = 0;
    Real condition_a = 0;
    bool b_flipped = false;
    int max_nodes_used = 0;
};

template <typename Real>
class PeriodEngine {
  public:
    using C = std::complex<Real>;
    using Mat = Eigen::Matrix<C, Eigen::Dynamic, Eigen::Dynamic>;

    PeriodEngine(const std::vector<Complex>& chain_d, bool has_inf, const PrecisionProfile& prof)
        : profile_(prof), has_inf_(has_inf) {
        const int n = static_cast<int>(chain_d.size());
        g_ = has_inf ? (n - 1) / 2 : n / 2 - 1;
        if ((has_inf && n != 2 * g_ + 1) || (!has_inf && n != 2 * g_ + 2) || g_ < 1)
            fail(ErrorKind::WrongCount, "chain length does not match any genus");
        chain_.reserve(n);
        for (Complex z : chain_d) chain_.emplace_back(Real(z.real()), Real(z.imag()));
        scale_ = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                scale_ = std::max(scale_, std::abs(chain_[i] - chain_[j]));
        if (has_inf_) choose_ray(chain_d);
    }

    EngineResult<Real> run() {
        const int g = g_;
        Mat amat(g, g), bmat(g, g);
        Real worst_delta = 0;
        int worst_nodes = 0;

        std::vector<std::vector<C>> gap_terms(g + 1);
        for (int m = 1; m <= g; ++m) {
            const int seg = 2 * m - 1;
            SegmentFrame<Real> fr = frame(seg);
            auto [vals, nodes, delta] = integrate(fr);
            const Real sgn = gap_sign(fr);
            for (auto& v : vals) v *= sgn;
            gap_terms[m] = vals;
            worst_delta = std::max(worst_delta, delta);
            worst_nodes = std::max(worst_nodes, nodes);
        }
        for (int k = 1; k <= g; ++k) {
            const int seg = 2 * (k - 1);
            SegmentFrame<Real> fr = frame(seg);
            auto [vals, nodes, delta] = integrate(fr);
            const Real sgn = cut_sign(fr);
            for (int a = 0; a < g; ++a) amat(a, k - 1) = Real(2) * sgn * vals[a];
            worst_delta = std::max(worst_delta, delta);
            worst_nodes = std::max(worst_nodes, nodes);
        }
        for (int k = 1; k <= g; ++k)
            for (int a = 0; a < g; ++a) {
                C acc(0, 0);
                for (int m = k; m <= g; ++m) acc += gap_terms[m][a];
                bmat(a, k - 1) = Real(2) * acc;
            }

        Eigen::JacobiSVD<Mat> svd(amat);
        const Real smin = svd.singularValues()(g - 1);
        const Real smax = svd.singularValues()(0);
        if (!(smin > 0) || smax / smin > Real(1e12))
            fail(ErrorKind::IllConditioned, "A-period matrix is numerically singular");

        Mat tau = amat.partialPivLu().solve(bmat);

        Real asym = 0, tscale = 0;
        for (int i = 0; i < g; ++i)
            for (int j = 0; j < g; ++j) {
                asym = std::max(asym, std::abs(tau(i, j) - tau(j, i)));
                tscale = std::max(tscale, std::abs(tau(i, j)));
            }
        if (asym > Real(1e-6) * (1 + tscale))
            fail(ErrorKind::IllConditioned, "period matrix far from symmetric");
        Mat taus = (tau + Mat(tau.transpose())) / Real(2);

        EngineResult<Real> out;
        out.symmetry_residual = asym;
        out.refine_delta = worst_delta;
        out.condition_a = smax / smin;
        out.max_nodes_used = worst_nodes;

        Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> im(g, g);
        for (int i = 0; i < g; ++i)
            for (int j = 0; j < g; ++j) im(i, j) = taus(i, j).imag();
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>> es(
            im, Eigen::EigenvaluesOnly);
        if (es.eigenvalues()(0) <= 0) {
            // Orientation fallback: reversing every B cycle negates tau.
            taus = -taus;
            out.b_flipped = true;
            if (-es.eigenvalues()(g - 1) <= 0)
                fail(ErrorKind::NotPositiveDefinite,
                     "Im(tau) indefinite under either B orientation");
        }
        out.tau = taus;
        return out;
    }

  private:
    static constexpr Real pi_v = Real(3.14159265358979323846264338327950288L);

    PrecisionProfile profile_;
    bool has_inf_ = false;
    int g_ = 0;
    std::vector<C> chain_;
    Real scale_ = 0;
    C ray_base_{}, ray_rot_{}, ray_phase_half_{};

    // Outward cut ray for the branch point of odd-degree models.  Chosen
    // deterministically: starting from the direction away from the centroid,
    // rotate until the ray clears every chain point and segment.
    void choose_ray(const std::vector<Complex>& chain_d) {
        const int n = static_cast<int>(chain_d.size());
        const Complex base = chain_d[n - 1];
        Complex centroid(0, 0);
        for (int i = 0; i + 1 < n; ++i) centroid += chain_d[i];
        centroid /= double(n - 1);
        Complex dir0 = base - centroid;
        const double scale_d = static_cast<double>(scale_);
        if (std::abs(dir0) < 1e-12 * scale_d) dir0 = Complex(1, 0);

        const double margin = 1e-7 * scale_d;
        double ang0 = std::arg(dir0);
        for (int attempt = 0; attempt < 256; ++attempt) {
            const double ang = ang0 + attempt * 0.79840;  // irrational-ish stride
            const Complex d = std::polar(1.0, ang);
            bool ok = true;
            for (int i = 0; i + 1 < n && ok; ++i) {
                const Complex rel = (chain_d[i] - base) * std::conj(d);
                if (rel.real() > -margin && std::abs(rel.imag()) < margin) ok = false;
            }
            for (int i = 0; i + 2 < n && ok; ++i) {
                // segment i joins chain[i], chain[i+1]; the last one touches base
                ok = !ray_hits_segment(base, d, chain_d[i], chain_d[i + 1], margin);
            }
            if (ok) {
                const Complex adj = chain_d[n - 2] - base;
                if (std::abs(std::remainder(std::arg(adj) - ang, 2 * 3.14159265358979323846)) <
                    1e-4)
                    ok = false;
            }
            if (ok) {
                const double phi = ang + 3.14159265358979323846;
                ray_base_ = C(Real(base.real()), Real(base.imag()));
                ray_rot_ = std::polar(Real(1), Real(-phi));
                ray_phase_half_ = std::polar(Real(1), Real(phi / 2));
                return;
            }
        }
        fail(ErrorKind::OrderingNotRealizable,
             "no cut ray to infinity avoids the chain of branch points");
    }

    static bool ray_hits_segment(Complex base, Complex d, Complex p, Complex q, double margin) {
        const Complex e = q - p;
        const double denom = d.real() * e.imag() - d.imag() * e.real();
        const Complex w = p - base;
        const double elen = std::abs(e);
        if (std::abs(denom) < 1e-15 * elen) {
            // parallel: reject only if the segment lies along the ray line
            const double dist = std::abs(w.real() * d.imag() - w.imag() * d.real());
            if (dist > margin) return false;
            const double t0 = w.real() * d.real() + w.imag() * d.imag();
            const double t1 = t0 + e.real() * d.real() + e.imag() * d.imag();
            return std::max(t0, t1) > -margin;
        }
        const double t = (w.real() * e.imag() - w.imag() * e.real()) / denom;  // along ray
        const double s = (w.real() * d.imag() - w.imag() * d.real()) / denom;  // along segment
        const double smargin = margin / std::max(elen, 1e-300);
        return t > -margin && s > -smargin && s < 1 + smargin;
    }

    C y_global(C x) const {
        C prod(1, 0);
        const int pairs = has_inf_ ? g_ : g_ + 1;
        for (int k = 0; k < pairs; ++k) {
            const C p = chain_[2 * k], q = chain_[2 * k + 1];
            const C c = (p + q) / Real(2), m = (q - p) / Real(2);
            const C w = (x - c) / m;
            prod *= m * std::sqrt(w - Real(1)) * std::sqrt(w + Real(1));
        }
        if (has_inf_) prod *= ray_phase_half_ * std::sqrt(ray_rot_ * (x - ray_base_));
        return prod;
    }

    SegmentFrame<Real> frame(int seg) const {
        SegmentFrame<Real> fr;
        const C p = chain_[seg], q = chain_[seg + 1];
        fr.center = (p + q) / Real(2);
        fr.half = (q - p) / Real(2);
        fr.sqrt_half = std::sqrt(fr.half);
        fr.rho_min = std::numeric_limits<Real>::infinity();
        fr.h_mid = C(1, 0);
        for (int j = 0; j < static_cast<int>(chain_.size()); ++j) {
            if (j == seg || j == seg + 1) continue;
            const C u = (chain_[j] - fr.center) / fr.half;
            fr.others.push_back(u);
            const C w = u + std::sqrt(u * u - Real(1));
            const Real aw = std::abs(w);
            fr.rho_min = std::min(fr.rho_min, std::max(aw, 1 / aw));
            // written as a subtraction from zero so the signed zero in the
            // imaginary part matches the node evaluations exactly; with a
            // collinear run of chain points u is real and sqrt(-u) would
            // land on the other side of the branch cut
            fr.h_mid *= fr.sqrt_half * std::sqrt(C(0, 0) - u);
        }
        if (!(fr.rho_min > 1 + Real(1e-12)))
            fail(ErrorKind::IllConditioned, "branch point sits on an integration segment");
        return fr;
    }

    std::vector<C> chebyshev_pass(const SegmentFrame<Real>& fr, long nodes) const {
        std::vector<C> acc(g_, C(0, 0));
        for (long l = 0; l < nodes; ++l) {
            const Real u = std::cos(pi_v * Real(2 * l + 1) / Real(2 * nodes));
            C h(1, 0);
            for (const C& uj : fr.others) h *= fr.sqrt_half * std::sqrt(C(u, 0) - uj);
            const C x = fr.center + fr.half * u;
            C pw = Real(1) / h;
            for (int a = 0; a < g_; ++a) {
                acc[a] += pw;
                pw *= x;
            }
        }
        const C factor = C(0, -1) * (pi_v / Real(nodes));  // the 1/i from y = i m sqrt(..) h
        for (auto& v : acc) v *= factor;
        return acc;
    }

    std::tuple<std::vector<C>, int, Real> integrate(const SegmentFrame<Real>& fr) const {
        const Real tol = Real(profile_.quad_tol);
        long n0 = 16;
        if (std::isfinite(static_cast<double>(fr.rho_min))) {
            const Real need = std::log(Real(64) / tol) / (2 * std::log(fr.rho_min));
            n0 = std::max<long>(16, static_cast<long>(need) + 1);
        }
        n0 = std::min<long>(n0 * std::max(1, profile_.node_multiplier), profile_.max_nodes);

        std::vector<C> cur = chebyshev_pass(fr, n0);
        long n = n0;
        while (true) {
            if (2 * n > profile_.max_nodes)
                fail(ErrorKind::QuadratureNotConverged,
                     "segment integral still moving at the node cap");
            std::vector<C> next = chebyshev_pass(fr, 2 * n);
            Real norm_all = 0;
            for (const auto& v : next) norm_all = std::max(norm_all, std::abs(v));
            // relative to the vector norm: symmetric configurations have
            // components that vanish exactly, and a per-component ratio
            // would chase roundoff on those forever
            Real delta = 0;
            for (int a = 0; a < g_; ++a)
                delta = std::max(delta, std::abs(next[a] - cur[a]));
            delta /= norm_all + Real(1e-300);
            if (delta <= tol) return {next, static_cast<int>(2 * n), delta};
            cur = std::move(next);
            n *= 2;
        }
    }

    static Real snap_sign(C ratio) {
        if (std::abs(ratio - C(1, 0)) < Real(1e-2)) return Real(1);
        if (std::abs(ratio + C(1, 0)) < Real(1e-2)) return Real(-1);
        fail(ErrorKind::IllConditioned, "sheet-matching sign did not snap to +-1");
    }

    Real gap_sign(const SegmentFrame<Real>& fr) const {
        const C y_loc0 = C(0, 1) * fr.half * fr.h_mid;
        return snap_sign(y_global(fr.center) / y_loc0);
    }

    // Left side of the directed cut is u = +i delta in the local parameter.
    // Each sqrt factor is continued off the axis by picking the sign of the
    // principal value nearest its on-axis value; delta is far smaller than
    // the distance to any other branch point, so the matching is safe.
    Real cut_sign(const SegmentFrame<Real>& fr) const {
        const Real delta = Real(1e-6);
        const C updelta(0, delta);
        C val = C(0, 1) * fr.half * std::sqrt(C(1, 0) - updelta * updelta);
        for (const C& uj : fr.others) {
            const C start = fr.sqrt_half * std::sqrt(C(0, 0) - uj);
            C cont = fr.sqrt_half * std::sqrt(updelta - uj);
            if (std::abs(cont - start) > std::abs(cont + start)) cont = -cont;
            val *= cont;
        }
        const C xplus = fr.center + fr.half * updelta;
        return snap_sign(y_global(xplus) / val);
    }
};

template <typename Real>
EngineResult<Real> run_engine(const std::vector<Complex>& chain, bool has_inf,
                              const PrecisionProfile& profile) {
    PeriodEngine<Real> engine(chain, has_inf, profile);
    return engine.run();
}

struct ChainStats {
    double scale = 0;
    double min_sep = std::numeric_limits<double>::infinity();
};

ChainStats chain_stats(const std::vector<Complex>& chain) {
    ChainStats st;
    for (std::size_t i = 0; i < chain.size(); ++i)
        for (std::size_t j = i + 1; j < chain.size(); ++j) {
            const double d = std::abs(chain[i] - chain[j]);
            st.scale = std::max(st.scale, d);
            st.min_sep = std::min(st.min_sep, d);
        }
    return st;
}

void validate_chain(const std::vector<Complex>& chain, const ChainStats& st) {
    if (!(st.min_sep > 1e-13 * st.scale))
        fail(ErrorKind::DuplicateRoot, "chain contains coincident points");
    if (!chain_is_simple(chain, st.scale))
        fail(ErrorKind::OrderingNotRealizable, "chain segments intersect");
}

}  // namespace

PeriodResult period_matrix_from_chain(const std::vector<Complex>& chain, bool has_infinity,
                                      const PrecisionProfile& profile) {
    const ChainStats st = chain_stats(chain);
    validate_chain(chain, st);

    const bool auto_promoted =
        profile.prec == Precision::Auto && st.min_sep < 1e-6 * st.scale;
    const bool extended = profile.prec == Precision::Extended || auto_promoted;

    PrecisionProfile eff = profile;
    if (auto_promoted) {
        // near-coincident points need node counts ~ 1/sqrt(separation) plus
        // one verification doubling, so the default cap must grow with the
        // promotion
        eff.max_nodes = profile.max_nodes * 4;
    }

    PeriodResult out;
    if (!extended) {
        EngineResult<double> r = run_engine<double>(chain, has_infinity, profile);
        out.tau = validate_siegel(r.tau);
        out.symmetry_residual = r.symmetry_residual;
        out.refine_delta = r.refine_delta;
        out.condition_a = r.condition_a;
        out.b_flipped = r.b_flipped;
        out.max_nodes_used = r.max_nodes_used;
    } else {
        EngineResult<long double> r = run_engine<long double>(chain, has_infinity, eff);
        MatrixXc tau_d(r.tau.rows(), r.tau.cols());
        for (Eigen::Index i = 0; i < r.tau.rows(); ++i)
            for (Eigen::Index j = 0; j < r.tau.cols(); ++j)
                tau_d(i, j) = Complex(static_cast<double>(r.tau(i, j).real()),
                                      static_cast<double>(r.tau(i, j).imag()));
        out.tau = validate_siegel(tau_d);
        out.symmetry_residual = static_cast<double>(r.symmetry_residual);
        out.refine_delta = static_cast<double>(r.refine_delta);
        out.condition_a = static_cast<double>(r.condition_a);
        out.b_flipped = r.b_flipped;
        out.max_nodes_used = r.max_nodes_used;
        out.used_extended = true;
    }
    return out;
}

PeriodResult period_matrix(const HyperellipticCurve& curve, const PrecisionProfile& profile) {
    return period_matrix_from_chain(curve.chain, curve.has_infinity, profile);
}

PeriodResultL period_matrix_ld(const HyperellipticCurve& curve, const PrecisionProfile& profile) {
    const ChainStats st = chain_stats(curve.chain);
    validate_chain(curve.chain, st);

    PrecisionProfile prof = profile;
    prof.prec = Precision::Extended;
    EngineResult<long double> r = run_engine<long double>(curve.chain, curve.has_infinity, prof);

    PeriodResultL out;
    out.tau = r.tau;
    out.symmetry_residual = static_cast<double>(r.symmetry_residual);
    out.refine_delta = static_cast<double>(r.refine_delta);
    out.condition_a = static_cast<double>(r.condition_a);
    out.b_flipped = r.b_flipped;
    out.max_nodes_used = r.max_nodes_used;
    return out;
}

}  // namespace hylambda
