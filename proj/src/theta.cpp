#include "hylambda/theta.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace hylambda {

bool theta_parity_even(const ThetaChar& c) {
    if (c.genus < 1 || c.genus > 31)
        fail(ErrorKind::IndexOutOfRange, "characteristic genus out of range");
    const std::uint32_t mask = (c.genus == 31) ? 0x7fffffffu : ((1u << c.genus) - 1u);
    if ((c.top & ~mask) || (c.bottom & ~mask))
        fail(ErrorKind::IndexOutOfRange, "characteristic bits beyond genus");
    return std::popcount(c.top & c.bottom) % 2 == 0;
}

namespace {

template <typename Real>
using MatR = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using VecR = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

// Upper bound for sum_{w in Lambda, |w| >= rho} exp(-pi |w|^2) over any point
// set with pairwise distance >= m.  Disjoint balls of radius m/2 around the
// points are compared against the radial integral of exp(-pi (s - m/2)^2):
//
//   tail <= (area(S^{g-1}) / vol(B_{m/2})) *
//           int_{rho - m/2}^inf exp(-pi (s - m/2)^2) s^{g-1} ds.
//
// The 1-d integral is bounded by a Riemann sum that takes the max of the
// integrand over each step, so the whole bound stays an upper bound.
template <typename Real>
Real lattice_tail_bound(Real rho, Real m, int g) {
    if (rho <= m) return std::numeric_limits<Real>::infinity();
    const Real pi = Real(3.14159265358979323846264338327950288L);
    const Real half_m = m / 2;

    // log(area(S^{g-1}) / vol(B_{m/2})) = log(g) + g*log(2/m) - log... kept
    // in log space to survive tiny m.
    // area(S^{g-1}) = 2 pi^{g/2}/Gamma(g/2), vol(B_r) = pi^{g/2} r^g / Gamma(g/2+1).
    const Real log_ratio =
        std::log(Real(2)) + std::lgamma(Real(g) / 2 + 1) - std::lgamma(Real(g) / 2) -
        Real(g) * std::log(half_m);

    auto integrand = [&](Real s) {
        return std::exp(-pi * (s - half_m) * (s - half_m) + Real(g - 1) * std::log(s));
    };

    const Real a = rho - half_m;
    const Real peak = half_m + std::sqrt(Real(g - 1) / (2 * pi) + Real(1));
    const Real h = Real(1) / 16;
    Real integral = 0;
    Real s = a;
    // Beyond max(a, peak)+8 the integrand is below exp(-pi*64) of its peak.
    const Real stop = std::max(a, peak) + 8;
    while (s < stop) {
        const Real s2 = s + h;
        integral += h * std::max(integrand(s), integrand(s2));
        s = s2;
    }
    return std::exp(log_ratio + std::log(integral));
}

template <typename Real>
Real certified_radius(Real lambda_min, int g, Real eps) {
    const Real pi = Real(3.14159265358979323846264338327950288L);
    const Real m = std::sqrt(lambda_min);
    Real rho = std::sqrt(std::max(Real(0), -std::log(eps) / pi)) + 1;
    rho = std::max(rho, Real(2) * m);
    for (int iter = 0; iter < 4000; ++iter) {
        if (lattice_tail_bound(rho, m, g) <= eps) return rho;
        rho += Real(0.25);
    }
    fail(ErrorKind::PrecisionExhausted, "no certified truncation radius found");
}

// Enumerates integer n with |R (n + shift)| <= rho, R upper triangular with
// positive diagonal (Fincke-Pohst walk from the last coordinate down).
// Calls emit(v) with v = n + shift.
template <typename Real, typename Emit>
void enumerate_ellipsoid(const MatR<Real>& r, const VecR<Real>& shift, Real rho, Emit&& emit,
                         std::size_t term_cap) {
    const int g = static_cast<int>(r.rows());
    VecR<Real> v = VecR<Real>::Zero(g);
    std::vector<Real> used(g + 1, Real(0));  // used[i] = sum of row residuals below level i
    const Real budget = rho * rho * (1 + Real(1e-12));
    std::size_t count = 0;

    auto walk = [&](auto&& self, int level) -> void {
        if (level < 0) {
            if (++count > term_cap)
                fail(ErrorKind::PrecisionExhausted, "lattice enumeration exceeded term cap");
            emit(v);
            return;
        }
        Real t = 0;
        for (int j = level + 1; j < g; ++j) t += r(level, j) * v(j);
        const Real rem = budget - used[level + 1];
        if (rem < 0) return;
        const Real rad = std::sqrt(rem);
        const Real lo = (-rad - t) / r(level, level) - shift(level);
        const Real hi = (rad - t) / r(level, level) - shift(level);
        for (long long n = static_cast<long long>(std::ceil(lo));
             n <= static_cast<long long>(std::floor(hi)); ++n) {
            v(level) = Real(n) + shift(level);
            const Real row = r(level, level) * v(level) + t;
            used[level] = used[level + 1] + row * row;
            if (used[level] <= budget) self(self, level - 1);
        }
        v(level) = 0;
    };
    walk(walk, g - 1);
}

template <typename Real>
std::complex<Real> theta_sum(const MatR<std::complex<Real>>& tau, const VecR<Real>& a,
                             const VecR<Real>& b, Real eps, ThetaStats* stats) {
    const Real pi = Real(3.14159265358979323846264338327950288L);
    const int g = static_cast<int>(tau.rows());

    if (!(eps <= Real(1e-3)))
        fail(ErrorKind::InvalidArgument, "eps must be at most 1e-3");
    if (!(eps > 50 * std::numeric_limits<Real>::epsilon()))
        fail(ErrorKind::PrecisionExhausted, "eps below achievable precision for this scalar");

    MatR<Real> im(g, g);
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j) im(i, j) = tau(i, j).imag();

    Eigen::LLT<MatR<Real>> llt(im);
    if (llt.info() != Eigen::Success)
        fail(ErrorKind::NotPositiveDefinite, "Im(tau) not positive definite in theta sum");
    Eigen::SelfAdjointEigenSolver<MatR<Real>> es(im, Eigen::EigenvaluesOnly);
    const Real lambda_min = es.eigenvalues()(0);
    if (lambda_min <= 0)
        fail(ErrorKind::NotPositiveDefinite, "Im(tau) has nonpositive eigenvalue");

    const Real rho = certified_radius(lambda_min, g, eps);
    MatR<Real> rt = MatR<Real>(llt.matrixL()).transpose();  // upper triangular, Q(v) = |rt v|^2

    std::complex<Real> acc(0, 0);
    std::size_t terms = 0;
    enumerate_ellipsoid<Real>(
        rt, a, rho,
        [&](const VecR<Real>& v) {
            std::complex<Real> q(0, 0);
            for (int i = 0; i < g; ++i) {
                std::complex<Real> row(0, 0);
                for (int j = 0; j < g; ++j) row += tau(i, j) * v(j);
                q += v(i) * row;
            }
            Real phase_b = 0;
            for (int i = 0; i < g; ++i) phase_b += v(i) * b(i);
            // exp(pi i q + 2 pi i v.b) with q = qr + i qi
            const Real damp = std::exp(-pi * q.imag());
            const Real arg = pi * q.real() + 2 * pi * phase_b;
            acc += std::complex<Real>(damp * std::cos(arg), damp * std::sin(arg));
            ++terms;
        },
        std::size_t(100000000));

    if (stats) {
        stats->terms = terms;
        stats->radius = static_cast<double>(rho);
    }
    return acc;
}

template <typename Real>
MatR<std::complex<Real>> cast_tau(const MatrixXc& tau) {
    MatR<std::complex<Real>> out(tau.rows(), tau.cols());
    for (Eigen::Index i = 0; i < tau.rows(); ++i)
        for (Eigen::Index j = 0; j < tau.cols(); ++j)
            out(i, j) = std::complex<Real>(Real(tau(i, j).real()), Real(tau(i, j).imag()));
    return out;
}

}  // namespace

double truncation_radius(const SiegelPoint& pt, double eps) {
    if (!(eps > 0 && eps <= 1e-3))
        fail(ErrorKind::InvalidArgument, "eps must lie in (0, 1e-3]");
    CholeskyIm ch = cholesky_im(pt);
    return certified_radius<double>(ch.lambda_min, pt.genus, eps);
}

Complex theta_constant(const ThetaChar& chr, const SiegelPoint& pt, double eps,
                       ThetaStats* stats) {
    if (chr.genus != pt.genus)
        fail(ErrorKind::WrongCount, "characteristic and tau genus mismatch");
    if (!theta_parity_even(chr)) {
        if (stats) *stats = ThetaStats{0, 0};
        return Complex(0, 0);  // odd characteristic: exact zero, no summation
    }
    Eigen::VectorXd a(pt.genus), b(pt.genus);
    for (int i = 0; i < pt.genus; ++i) {
        a(i) = chr.top_bit(i) ? 0.5 : 0.0;
        b(i) = chr.bottom_bit(i) ? 0.5 : 0.0;
    }
    return theta_sum<double>(pt.tau, a, b, eps, stats);
}

Complex theta_constant_raw(const Eigen::VectorXd& top, const Eigen::VectorXd& bottom,
                           const SiegelPoint& pt, double eps, ThetaStats* stats) {
    if (top.size() != pt.genus || bottom.size() != pt.genus)
        fail(ErrorKind::WrongCount, "characteristic vectors must have length g");
    return theta_sum<double>(pt.tau, top, bottom, eps, stats);
}

ComplexL theta_constant_ld(const ThetaChar& chr, const MatrixXcl& tau, long double eps,
                           ThetaStats* stats) {
    if (chr.genus != static_cast<int>(tau.rows()))
        fail(ErrorKind::WrongCount, "characteristic and tau genus mismatch");
    if (!theta_parity_even(chr)) {
        if (stats) *stats = ThetaStats{0, 0};
        return ComplexL(0, 0);
    }
    VecR<long double> a(chr.genus), b(chr.genus);
    for (int i = 0; i < chr.genus; ++i) {
        a(i) = chr.top_bit(i) ? 0.5L : 0.0L;
        b(i) = chr.bottom_bit(i) ? 0.5L : 0.0L;
    }
    return theta_sum<long double>(tau, a, b, eps, stats);
}

}  // namespace hylambda
