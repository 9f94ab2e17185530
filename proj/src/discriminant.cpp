#include "hylambda/discriminant.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hylambda {

namespace {

long long binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    long long out = 1;
    for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
    return out;
}

}  // namespace

ThetaChar eta_base(int g, int k) {
    if (g < 1 || g > 14)
        fail(ErrorKind::IndexOutOfRange, "genus out of supported range");
    if (k < 1 || k > 2 * g + 2)
        fail(ErrorKind::IndexOutOfRange, "branch index must lie in 1..2g+2");

    auto ones_below = [](int j) { return (j <= 0) ? 0u : ((1u << j) - 1u); };

    ThetaChar c{g, 0, 0};
    if (k == 2 * g + 2) return c;
    if (k == 2 * g + 1) {
        c.bottom = ones_below(g);
        return c;
    }
    const int j = (k + 1) / 2;       // 1-based slot of the top unit vector
    c.top = 1u << (j - 1);
    c.bottom = (k % 2 == 1) ? ones_below(j - 1) : ones_below(j);
    return c;
}

ThetaChar eta_subset(int g, const std::vector<int>& s) {
    ThetaChar acc{g, 0, 0};
    for (int k : s) acc = acc ^ eta_base(g, k);
    return acc;
}

DiscriminantContext make_discriminant_context(int g) {
    if (g < 2)
        fail(ErrorKind::WrongCount, "discriminant form needs genus >= 2");
    if (g > 12)
        fail(ErrorKind::IndexOutOfRange, "genus too large for subset enumeration");

    DiscriminantContext ctx;
    ctx.genus = g;
    ctx.n_exp = binomial(2 * g, g + 1);
    ctx.r_count = binomial(2 * g + 1, g + 1);

    std::vector<int> u;  // odd branch indices 1, 3, ..., 2g+1
    for (int k = 1; k <= 2 * g + 1; k += 2) u.push_back(k);

    // Lexicographic (g+1)-subsets of {1..2g+1}.
    std::vector<int> t(g + 1);
    for (int i = 0; i <= g; ++i) t[i] = i + 1;
    while (true) {
        ctx.tsets.push_back(t);
        std::vector<int> sym;
        std::set_symmetric_difference(t.begin(), t.end(), u.begin(), u.end(),
                                      std::back_inserter(sym));
        ctx.tchars.push_back(eta_subset(g, sym));

        int i = g;
        while (i >= 0 && t[i] == 2 * g + 1 - (g - i)) --i;
        if (i < 0) break;
        ++t[i];
        for (int j = i + 1; j <= g; ++j) t[j] = t[j - 1] + 1;
    }

    if (static_cast<long long>(ctx.tsets.size()) != ctx.r_count)
        throw std::logic_error("subset enumeration produced wrong count");
    for (std::size_t i = 0; i < ctx.tchars.size(); ++i) {
        if (!theta_parity_even(ctx.tchars[i]))
            throw std::logic_error("characteristic table produced an odd characteristic");
        for (std::size_t j = 0; j < i; ++j)
            if (ctx.tchars[i] == ctx.tchars[j])
                throw std::logic_error("characteristic table produced a duplicate");
    }
    return ctx;
}

namespace {

// Per-factor tail budget.  eps/(8r) keeps the linear error accumulation over
// the r eighth powers within eps, clamped away from machine roundoff so the
// default budget stays legal at every genus.
template <typename Real>
Real theta_eps_budget(Real eps, long long r) {
    // the theta evaluator rejects budgets at or below 50 ulp, so clamp
    // strictly above that
    const Real floor_eps = 64 * std::numeric_limits<Real>::epsilon();
    return std::max(eps / Real(8 * r), floor_eps);
}

}  // namespace

double theta_tail_budget(double eps, long long r_count) {
    return theta_eps_budget<double>(eps, r_count);
}

DiscriminantValue discriminant_form(const DiscriminantContext& ctx, const SiegelPoint& pt,
                                    double eps) {
    if (pt.genus != ctx.genus)
        fail(ErrorKind::WrongCount, "tau genus does not match context");
    if (!(eps > 0 && eps <= 1e-3))
        fail(ErrorKind::InvalidArgument, "eps must lie in (0, 1e-3]");

    const double eps_theta = theta_eps_budget(eps, ctx.r_count);
    double log_abs = -(4.0 * ctx.genus + 4.0) * double(ctx.n_exp) * std::log(2.0);
    double phase = 0;
    for (const ThetaChar& chr : ctx.tchars) {
        const Complex th = theta_constant(chr, pt, eps_theta);
        const double mag = std::abs(th);
        if (mag == 0) {
            return DiscriminantValue{Complex(0, 0), -std::numeric_limits<double>::infinity(), 0};
        }
        log_abs += 8 * std::log(mag);
        phase += 8 * std::arg(th);
    }
    phase = std::remainder(phase, 2 * 3.14159265358979323846);
    const Complex value = std::exp(Complex(log_abs, phase));
    return DiscriminantValue{value, log_abs, phase};
}

PeterssonValue petersson_norm(const DiscriminantContext& ctx, const SiegelPoint& pt,
                              double eps) {
    DiscriminantValue d = discriminant_form(ctx, pt, eps);
    const double log_det = std::log(det_im(pt));
    const double log_norm = 2.0 * double(ctx.r_count) * log_det + d.log_abs;
    return PeterssonValue{std::exp(log_norm), log_norm};
}

long double petersson_log_ld(const DiscriminantContext& ctx, const MatrixXcl& tau,
                             long double eps) {
    if (static_cast<int>(tau.rows()) != ctx.genus)
        fail(ErrorKind::WrongCount, "tau genus does not match context");

    const long double eps_theta = theta_eps_budget(eps, ctx.r_count);
    long double log_abs = -(4.0L * ctx.genus + 4.0L) * (long double)(ctx.n_exp) * std::log(2.0L);
    for (const ThetaChar& chr : ctx.tchars) {
        const ComplexL th = theta_constant_ld(chr, tau, eps_theta);
        const long double mag = std::abs(th);
        if (mag == 0) return -std::numeric_limits<long double>::infinity();
        log_abs += 8 * std::log(mag);
    }

    Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic> im(tau.rows(), tau.cols());
    for (Eigen::Index i = 0; i < tau.rows(); ++i)
        for (Eigen::Index j = 0; j < tau.cols(); ++j) im(i, j) = tau(i, j).imag();
    const long double log_det = std::log(im.determinant());
    return 2.0L * (long double)(ctx.r_count) * log_det + log_abs;
}

}  // namespace hylambda
