#include "hylambda/pipeline.hpp"

#include <cmath>

namespace hylambda {

InvariantReport run_lambda_pipeline(const HyperellipticCurve& curve,
                                    const PipelineOptions& opts) {
    DiscriminantContext ctx = make_discriminant_context(curve.genus);

    PrecisionProfile profile;
    profile.prec = opts.prec;
    profile.quad_tol = opts.quad_tol;
    profile.max_nodes = opts.max_nodes;

    const bool extended = opts.prec == Precision::Extended ||
                          (opts.prec == Precision::Auto &&
                           curve.min_separation < 1e-6 * curve.scale);

    InvariantReport report;
    report.genus = curve.genus;

    double sym_residual, refine_delta, condition_a, b_flipped, max_nodes_used;
    if (extended) {
        PeriodResultL pr = period_matrix_ld(curve, profile);
        const long double log_norm =
            petersson_log_ld(ctx, pr.tau, static_cast<long double>(opts.eps));
        report.log_petersson = static_cast<double>(log_norm);

        MatrixXc tau_d(pr.tau.rows(), pr.tau.cols());
        for (Eigen::Index i = 0; i < pr.tau.rows(); ++i)
            for (Eigen::Index j = 0; j < pr.tau.cols(); ++j)
                tau_d(i, j) = Complex(static_cast<double>(pr.tau(i, j).real()),
                                      static_cast<double>(pr.tau(i, j).imag()));
        report.tau = validate_siegel(tau_d);
        sym_residual = pr.symmetry_residual;
        refine_delta = pr.refine_delta;
        condition_a = pr.condition_a;
        b_flipped = pr.b_flipped ? 1 : 0;
        max_nodes_used = pr.max_nodes_used;
    } else {
        PeriodResult pr = period_matrix(curve, profile);
        PeterssonValue pv = petersson_norm(ctx, pr.tau, opts.eps);
        report.log_petersson = pv.log_norm;
        report.tau = pr.tau;
        sym_residual = pr.symmetry_residual;
        refine_delta = pr.refine_delta;
        condition_a = pr.condition_a;
        b_flipped = pr.b_flipped ? 1 : 0;
        max_nodes_used = pr.max_nodes_used;
    }

    // lambda is always recomputed from the stored log_petersson, so the
    // report-level consistency invariant holds by construction.
    report.lambda = lambda_arch(report.log_petersson, curve.genus, opts.constant_offset);
    if (opts.delta_f)
        report.phi = phi_from_lambda(report.lambda, *opts.delta_f, curve.genus);

    const double theta_eps = theta_tail_budget(opts.eps, ctx.r_count);
    report.diagnostics["eps"] = opts.eps;
    report.diagnostics["theta_eps"] = theta_eps;
    report.diagnostics["theta_truncation_radius"] = truncation_radius(report.tau, theta_eps);
    report.diagnostics["symmetry_residual"] = sym_residual;
    report.diagnostics["quad_refine_delta"] = refine_delta;
    report.diagnostics["condition_a"] = condition_a;
    report.diagnostics["quad_tol"] = opts.quad_tol;
    report.diagnostics["b_flipped"] = b_flipped;
    report.diagnostics["used_extended"] = extended ? 1 : 0;
    report.diagnostics["max_nodes"] = max_nodes_used;
    report.diagnostics["min_separation"] = curve.min_separation;
    report.diagnostics["scale"] = curve.scale;
    report.diagnostics["constant_offset"] = opts.constant_offset;
    return report;
}

HighAccuracyResult run_lambda_pipeline_ld(const HyperellipticCurve& curve, long double eps,
                                          double quad_tol, int node_multiplier) {
    DiscriminantContext ctx = make_discriminant_context(curve.genus);

    PrecisionProfile profile;
    profile.prec = Precision::Extended;
    profile.quad_tol = quad_tol;
    profile.max_nodes = 1 << 21;
    profile.node_multiplier = node_multiplier;

    PeriodResultL pr = period_matrix_ld(curve, profile);

    HighAccuracyResult out;
    out.tau = pr.tau;
    out.refine_delta = pr.refine_delta;
    out.log_petersson = petersson_log_ld(ctx, pr.tau, eps);

    const long double n = [&] {
        long long v = 1;
        for (int i = 1; i <= curve.genus + 1; ++i)
            v = v * (2 * curve.genus - curve.genus - 1 + i) / i;
        return static_cast<long double>(v);
    }();
    const long double two_pi = 6.28318530717958647692528676655900577L;
    out.lambda = -curve.genus * std::log(two_pi) -
                 curve.genus * out.log_petersson / ((8.0L * curve.genus + 4.0L) * n);
    return out;
}

}  // namespace hylambda
