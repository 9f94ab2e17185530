#include "hylambda/sweep.hpp"

#include <cmath>
#include <limits>

#include "hylambda/pipeline.hpp"

namespace hylambda {

void validate_sweep(const SweepSpec& spec) {
    const int count = static_cast<int>(spec.base_roots.size());
    if (count < 6 || count % 2 != 0)
        fail(ErrorKind::WrongCount, "sweep needs 2g+2 finite base roots with g >= 2");
    if (!(spec.t0 > 0 && spec.t0 < 1) || !(spec.q > 0 && spec.q < 1))
        fail(ErrorKind::InvalidArgument, "schedule needs t0, q in (0,1)");
    if (spec.K + 1 < 6)
        fail(ErrorKind::InvalidArgument, "schedule must have at least 6 points");
    if (spec.clusters.empty())
        fail(ErrorKind::InvalidArgument, "at least one moving cluster is required");
    std::vector<char> used(count, 0);
    for (const auto& cluster : spec.clusters) {
        if (cluster.size() < 2)
            fail(ErrorKind::InvalidArgument, "clusters need at least two indices");
        for (int idx : cluster) {
            if (idx < 0 || idx >= count)
                fail(ErrorKind::IndexOutOfRange, "cluster index out of range");
            if (used[idx]++)
                fail(ErrorKind::IndexOutOfRange, "cluster indices overlap");
        }
    }
}

std::vector<Complex> sweep_roots_at(const SweepSpec& spec, double t) {
    std::vector<Complex> roots = spec.base_roots;
    for (const auto& cluster : spec.clusters) {
        Complex centroid(0, 0);
        for (int idx : cluster) centroid += spec.base_roots[idx];
        centroid /= double(cluster.size());
        for (int idx : cluster) roots[idx] = centroid + t * (spec.base_roots[idx] - centroid);
    }
    return roots;
}

std::pair<double, double> fit_log_slope(const std::vector<std::pair<double, double>>& series) {
    const std::size_t n = series.size();
    if (n < 4) fail(ErrorKind::WrongCount, "slope fit needs at least 4 points");

    bool all_equal = true;
    for (std::size_t i = 1; i < n; ++i)
        if (series[i].first != series[0].first) all_equal = false;
    if (all_equal) fail(ErrorKind::DegenerateFit, "all t values equal");
    for (std::size_t i = 1; i < n; ++i)
        if (!(series[i].first < series[i - 1].first))
            fail(ErrorKind::InvalidArgument, "t values must be strictly decreasing");
    for (const auto& [t, v] : series) {
        (void)v;
        if (!(t > 0)) fail(ErrorKind::InvalidArgument, "t values must be positive");
    }

    double sx = 0, sy = 0;
    for (const auto& [t, v] : series) {
        sx += -std::log(t);
        sy += v;
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (const auto& [t, v] : series) {
        const double dx = -std::log(t) - mx;
        const double dy = v - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0) fail(ErrorKind::DegenerateFit, "no spread in -log t");
    const double slope = sxy / sxx;
    const double r2 = (syy == 0) ? 1.0 : (sxy * sxy) / (sxx * syy);
    return {slope, r2};
}

namespace {

void snap_to_rational(double slope, long long max_den, long long& best_num, long long& best_den,
                      double& rel_dist) {
    best_num = 0;
    best_den = 1;
    double best_err = std::numeric_limits<double>::infinity();
    for (long long den = 1; den <= max_den; ++den) {
        const long long num = std::llround(slope * double(den));
        const double err = std::abs(slope - double(num) / double(den));
        if (err < best_err - 1e-18) {
            best_err = err;
            best_num = num;
            best_den = den;
        }
    }
    rel_dist = best_err / std::max(std::abs(slope), 1e-300);
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec) {
    validate_sweep(spec);
    const int genus = static_cast<int>(spec.base_roots.size()) / 2 - 1;

    SweepResult out;
    out.summary.genus = genus;

    PipelineOptions opts;
    opts.eps = spec.eps;
    opts.prec = spec.prec;
    opts.quad_tol = spec.quad_tol;

    for (int k = 0; k <= spec.K; ++k) {
        const double t = spec.t0 * std::pow(spec.q, k);
        SweepRow row;
        row.t = t;
        try {
            std::vector<BranchPoint> pts;
            for (Complex z : sweep_roots_at(spec, t)) pts.push_back(BranchPoint::at(z));
            HyperellipticCurve curve = curve_from_roots(pts);
            InvariantReport report = run_lambda_pipeline(curve, opts);
            row.log_petersson = report.log_petersson;
            row.lambda = report.lambda;
            row.refine_delta = report.diagnostics.at("quad_refine_delta");
            row.used_extended = report.diagnostics.at("used_extended") != 0;
        } catch (const Error& e) {
            row.failed = true;
            row.error = to_string(e.kind());
            out.summary.any_failure = true;
        }
        out.rows.push_back(row);
    }

    // Fit over the tail of the schedule (deepest degeneration).
    std::vector<std::pair<double, double>> tail;
    const int want = std::max(4, (spec.K + 1) / 2);
    for (auto it = out.rows.end() - std::min<std::size_t>(want, out.rows.size());
         it != out.rows.end(); ++it)
        if (!it->failed) tail.emplace_back(it->t, it->lambda);

    if (tail.size() >= 4) {
        auto [slope, r2] = fit_log_slope(tail);
        out.summary.slope = slope;
        out.summary.r2 = r2;
        out.summary.fit_points = static_cast<int>(tail.size());
        snap_to_rational(slope, 8LL * genus + 4, out.summary.snap_num, out.summary.snap_den,
                         out.summary.snap_rel_dist);
    } else {
        out.summary.slope = std::numeric_limits<double>::quiet_NaN();
        out.summary.r2 = 0;
        out.summary.fit_points = static_cast<int>(tail.size());
    }

    // Largest t from which lambda is monotone increasing to the end of the
    // schedule (in -log t order).
    out.summary.monotone_threshold = std::numeric_limits<double>::quiet_NaN();
    int start = static_cast<int>(out.rows.size()) - 1;
    while (start > 0 && !out.rows[start - 1].failed && !out.rows[start].failed &&
           out.rows[start].lambda > out.rows[start - 1].lambda)
        --start;
    if (start < static_cast<int>(out.rows.size()) - 1)
        out.summary.monotone_threshold = out.rows[start].t;
    return out;
}

}  // namespace hylambda
