#pragma once

// Boundary-degeneration sweeps: move selected clusters of branch points
// toward their centroids along a geometric schedule t_k = t0 q^k and track
// lambda, which grows linearly in -log t with a rational limiting slope.

#include <string>
#include <utility>
#include <vector>

#include "hylambda/hyperelliptic.hpp"

namespace hylambda {

struct SweepSpec {
    std::vector<Complex> base_roots;            // finite branch points, 2g+2 of them
    std::vector<std::vector<int>> clusters;     // each cluster contracts toward its centroid
    double t0 = 1e-1;
    double q = 0.31622776601683794;             // 10^{-1/2}
    int K = 12;                                  // schedule k = 0..K, length K+1 >= 6
    Precision prec = Precision::Auto;
    double eps = 1e-12;
    double quad_tol = 1e-11;
};

void validate_sweep(const SweepSpec& spec);

// Branch points at family parameter t.
std::vector<Complex> sweep_roots_at(const SweepSpec& spec, double t);

struct SweepRow {
    double t = 0;
    double log_petersson = 0;
    double lambda = 0;
    double refine_delta = 0;
    bool used_extended = false;
    bool failed = false;
    std::string error;  // error kind when failed
};

struct SweepSummary {
    int genus = 0;
    int fit_points = 0;              // rows entering the slope fit (tail of the schedule)
    double slope = 0;
    double r2 = 0;
    long long snap_num = 0;          // nearest rational approximation to the slope
    long long snap_den = 1;          //   with denominator <= 8g+4
    double snap_rel_dist = 0;
    double monotone_threshold = 0;   // largest t from which lambda increases monotonically
    bool any_failure = false;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    SweepSummary summary;
};

// Least-squares slope of value against -log t; returns (slope, r^2).
// Needs >= 4 points with strictly decreasing t; all-equal t values throw
// DegenerateFit.
std::pair<double, double> fit_log_slope(const std::vector<std::pair<double, double>>& series);

SweepResult run_sweep(const SweepSpec& spec);

}  // namespace hylambda
