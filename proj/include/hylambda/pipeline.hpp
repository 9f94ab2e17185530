#pragma once

// Glue from a marked curve to a full invariant report:
// period matrix -> Petersson norm of the discriminant form -> lambda.

#include <optional>

#include "hylambda/discriminant.hpp"
#include "hylambda/hyperelliptic.hpp"
#include "hylambda/invariants.hpp"

namespace hylambda {

struct PipelineOptions {
    double eps = 1e-12;               // tail tolerance for the theta product
    Precision prec = Precision::Auto;
    double quad_tol = 1e-11;
    int max_nodes = 1 << 18;
    std::optional<double> delta_f;    // enables the phi field when present
    double constant_offset = 0.0;     // sensitivity-study offset, proven value is 0
};

InvariantReport run_lambda_pipeline(const HyperellipticCurve& curve,
                                    const PipelineOptions& opts = {});

// Reference path: everything in long double, with caller-chosen tolerances.
struct HighAccuracyResult {
    long double lambda = 0;
    long double log_petersson = 0;
    MatrixXcl tau;
    double refine_delta = 0;
};

HighAccuracyResult run_lambda_pipeline_ld(const HyperellipticCurve& curve, long double eps,
                                          double quad_tol, int node_multiplier = 1);

}  // namespace hylambda
