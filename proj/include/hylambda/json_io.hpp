#pragma once

// JSON schemas for the CLI.  All floating numbers are accepted either as
// JSON numbers or as decimal strings, and every float we emit is rendered
// as a 17-significant-digit decimal string so output is byte-stable.
//
//   curve:     {"genus": g, "roots": [[re, im] | "inf", ...], "ordering": [ints]?}
//   reduction: {"g": g, "xi0": n, "xi": [ints], "delta": [ints]}
//   sweep:     {"base_roots": [[re, im], ...], "clusters": [[ints], ...],
//               "schedule": {"t0": x, "q": x, "K": n}?, "prec": "double"|"extended"?}

#include <string>

#include <json.hpp>

#include "hylambda/hyperelliptic.hpp"
#include "hylambda/invariants.hpp"
#include "hylambda/sweep.hpp"

namespace hylambda {

std::string fmt17(double v);

HyperellipticCurve curve_from_json(const nlohmann::json& j);
ReductionData reduction_from_json(const nlohmann::json& j);
SweepSpec sweep_from_json(const nlohmann::json& j);

nlohmann::json report_to_json(const InvariantReport& report);
nlohmann::json summary_to_json(const SweepSummary& summary);
nlohmann::json sweep_to_json(const SweepResult& result);
std::string sweep_to_csv(const SweepResult& result, const std::string& settings_line);

// Parses text, mapping any JSON syntax error to ParseError.
nlohmann::json parse_json_text(const std::string& text);

}  // namespace hylambda
