#include "hylambda/json_io.hpp"

#include <cstdio>

namespace hylambda {

using nlohmann::json;

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json parse_json_text(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) fail(ErrorKind::ParseError, "malformed JSON");
    return j;
}

namespace {

double real_from(const json& v, const char* what) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        try {
            std::size_t pos = 0;
            const double out = std::stod(v.get<std::string>(), &pos);
            if (pos != v.get<std::string>().size())
                fail(ErrorKind::ParseError, std::string(what) + ": trailing characters in number");
            return out;
        } catch (const std::invalid_argument&) {
            fail(ErrorKind::ParseError, std::string(what) + ": not a decimal string");
        } catch (const std::out_of_range&) {
            fail(ErrorKind::ParseError, std::string(what) + ": number out of range");
        }
    }
    fail(ErrorKind::ParseError, std::string(what) + ": expected number or decimal string");
}

long long int_from(const json& v, const char* what) {
    if (v.is_number_integer()) return v.get<long long>();
    fail(ErrorKind::ParseError, std::string(what) + ": expected integer");
}

const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key))
        fail(ErrorKind::ParseError, std::string("missing field \"") + key + "\"");
    return j.at(key);
}

}  // namespace

HyperellipticCurve curve_from_json(const json& j) {
    const long long genus = int_from(field(j, "genus"), "genus");
    const json& roots = field(j, "roots");
    if (!roots.is_array()) fail(ErrorKind::ParseError, "roots must be an array");

    std::vector<BranchPoint> pts;
    for (const json& r : roots) {
        if (r.is_string() && r.get<std::string>() == "inf") {
            pts.push_back(BranchPoint::inf());
        } else if (r.is_array() && r.size() == 2) {
            pts.push_back(BranchPoint::at(
                Complex(real_from(r[0], "root re"), real_from(r[1], "root im"))));
        } else {
            fail(ErrorKind::ParseError, "each root must be [re, im] or \"inf\"");
        }
    }
    if (static_cast<long long>(pts.size()) != 2 * genus + 2)
        fail(ErrorKind::ParseError, "root count does not match 2*genus+2");

    std::optional<std::vector<int>> ordering;
    if (j.contains("ordering")) {
        const json& ord = j.at("ordering");
        if (!ord.is_array()) fail(ErrorKind::ParseError, "ordering must be an array");
        ordering.emplace();
        for (const json& v : ord) ordering->push_back(static_cast<int>(int_from(v, "ordering")));
    }
    return curve_from_roots(pts, ordering);
}

ReductionData reduction_from_json(const json& j) {
    ReductionData data;
    data.g = static_cast<int>(int_from(field(j, "g"), "g"));
    data.xi0 = int_from(field(j, "xi0"), "xi0");
    for (const json& v : field(j, "xi")) data.xi.push_back(int_from(v, "xi"));
    for (const json& v : field(j, "delta")) data.delta.push_back(int_from(v, "delta"));
    validate_reduction(data);
    return data;
}

SweepSpec sweep_from_json(const json& j) {
    SweepSpec spec;
    for (const json& r : field(j, "base_roots")) {
        if (!(r.is_array() && r.size() == 2))
            fail(ErrorKind::ParseError, "sweep base roots must be finite [re, im] pairs");
        spec.base_roots.emplace_back(real_from(r[0], "base root re"),
                                     real_from(r[1], "base root im"));
    }
    for (const json& c : field(j, "clusters")) {
        std::vector<int> cluster;
        for (const json& v : c) cluster.push_back(static_cast<int>(int_from(v, "cluster")));
        spec.clusters.push_back(std::move(cluster));
    }
    if (j.contains("schedule")) {
        const json& s = j.at("schedule");
        spec.t0 = real_from(field(s, "t0"), "t0");
        spec.q = real_from(field(s, "q"), "q");
        spec.K = static_cast<int>(int_from(field(s, "K"), "K"));
    }
    if (j.contains("prec")) {
        const std::string p = j.at("prec").get<std::string>();
        if (p == "double")
            spec.prec = Precision::Double;
        else if (p == "extended")
            spec.prec = Precision::Extended;
        else
            fail(ErrorKind::ParseError, "prec must be \"double\" or \"extended\"");
    }
    validate_sweep(spec);
    return spec;
}

json report_to_json(const InvariantReport& report) {
    json out;
    out["genus"] = report.genus;
    out["lambda"] = fmt17(report.lambda);
    out["log_petersson"] = fmt17(report.log_petersson);
    if (report.phi) out["phi"] = fmt17(*report.phi);

    json re = json::array(), im = json::array();
    for (int i = 0; i < report.genus; ++i) {
        json rrow = json::array(), irow = json::array();
        for (int k = 0; k < report.genus; ++k) {
            rrow.push_back(fmt17(report.tau.tau(i, k).real()));
            irow.push_back(fmt17(report.tau.tau(i, k).imag()));
        }
        re.push_back(rrow);
        im.push_back(irow);
    }
    out["tau"] = json{{"re", re}, {"im", im}};

    json diag;
    for (const auto& [key, value] : report.diagnostics) diag[key] = fmt17(value);
    out["diagnostics"] = diag;
    return out;
}

json summary_to_json(const SweepSummary& s) {
    json out;
    out["genus"] = s.genus;
    out["fit_points"] = s.fit_points;
    out["slope"] = fmt17(s.slope);
    out["r2"] = fmt17(s.r2);
    out["snap"] = std::to_string(s.snap_num) + "/" + std::to_string(s.snap_den);
    out["snap_rel_dist"] = fmt17(s.snap_rel_dist);
    out["monotone_threshold"] = fmt17(s.monotone_threshold);
    out["any_failure"] = s.any_failure;
    return out;
}

json sweep_to_json(const SweepResult& result) {
    json rows = json::array();
    for (const SweepRow& r : result.rows) {
        json row;
        row["t"] = fmt17(r.t);
        if (r.failed) {
            row["error"] = r.error;
        } else {
            row["log_petersson"] = fmt17(r.log_petersson);
            row["lambda"] = fmt17(r.lambda);
            row["refine_delta"] = fmt17(r.refine_delta);
            row["used_extended"] = r.used_extended;
        }
        rows.push_back(row);
    }
    return json{{"rows", rows}, {"summary", summary_to_json(result.summary)}};
}

std::string sweep_to_csv(const SweepResult& result, const std::string& settings_line) {
    std::string out = "# " + settings_line + "\n";
    out += "t,log_petersson,lambda,refine_delta,used_extended,error\n";
    for (const SweepRow& r : result.rows) {
        out += fmt17(r.t);
        out += ',';
        if (r.failed) {
            out += ",,,," + r.error + "\n";
        } else {
            out += fmt17(r.log_petersson);
            out += ',';
            out += fmt17(r.lambda);
            out += ',';
            out += fmt17(r.refine_delta);
            out += ',';
            out += r.used_extended ? "1" : "0";
            out += ",\n";
        }
    }
    const SweepSummary& s = result.summary;
    out += "# slope," + fmt17(s.slope) + "\n";
    out += "# r2," + fmt17(s.r2) + "\n";
    out += "# snap," + std::to_string(s.snap_num) + "/" + std::to_string(s.snap_den) + "\n";
    out += "# snap_rel_dist," + fmt17(s.snap_rel_dist) + "\n";
    out += "# monotone_threshold," + fmt17(s.monotone_threshold) + "\n";
    out += "# fit_points," + std::to_string(s.fit_points) + "\n";
    return out;
}

}  // namespace hylambda
