// Command-line front end: curve reports, reduction-data evaluation,
// degeneration sweeps, single theta constants and a self test.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hylambda/json_io.hpp"
#include "hylambda/pipeline.hpp"
#include "hylambda/sweep.hpp"

using nlohmann::json;
using namespace hylambda;

namespace {

struct CommonFlags {
    double eps = 1e-12;
    std::string prec = "auto";
    std::uint64_t seed = 0;
    std::string out;
    std::string format = "json";
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--eps", flags.eps, "theta tail tolerance")->capture_default_str();
    cmd->add_option("--prec", flags.prec, "precision: double or extended")
        ->check(CLI::IsMember({"auto", "double", "extended"}))
        ->capture_default_str();
    cmd->add_option("--seed", flags.seed, "seed for randomized subcommands");
    cmd->add_option("--out", flags.out, "output path (default stdout)");
    cmd->add_option("--format", flags.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
}

Precision parse_prec(const std::string& p) {
    if (p == "double") return Precision::Double;
    if (p == "extended") return Precision::Extended;
    return Precision::Auto;
}

void emit(const CommonFlags& flags, const std::string& text) {
    if (flags.out.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream f(flags.out);
    if (!f) fail(ErrorKind::InvalidArgument, "cannot open output path " + flags.out);
    f << text;
    if (!text.empty() && text.back() != '\n') f << '\n';
}

json load_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) fail(ErrorKind::ParseError, "cannot open " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_json_text(ss.str());
}

std::string settings_line(const CommonFlags& flags, double quad_tol) {
    return "settings eps=" + fmt17(flags.eps) + " quad_tol=" + fmt17(quad_tol) +
           " prec=" + flags.prec + " digits=17";
}

int cmd_lambda(const std::string& curve_path, const CommonFlags& flags,
               const std::optional<double>& delta_f) {
    HyperellipticCurve curve = curve_from_json(load_json_file(curve_path));

    PipelineOptions opts;
    opts.eps = flags.eps;
    opts.prec = parse_prec(flags.prec);
    opts.delta_f = delta_f;
    InvariantReport report = run_lambda_pipeline(curve, opts);

    json out = report_to_json(report);
    out["settings"] = settings_line(flags, opts.quad_tol);
    emit(flags, out.dump(2));
    return 0;
}

int cmd_nonarch(const std::string& reduction_path, const CommonFlags& flags) {
    ReductionData data = reduction_from_json(load_json_file(reduction_path));

    // The bound's delta0 counts all type-0 double points: xi0 plus the pairs.
    long long delta0 = data.xi0;
    for (long long v : data.xi) delta0 += 2 * v;

    json out;
    out["psi"] = psi_na(data).str();
    out["lambda"] = lambda_na(data).str();
    out["closed_form"] = lambda_na_closed(data).str();
    out["zhang_bound_rhs"] = zhang_bound_rhs(delta0, data.delta, data.g, true).str();
    emit(flags, out.dump(2));
    return 0;
}

int cmd_sweep(const std::string& spec_path, const CommonFlags& flags) {
    SweepSpec spec = sweep_from_json(load_json_file(spec_path));
    spec.eps = flags.eps;
    if (flags.prec != "auto") spec.prec = parse_prec(flags.prec);

    SweepResult result = run_sweep(spec);
    if (flags.format == "csv") {
        emit(flags, sweep_to_csv(result, settings_line(flags, spec.quad_tol)));
    } else {
        json out = sweep_to_json(result);
        out["settings"] = settings_line(flags, spec.quad_tol);
        emit(flags, out.dump(2));
    }
    return result.summary.any_failure ? 3 : 0;
}

int cmd_theta(const std::string& tau_path, const std::string& top, const std::string& bottom,
              const CommonFlags& flags) {
    json j = load_json_file(tau_path);
    const json& re = j.at("re");
    const int g = static_cast<int>(re.size());
    MatrixXc tau(g, g);
    for (int i = 0; i < g; ++i)
        for (int k = 0; k < g; ++k) {
            double rr = j.at("re").at(i).at(k).is_string()
                            ? std::stod(j.at("re").at(i).at(k).get<std::string>())
                            : j.at("re").at(i).at(k).get<double>();
            double ii = j.at("im").at(i).at(k).is_string()
                            ? std::stod(j.at("im").at(i).at(k).get<std::string>())
                            : j.at("im").at(i).at(k).get<double>();
            tau(i, k) = Complex(rr, ii);
        }
    SiegelPoint pt = validate_siegel(tau);

    auto parse_bits = [&](const std::string& s) {
        if (static_cast<int>(s.size()) != g)
            fail(ErrorKind::WrongCount, "characteristic bits must have length g");
        std::uint32_t bits = 0;
        for (int i = 0; i < g; ++i) {
            if (s[i] == '1')
                bits |= 1u << i;
            else if (s[i] != '0')
                fail(ErrorKind::ParseError, "characteristic bits must be 0 or 1");
        }
        return bits;
    };
    ThetaChar chr{g, parse_bits(top), parse_bits(bottom)};

    ThetaStats stats;
    Complex value = theta_constant(chr, pt, flags.eps, &stats);
    json out;
    out["re"] = fmt17(value.real());
    out["im"] = fmt17(value.imag());
    out["even"] = theta_parity_even(chr);
    out["terms"] = stats.terms;
    out["truncation_radius"] = fmt17(stats.radius);
    out["settings"] = settings_line(flags, 0.0);
    emit(flags, out.dump(2));
    return 0;
}

int cmd_selftest(const CommonFlags& flags) {
    int failures = 0;
    auto check = [&](const char* name, bool ok) {
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << "\n";
        if (!ok) ++failures;
    };

    {
        ReductionData d{3, 1, {2}, {0}};
        check("nonarch closed form identity", lambda_na(d) == lambda_na_closed(d));
    }
    {
        bool ok = true;
        for (int g = 2; g <= 5 && ok; ++g) {
            DiscriminantContext ctx = make_discriminant_context(g);
            for (const ThetaChar& c : ctx.tchars) ok = ok && theta_parity_even(c);
        }
        check("product characteristics all even", ok);
    }
    {
        MatrixXc tau = MatrixXc::Zero(1, 1);
        tau(0, 0) = Complex(0, 1);
        SiegelPoint pt = validate_siegel(tau);
        const double v = theta_constant(ThetaChar{1, 0, 0}, pt, 1e-12).real();
        check("theta(0, i) matches pi^(1/4)/Gamma(3/4)",
              std::abs(v - 1.0864348112133080) < 1e-12);
        const Complex odd = theta_constant(ThetaChar{1, 1, 1}, pt, 1e-12);
        check("odd characteristic short-circuits to zero", odd == Complex(0, 0));
    }
    {
        SymplecticMatrix gamma = random_level2(2, flags.seed ? flags.seed : 7, 8);
        check("random level-2 word stays in the subgroup", is_level2(gamma));
    }
    {
        std::vector<std::pair<double, double>> series;
        for (int i = 0; i < 8; ++i) {
            const double t = std::pow(10.0, -1.0 - i);
            series.emplace_back(t, 3.0 * -std::log(t) + 1.0);
        }
        auto [slope, r2] = fit_log_slope(series);
        check("slope fit recovers an exact line",
              std::abs(slope - 3.0) < 1e-12 && std::abs(r2 - 1.0) < 1e-12);
    }
    std::cout << (failures == 0 ? "selftest passed\n" : "selftest FAILED\n");
    return failures == 0 ? 0 : 3;
}

json error_json(const Error& e) {
    return json{{"error", {{"kind", to_string(e.kind())}, {"message", e.what()}}}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lambda invariants of hyperelliptic curves"};
    app.require_subcommand(1);

    CommonFlags flags;

    std::string curve_path;
    std::optional<double> delta_f;
    double delta_f_raw = 0;
    CLI::App* lam = app.add_subcommand("lambda", "invariant report for one curve");
    lam->add_option("--curve", curve_path, "curve JSON path")->required();
    CLI::Option* df = lam->add_option("--delta-f", delta_f_raw, "Faltings delta, enables phi");
    add_common(lam, flags);

    std::string reduction_path;
    CLI::App* na = app.add_subcommand("nonarch", "exact invariants from reduction data");
    na->add_option("--reduction", reduction_path, "reduction JSON path")->required();
    add_common(na, flags);

    std::string sweep_path;
    CLI::App* sw = app.add_subcommand("sweep", "degeneration sweep with slope fit");
    sw->add_option("--spec", sweep_path, "sweep JSON path")->required();
    add_common(sw, flags);

    std::string tau_path, top_bits, bottom_bits;
    CLI::App* th = app.add_subcommand("theta", "evaluate one theta constant");
    th->add_option("--tau", tau_path, "tau JSON path {re: [[..]], im: [[..]]}")->required();
    th->add_option("--top", top_bits, "top characteristic bits, e.g. 01")->required();
    th->add_option("--bottom", bottom_bits, "bottom characteristic bits")->required();
    add_common(th, flags);

    CLI::App* st = app.add_subcommand("selftest", "run the built-in checks");
    add_common(st, flags);

    CLI11_PARSE(app, argc, argv);

    try {
        if (lam->parsed()) {
            if (df->count() > 0) delta_f = delta_f_raw;
            return cmd_lambda(curve_path, flags, delta_f);
        }
        if (na->parsed()) return cmd_nonarch(reduction_path, flags);
        if (sw->parsed()) return cmd_sweep(sweep_path, flags);
        if (th->parsed()) return cmd_theta(tau_path, top_bits, bottom_bits, flags);
        if (st->parsed()) return cmd_selftest(flags);
    } catch (const Error& e) {
        std::cout << error_json(e).dump(2) << "\n";
        return is_input_error(e.kind()) ? 2 : 3;
    } catch (const std::exception& e) {
        std::cout << json{{"error", {{"kind", "Internal"}, {"message", e.what()}}}}.dump(2)
                  << "\n";
        return 3;
    }
    return 0;
}
