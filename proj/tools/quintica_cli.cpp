// quintica: roots of principal/trinomic quintics by convergent double series,
// with a Durand-Kerner cross-check and a sextic-Landau equation-of-state front end.

#include <quintica/quintica.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

using quintica::Complex;
using nlohmann::json;

constexpr const char* kSchemaVersion = "1.0.0";

// Flag syntax: "re" or "re,im" (comma, no spaces).
Complex parse_complex_flag(const std::string& name, const std::string& text) {
    auto parse_one = [&](const std::string& part) {
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(part, &pos);
        } catch (const std::exception&) {
            throw CLI::ValidationError(name, "expected a number, got '" + part + "'");
        }
        if (pos != part.size())
            throw CLI::ValidationError(name, "trailing characters in '" + part + "'");
        return v;
    };
    auto comma = text.find(',');
    if (comma == std::string::npos) return Complex{parse_one(text), 0.0};
    return Complex{parse_one(text.substr(0, comma)), parse_one(text.substr(comma + 1))};
}

int resolve_max_shells(const CLI::App* cmd, const std::string& flag, int flag_value) {
    if (cmd->count(flag) > 0) return flag_value;
    if (const char* env = std::getenv("QUINTIC_MAX_SHELLS")) {
        std::string text(env);
        std::size_t pos = 0;
        long v = 0;
        try {
            v = std::stol(text, &pos);
        } catch (const std::exception&) {
            pos = std::string::npos;
        }
        if (pos != text.size() || v <= 0)
            throw CLI::ValidationError("QUINTIC_MAX_SHELLS",
                                       "expected a positive integer, got '" + text + "'");
        return static_cast<int>(v);
    }
    return flag_value;
}

json complex_json(Complex z) { return quintica::complex_to_json(z); }

json roots_json(const std::vector<Complex>& roots) {
    json arr = json::array();
    for (auto r : roots) arr.push_back(complex_json(r));
    return arr;
}

json root_set_json(const quintica::RootSet& rs) {
    json j;
    j["roots"] = roots_json(rs.roots);
    j["residuals"] = rs.residuals;
    j["method"] = quintica::to_string(rs.method);
    return j;
}

json record(const std::string& command, json inputs, json results, double timing_ms) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = command;
    j["inputs"] = std::move(inputs);
    j["results"] = std::move(results);
    j["timing_ms"] = timing_ms;
    return j;
}

int emit_record(const json& rec, const std::string& format, const std::string& out_path) {
    std::string text;
    if (format == "csv") {
        text = quintica::record_to_csv(rec);
    } else {
        quintica::canonical_json_dump(rec, text);
        text += '\n';
    }
    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) {
            std::cerr << "error: cannot open output file '" << out_path << "'\n";
            return 1;
        }
        out << text;
        return 0;
    }
    std::cout << text;
    return 0;
}

class Stopwatch {
  public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double ms() const {
        auto d = std::chrono::steady_clock::now() - start_;
        return std::chrono::duration<double, std::milli>(d).count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

int match_index(const quintica::RootSet& rs, Complex value) {
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < rs.roots.size(); ++i) {
        double d = std::abs(rs.roots[i] - value);
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(i);
        }
    }
    return best;
}

struct PrincipalArgs {
    std::string A_text = "0";
    std::string B_text = "0";
    double rel_tol = 1e-12;
    int max_shells = 500;
    std::string format = "json";
};

int run_solve_principal(const CLI::App* cmd, const PrincipalArgs& args) {
    Stopwatch watch;
    Complex A = parse_complex_flag("--A", args.A_text);
    Complex B = parse_complex_flag("--B", args.B_text);
    int max_shells = resolve_max_shells(cmd, "--max-shells", args.max_shells);
    quintica::PrincipalQuintic q{A, B};
    double margin = quintica::convergence_margin(q);

    json inputs;
    inputs["A"] = complex_json(A);
    inputs["B"] = complex_json(B);
    inputs["rel_tol"] = args.rel_tol;
    inputs["max_shells"] = max_shells;
    inputs["format"] = args.format;

    json results;
    results["margin"] = margin;

    // The margin polynomial touches zero at the origin where the series is a
    // single exact term, so only the origin is exempt from the refusal gate.
    bool origin = (A == Complex{0.0, 0.0} && B == Complex{0.0, 0.0});
    bool refused = margin >= 0.0 && !origin;
    bool converged = false;
    int exit_code = 0;
    quintica::SeriesResult sr{};
    if (refused) {
        results["series_attempted"] = false;
        results["note"] = "series refused: nonnegative convergence margin";
        exit_code = 2;
    } else {
        results["series_attempted"] = true;
        try {
            sr = quintica::passare_tsikh_root(q, args.rel_tol, max_shells);
            converged = true;
        } catch (const quintica::SeriesError& err) {
            sr = err.partial;
            results["note"] = std::string("series failed: ") + err.what();
            exit_code = 2;
        }
        results["series_root"] = complex_json(sr.value);
        results["terms_used"] = sr.terms_used;
        results["last_term_magnitude"] = sr.last_term_magnitude;
        results["residual"] =
            std::abs(B * std::pow(sr.value, 5) + A * sr.value * sr.value + sr.value + 1.0);
    }
    results["converged"] = converged;

    // Independent root finder on the same quintic (degree depends on which
    // leading coefficients vanish).
    std::vector<Complex> coeffs;
    if (B != Complex{0.0, 0.0}) {
        coeffs = {1.0 / B, 1.0 / B, A / B, Complex{0.0, 0.0}, Complex{0.0, 0.0},
                  Complex{1.0, 0.0}};
    } else if (A != Complex{0.0, 0.0}) {
        coeffs = {1.0 / A, 1.0 / A, Complex{1.0, 0.0}};
    } else {
        coeffs = {Complex{1.0, 0.0}, Complex{1.0, 0.0}};
    }
    auto oracle = quintica::find_all_roots(coeffs);
    results["oracle_roots"] = roots_json(oracle.roots);
    results["oracle_residuals"] = oracle.residuals;
    results["matched_oracle_index"] = converged ? match_index(oracle, sr.value) : -1;
    results["method"] = converged ? "series" : "oracle";

    json rec = record("solve-principal", inputs, results, watch.ms());
    int emit_rc = emit_record(rec, args.format, "");
    return emit_rc != 0 ? emit_rc : exit_code;
}

struct DepressedArgs {
    std::string a3_text = "0";
    std::string a1_text = "0";
    std::string a0_text = "0";
    double rel_tol = 1e-12;
    int max_shells = 500;
    std::string format = "json";
};

json pipeline_report_json(const quintica::PipelineReport& rep) {
    json j;
    j["fallback_used"] = rep.fallback_used;
    json map;
    map["alpha"] = complex_json(rep.map.alpha);
    map["beta"] = complex_json(rep.map.beta);
    map["b2"] = complex_json(rep.map.b2);
    map["b1"] = complex_json(rep.map.b1);
    map["b0"] = complex_json(rep.map.b0);
    map["identity"] = rep.map.identity;
    j["map"] = map;
    json principal;
    principal["A"] = complex_json(rep.scaled.A);
    principal["B"] = complex_json(rep.scaled.B);
    j["principal"] = principal;
    j["scale"] = complex_json(rep.scale);
    json series;
    series["attempted"] = rep.series_attempted;
    if (rep.series_attempted) {
        series["value"] = complex_json(rep.series.value);
        series["terms_used"] = rep.series.terms_used;
        series["converged"] = rep.series.converged;
        series["last_term_magnitude"] = rep.series.last_term_magnitude;
    }
    j["series"] = series;
    j["root_set"] = root_set_json(rep.roots);
    json diag;
    for (const auto& [k, v] : rep.diagnostics) diag[k] = v;
    j["diagnostics"] = diag;
    j["notes"] = rep.notes;
    return j;
}

int run_solve_depressed(const CLI::App* cmd, const DepressedArgs& args) {
    Stopwatch watch;
    quintica::DepressedQuintic dq{parse_complex_flag("--a3", args.a3_text),
                                  parse_complex_flag("--a1", args.a1_text),
                                  parse_complex_flag("--a0", args.a0_text)};
    quintica::PipelineOptions opts;
    opts.rel_tol = args.rel_tol;
    opts.max_shells = resolve_max_shells(cmd, "--max-shells", args.max_shells);

    json inputs;
    inputs["a3"] = complex_json(dq.a3);
    inputs["a1"] = complex_json(dq.a1);
    inputs["a0"] = complex_json(dq.a0);
    inputs["rel_tol"] = opts.rel_tol;
    inputs["max_shells"] = opts.max_shells;
    inputs["format"] = args.format;

    auto rep = quintica::solve_pipeline(dq, opts);
    json rec = record("solve-depressed", inputs, pipeline_report_json(rep), watch.ms());
    return emit_record(rec, args.format, "");
}

struct TrinomialArgs {
    int m = 1;
    int n = 2;
    std::string a_text = "0";
    int branch = 0;
    bool verbatim = false;
    double rel_tol = 1e-12;
    int max_terms = 500;
    std::string format = "json";
};

int run_solve_trinomial(const TrinomialArgs& args) {
    Stopwatch watch;
    Complex a = parse_complex_flag("--a", args.a_text);
    quintica::Trinomial tri{args.m, args.n, a, args.branch};

    json inputs;
    inputs["m"] = args.m;
    inputs["n"] = args.n;
    inputs["a"] = complex_json(a);
    inputs["branch"] = args.branch;
    inputs["verbatim_eq15"] = args.verbatim;
    inputs["rel_tol"] = args.rel_tol;
    inputs["max_terms"] = args.max_terms;
    inputs["format"] = args.format;

    json results;
    bool converged = false;
    int exit_code = 0;
    quintica::SeriesResult sr{};
    try {
        sr = quintica::trinomial_root(tri, args.rel_tol, args.max_terms, args.verbatim);
        converged = true;
    } catch (const quintica::SeriesError& err) {
        sr = err.partial;
        results["note"] = std::string("series failed: ") + err.what();
        exit_code = 2;
    }
    results["series_root"] = complex_json(sr.value);
    results["terms_used"] = sr.terms_used;
    results["last_term_magnitude"] = sr.last_term_magnitude;
    results["converged"] = converged;
    results["method"] = converged ? "series" : "oracle";
    Complex r = sr.value;
    results["residual"] = std::abs(Complex{1.0, 0.0} + std::pow(r, args.m) +
                                   a * std::pow(r, args.n));
    results["epsilon"] = complex_json(tri.epsilon());

    // Cross-check polynomial: 1 + x^m + a x^n, monic-normalized when the
    // degree stays within the oracle's range.
    int degree = (a == Complex{0.0, 0.0}) ? args.m : args.n;
    if (degree <= 5) {
        std::vector<Complex> coeffs(static_cast<std::size_t>(degree) + 1,
                                    Complex{0.0, 0.0});
        coeffs[0] = Complex{1.0, 0.0};
        coeffs[static_cast<std::size_t>(args.m)] += Complex{1.0, 0.0};
        if (a != Complex{0.0, 0.0}) coeffs[static_cast<std::size_t>(args.n)] += a;
        Complex lead = coeffs.back();
        for (auto& cc : coeffs) cc /= lead;
        auto oracle = quintica::find_all_roots(coeffs);
        results["oracle_roots"] = roots_json(oracle.roots);
        results["oracle_residuals"] = oracle.residuals;
        results["matched_oracle_index"] = converged ? match_index(oracle, sr.value) : -1;
    }

    json rec = record("solve-trinomial", inputs, results, watch.ms());
    int emit_rc = emit_record(rec, args.format, "");
    return emit_rc != 0 ? emit_rc : exit_code;
}

struct EosSolveArgs {
    double a = 0.0;
    double b = 0.0;
    double c = 1.0;
    double f = 0.0;
    double T = 0.0;
    double Tc = 0.0;
    double a0_slope = 0.0;
    std::string format = "json";
};

json equilibrium_json(const quintica::EquilibriumResult& eq) {
    json j;
    j["u_eq"] = eq.u_eq;
    j["method"] = quintica::to_string(eq.method);
    j["degenerate"] = eq.degenerate;
    j["residual"] = eq.residual;
    if (eq.margin) j["margin"] = *eq.margin;
    j["terms_used"] = eq.terms_used;
    json st = json::array();
    for (const auto& p : eq.all_stationary) {
        json e;
        e["u"] = p.u;
        e["F"] = p.F;
        e["stable"] = p.stable;
        st.push_back(e);
    }
    j["all_stationary"] = st;
    return j;
}

int run_eos_solve(const CLI::App* cmd, const EosSolveArgs& args) {
    Stopwatch watch;
    json inputs;
    double a = args.a;
    if (cmd->count("--T") > 0) {
        a = args.a0_slope * (args.T - args.Tc);
        inputs["T"] = args.T;
        inputs["Tc"] = args.Tc;
        inputs["a0_slope"] = args.a0_slope;
    }
    quintica::LandauParams p{a, args.b, args.c, args.f};
    inputs["a"] = p.a;
    inputs["b"] = p.b;
    inputs["c"] = p.c;
    inputs["f"] = p.f;
    inputs["format"] = args.format;

    auto eq = quintica::equilibrium(p);
    json rec = record("eos-solve", inputs, equilibrium_json(eq), watch.ms());
    return emit_record(rec, args.format, "");
}

struct EosSweepArgs {
    double a_min = 0.0, a_max = 0.0;
    int a_steps = 1;
    double f_min = 0.0, f_max = 0.0;
    int f_steps = 1;
    double b = 0.0;
    double c = 1.0;
    std::string out_path;
    std::string format = "csv";
};

std::string sweep_csv(const std::vector<quintica::SweepCell>& cells) {
    std::string text = "a,f,u_eq,method,margin,terms_used,residual,degenerate\n";
    for (const auto& cell : cells) {
        text += quintica::csv_double(cell.a);
        text += ',';
        text += quintica::csv_double(cell.f);
        text += ',';
        if (cell.ok) {
            const auto& r = cell.result;
            text += quintica::csv_double(r.u_eq);
            text += ',';
            text += quintica::to_string(r.method);
            text += ',';
            if (r.margin) text += quintica::csv_double(*r.margin);
            text += ',';
            text += std::to_string(r.terms_used);
            text += ',';
            text += quintica::csv_double(r.residual);
            text += ',';
            text += r.degenerate ? "true" : "false";
        } else {
            text += ",error,,0,,false";
        }
        text += '\n';
    }
    return text;
}

int run_eos_sweep(const EosSweepArgs& args) {
    Stopwatch watch;
    if (args.a_steps < 1 || args.f_steps < 1)
        throw CLI::ValidationError("--a-steps/--f-steps", "step counts must be >= 1");
    auto cells = quintica::sweep(args.a_min, args.a_max, args.a_steps, args.f_min,
                                 args.f_max, args.f_steps, args.b, args.c);

    if (args.format == "csv") {
        std::string text = sweep_csv(cells);
        if (!args.out_path.empty()) {
            std::ofstream out(args.out_path, std::ios::binary);
            if (!out) {
                std::cerr << "error: cannot open output file '" << args.out_path << "'\n";
                return 1;
            }
            out << text;
            return 0;
        }
        std::cout << text;
        return 0;
    }

    json inputs;
    inputs["a_min"] = args.a_min;
    inputs["a_max"] = args.a_max;
    inputs["a_steps"] = args.a_steps;
    inputs["f_min"] = args.f_min;
    inputs["f_max"] = args.f_max;
    inputs["f_steps"] = args.f_steps;
    inputs["b"] = args.b;
    inputs["c"] = args.c;
    inputs["format"] = args.format;
    json results;
    json arr = json::array();
    for (const auto& cell : cells) {
        json e;
        e["a"] = cell.a;
        e["f"] = cell.f;
        e["ok"] = cell.ok;
        if (cell.ok)
            e["result"] = equilibrium_json(cell.result);
        else
            e["error"] = cell.error;
        arr.push_back(e);
    }
    results["cells"] = arr;
    json rec = record("eos-sweep", inputs, results, watch.ms());
    return emit_record(rec, args.format, args.out_path);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quintica: quintic and trinomial roots by convergent series, "
                 "with an equation-of-state front end"};
    app.require_subcommand(1);

    PrincipalArgs pa;
    auto* sp = app.add_subcommand("solve-principal",
                                  "Solve Bx^5 + Ax^2 + x + 1 = 0 by double series");
    sp->add_option("--A", pa.A_text, "coefficient A, syntax re or re,im")->required();
    sp->add_option("--B", pa.B_text, "coefficient B, syntax re or re,im")->required();
    sp->add_option("--rel-tol", pa.rel_tol, "relative stopping tolerance");
    sp->add_option("--max-shells", pa.max_shells, "anti-diagonal shell budget");
    sp->add_option("--format", pa.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}));

    DepressedArgs da;
    auto* sd = app.add_subcommand("solve-depressed",
                                  "Solve x^5 + a3 x^3 + a1 x + a0 = 0 via the "
                                  "Tschirnhaus pipeline");
    sd->add_option("--a3", da.a3_text, "cubic coefficient, syntax re or re,im")->required();
    sd->add_option("--a1", da.a1_text, "linear coefficient")->required();
    sd->add_option("--a0", da.a0_text, "constant coefficient")->required();
    sd->add_option("--rel-tol", da.rel_tol, "relative stopping tolerance");
    sd->add_option("--max-shells", da.max_shells, "anti-diagonal shell budget");
    sd->add_option("--format", da.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}));

    TrinomialArgs ta;
    auto* st = app.add_subcommand("solve-trinomial",
                                  "Solve 1 + x^m + a x^n = 0 by one-variable series");
    st->add_option("--m", ta.m, "lower exponent m")->required();
    st->add_option("--n", ta.n, "upper exponent n")->required();
    st->add_option("--a", ta.a_text, "coefficient a, syntax re or re,im")->required();
    st->add_option("--branch", ta.branch, "root branch index in [0, m)");
    st->add_flag("--verbatim-eq15", ta.verbatim,
                 "use the printed coefficient formula for discrepancy documentation");
    st->add_option("--rel-tol", ta.rel_tol, "relative stopping tolerance");
    st->add_option("--max-terms", ta.max_terms, "term budget");
    st->add_option("--format", ta.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}));

    auto* eos = app.add_subcommand("eos", "Sextic Landau equation of state");
    eos->require_subcommand(1);

    EosSolveArgs ea;
    auto* es = eos->add_subcommand("solve", "Equilibrium order parameter for one (a, f)");
    auto* oa = es->add_option("--a", ea.a, "quadratic coefficient");
    es->add_option("--b", ea.b, "quartic coefficient");
    es->add_option("--c", ea.c, "sextic coefficient (> 0)");
    es->add_option("--f", ea.f, "external field");
    auto* oT = es->add_option("--T", ea.T, "temperature (with --Tc and --a0-slope)");
    auto* oTc = es->add_option("--Tc", ea.Tc, "critical temperature");
    auto* oS = es->add_option("--a0-slope", ea.a0_slope, "slope of a(T) = a0-slope * (T - Tc)");
    oT->excludes(oa)->needs(oTc)->needs(oS);
    oa->excludes(oT);
    es->add_option("--format", ea.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}));

    EosSweepArgs wa;
    auto* ew = eos->add_subcommand("sweep", "Equilibrium table over an (a, f) grid");
    ew->add_option("--a-min", wa.a_min, "grid start in a")->required();
    ew->add_option("--a-max", wa.a_max, "grid end in a")->required();
    ew->add_option("--a-steps", wa.a_steps, "grid points in a")->required();
    ew->add_option("--f-min", wa.f_min, "grid start in f")->required();
    ew->add_option("--f-max", wa.f_max, "grid end in f")->required();
    ew->add_option("--f-steps", wa.f_steps, "grid points in f")->required();
    ew->add_option("--b", wa.b, "quartic coefficient");
    ew->add_option("--c", wa.c, "sextic coefficient (> 0)");
    ew->add_option("--out", wa.out_path, "write the table to a file instead of stdout");
    ew->add_option("--format", wa.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (sp->parsed()) return run_solve_principal(sp, pa);
        if (sd->parsed()) return run_solve_depressed(sd, da);
        if (st->parsed()) return run_solve_trinomial(ta);
        if (es->parsed()) return run_eos_solve(es, ea);
        if (ew->parsed()) return run_eos_sweep(wa);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
