#pragma once

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fimhom/json_io.hpp"
#include "fimhom/presets.hpp"

namespace fimhom {
namespace cli {

struct CommonOptions {
    std::string preset;
    std::string module_path;
    uint32_t p = 32003;
    std::string window_csv;
    std::string lower_csv;
    int imax = 2;
    int margin = 1;
    bool pretty = false;
};

namespace detail {

inline DegreeVector parse_csv(const std::string& s, const std::string& what)
{
    try {
        return degree_from_key(s);
    } catch (const std::exception&) {
        throw std::invalid_argument("could not parse " + what + " '" + s +
                                    "' (expected comma-separated integers)");
    }
}

// Presets imply m when their name carries a degree vector; paper examples
// force m = 2; "constant" takes m from --window.
inline std::optional<int> preset_implied_m(const std::string& name)
{
    if (name == "paper-example-V" || name == "paper-example-K")
        return 2;
    auto open = name.find('(');
    if (open != std::string::npos) {
        std::string body = name.substr(open + 1, name.size() - open - 2);
        auto at = body.find('@');
        if (at != std::string::npos)
            body = body.substr(at + 1);
        return parse_csv(body, "preset degree").size();
    }
    return std::nullopt;
}

struct LoadedModule {
    TruncatedModule module;
    std::string source;
};

inline LoadedModule load_module(const CommonOptions& opt, std::istream& in)
{
    if (opt.preset.empty() == opt.module_path.empty())
        throw std::invalid_argument("give exactly one of --preset or --module");
    if (!opt.module_path.empty()) {
        json j;
        if (opt.module_path == "-") {
            j = json::parse(in);
        } else {
            std::ifstream f(opt.module_path);
            if (!f)
                throw std::invalid_argument("cannot open module file: " + opt.module_path);
            j = json::parse(f);
        }
        LoadedModule lm{module_from_json(j), "file:" + opt.module_path};
        if (!opt.window_csv.empty() &&
            parse_csv(opt.window_csv, "--window") != lm.module.window.hi)
            throw std::invalid_argument("--window conflicts with the module file");
        if (lm.module.field.p != opt.p && opt.p != 32003)
            throw std::invalid_argument("--p conflicts with the module file");
        return lm;
    }
    FieldSpec F(opt.p);
    std::optional<int> implied = preset_implied_m(opt.preset);
    DegreeVector hi;
    if (!opt.window_csv.empty()) {
        hi = parse_csv(opt.window_csv, "--window");
        if (implied && hi.size() != *implied)
            throw std::invalid_argument("--window length does not match the preset");
    } else if (implied) {
        hi = DegreeVector::constant(*implied, 5);
    } else {
        throw std::invalid_argument("preset '" + opt.preset + "' needs --window to fix m");
    }
    return {presets::by_name(opt.preset, F, Window::box(hi)), "preset:" + opt.preset};
}

inline json base_report(const std::string& verb, const CommonOptions& opt,
                        const LoadedModule& lm)
{
    json j;
    j["format"] = 1;
    j["tool"] = "fimhom";
    j["verb"] = verb;
    j["p"] = lm.module.field.p;
    j["m"] = lm.module.m;
    j["window"] = degree_to_json(lm.module.window.hi);
    j["source"] = lm.source;
    json policy;
    policy["pivot_rule"] = "first-nonzero-column";
    policy["bases"] = "rref-pivot";
    policy["shift_search"] = "lex-minimal";
    policy["imax"] = opt.imax;
    policy["margin"] = opt.margin;
    j["policy"] = std::move(policy);
    return j;
}

inline void emit(std::ostream& out, const json& j, bool pretty)
{
    out << (pretty ? j.dump(2) : j.dump()) << "\n";
}

inline Window search_window(const TruncatedModule& V, const CommonOptions& opt,
                            const DegreeVector& hi)
{
    DegreeVector lo = opt.lower_csv.empty()
                          ? DegreeVector::zero(V.m) - V.window.hi
                          : parse_csv(opt.lower_csv, "--lower");
    return Window(lo, hi);
}

}  // namespace detail

// Runs one command; report JSON goes to `out`. Exit codes: 0 success,
// 1 parse/validation failure, 2 window exhaustion.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err,
               std::istream& in = std::cin)
{
    CLI::App app{"exact homological calculator for truncated FI^m-modules"};
    app.require_subcommand(1);

    CommonOptions opt;
    int index = 0;
    int length = 2;
    std::string r_csv, c_csv, policy_name = "lex";
    bool trace = false;

    auto add_common = [&](CLI::App* cmd, bool needs_lower = false) {
        cmd->add_option("--preset", opt.preset, "module preset name");
        cmd->add_option("--module", opt.module_path, "module JSON file ('-' for stdin)");
        cmd->add_option("--p", opt.p, "field characteristic (prime)")->check(CLI::PositiveNumber);
        cmd->add_option("--window", opt.window_csv, "window upper corner, comma separated");
        cmd->add_option("--imax", opt.imax, "semi-induced certificate depth");
        cmd->add_option("--margin", opt.margin, "torsion reliability margin");
        cmd->add_flag("--pretty", opt.pretty, "indent the JSON report");
        if (needs_lower)
            cmd->add_option("--lower", opt.lower_csv, "search window lower corner");
        return cmd;
    };

    auto* c_validate = add_common(app.add_subcommand("validate", "check the module relations"));
    auto* c_dims = add_common(app.add_subcommand("dims", "dimension table"));
    auto* c_h0 = add_common(app.add_subcommand("h0", "degreewise generators"));
    auto* c_hom = add_common(app.add_subcommand("homology", "Koszul homology table"));
    c_hom->add_option("--i", index, "homological index")->required();
    auto* c_hd = add_common(app.add_subcommand("hd", "homological degree set"), true);
    c_hd->add_option("--i", index, "homological index")->required();
    auto* c_tor = add_common(app.add_subcommand("torsion", "torsion / torsion-free split"));
    auto* c_lc = add_common(app.add_subcommand("lc", "local cohomology"));
    c_lc->add_option("--i", index, "cohomological index")->required();
    c_lc->add_flag("--trace", trace, "include the shift resolution audit");
    c_lc->add_option("--policy", policy_name, "shift search policy: lex | uniform")
        ->check(CLI::IsMember({"lex", "uniform"}));
    auto* c_cm = add_common(app.add_subcommand("cmreg", "Castelnuovo-Mumford regularity sets"),
                            true);
    auto* c_ta = add_common(app.add_subcommand("theorem-a", "regularity-to-syzygy complex"));
    c_ta->add_option("--r", r_csv, "regularity vector")->required();
    c_ta->add_option("--c", c_csv, "step vector (positive coordinates)")->required();
    c_ta->add_option("--length", length, "number of construction steps");
    auto* c_res = add_common(app.add_subcommand("resolve", "semi-induced resolution"));
    c_res->add_option("--length", length, "number of resolution steps");

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : 1;
    }

    try {
        detail::LoadedModule lm = detail::load_module(opt, in);
        const TruncatedModule& V = lm.module;
        ShiftPolicy policy =
            policy_name == "uniform" ? ShiftPolicy::uniform : ShiftPolicy::lex_minimal;

        std::vector<Violation> report = validate(V);
        if (app.got_subcommand(c_validate)) {
            json j = detail::base_report("validate", opt, lm);
            j["valid"] = report.empty();
            j["violations"] = violations_to_json(report);
            detail::emit(out, j, opt.pretty);
            return report.empty() ? 0 : 1;
        }
        if (!report.empty()) {
            json j = detail::base_report("invalid-module", opt, lm);
            j["valid"] = false;
            j["violations"] = violations_to_json(report);
            detail::emit(out, j, opt.pretty);
            return 1;
        }

        if (app.got_subcommand(c_dims)) {
            json j = detail::base_report("dims", opt, lm);
            j["dims"] = dims_to_json(V.dims);
            detail::emit(out, j, opt.pretty);
        } else if (app.got_subcommand(c_h0)) {
            H0Data h = h0(V);
            json j = detail::base_report("h0", opt, lm);
            json table = json::object();
            json gens = json::array();
            for (const auto& n : V.window.points()) {
                table[n.str()] = h.table.at(0, n);
                if (h.table.at(0, n) > 0)
                    gens.push_back(degree_to_json(n));
            }
            j["h0"] = std::move(table);
            j["generator_degrees"] = std::move(gens);
            detail::emit(out, j, opt.pretty);
        } else if (app.got_subcommand(c_hom)) {
            KoszulAnalyzer an(V);
            json j = detail::base_report("homology", opt, lm);
            j["i"] = index;
            json table = json::object();
            for (const auto& n : V.window.points())
                table[n.str()] = an.homology_dim(index, n);
            j["table"] = std::move(table);
            detail::emit(out, j, opt.pretty);
        } else if (app.got_subcommand(c_hd)) {
            Window search = detail::search_window(
                V, opt, V.window.hi - DegreeVector::constant(V.m, 1));
            UpSet s = hd_set(V, index, search);
            json j = detail::base_report("hd", opt, lm);
            j["i"] = index;
            j["upset"] = upset_to_json(s);
            detail::emit(out, j, opt.pretty);
        } else if (app.got_subcommand(c_tor)) {
            TorsionSplit ts = torsion_split(V, opt.margin);
            json j = detail::base_report("torsion", opt, lm);
            j["torsion_dims"] = dims_to_json(ts.torsion.dims);
            j["torsion_free_dims"] = dims_to_json(ts.torsion_free.dims);
            j["reliable_window"] = degree_to_json(ts.reliable.hi);
            j["torsion_degree_bound"] = ts.torsion_degree_bound;
            detail::emit(out, j, opt.pretty);
        } else if (app.got_subcommand(c_lc)) {
            ShiftResolution res = shift_resolution(V, policy, 16, opt.imax, opt.margin);
            LocalCohomology h = local_cohomology(res, index);
            json j = detail::base_report("lc", opt, lm);
            j["policy"]["shift_search"] = shift_policy_name(policy);
            j["i"] = index;
            j["dims"] = dims_to_json(h.module.dims);
            j["reliable_window"] = degree_to_json(h.reliable.hi);
            if (trace)
                j["trace"] = resolution_trace_to_json(res);
            detail::emit(out, j, opt.pretty);
        } else if (app.got_subcommand(c_cm)) {
            RegularityAnalysis an = analyze_local_cohomology(V, policy, opt.imax, opt.margin);
            KoszulAnalyzer kz(V);
            std::optional<DegreeVector> lower;
            if (!opt.lower_csv.empty())
                lower = detail::parse_csv(opt.lower_csv, "--lower");
            Window search = default_regularity_search(V, an, lower);
            UpSet plus = cmreg_plus_with(an, search);
            UpSet hd0 = hd_set(V, 0, search);
            UpSet cm = upset_intersect(plus, hd0);
            json j = detail::base_report("cmreg", opt, lm);
            j["search_window"] = window_to_json(search);
            j["cmreg_plus"] = upset_to_json(plus);
            j["hd0"] = upset_to_json(hd0);
            j["cmreg"] = upset_to_json(cm);
            UpSet nn = upset_clip(cm, Window::box(search.hi));
            json mins = json::array();
            for (const auto& a : nn.antichain)
                mins.push_back(degree_to_json(a));
            j["nonnegative_antichain"] = std::move(mins);
            detail::emit(out, j, opt.pretty);
        } else if (app.got_subcommand(c_ta)) {
            DegreeVector r = detail::parse_csv(r_csv, "--r");
            DegreeVector c = detail::parse_csv(c_csv, "--c");
            TheoremAReport rep = theorem_a_complex(V, r, c, length);
            json j = detail::base_report("theorem-a", opt, lm);
            j["report"] = theorem_a_report_to_json(rep);
            detail::emit(out, j, opt.pretty);
        } else if (app.got_subcommand(c_res)) {
            SemiInducedResolution res = semi_induced_resolution(V, length);
            json j = detail::base_report("resolve", opt, lm);
            j["complete"] = res.complete;
            json steps = json::array();
            for (size_t i = 0; i < res.F.size(); ++i) {
                json step;
                step["F_dims"] = dims_to_json(res.F[i].dims);
                step["kernel_dims"] = dims_to_json(res.kernels[i].dims);
                steps.push_back(std::move(step));
            }
            j["steps"] = std::move(steps);
            detail::emit(out, j, opt.pretty);
        }
        return 0;
    } catch (const window_exhausted& e) {
        json j;
        j["format"] = 1;
        j["error"] = "window-exhausted";
        j["detail"] = e.what();
        j["largest_attempt"] = degree_to_json(e.largest_attempt);
        detail::emit(out, j, opt.pretty);
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::parse_error& e) {
        err << "error: malformed JSON: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace cli
}  // namespace fimhom
