#pragma once

#include <json.hpp>

#include "fimhom/cohomology.hpp"
#include "fimhom/homology.hpp"
#include "fimhom/module.hpp"
#include "fimhom/regularity.hpp"
#include "fimhom/upset.hpp"

namespace fimhom {

using json = nlohmann::ordered_json;

inline json degree_to_json(const DegreeVector& d) { return json(d.coords); }

inline DegreeVector degree_from_json(const json& j)
{
    if (!j.is_array())
        throw std::invalid_argument("degree vector must be a JSON array of integers");
    return DegreeVector(j.get<std::vector<int>>());
}

inline DegreeVector degree_from_key(const std::string& key)
{
    std::vector<int> v;
    std::string cur;
    for (char c : key + ",") {
        if (c == ',') {
            v.push_back(std::stoi(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    return DegreeVector(v);
}

// Injections serialize as arrays of image lists (one list per factor),
// together with their endpoints.
inline json injection_to_json(const InjectionTuple& f)
{
    json j;
    j["src"] = degree_to_json(f.src);
    j["dst"] = degree_to_json(f.dst);
    j["images"] = json(f.images);
    return j;
}

inline InjectionTuple injection_from_json(const json& j)
{
    InjectionTuple f;
    f.src = degree_from_json(j.at("src"));
    f.dst = degree_from_json(j.at("dst"));
    f.images = j.at("images").get<std::vector<std::vector<int>>>();
    if (!f.is_valid())
        throw std::invalid_argument("not a valid injection tuple");
    return f;
}

inline json matrix_to_json(const Matrix& M)
{
    json rows = json::array();
    for (int i = 0; i < M.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < M.cols(); ++j)
            row.push_back(M(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Matrix matrix_from_json(const json& j, int rows, int cols, FieldSpec F)
{
    Matrix M(rows, cols, F);
    if (static_cast<int>(j.size()) != rows)
        throw std::invalid_argument("matrix has the wrong number of rows");
    for (int i = 0; i < rows; ++i) {
        const json& row = j[static_cast<size_t>(i)];
        if (static_cast<int>(row.size()) != cols)
            throw std::invalid_argument("matrix has a ragged row");
        for (int c = 0; c < cols; ++c)
            M(i, c) = F.reduce(row[static_cast<size_t>(c)].get<long long>());
    }
    return M;
}

inline json dims_to_json(const std::map<DegreeVector, int>& dims)
{
    json out = json::object();
    for (const auto& [n, d] : dims)
        out[n.str()] = d;
    return out;
}

// The single-file module format:
// {"format": 1, "m", "p", "window": [D...], "dims": {"deg": int},
//  "transpositions": {"deg": [[mat per i] per factor]},
//  "inclusions": {"deg": [mat-or-null per factor]}}
inline json module_to_json(const TruncatedModule& V)
{
    json j;
    j["format"] = 1;
    j["m"] = V.m;
    j["p"] = V.field.p;
    j["window"] = degree_to_json(V.window.hi);
    j["dims"] = dims_to_json(V.dims);
    json tr = json::object();
    json in = json::object();
    for (const auto& n : V.window.points()) {
        json per_factor = json::array();
        for (int f = 0; f < V.m; ++f) {
            json gens = json::array();
            for (const auto& g : V.transp.at(n)[static_cast<size_t>(f)])
                gens.push_back(matrix_to_json(g));
            per_factor.push_back(std::move(gens));
        }
        tr[n.str()] = std::move(per_factor);
        json incs = json::array();
        for (int f = 0; f < V.m; ++f) {
            if (V.has_inclusion(n, f))
                incs.push_back(matrix_to_json(V.inclusion(n, f)));
            else
                incs.push_back(nullptr);
        }
        in[n.str()] = std::move(incs);
    }
    j["transpositions"] = std::move(tr);
    j["inclusions"] = std::move(in);
    return j;
}

inline TruncatedModule module_from_json(const json& j)
{
    if (!j.is_object() || !j.contains("m") || !j.contains("p") || !j.contains("window"))
        throw std::invalid_argument("module file needs the fields m, p and window");
    if (j.contains("format") && j["format"].get<int>() != 1)
        throw std::invalid_argument("unsupported module format version");
    TruncatedModule V;
    V.m = j["m"].get<int>();
    V.field = FieldSpec(j["p"].get<uint32_t>());
    DegreeVector D = degree_from_json(j["window"]);
    if (D.size() != V.m)
        throw std::invalid_argument("window length does not match m");
    V.window = Window::box(D);
    for (const auto& n : V.window.points())
        V.dims[n] = 0;
    if (j.contains("dims"))
        for (const auto& [key, val] : j["dims"].items()) {
            DegreeVector n = degree_from_key(key);
            if (!V.window.contains(n))
                throw std::invalid_argument("dims entry outside the window: " + key);
            V.dims[n] = val.get<int>();
            if (V.dims[n] < 0)
                throw std::invalid_argument("negative dimension at " + key);
        }
    init_structure(V);
    if (j.contains("transpositions"))
        for (const auto& [key, val] : j["transpositions"].items()) {
            DegreeVector n = degree_from_key(key);
            if (!V.window.contains(n))
                throw std::invalid_argument("transpositions entry outside the window: " + key);
            int d = V.dims.at(n);
            for (int f = 0; f < V.m && f < static_cast<int>(val.size()); ++f) {
                const json& gens = val[static_cast<size_t>(f)];
                auto& slot = V.transp[n][static_cast<size_t>(f)];
                if (gens.size() != slot.size())
                    throw std::invalid_argument("wrong generator count at " + key);
                for (size_t i = 0; i < slot.size(); ++i)
                    slot[i] = matrix_from_json(gens[i], d, d, V.field);
            }
        }
    if (j.contains("inclusions"))
        for (const auto& [key, val] : j["inclusions"].items()) {
            DegreeVector n = degree_from_key(key);
            if (!V.window.contains(n))
                throw std::invalid_argument("inclusions entry outside the window: " + key);
            for (int f = 0; f < V.m && f < static_cast<int>(val.size()); ++f) {
                DegreeVector up = n + DegreeVector::unit(V.m, f);
                if (val[static_cast<size_t>(f)].is_null()) {
                    if (V.window.contains(up))
                        throw std::invalid_argument("missing inclusion matrix at " + key);
                    continue;
                }
                if (!V.window.contains(up))
                    throw std::invalid_argument("inclusion stored beyond the window at " + key);
                V.incl[n][static_cast<size_t>(f)] = matrix_from_json(
                    val[static_cast<size_t>(f)], V.dims.at(up), V.dims.at(n), V.field);
            }
        }
    return V;
}

inline json window_to_json(const Window& w)
{
    json j;
    j["lo"] = degree_to_json(w.lo);
    j["hi"] = degree_to_json(w.hi);
    return j;
}

inline json upset_to_json(const UpSet& s)
{
    json j;
    j["window"] = window_to_json(s.window);
    json mins = json::array();
    for (const auto& a : s.antichain)
        mins.push_back(degree_to_json(a));
    j["antichain"] = std::move(mins);
    return j;
}

inline json violations_to_json(const std::vector<Violation>& report)
{
    json arr = json::array();
    for (const auto& v : report) {
        json item;
        item["kind"] = v.kind;
        item["degree"] = degree_to_json(v.degree);
        item["detail"] = v.detail;
        arr.push_back(std::move(item));
    }
    return arr;
}

inline json resolution_trace_to_json(const ShiftResolution& res)
{
    json j;
    j["policy"] = shift_policy_name(res.policy);
    j["i_max"] = res.i_max;
    j["margin"] = res.margin;
    j["complete"] = res.complete;
    j["torsion_dims"] = dims_to_json(res.v_split.torsion.dims);
    json steps = json::array();
    for (const auto& s : res.steps) {
        json step;
        step["shift"] = degree_to_json(s.shift_amount);
        step["window"] = degree_to_json(s.F.window.hi);
        step["F_dims"] = dims_to_json(s.F.dims);
        step["Q_dims"] = dims_to_json(s.Q.dims);
        step["Q_torsion_dims"] = dims_to_json(s.q_split.torsion.dims);
        steps.push_back(std::move(step));
    }
    j["steps"] = std::move(steps);
    return j;
}

inline json theorem_a_report_to_json(const TheoremAReport& rep)
{
    json j;
    j["r"] = degree_to_json(rep.r);
    j["c"] = degree_to_json(rep.c);
    j["r_verified_in_cmreg"] = rep.r_verified_in_cmreg;
    j["regularity_search"] = window_to_json(rep.regularity_search);
    json steps = json::array();
    for (const auto& s : rep.steps) {
        json step;
        step["degree"] = degree_to_json(s.degree);
        step["generator_dim"] = s.generator_dim;
        step["h0_concentrated"] = s.h0_concentrated;
        step["F_dims"] = dims_to_json(s.F_dims);
        steps.push_back(std::move(step));
    }
    j["steps"] = std::move(steps);
    json checks = json::array();
    for (const auto& c : rep.checks) {
        json chk;
        chk["position"] = c.position;
        chk["torsion_certified"] = c.torsion_certified;
        chk["reliable_window"] = degree_to_json(c.reliable.hi);
        chk["homology_dims"] = dims_to_json(c.homology_dims);
        checks.push_back(std::move(chk));
    }
    j["homology_checks"] = std::move(checks);
    j["all_pass"] = rep.all_pass;
    return j;
}

}  // namespace fimhom
