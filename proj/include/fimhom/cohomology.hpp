#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fimhom/homology.hpp"
#include "fimhom/module.hpp"

namespace fimhom {

// ----------------------------------------------------------------------------
// B-torsion. An element is torsion when some transition map kills it; by the
// symmetric-group action this is equivalent to lying in the kernel of the
// standard composite into the top corner of the window, which is what we
// compute. Soundness is exact (the certifying composite is a genuine
// transition map); completeness holds inside the reliable window, which
// excludes a configurable top margin.
// ----------------------------------------------------------------------------

struct TorsionSplit {
    TruncatedModule torsion;       // V_T
    TruncatedModule torsion_free;  // V_F = V / V_T
    ModuleMap inclusion;           // V_T -> V
    ModuleMap projection;          // V -> V_F
    Window reliable;
    int torsion_degree_bound = 0;  // least t with V_T zero at degrees >= (t,...,t)
};

inline TorsionSplit torsion_split(const TruncatedModule& V, int margin = 1)
{
    const DegreeVector D = V.window.hi;
    for (int j = 0; j < V.m; ++j)
        if (D[j] < 1)
            throw window_exhausted("torsion_split: degenerate window (need D >= 1)", D);
    if (margin < 0 || !(D - DegreeVector::constant(V.m, margin)).is_nonnegative())
        throw window_exhausted("torsion_split: margin exceeds the window", D);

    // composite of standard inclusions n -> D, shared along a fixed path
    std::map<DegreeVector, Matrix> to_corner;
    auto points = V.window.points();
    for (auto it = points.rbegin(); it != points.rend(); ++it) {
        const DegreeVector& n = *it;
        if (n == D) {
            to_corner[n] = Matrix::identity(V.dims.at(n), V.field);
            continue;
        }
        int j = 0;
        while (n[j] == D[j])
            ++j;
        DegreeVector up = n + DegreeVector::unit(V.m, j);
        to_corner[n] = to_corner.at(up) * V.inclusion(n, j);
    }

    std::map<DegreeVector, Matrix> kernels;
    for (const auto& n : points)
        kernels[n] = kernel_basis(to_corner.at(n));

    auto sub = submodule_from_bases(V, kernels);
    auto quot = quotient_by_subspaces(V, kernels);

    TorsionSplit out;
    out.torsion = std::move(sub.module);
    out.inclusion = std::move(sub.inclusion);
    out.torsion_free = std::move(quot.module);
    out.projection = std::move(quot.projection);
    out.reliable = Window::box(D - DegreeVector::constant(V.m, margin));
    int td = 0;
    for (const auto& n : points)
        if (out.torsion.dims.at(n) > 0) {
            int low = n[0];
            for (int j = 1; j < V.m; ++j)
                low = std::min(low, n[j]);
            td = std::max(td, low + 1);
        }
    out.torsion_degree_bound = td;
    return out;
}

// ----------------------------------------------------------------------------
// Semi-induced detection: homology acyclicity checked through the Koszul
// complex for 1 <= i <= i_max over the whole window. A POSITIVE verdict means
// "no obstruction detected within this window at this depth".
// ----------------------------------------------------------------------------

struct SemiInducedCertificate {
    bool positive = false;
    int i_max = 2;
    Window window;
    std::optional<std::pair<int, DegreeVector>> witness;  // (i, degree) with H_i != 0
};

inline SemiInducedCertificate is_semi_induced(const TruncatedModule& V, int i_max = 2)
{
    SemiInducedCertificate cert;
    cert.i_max = i_max;
    cert.window = V.window;
    KoszulAnalyzer an(V);
    for (int i = 1; i <= i_max; ++i)
        for (const auto& n : V.window.points())
            if (an.homology_dim(i, n) > 0) {
                cert.positive = false;
                cert.witness = {i, n};
                return cert;
            }
    cert.positive = true;
    return cert;
}

// ----------------------------------------------------------------------------
// The shift resolution 0 -> V -> F^(0) -> F^(1) -> ... : split off torsion,
// embed the torsion-free part into a semi-induced shift, iterate on the
// cokernels. Its cohomology is B-torsion and computes local cohomology:
// H^i_B(V) = H^0_B(Q^(i-1)). The construction is not functorial; determinism
// comes from the fixed shift search order and fixed bases.
// ----------------------------------------------------------------------------

enum class ShiftPolicy { lex_minimal, uniform };

inline std::string shift_policy_name(ShiftPolicy p)
{
    return p == ShiftPolicy::lex_minimal ? "lex-minimal" : "uniform";
}

struct ShiftResolutionStep {
    DegreeVector shift_amount;
    SemiInducedCertificate certificate;
    TruncatedModule F;      // Sigma_a of the previous torsion-free part
    TruncatedModule Q;      // coker of the unit into F
    TorsionSplit q_split;   // H^0_B(Q) realizes the next local cohomology
};

struct ShiftResolution {
    TorsionSplit v_split;
    std::vector<ShiftResolutionStep> steps;
    std::vector<ModuleMap> complex_maps;  // [0]: V -> F0; [i]: F(i-1) -> F(i), restricted
    bool complete = false;
    int i_max = 2;
    int margin = 1;
    ShiftPolicy policy = ShiftPolicy::lex_minimal;
};

namespace detail {
inline std::optional<std::pair<DegreeVector, SemiInducedCertificate>> find_semi_induced_shift(
    const TruncatedModule& cur, ShiftPolicy policy, int i_max, DegreeVector& largest_tried)
{
    if (policy == ShiftPolicy::lex_minimal) {
        for (const auto& a : Window::box(cur.window.hi).points()) {
            largest_tried = a;
            SemiInducedCertificate cert = is_semi_induced(shift(cur, a), i_max);
            if (cert.positive)
                return {{a, cert}};
        }
    } else {
        int top = cur.window.hi[0];
        for (int j = 1; j < cur.m; ++j)
            top = std::min(top, cur.window.hi[j]);
        for (int N = 0; N <= top; ++N) {
            DegreeVector a = DegreeVector::constant(cur.m, N);
            largest_tried = a;
            SemiInducedCertificate cert = is_semi_induced(shift(cur, a), i_max);
            if (cert.positive)
                return {{a, cert}};
        }
    }
    return std::nullopt;
}
}  // namespace detail

inline ShiftResolution shift_resolution(const TruncatedModule& V,
                                        ShiftPolicy policy = ShiftPolicy::lex_minimal,
                                        int max_length = 16, int i_max = 2, int margin = 1)
{
    ShiftResolution res;
    res.policy = policy;
    res.i_max = i_max;
    res.margin = margin;
    res.v_split = torsion_split(V, margin);

    TruncatedModule cur = res.v_split.torsion_free;
    // pending: the map from the previous complex stage onto cur's ambient,
    // i.e. V ->> V_F at step 0, F(i-1) ->> Q(i-1) ->> (Q)_F afterwards
    ModuleMap onto_cur = res.v_split.projection;
    for (int step = 0; step < max_length; ++step) {
        if (cur.is_zero()) {
            res.complete = true;
            break;
        }
        DegreeVector largest = DegreeVector::zero(V.m);
        auto found = detail::find_semi_induced_shift(cur, policy, i_max, largest);
        if (!found)
            throw window_exhausted(
                "shift_resolution: no semi-induced shift found within the window", largest);
        const auto& [a, cert] = *found;
        ModuleMap unit = shift_unit(cur, a);
        const TruncatedModule& F = unit.target();
        res.complex_maps.push_back(
            compose_maps(unit, restrict_map(onto_cur, unit.source().window.hi)));
        auto coker = map_calculus(unit, MapCalculusKind::cokernel);
        ShiftResolutionStep s;
        s.shift_amount = a;
        s.certificate = cert;
        s.F = F;
        s.Q = coker.module;
        s.q_split = torsion_split(coker.module, margin);
        ModuleMap q_proj = coker.structural;  // F -> Q
        onto_cur = compose_maps(s.q_split.projection, q_proj);
        cur = s.q_split.torsion_free;
        res.steps.push_back(std::move(s));
    }
    if (!res.steps.empty() && !res.complete && cur.is_zero())
        res.complete = true;

    // d^2 = 0 along the constructed complex
    for (size_t i = 0; i + 1 < res.complex_maps.size(); ++i) {
        const ModuleMap& d0 = res.complex_maps[i];
        const ModuleMap& d1 = res.complex_maps[i + 1];
        ModuleMap c = compose_maps(d1, restrict_map(d0, d1.source().window.hi));
        for (const auto& [n, M] : c.mats)
            if (!M.is_zero())
                throw std::logic_error("shift resolution does not square to zero at " + n.str());
    }
    return res;
}

// ----------------------------------------------------------------------------
// Local cohomology through the resolution: H^0_B is the torsion part of V,
// H^i_B for i >= 1 the torsion part of the (i-1)-st cokernel. Beyond the
// resolution length everything vanishes (for complete resolutions).
// ----------------------------------------------------------------------------

struct LocalCohomology {
    TruncatedModule module;
    Window reliable;
};

inline LocalCohomology local_cohomology(const ShiftResolution& res, int i)
{
    if (i < 0)
        throw std::invalid_argument("local_cohomology: negative index");
    if (i == 0)
        return {res.v_split.torsion, res.v_split.reliable};
    if (i <= static_cast<int>(res.steps.size())) {
        const auto& s = res.steps[static_cast<size_t>(i) - 1];
        return {s.q_split.torsion, s.q_split.reliable};
    }
    if (!res.complete)
        throw window_exhausted(
            "local_cohomology: resolution exhausted before index " + std::to_string(i),
            res.steps.empty() ? DegreeVector{} : res.steps.back().shift_amount);
    // beyond the resolution length: zero, certified on the full input window
    const TruncatedModule& V = res.v_split.inclusion.target();
    TruncatedModule Z = zero_module(V.m, V.field, V.window);
    return {Z, Z.window};
}

inline LocalCohomology local_cohomology(const TruncatedModule& V, int i,
                                        ShiftPolicy policy = ShiftPolicy::lex_minimal,
                                        int i_max = 2, int margin = 1)
{
    return local_cohomology(shift_resolution(V, policy, 16, i_max, margin), i);
}

}  // namespace fimhom
