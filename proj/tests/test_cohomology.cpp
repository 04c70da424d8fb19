#include <catch2/catch_amalgamated.hpp>

#include "fimhom/cohomology.hpp"
#include "fimhom/presets.hpp"

using namespace fimhom;

namespace {
const FieldSpec F(32003);

bool zero_on(const TruncatedModule& V, const Window& box)
{
    for (const auto& n : box.points())
        if (V.dims.at(n) != 0)
            return false;
    return true;
}

bool dims_match_on(const TruncatedModule& A, const TruncatedModule& B, const Window& box)
{
    for (const auto& n : box.points())
        if (A.dims.at(n) != B.dims.at(n))
            return false;
    return true;
}
}  // namespace

TEST_CASE("torsion split")
{
    Window w = Window::box(DegreeVector{5, 5});
    SECTION("paper-example-V is entirely torsion")
    {
        TruncatedModule V = presets::paper_example_v(F, w);
        TorsionSplit ts = torsion_split(V);
        REQUIRE(ts.torsion.dims == V.dims);
        REQUIRE(ts.torsion_free.is_zero());
        REQUIRE(ts.reliable == Window::box(DegreeVector{4, 4}));
        REQUIRE(ts.torsion_degree_bound == 1);  // support has min-coordinate 0
        REQUIRE(validate(ts.torsion).empty());
        REQUIRE(validate(ts.torsion_free).empty());
    }
    SECTION("induced modules are torsion-free")
    {
        TruncatedModule M = induced(SymmetricGroupRep::regular(DegreeVector{1, 1}, F), w);
        TorsionSplit ts = torsion_split(M);
        REQUIRE(ts.torsion.is_zero());
        REQUIRE(ts.torsion_free.dims == M.dims);
        REQUIRE(ts.torsion_degree_bound == 0);
    }
    SECTION("paper-example-K is torsion-free")
    {
        TruncatedModule K = presets::paper_example_k(F, w);
        TorsionSplit ts = torsion_split(K);
        REQUIRE(ts.torsion.is_zero());
    }
    SECTION("point modules are torsion, and the split maps compose to zero")
    {
        TruncatedModule P = presets::point(DegreeVector{2, 1}, F, w);
        TorsionSplit ts = torsion_split(P);
        REQUIRE(ts.torsion.dims == P.dims);
        ModuleMap z = compose_maps(ts.projection, ts.inclusion);
        for (const auto& [n, M] : z.mats)
            REQUIRE(M.is_zero());
        for (const auto& n : w.points())
            REQUIRE(ts.torsion.dims.at(n) + ts.torsion_free.dims.at(n) == P.dims.at(n));
    }
    SECTION("H0_B of the torsion-free part vanishes on the full window")
    {
        // a module with mixed torsion: direct sum of V and K
        TruncatedModule mixed = direct_sum_modules(
            {presets::paper_example_v(F, w), presets::paper_example_k(F, w)});
        TorsionSplit ts = torsion_split(mixed);
        REQUIRE(dims_match_on(ts.torsion, presets::paper_example_v(F, w), w));
        TorsionSplit again = torsion_split(ts.torsion_free);
        REQUIRE(again.torsion.is_zero());
    }
    SECTION("degenerate windows are rejected")
    {
        TruncatedModule P = presets::point(DegreeVector{0, 0}, F, Window::box(DegreeVector{3, 0}));
        REQUIRE_THROWS_AS(torsion_split(P), window_exhausted);
    }
}

TEST_CASE("torsion certificates are sound: an actual transition map kills them")
{
    Window w = Window::box(DegreeVector{4, 4});
    TruncatedModule mixed = direct_sum_modules(
        {presets::paper_example_v(F, w),
         induced(SymmetricGroupRep::trivial(DegreeVector{0, 1}, F), w)});
    TorsionSplit ts = torsion_split(mixed);
    for (const auto& n : w.points()) {
        // assemble the standard chain n -> D through the generic transition
        // machinery (an independent route from the split's corner composite)
        InjectionTuple chain = InjectionTuple::identity(n);
        chain.dst = w.hi;
        Matrix kill = transition(mixed, chain) * ts.inclusion.at(n);
        REQUIRE(kill.is_zero());
    }
}

TEST_CASE("torsion-freeness agrees with injectivity of the unit into Sigma_(1,...,1)")
{
    Window w = Window::box(DegreeVector{4, 4});
    std::vector<TruncatedModule> mods = {
        presets::paper_example_v(F, w), presets::paper_example_k(F, w),
        presets::constant(2, F, w), presets::point(DegreeVector{1, 1}, F, w),
        induced(SymmetricGroupRep::regular(DegreeVector{1, 1}, F), w)};
    for (const auto& V : mods) {
        TorsionSplit ts = torsion_split(V);
        ModuleMap u = shift_unit(V, DegreeVector{1, 1});
        bool injective = true;
        for (const auto& n : u.source().window.points())
            if (rank(u.at(n)) != u.source().dims.at(n))
                injective = false;
        bool torsion_free_inside = zero_on(ts.torsion, ts.reliable);
        REQUIRE(injective == torsion_free_inside);
    }
}

TEST_CASE("semi-induced certificates")
{
    Window w = Window::box(DegreeVector{4, 4});
    SECTION("induced modules are positive")
    {
        TruncatedModule M = induced(SymmetricGroupRep::regular(DegreeVector{1, 1}, F), w);
        auto cert = is_semi_induced(M);
        REQUIRE(cert.positive);
        REQUIRE(cert.i_max == 2);
    }
    SECTION("paper-example-V is negative with witness (1, (0,1))")
    {
        auto cert = is_semi_induced(presets::paper_example_v(F, w));
        REQUIRE_FALSE(cert.positive);
        REQUIRE(cert.witness->first == 1);
        REQUIRE(cert.witness->second == DegreeVector{0, 1});
    }
    SECTION("paper-example-K is negative (not semi-induced within window)")
    {
        auto cert = is_semi_induced(presets::paper_example_k(F, w));
        REQUIRE_FALSE(cert.positive);
    }
    SECTION("the zero module is positive")
    {
        REQUIRE(is_semi_induced(zero_module(2, F, w)).positive);
    }
}

TEST_CASE("shift resolution on the presets")
{
    Window w = Window::box(DegreeVector{6, 6});
    SECTION("an induced module is its own resolution with zero shift")
    {
        TruncatedModule M = induced(SymmetricGroupRep::trivial(DegreeVector{1, 1}, F), w);
        ShiftResolution res = shift_resolution(M);
        REQUIRE(res.complete);
        REQUIRE(res.steps.size() == 1);
        REQUIRE(res.steps[0].shift_amount == DegreeVector{0, 0});
        REQUIRE(res.steps[0].F.dims == M.dims);
        REQUIRE(res.steps[0].Q.is_zero());
    }
    SECTION("paper-example-V is torsion: the complex stops immediately")
    {
        ShiftResolution res = shift_resolution(presets::paper_example_v(F, w));
        REQUIRE(res.complete);
        REQUIRE(res.steps.empty());
        REQUIRE(res.v_split.torsion_free.is_zero());
    }
    SECTION("paper-example-K: one step via the shift (0,1), cokernel = paper-example-V")
    {
        ShiftResolution res = shift_resolution(presets::paper_example_k(F, w));
        REQUIRE(res.complete);
        REQUIRE(res.steps.size() == 1);
        REQUIRE(res.steps[0].shift_amount == DegreeVector{0, 1});
        // F^(0) is the constant module on the shrunken window
        for (const auto& n : res.steps[0].F.window.points())
            REQUIRE(res.steps[0].F.dims.at(n) == 1);
        // Q^(0) has the dimensions of paper-example-V
        TruncatedModule Vlike = presets::paper_example_v(F, res.steps[0].Q.window);
        REQUIRE(res.steps[0].Q.dims == Vlike.dims);
    }
}

TEST_CASE("local cohomology")
{
    Window w = Window::box(DegreeVector{6, 6});
    SECTION("induced modules are acyclic for all i")
    {
        TruncatedModule M = induced(SymmetricGroupRep::regular(DegreeVector{1, 1}, F), w);
        ShiftResolution res = shift_resolution(M);
        for (int i = 0; i <= 4; ++i)
            REQUIRE(local_cohomology(res, i).module.is_zero());
    }
    SECTION("torsion modules: H^0_B = V and higher vanish")
    {
        for (const auto& V : {presets::paper_example_v(F, w),
                              presets::point(DegreeVector{2, 2}, F, w)}) {
            ShiftResolution res = shift_resolution(V);
            LocalCohomology h0b = local_cohomology(res, 0);
            REQUIRE(dims_match_on(h0b.module, V, h0b.reliable));
            for (int i = 1; i <= 3; ++i)
                REQUIRE(local_cohomology(res, i).module.is_zero());
        }
    }
    SECTION("H^1_B(K) is paper-example-V degreewise, H^0_B(K) = 0")
    {
        ShiftResolution res = shift_resolution(presets::paper_example_k(F, w));
        REQUIRE(local_cohomology(res, 0).module.is_zero());
        LocalCohomology h1 = local_cohomology(res, 1);
        TruncatedModule Vlike = presets::paper_example_v(F, h1.module.window);
        REQUIRE(dims_match_on(h1.module, Vlike, h1.reliable));
        REQUIRE(local_cohomology(res, 2).module.is_zero());
    }
    SECTION("choice independence: both shift policies give the same dimensions")
    {
        std::vector<TruncatedModule> mods = {
            presets::paper_example_v(F, w), presets::paper_example_k(F, w),
            presets::constant(2, F, w), presets::point(DegreeVector{1, 2}, F, w),
            induced(SymmetricGroupRep::trivial(DegreeVector{1, 0}, F), w)};
        for (const auto& V : mods) {
            ShiftResolution lex = shift_resolution(V, ShiftPolicy::lex_minimal);
            ShiftResolution uni = shift_resolution(V, ShiftPolicy::uniform);
            for (int i = 0; i <= 3; ++i) {
                LocalCohomology a = local_cohomology(lex, i);
                LocalCohomology b = local_cohomology(uni, i);
                Window common = intersect(a.reliable, b.reliable);
                REQUIRE(dims_match_on(a.module, b.module, common));
            }
        }
    }
    SECTION("window exhaustion propagates")
    {
        TruncatedModule P = presets::point(DegreeVector{0, 0}, F, Window::box(DegreeVector{0, 3}));
        REQUIRE_THROWS_AS(shift_resolution(P), window_exhausted);
    }
}

TEST_CASE("complex cohomology of the shift resolution recomputes local cohomology")
{
    // ker/im quotients along the stored complex 0 -> V -> F0 -> F1 -> ...
    // must reproduce the torsion parts read off during the construction
    Window w = Window::box(DegreeVector{6, 6});
    TruncatedModule K = presets::paper_example_k(F, w);
    ShiftResolution res = shift_resolution(K);
    REQUIRE(res.complex_maps.size() == 1);
    // H^{-1} = ker(V -> F0) is the torsion part of V (here zero)
    auto kerv = map_calculus(res.complex_maps[0], MapCalculusKind::kernel);
    REQUIRE(kerv.module.is_zero());
    // H^0 at the F0 slot: the complex ends, so it is coker(V -> F0) = Q0,
    // whose torsion part is H^1_B(K)
    TruncatedModule q = map_calculus(res.complex_maps[0], MapCalculusKind::cokernel).module;
    REQUIRE(q.dims == res.steps[0].Q.dims);

    // K'' = ker(M(trivial@(0,1)) -> K) is the next syzygy: the sequence
    // 0 -> K'' -> M -> K -> 0 with M acyclic forces H^2_B(K'') = H^1_B(K),
    // so its resolution has two steps and a genuine middle slot
    ModuleMap counit = induced_counit(K.degree_rep(DegreeVector{0, 1}), K,
                                      Matrix::identity(1, F));
    TruncatedModule K2 = map_calculus(counit, MapCalculusKind::kernel).module;
    for (const auto& n : w.points())
        REQUIRE(K2.dims.at(n) == (n[1] >= 1 ? n[1] - 1 : 0));
    ShiftResolution rm = shift_resolution(K2);
    REQUIRE(rm.complete);
    REQUIRE(rm.complex_maps.size() == 2);
    // H^1_B(K'') = 0, recomputed as ker/im at the F0 slot
    TruncatedModule h0slot = homology_at(rm.complex_maps[1], rm.complex_maps[0]);
    REQUIRE(h0slot.is_zero());
    REQUIRE(local_cohomology(rm, 1).module.is_zero());
    // H^2_B(K'') has the dimensions of paper-example-V inside its window
    LocalCohomology h2 = local_cohomology(rm, 2);
    TruncatedModule Vlike = presets::paper_example_v(F, h2.module.window);
    for (const auto& n : h2.reliable.points())
        REQUIRE(h2.module.dims.at(n) == Vlike.dims.at(n));
    // and the end-slot cokernel of the complex agrees with the stored Q^(1)
    TruncatedModule endslot =
        map_calculus(rm.complex_maps[1], MapCalculusKind::cokernel).module;
    REQUIRE(endslot.dims == rm.steps[1].Q.dims);
}

TEST_CASE("acyclicity classification on constructed examples")
{
    Window w = Window::box(DegreeVector{5, 5});
    SECTION("torsion + induced sums are acyclic in positive degrees")
    {
        TruncatedModule V = direct_sum_modules(
            {presets::point(DegreeVector{1, 1}, F, w),
             induced(SymmetricGroupRep::trivial(DegreeVector{1, 0}, F), w)});
        ShiftResolution res = shift_resolution(V);
        // the torsion part is recovered exactly
        REQUIRE(dims_match_on(local_cohomology(res, 0).module,
                              presets::point(DegreeVector{1, 1}, F, w),
                              local_cohomology(res, 0).reliable));
        for (int i = 1; i <= 3; ++i)
            REQUIRE(local_cohomology(res, i).module.is_zero());
    }
    SECTION("conversely, paper-example-K has H^1_B != 0 and is not semi-induced")
    {
        TruncatedModule K = presets::paper_example_k(F, w);
        REQUIRE_FALSE(is_semi_induced(K).positive);
        ShiftResolution res = shift_resolution(K);
        REQUIRE_FALSE(local_cohomology(res, 1).module.is_zero());
        // and its torsion-free part is K itself
        REQUIRE(res.v_split.torsion_free.dims == K.dims);
    }
}
