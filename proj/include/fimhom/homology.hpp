#pragma once

#include <map>
#include <tuple>
#include <vector>

#include "fimhom/module.hpp"
#include "fimhom/upset.hpp"

namespace fimhom {

// Homology of two consecutive maps g: A -> B, f: B -> C with f o g = 0
// (asserted): the quotient ker(f) / im(g) as a module on the common window.
inline TruncatedModule homology_at(const ModuleMap& f, const ModuleMap& g)
{
    DegreeVector hi = componentwise_min(f.source().window.hi, g.target().window.hi);
    ModuleMap fr = restrict_map(f, hi);
    ModuleMap gr = restrict_map(g, hi);
    for (const auto& [n, M] : compose_maps(fr, gr).mats)
        if (!M.is_zero())
            throw std::logic_error("homology_at: maps do not compose to zero at " + n.str());
    auto ker = map_calculus(fr, MapCalculusKind::kernel);
    // express the image of g inside the kernel basis
    std::map<DegreeVector, Matrix> image_in_kernel;
    for (const auto& n : ker.module.window.points()) {
        auto X = solve(ker.structural.at(n), gr.at(n));
        if (!X)
            throw std::logic_error("homology_at: image does not land in the kernel at " + n.str());
        image_in_kernel[n] = *X;
    }
    return quotient_by_subspaces(ker.module, image_in_kernel).module;
}

struct HomologyTable {
    Window window;
    std::map<int, std::map<DegreeVector, int>> entries;  // i -> degree -> dim

    int at(int i, const DegreeVector& n) const
    {
        auto it = entries.find(i);
        if (it == entries.end())
            return 0;
        auto jt = it->second.find(n);
        return jt == it->second.end() ? 0 : jt->second;
    }
};

// ----------------------------------------------------------------------------
// The Koszul complex of V evaluated at a single degree n: position a is the
// sum over subset tuples T (T_j in [n_j], sum |T_j| = a) of V at n - |T|,
// twisted by signs; the differential adds one removed element back. Its
// homology computes the FI^m homology of V degreewise.
//
// Differentials are kept sparse; they are block maps whose blocks are
// transition matrices for single insertions, which are memoized across the
// whole window.
// ----------------------------------------------------------------------------

class KoszulAnalyzer {
public:
    explicit KoszulAnalyzer(const TruncatedModule& V) : V_(V) {}

    // dim H_i of the Koszul complex of V at degree n.
    int homology_dim(int i, const DegreeVector& n)
    {
        if (i < 0)
            return 0;
        if (!V_.window.contains(n))
            throw window_exhausted("koszul homology requested outside window", n);
        if (i > n.total())
            return 0;
        DegreeData& data = degree_data(n, i + 1);
        int dim_ci = data.dims[static_cast<size_t>(i)];
        int rank_di = i >= 1 ? data.ranks[static_cast<size_t>(i)] : 0;
        int rank_dnext = data.ranks[static_cast<size_t>(i) + 1];
        int h = dim_ci - rank_di - rank_dnext;
        if (h < 0)
            throw std::logic_error("negative homology dimension: broken complex");
        return h;
    }

    // Degrees of the window where H_i is nonzero.
    std::vector<DegreeVector> nonzero_degrees(int i)
    {
        std::vector<DegreeVector> out;
        for (const auto& n : V_.window.points())
            if (homology_dim(i, n) > 0)
                out.push_back(n);
        return out;
    }

    const TruncatedModule& module() const { return V_; }

private:
    struct DegreeData {
        int amax = -1;
        std::vector<int> dims;   // dims[a] = dim C_a, a = 0..amax
        std::vector<int> ranks;  // ranks[a] = rank d_a (d_a : C_a -> C_{a-1}); ranks[amax+1] incl.
    };

    using SubsetTuple = std::vector<std::vector<int>>;

    const TruncatedModule& V_;
    std::map<DegreeVector, DegreeData> cache_;
    std::map<std::tuple<DegreeVector, int, int>, Matrix> insertion_;  // (src deg, factor, missing)

    const Matrix& insertion_matrix(const DegreeVector& src, int j, int missing)
    {
        auto key = std::make_tuple(src, j, missing);
        auto it = insertion_.find(key);
        if (it == insertion_.end())
            it = insertion_
                     .emplace(key, transition(V_, InjectionTuple::skip_step(src, j, missing)))
                     .first;
        return it->second;
    }

    static void enumerate_tuples(const DegreeVector& n, int a, int j, SubsetTuple& cur,
                                 int remaining, std::vector<SubsetTuple>& out)
    {
        int m = n.size();
        if (j == m) {
            if (remaining == 0)
                out.push_back(cur);
            return;
        }
        int max_here = std::min(remaining, n[j]);
        for (int k = 0; k <= max_here; ++k)
            for (const auto& sub : detail::subsets_lex(n[j], k)) {
                cur[static_cast<size_t>(j)] = sub;
                enumerate_tuples(n, a, j + 1, cur, remaining - k, out);
            }
        cur[static_cast<size_t>(j)].clear();
    }

    DegreeData& degree_data(const DegreeVector& n, int amax_wanted)
    {
        int amax = std::min(amax_wanted, n.total());
        DegreeData& data = cache_[n];
        if (data.amax >= amax)
            return data;
        data = DegreeData{};
        data.amax = amax;

        std::vector<std::vector<SubsetTuple>> tuples(static_cast<size_t>(amax) + 1);
        std::vector<std::map<SubsetTuple, int>> offset(static_cast<size_t>(amax) + 1);
        std::vector<std::vector<int>> block_off(static_cast<size_t>(amax) + 1);
        data.dims.assign(static_cast<size_t>(amax) + 1, 0);
        for (int a = 0; a <= amax; ++a) {
            SubsetTuple cur(static_cast<size_t>(n.size()));
            enumerate_tuples(n, a, 0, cur, a, tuples[static_cast<size_t>(a)]);
            int off = 0;
            for (const auto& T : tuples[static_cast<size_t>(a)]) {
                offset[static_cast<size_t>(a)][T] = off;
                block_off[static_cast<size_t>(a)].push_back(off);
                DegreeVector rem = n;
                for (int j = 0; j < n.size(); ++j)
                    rem[j] -= static_cast<int>(T[static_cast<size_t>(j)].size());
                off += V_.dims.at(rem);
            }
            data.dims[static_cast<size_t>(a)] = off;
        }

        data.ranks.assign(static_cast<size_t>(amax) + 2, 0);
        std::vector<detail::SparseTriplet> prev;  // d_{a-1} triplets, for d*d = 0 check
        bool have_prev = false;
        for (int a = 1; a <= amax + 1; ++a) {
            std::vector<detail::SparseTriplet> trips;
            if (a <= n.total()) {
                std::vector<SubsetTuple> src_tuples;
                if (a <= amax) {
                    src_tuples = tuples[static_cast<size_t>(a)];
                } else {
                    SubsetTuple cur(static_cast<size_t>(n.size()));
                    enumerate_tuples(n, a, 0, cur, a, src_tuples);
                }
                int src_off = 0;
                for (const auto& T : src_tuples) {
                    DegreeVector rem = n;
                    for (int j = 0; j < n.size(); ++j)
                        rem[j] -= static_cast<int>(T[static_cast<size_t>(j)].size());
                    int src_dim = V_.dims.at(rem);
                    if (src_dim > 0) {
                        int pos_before = 0;
                        for (int j = 0; j < n.size(); ++j) {
                            const auto& Tj = T[static_cast<size_t>(j)];
                            for (size_t ti = 0; ti < Tj.size(); ++ti) {
                                int t = Tj[ti];
                                bool negative = ((pos_before + static_cast<int>(ti)) % 2) != 0;
                                SubsetTuple T2 = T;
                                T2[static_cast<size_t>(j)].erase(
                                    T2[static_cast<size_t>(j)].begin() +
                                    static_cast<long>(ti));
                                int dst_off = offset[static_cast<size_t>(a) - 1].at(T2);
                                int missing = t - static_cast<int>(ti);
                                const Matrix& B = insertion_matrix(rem, j, missing);
                                for (int r = 0; r < B.rows(); ++r)
                                    for (int c = 0; c < B.cols(); ++c)
                                        if (B(r, c)) {
                                            uint32_t v = negative ? V_.field.neg(B(r, c))
                                                                  : B(r, c);
                                            trips.push_back({dst_off + r, src_off + c, v});
                                        }
                            }
                            pos_before += static_cast<int>(Tj.size());
                        }
                    }
                    src_off += src_dim;
                }
                int src_total = src_off;
                int dst_total = data.dims[static_cast<size_t>(a) - 1];
                data.ranks[static_cast<size_t>(a)] =
                    detail::sparse_rank(dst_total, src_total, trips, V_.field);
                if (have_prev)
                    assert_square_zero(prev, trips, data.dims, a);
                prev = std::move(trips);
                have_prev = true;
            }
        }
        return data;
    }

    // d_{a-1} o d_a must vanish identically.
    void assert_square_zero(const std::vector<detail::SparseTriplet>& douter,
                            const std::vector<detail::SparseTriplet>& dinner,
                            const std::vector<int>& dims, int a) const
    {
        (void)dims;
        std::map<int, std::vector<std::pair<int, uint32_t>>> outer_by_col;
        for (const auto& t : douter)
            outer_by_col[t.col].push_back({t.row, t.val});
        std::map<int, std::vector<std::pair<int, uint32_t>>> inner_by_col;
        for (const auto& t : dinner)
            inner_by_col[t.col].push_back({t.row, t.val});
        for (const auto& [c, col] : inner_by_col) {
            std::map<int, uint32_t> acc;
            for (const auto& [k, v] : col) {
                auto it = outer_by_col.find(k);
                if (it == outer_by_col.end())
                    continue;
                for (const auto& [r, w] : it->second)
                    acc[r] = V_.field.add(acc.count(r) ? acc[r] : 0, V_.field.mul(w, v));
            }
            for (const auto& [r, v] : acc)
                if (v != 0)
                    throw std::logic_error("koszul differential does not square to zero (a=" +
                                           std::to_string(a) + ")");
        }
    }
};

inline int koszul_homology(const TruncatedModule& V, int i, const DegreeVector& n)
{
    KoszulAnalyzer an(V);
    return an.homology_dim(i, n);
}

// ----------------------------------------------------------------------------
// H_0 degreewise: the quotient of V_n by the symmetric-group saturation of
// the images of the one-step inclusions, together with generator lifts and
// the quotient representations (needed to build semi-induced covers).
// ----------------------------------------------------------------------------

struct H0Data {
    HomologyTable table;                        // row i = 0
    std::map<DegreeVector, Matrix> projections;  // V_n ->> H0_n
    std::map<DegreeVector, Matrix> lifts;        // sections (pivot preimages)
    std::map<DegreeVector, SymmetricGroupRep> reps;
};

inline H0Data h0(const TruncatedModule& V)
{
    H0Data out;
    out.table.window = V.window;
    for (const auto& n : V.window.points()) {
        int d = V.dims.at(n);
        Matrix span(d, 0, V.field);
        for (int j = 0; j < V.m; ++j) {
            if (n[j] < 1)
                continue;
            DegreeVector below = n - DegreeVector::unit(V.m, j);
            span = hstack(span, V.inclusion(below, j));
        }
        Matrix U = detail::saturate_under_action(V, n, span);
        QuotientSpace q = quotient_space(U, d);
        out.table.entries[0][n] = q.quotient_dim;
        out.projections[n] = q.projection;
        out.lifts[n] = q.section;
        SymmetricGroupRep W;
        W.r = n;
        W.dim = q.quotient_dim;
        W.field = V.field;
        W.gens.resize(static_cast<size_t>(V.m));
        for (int j = 0; j < V.m; ++j)
            for (int i = 0; i + 1 < n[j]; ++i)
                W.gens[static_cast<size_t>(j)].push_back(q.projection *
                                                         (V.act(n, j, i) * q.section));
        out.reps.emplace(n, std::move(W));
    }
    return out;
}

// ----------------------------------------------------------------------------
// Homological degree sets. HD_i(V) collects the vectors r such that H_i(V)
// vanishes at every window degree strictly dominating r. Quantifiers range
// over window degrees only; the returned set carries its window.
// ----------------------------------------------------------------------------

inline UpSet hd_set_with(KoszulAnalyzer& an, int i, const Window& search)
{
    const TruncatedModule& V = an.module();
    DegreeVector certifiable = V.window.hi - DegreeVector::constant(V.m, 1);
    if (!search.hi.leq(certifiable))
        throw window_exhausted(
            "hd_set: search window extends beyond the certifiable region (upper bound must stay "
            "one step inside the module window)",
            search.hi);
    std::vector<DegreeVector> nz = an.nonzero_degrees(i);
    return upset_from_predicate(search, [&](const DegreeVector& r) {
        for (const auto& n : nz)
            if (n.strictly_dominates(r))
                return false;
        return true;
    });
}

inline UpSet hd_set(const TruncatedModule& V, int i, const Window& search)
{
    KoszulAnalyzer an(V);
    return hd_set_with(an, i, search);
}

// ----------------------------------------------------------------------------
// Semi-induced covers and resolutions. The cover of U is the sum over the
// generation degrees d (in lex order) of M(W_d), where W_d is the quotient
// representation H_0(U)_d lifted along an equivariant section; when no
// equivariant section exists over F_p the full fiber U_d is used instead,
// which covers the same degrees.
// ----------------------------------------------------------------------------

struct SemiInducedCover {
    TruncatedModule F;
    ModuleMap counit;  // F -> U, surjective degreewise within the window
};

namespace detail {
// An S_d-equivariant section of proj: U_d ->> W, solved as a linear system.
inline std::optional<Matrix> equivariant_section(const TruncatedModule& U, const DegreeVector& d,
                                                 const Matrix& proj, const SymmetricGroupRep& W)
{
    const FieldSpec F = U.field;
    int du = U.dims.at(d), q = W.dim;
    long long unknowns = static_cast<long long>(du) * q;
    if (unknowns == 0)
        return Matrix(du, q, F);
    if (unknowns > 20000)
        return std::nullopt;  // fall back to the full fiber at silly sizes
    std::vector<std::vector<uint32_t>> rows;
    std::vector<uint32_t> rhs;
    auto idx = [&](int i, int k) { return i * q + k; };
    for (int a = 0; a < q; ++a)
        for (int k = 0; k < q; ++k) {
            std::vector<uint32_t> row(static_cast<size_t>(unknowns), 0);
            for (int i = 0; i < du; ++i)
                if (proj(a, i))
                    row[static_cast<size_t>(idx(i, k))] = proj(a, i);
            rows.push_back(std::move(row));
            rhs.push_back(a == k ? 1 % F.p : 0);
        }
    for (int j = 0; j < U.m; ++j)
        for (int g = 0; g + 1 < d[j]; ++g) {
            const Matrix& A = U.act(d, j, g);
            const Matrix& G = W.gens[static_cast<size_t>(j)][static_cast<size_t>(g)];
            for (int i = 0; i < du; ++i)
                for (int k = 0; k < q; ++k) {
                    std::vector<uint32_t> row(static_cast<size_t>(unknowns), 0);
                    for (int l = 0; l < du; ++l)
                        if (A(i, l))
                            row[static_cast<size_t>(idx(l, k))] =
                                F.add(row[static_cast<size_t>(idx(l, k))], A(i, l));
                    for (int t = 0; t < q; ++t)
                        if (G(t, k))
                            row[static_cast<size_t>(idx(i, t))] =
                                F.sub(row[static_cast<size_t>(idx(i, t))], G(t, k));
                    rows.push_back(std::move(row));
                    rhs.push_back(0);
                }
        }
    Matrix A(static_cast<int>(rows.size()), static_cast<int>(unknowns), F);
    Matrix b(static_cast<int>(rows.size()), 1, F);
    for (int i = 0; i < A.rows(); ++i) {
        for (int jx = 0; jx < A.cols(); ++jx)
            A(i, jx) = rows[static_cast<size_t>(i)][static_cast<size_t>(jx)];
        b(i, 0) = rhs[static_cast<size_t>(i)];
    }
    auto x = solve(A, b);
    if (!x)
        return std::nullopt;
    Matrix ell(du, q, F);
    for (int i = 0; i < du; ++i)
        for (int k = 0; k < q; ++k)
            ell(i, k) = (*x)(idx(i, k), 0);
    return ell;
}
}  // namespace detail

inline SemiInducedCover semi_induced_cover(const TruncatedModule& U)
{
    H0Data h = h0(U);
    std::vector<TruncatedModule> summands;
    std::vector<ModuleMap> counits;
    for (const auto& d : U.window.points()) {
        if (h.table.at(0, d) == 0)
            continue;
        const SymmetricGroupRep& W = h.reps.at(d);
        auto ell = detail::equivariant_section(U, d, h.projections.at(d), W);
        if (ell) {
            counits.push_back(induced_counit(W, U, *ell));
        } else {
            counits.push_back(induced_counit(U.degree_rep(d), U,
                                             Matrix::identity(U.dims.at(d), U.field)));
        }
        summands.push_back(counits.back().source());
    }
    if (summands.empty()) {
        TruncatedModule Z = zero_module(U.m, U.field, U.window);
        return {Z, ModuleMap(Z, U)};
    }
    TruncatedModule F = direct_sum_modules(summands);
    ModuleMap eps(F, U);
    for (const auto& n : U.window.points()) {
        int col = 0;
        Matrix& E = eps.at(n);
        for (const auto& c : counits) {
            const Matrix& B = c.at(n);
            for (int j = 0; j < B.cols(); ++j, ++col)
                for (int i = 0; i < B.rows(); ++i)
                    if (B(i, j))
                        E(i, col) = B(i, j);
        }
    }
    return {std::move(F), std::move(eps)};
}

struct SemiInducedResolution {
    std::vector<TruncatedModule> F;       // F[0], F[1], ...
    std::vector<ModuleMap> maps;          // maps[0]: F0 -> V; maps[i]: F[i] -> F[i-1]
    std::vector<TruncatedModule> kernels; // kernels[i] = ker(F[i] ->> previous kernel)
    bool complete = false;                // the last kernel vanished
};

inline SemiInducedResolution semi_induced_resolution(const TruncatedModule& V, int length)
{
    SemiInducedResolution res;
    if (length <= 0)
        return res;
    const TruncatedModule* cur = &V;
    TruncatedModule cur_store;
    ModuleMap prev_incl;  // kernel -> F[i-1]
    for (int step = 0; step < length; ++step) {
        SemiInducedCover cover = semi_induced_cover(*cur);
        res.F.push_back(cover.F);
        if (step == 0)
            res.maps.push_back(cover.counit);
        else
            res.maps.push_back(compose_maps(prev_incl, cover.counit));
        auto ker = map_calculus(cover.counit, MapCalculusKind::kernel);
        res.kernels.push_back(ker.module);
        if (ker.module.is_zero()) {
            res.complete = true;
            break;
        }
        prev_incl = ker.structural;
        cur_store = ker.module;
        cur = &cur_store;
    }
    return res;
}

}  // namespace fimhom
