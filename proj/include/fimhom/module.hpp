#pragma once

#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fimhom/degree.hpp"
#include "fimhom/injection.hpp"
#include "fimhom/matrix.hpp"
#include "fimhom/sym_rep.hpp"

namespace fimhom {

// An FI^m-module restricted to the box [0, D]: per-degree vector spaces,
// adjacent-transposition actions per factor, and the standard one-step
// inclusion maps. Arbitrary transition maps are assembled on demand through
// factorize, so storage stays linear in the box size.
//
// Degrees with a negative coordinate have dimension 0 by convention; degrees
// beyond the window are unknown and asking for them is an error.
struct TruncatedModule {
    int m = 0;
    FieldSpec field;
    Window window;  // window.lo == 0
    std::map<DegreeVector, int> dims;
    std::map<DegreeVector, std::vector<std::vector<Matrix>>> transp;   // [deg][factor][i]
    std::map<DegreeVector, std::vector<std::optional<Matrix>>> incl;   // [deg][factor]

    int dim_at(const DegreeVector& n) const
    {
        if (!n.is_nonnegative())
            return 0;
        auto it = dims.find(n);
        if (it == dims.end())
            throw window_exhausted("degree " + n.str() + " is outside the stored window", n);
        return it->second;
    }

    bool in_window(const DegreeVector& n) const { return window.contains(n); }

    const Matrix& act(const DegreeVector& n, int j, int i) const
    {
        return transp.at(n)[static_cast<size_t>(j)][static_cast<size_t>(i)];
    }
    bool has_inclusion(const DegreeVector& n, int j) const
    {
        auto it = incl.find(n);
        return it != incl.end() && it->second[static_cast<size_t>(j)].has_value();
    }
    const Matrix& inclusion(const DegreeVector& n, int j) const
    {
        const auto& o = incl.at(n)[static_cast<size_t>(j)];
        if (!o)
            throw window_exhausted("no inclusion from " + n.str() + " in direction " +
                                       std::to_string(j),
                                   n);
        return *o;
    }

    bool is_zero() const
    {
        for (const auto& [deg, d] : dims)
            if (d != 0)
                return false;
        return true;
    }

    // Action of a permutation of one factor, assembled from generators.
    Matrix act_perm(const DegreeVector& n, int j, const Perm& p) const
    {
        Matrix A = Matrix::identity(dim_at(n), field);
        for (int i : adjacent_word(p))
            A = A * act(n, j, i);
        return A;
    }

    // The S_r-representation carried by one degree.
    SymmetricGroupRep degree_rep(const DegreeVector& d) const
    {
        SymmetricGroupRep W;
        W.r = d;
        W.dim = dim_at(d);
        W.field = field;
        W.gens = transp.at(d);
        return W;
    }
};

// Sizes the storage maps of a module whose dims are already set: zero
// matrices of the correct shapes everywhere.
inline void init_structure(TruncatedModule& V)
{
    for (const auto& [n, d] : V.dims) {
        auto& tn = V.transp[n];
        tn.assign(static_cast<size_t>(V.m), {});
        for (int j = 0; j < V.m; ++j)
            tn[static_cast<size_t>(j)].assign(static_cast<size_t>(std::max(n[j] - 1, 0)),
                                              Matrix::zero(d, d, V.field));
        auto& in = V.incl[n];
        in.assign(static_cast<size_t>(V.m), std::nullopt);
        for (int j = 0; j < V.m; ++j) {
            DegreeVector up = n + DegreeVector::unit(V.m, j);
            if (V.window.contains(up))
                in[static_cast<size_t>(j)] = Matrix::zero(V.dims.at(up), d, V.field);
        }
    }
}

inline TruncatedModule zero_module(int m, FieldSpec F, Window window)
{
    TruncatedModule V;
    V.m = m;
    V.field = F;
    V.window = window;
    for (const auto& n : window.points())
        V.dims[n] = 0;
    init_structure(V);
    return V;
}

// Assembles the transition map of an arbitrary injection f: the standard
// inclusion chain followed by the lex-least permutation from factorize.
inline Matrix transition(const TruncatedModule& V, const InjectionTuple& f)
{
    if (!V.window.contains(f.src) || !V.window.contains(f.dst))
        throw window_exhausted("transition endpoints outside window", f.dst);
    Factorization fac = factorize(f);
    Matrix M = Matrix::identity(V.dim_at(f.src), V.field);
    DegreeVector cur = f.src;
    for (int j = 0; j < V.m; ++j)
        for (int s = f.src[j]; s < f.dst[j]; ++s) {
            M = V.inclusion(cur, j) * M;
            cur[j] += 1;
        }
    for (int j = V.m - 1; j >= 0; --j) {
        std::vector<int> word = adjacent_word(fac.sigma[static_cast<size_t>(j)]);
        for (auto it = word.rbegin(); it != word.rend(); ++it)
            M = V.act(f.dst, j, *it) * M;
    }
    return M;
}

inline TruncatedModule restrict_module(const TruncatedModule& V, const DegreeVector& hi)
{
    if (!hi.leq(V.window.hi))
        throw std::invalid_argument("restrict_module: window must shrink");
    if (!hi.is_nonnegative())
        throw window_exhausted("restrict_module: window would be empty", hi);
    TruncatedModule W;
    W.m = V.m;
    W.field = V.field;
    W.window = Window::box(hi);
    for (const auto& n : W.window.points()) {
        W.dims[n] = V.dims.at(n);
        W.transp[n] = V.transp.at(n);
        auto& in = W.incl[n];
        in.assign(static_cast<size_t>(V.m), std::nullopt);
        for (int j = 0; j < V.m; ++j) {
            DegreeVector up = n + DegreeVector::unit(V.m, j);
            if (W.window.contains(up))
                in[static_cast<size_t>(j)] = V.inclusion(n, j);
        }
    }
    return W;
}

inline TruncatedModule direct_sum_modules(const std::vector<TruncatedModule>& parts)
{
    if (parts.empty())
        throw std::invalid_argument("direct_sum_modules: empty list");
    TruncatedModule S = zero_module(parts[0].m, parts[0].field, parts[0].window);
    for (const auto& P : parts) {
        if (P.m != S.m || P.field != S.field || !(P.window == S.window))
            throw std::invalid_argument("direct_sum_modules: incompatible summands");
    }
    for (const auto& n : S.window.points()) {
        int d = 0;
        for (const auto& P : parts)
            d += P.dims.at(n);
        S.dims[n] = d;
    }
    init_structure(S);
    auto fill_block = [&](Matrix& M, const Matrix& B, int ro, int co) {
        for (int i = 0; i < B.rows(); ++i)
            for (int j = 0; j < B.cols(); ++j)
                if (B(i, j))
                    M(ro + i, co + j) = B(i, j);
    };
    for (const auto& n : S.window.points()) {
        int off = 0;
        std::vector<int> offsets;
        for (const auto& P : parts) {
            offsets.push_back(off);
            off += P.dims.at(n);
        }
        for (size_t pi = 0; pi < parts.size(); ++pi) {
            const auto& P = parts[pi];
            for (int j = 0; j < S.m; ++j) {
                for (int i = 0; i + 1 < n[j]; ++i)
                    fill_block(S.transp[n][static_cast<size_t>(j)][static_cast<size_t>(i)],
                               P.act(n, j, i), offsets[pi], offsets[pi]);
                DegreeVector up = n + DegreeVector::unit(S.m, j);
                if (S.window.contains(up)) {
                    int upo = 0;
                    for (size_t q = 0; q < pi; ++q)
                        upo += parts[q].dims.at(up);
                    fill_block(*S.incl[n][static_cast<size_t>(j)], P.inclusion(n, j), upo,
                               offsets[pi]);
                }
            }
        }
    }
    return S;
}

// ----------------------------------------------------------------------------
// Validation: the generator relations that present the symmetric groups and
// the inclusion monoid over the window. A module passing these checks has
// well-defined transition maps for every injection between window degrees.
// ----------------------------------------------------------------------------

struct Violation {
    std::string kind;
    DegreeVector degree;
    std::string detail;
};

inline std::vector<Violation> validate(const TruncatedModule& V)
{
    std::vector<Violation> bad;
    auto complain = [&](const std::string& kind, const DegreeVector& n, const std::string& d) {
        bad.push_back({kind, n, d});
    };
    for (const auto& n : V.window.points()) {
        int d = V.dims.at(n);
        auto tn = V.transp.find(n);
        if (tn == V.transp.end() || static_cast<int>(tn->second.size()) != V.m) {
            complain("storage", n, "missing transposition table");
            continue;
        }
        for (int j = 0; j < V.m; ++j) {
            const auto& g = tn->second[static_cast<size_t>(j)];
            if (static_cast<int>(g.size()) != std::max(n[j] - 1, 0)) {
                complain("storage", n, "wrong generator count in factor " + std::to_string(j));
                continue;
            }
            Matrix I = Matrix::identity(d, V.field);
            for (size_t i = 0; i < g.size(); ++i) {
                if (g[i].rows() != d || g[i].cols() != d) {
                    complain("storage", n, "generator shape in factor " + std::to_string(j));
                    continue;
                }
                if (g[i] * g[i] != I)
                    complain("coxeter", n,
                             "s" + std::to_string(i) + " of factor " + std::to_string(j) +
                                 " is not an involution");
            }
            for (size_t i = 0; i + 1 < g.size(); ++i)
                if (g[i] * (g[i + 1] * g[i]) != g[i + 1] * (g[i] * g[i + 1]))
                    complain("coxeter", n,
                             "braid relation fails at s" + std::to_string(i) + " of factor " +
                                 std::to_string(j));
            for (size_t i = 0; i < g.size(); ++i)
                for (size_t l = i + 2; l < g.size(); ++l)
                    if (g[i] * g[l] != g[l] * g[i])
                        complain("coxeter", n,
                                 "distant generators " + std::to_string(i) + "," +
                                     std::to_string(l) + " of factor " + std::to_string(j));
        }
        for (int j = 0; j < V.m; ++j)
            for (int l = j + 1; l < V.m; ++l)
                for (const auto& a : tn->second[static_cast<size_t>(j)])
                    for (const auto& b : tn->second[static_cast<size_t>(l)])
                        if (a * b != b * a)
                            complain("cross-factor", n,
                                     "factors " + std::to_string(j) + " and " + std::to_string(l) +
                                         " do not commute");

        for (int l = 0; l < V.m; ++l) {
            DegreeVector up = n + DegreeVector::unit(V.m, l);
            if (!V.window.contains(up)) {
                if (V.has_inclusion(n, l))
                    complain("storage", n, "inclusion stored beyond window");
                continue;
            }
            if (!V.has_inclusion(n, l)) {
                complain("storage", n, "missing inclusion in direction " + std::to_string(l));
                continue;
            }
            const Matrix& inc = V.inclusion(n, l);
            if (inc.rows() != V.dims.at(up) || inc.cols() != d) {
                complain("storage", n, "inclusion shape in direction " + std::to_string(l));
                continue;
            }
            // equivariance: the standard inclusion intertwines the actions
            for (int j = 0; j < V.m; ++j)
                for (int i = 0; i + 1 < n[j]; ++i)
                    if (inc * V.act(n, j, i) != V.act(up, j, i) * inc)
                        complain("equivariance", n,
                                 "inclusion " + std::to_string(l) + " vs s" + std::to_string(i) +
                                     " of factor " + std::to_string(j));
        }
        // inclusions in distinct directions commute
        for (int j = 0; j < V.m; ++j)
            for (int l = j + 1; l < V.m; ++l) {
                DegreeVector uj = n + DegreeVector::unit(V.m, j);
                DegreeVector ul = n + DegreeVector::unit(V.m, l);
                DegreeVector both = uj + DegreeVector::unit(V.m, l);
                if (!V.window.contains(both))
                    continue;
                if (V.inclusion(uj, l) * V.inclusion(n, j) !=
                    V.inclusion(ul, j) * V.inclusion(n, l))
                    complain("square", n,
                             "inclusion square " + std::to_string(j) + "," + std::to_string(l) +
                                 " does not commute");
            }
        // the two appended points of a double step are interchangeable
        for (int j = 0; j < V.m; ++j) {
            DegreeVector up = n + DegreeVector::unit(V.m, j);
            DegreeVector up2 = up + DegreeVector::unit(V.m, j);
            if (!V.window.contains(up2))
                continue;
            Matrix chain = V.inclusion(up, j) * V.inclusion(n, j);
            if (V.act(up2, j, n[j]) * chain != chain)
                complain("two-step", n,
                         "swap of the two appended points acts nontrivially in direction " +
                             std::to_string(j));
        }
    }
    return bad;
}

// ----------------------------------------------------------------------------
// Natural transformations
// ----------------------------------------------------------------------------

struct ModuleMap {
    std::shared_ptr<const TruncatedModule> src;
    std::shared_ptr<const TruncatedModule> dst;
    std::map<DegreeVector, Matrix> mats;

    ModuleMap() = default;
    ModuleMap(TruncatedModule s, TruncatedModule t)
        : src(std::make_shared<TruncatedModule>(std::move(s))),
          dst(std::make_shared<TruncatedModule>(std::move(t)))
    {
        if (src->m != dst->m || src->field != dst->field || !(src->window == dst->window))
            throw std::invalid_argument("module map endpoints must share m, field and window");
        for (const auto& n : src->window.points())
            mats[n] = Matrix::zero(dst->dims.at(n), src->dims.at(n), src->field);
    }

    const TruncatedModule& source() const { return *src; }
    const TruncatedModule& target() const { return *dst; }
    const Matrix& at(const DegreeVector& n) const { return mats.at(n); }
    Matrix& at(const DegreeVector& n) { return mats.at(n); }
};

inline std::vector<Violation> validate_map(const ModuleMap& phi)
{
    std::vector<Violation> bad;
    const TruncatedModule& V = phi.source();
    const TruncatedModule& U = phi.target();
    for (const auto& n : V.window.points()) {
        const Matrix& f = phi.at(n);
        if (f.rows() != U.dims.at(n) || f.cols() != V.dims.at(n)) {
            bad.push_back({"shape", n, "component has wrong shape"});
            continue;
        }
        for (int j = 0; j < V.m; ++j)
            for (int i = 0; i + 1 < n[j]; ++i)
                if (U.act(n, j, i) * f != f * V.act(n, j, i))
                    bad.push_back({"naturality", n,
                                   "does not intertwine s" + std::to_string(i) + " of factor " +
                                       std::to_string(j)});
        for (int j = 0; j < V.m; ++j) {
            DegreeVector up = n + DegreeVector::unit(V.m, j);
            if (!V.window.contains(up))
                continue;
            if (U.inclusion(n, j) * f != phi.at(up) * V.inclusion(n, j))
                bad.push_back({"naturality", n,
                               "does not intertwine the inclusion in direction " +
                                   std::to_string(j)});
        }
    }
    return bad;
}

inline ModuleMap identity_map(const TruncatedModule& V)
{
    ModuleMap phi(V, V);
    for (auto& [n, M] : phi.mats)
        M = Matrix::identity(V.dims.at(n), V.field);
    return phi;
}

inline ModuleMap compose_maps(const ModuleMap& f, const ModuleMap& g)
{
    if (!(f.source().window == g.target().window))
        throw std::invalid_argument("compose_maps: window mismatch");
    ModuleMap h(g.source(), f.target());
    for (auto& [n, M] : h.mats)
        M = f.at(n) * g.at(n);
    return h;
}

inline ModuleMap restrict_map(const ModuleMap& phi, const DegreeVector& hi)
{
    ModuleMap out(restrict_module(phi.source(), hi), restrict_module(phi.target(), hi));
    for (auto& [n, M] : out.mats)
        M = phi.at(n);
    return out;
}

// ----------------------------------------------------------------------------
// Substructures: a module presented by a basis of each degree inside an
// ambient module, with structure maps obtained by exact solving. Powers
// kernels, images, torsion submodules and generated submodules.
// ----------------------------------------------------------------------------

struct SubmodulePresentation {
    TruncatedModule module;
    ModuleMap inclusion;  // module -> ambient
};

inline SubmodulePresentation submodule_from_bases(const TruncatedModule& V,
                                                  const std::map<DegreeVector, Matrix>& bases)
{
    TruncatedModule W;
    W.m = V.m;
    W.field = V.field;
    W.window = V.window;
    for (const auto& n : V.window.points())
        W.dims[n] = bases.at(n).cols();
    init_structure(W);
    auto restrict_map = [&](const Matrix& A, const DegreeVector& from, const DegreeVector& to) {
        auto X = solve(bases.at(to), A * bases.at(from));
        if (!X)
            throw std::invalid_argument("submodule_from_bases: bases are not closed under the structure maps");
        return *X;
    };
    for (const auto& n : V.window.points()) {
        for (int j = 0; j < V.m; ++j) {
            for (int i = 0; i + 1 < n[j]; ++i)
                W.transp[n][static_cast<size_t>(j)][static_cast<size_t>(i)] =
                    restrict_map(V.act(n, j, i), n, n);
            DegreeVector up = n + DegreeVector::unit(V.m, j);
            if (V.window.contains(up))
                W.incl[n][static_cast<size_t>(j)] = restrict_map(V.inclusion(n, j), n, up);
        }
    }
    ModuleMap inc(W, V);
    for (const auto& n : V.window.points())
        inc.at(n) = bases.at(n);
    return {std::move(W), std::move(inc)};
}

struct QuotientPresentation {
    TruncatedModule module;
    ModuleMap projection;  // ambient -> module
    std::map<DegreeVector, Matrix> sections;
};

inline QuotientPresentation quotient_by_subspaces(const TruncatedModule& V,
                                                  const std::map<DegreeVector, Matrix>& subspaces)
{
    std::map<DegreeVector, QuotientSpace> q;
    for (const auto& n : V.window.points())
        q.emplace(n, quotient_space(subspaces.at(n), V.dims.at(n)));
    TruncatedModule W;
    W.m = V.m;
    W.field = V.field;
    W.window = V.window;
    for (const auto& n : V.window.points())
        W.dims[n] = q.at(n).quotient_dim;
    init_structure(W);
    auto induced = [&](const Matrix& A, const DegreeVector& from, const DegreeVector& to) {
        Matrix carried = q.at(to).projection * (A * subspaces.at(from));
        if (!carried.is_zero())
            throw std::invalid_argument(
                "quotient_by_subspaces: subspaces are not closed under the structure maps");
        return q.at(to).projection * (A * q.at(from).section);
    };
    for (const auto& n : V.window.points()) {
        for (int j = 0; j < V.m; ++j) {
            for (int i = 0; i + 1 < n[j]; ++i)
                W.transp[n][static_cast<size_t>(j)][static_cast<size_t>(i)] =
                    induced(V.act(n, j, i), n, n);
            DegreeVector up = n + DegreeVector::unit(V.m, j);
            if (V.window.contains(up))
                W.incl[n][static_cast<size_t>(j)] = induced(V.inclusion(n, j), n, up);
        }
    }
    QuotientPresentation out;
    ModuleMap proj(V, W);
    for (const auto& n : V.window.points()) {
        proj.at(n) = q.at(n).projection;
        out.sections[n] = q.at(n).section;
    }
    out.module = proj.target();
    out.projection = std::move(proj);
    return out;
}

// ----------------------------------------------------------------------------
// kernel / image / cokernel of a natural transformation
// ----------------------------------------------------------------------------

enum class MapCalculusKind { kernel, image, cokernel };

struct MapCalculusResult {
    TruncatedModule module;
    ModuleMap structural;  // inclusion for kernel/image, projection for cokernel
};

inline MapCalculusResult map_calculus(const ModuleMap& phi, MapCalculusKind kind)
{
    if (!validate_map(phi).empty())
        throw std::invalid_argument("map_calculus: the map is not a natural transformation");
    const TruncatedModule& V = phi.source();
    const TruncatedModule& U = phi.target();
    std::map<DegreeVector, Matrix> data;
    switch (kind) {
    case MapCalculusKind::kernel: {
        for (const auto& n : V.window.points())
            data[n] = kernel_basis(phi.at(n));
        auto sub = submodule_from_bases(V, data);
        return {std::move(sub.module), std::move(sub.inclusion)};
    }
    case MapCalculusKind::image: {
        for (const auto& n : V.window.points())
            data[n] = column_space_basis(phi.at(n));
        auto sub = submodule_from_bases(U, data);
        return {std::move(sub.module), std::move(sub.inclusion)};
    }
    case MapCalculusKind::cokernel: {
        for (const auto& n : V.window.points())
            data[n] = phi.at(n);
        auto quot = quotient_by_subspaces(U, data);
        return {std::move(quot.module), std::move(quot.projection)};
    }
    }
    throw std::logic_error("unreachable");
}

// ----------------------------------------------------------------------------
// Induced modules M(W)
// ----------------------------------------------------------------------------

namespace detail {
inline std::vector<std::vector<int>> subsets_lex(int n, int k)
{
    std::vector<std::vector<int>> out;
    if (k < 0 || k > n)
        return out;
    std::vector<int> cur;
    // lexicographic enumeration of k-subsets as increasing index lists
    auto rec = [&](auto&& self, int start) -> void {
        if (static_cast<int>(cur.size()) == k) {
            out.push_back(cur);
            return;
        }
        for (int v = start; v < n; ++v) {
            cur.push_back(v);
            self(self, v + 1);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

// Basis labels of M(W) at one degree: tuples of r_j-subsets of [n_j].
struct SubsetBasis {
    std::vector<std::vector<std::vector<int>>> tuples;  // tuples[b][j] = sorted subset
    std::map<std::vector<std::vector<int>>, int> index;

    static SubsetBasis at_degree(const DegreeVector& n, const DegreeVector& r)
    {
        SubsetBasis B;
        int m = n.size();
        std::vector<std::vector<std::vector<int>>> per(static_cast<size_t>(m));
        for (int j = 0; j < m; ++j) {
            per[static_cast<size_t>(j)] = subsets_lex(n[j], r[j]);
            if (per[static_cast<size_t>(j)].empty())
                return B;
        }
        std::vector<size_t> idx(static_cast<size_t>(m), 0);
        while (true) {
            std::vector<std::vector<int>> tup;
            for (int j = 0; j < m; ++j)
                tup.push_back(per[static_cast<size_t>(j)][idx[static_cast<size_t>(j)]]);
            B.index[tup] = static_cast<int>(B.tuples.size());
            B.tuples.push_back(std::move(tup));
            int j = m - 1;
            while (j >= 0 && idx[static_cast<size_t>(j)] + 1 == per[static_cast<size_t>(j)].size()) {
                idx[static_cast<size_t>(j)] = 0;
                --j;
            }
            if (j < 0)
                break;
            ++idx[static_cast<size_t>(j)];
        }
        return B;
    }
};
}  // namespace detail

// The induced module M(W): at degree n a copy of W for every tuple of
// r_j-subsets of [n_j]. A morphism g sends the block S to the block g(S),
// twisted by the permutation that re-sorts the images.
inline TruncatedModule induced(const SymmetricGroupRep& W, Window window)
{
    if (!window.contains(W.r))
        throw std::invalid_argument("induced: base degree exceeds the window");
    TruncatedModule V;
    V.m = W.m();
    V.field = W.field;
    V.window = window;
    std::map<DegreeVector, detail::SubsetBasis> basis;
    for (const auto& n : window.points()) {
        basis[n] = detail::SubsetBasis::at_degree(n, W.r);
        V.dims[n] = static_cast<int>(basis[n].tuples.size()) * W.dim;
    }
    init_structure(V);

    // image of a basis block under a map applied to factor j only
    auto moved_block = [&](const std::vector<int>& S, const std::vector<int>& img_of) {
        std::vector<int> moved;
        moved.reserve(S.size());
        for (int v : S)
            moved.push_back(img_of[static_cast<size_t>(v)]);
        std::vector<int> sorted = moved;
        std::sort(sorted.begin(), sorted.end());
        Perm tau(moved.size());
        for (size_t x = 0; x < moved.size(); ++x)
            tau[x] = static_cast<int>(
                std::lower_bound(sorted.begin(), sorted.end(), moved[x]) - sorted.begin());
        return std::pair{sorted, tau};
    };

    for (const auto& n : window.points()) {
        const auto& B = basis[n];
        if (B.tuples.empty())
            continue;
        for (int j = 0; j < V.m; ++j) {
            for (int i = 0; i + 1 < n[j]; ++i) {
                std::vector<int> img(static_cast<size_t>(n[j]));
                for (int v = 0; v < n[j]; ++v)
                    img[static_cast<size_t>(v)] = v;
                std::swap(img[static_cast<size_t>(i)], img[static_cast<size_t>(i) + 1]);
                Matrix& G = V.transp[n][static_cast<size_t>(j)][static_cast<size_t>(i)];
                for (int b = 0; b < static_cast<int>(B.tuples.size()); ++b) {
                    auto tup = B.tuples[static_cast<size_t>(b)];
                    auto [T, tau] = moved_block(tup[static_cast<size_t>(j)], img);
                    tup[static_cast<size_t>(j)] = T;
                    int tb = B.index.at(tup);
                    Matrix block = W.act_factor(j, tau);
                    for (int x = 0; x < W.dim; ++x)
                        for (int y = 0; y < W.dim; ++y)
                            if (block(x, y))
                                G(tb * W.dim + x, b * W.dim + y) = block(x, y);
                }
            }
            DegreeVector up = n + DegreeVector::unit(V.m, j);
            if (window.contains(up)) {
                const auto& Bup = basis[up];
                Matrix& G = *V.incl[n][static_cast<size_t>(j)];
                for (int b = 0; b < static_cast<int>(B.tuples.size()); ++b) {
                    int tb = Bup.index.at(B.tuples[static_cast<size_t>(b)]);
                    for (int x = 0; x < W.dim; ++x)
                        G(tb * W.dim + x, b * W.dim + x) = 1 % V.field.p;
                }
            }
        }
    }
    return V;
}

// The counit M(W) -> V attached to an equivariant map lift: W -> V_r:
// a subset tuple block S goes to transition(V, f_S) applied to the lift,
// where f_S is the order-preserving injection with image S.
inline ModuleMap induced_counit(const SymmetricGroupRep& W, const TruncatedModule& V,
                                const Matrix& lift)
{
    TruncatedModule MW = induced(W, V.window);
    ModuleMap eps(MW, V);
    for (const auto& n : V.window.points()) {
        auto B = detail::SubsetBasis::at_degree(n, W.r);
        Matrix& E = eps.at(n);
        for (int b = 0; b < static_cast<int>(B.tuples.size()); ++b) {
            InjectionTuple f;
            f.src = W.r;
            f.dst = n;
            f.images = B.tuples[static_cast<size_t>(b)];
            Matrix col = transition(V, f) * lift;
            for (int i = 0; i < col.rows(); ++i)
                for (int w = 0; w < W.dim; ++w)
                    if (col(i, w))
                        E(i, b * W.dim + w) = col(i, w);
        }
    }
    return eps;
}

// ----------------------------------------------------------------------------
// Shift functors
// ----------------------------------------------------------------------------

inline TruncatedModule shift(const TruncatedModule& V, const DegreeVector& a)
{
    if (!a.is_nonnegative())
        throw std::invalid_argument("shift: amount must be nonnegative");
    DegreeVector hi = V.window.hi - a;
    if (!hi.is_nonnegative())
        throw window_exhausted("shift: window would be empty", a);
    TruncatedModule S;
    S.m = V.m;
    S.field = V.field;
    S.window = Window::box(hi);
    for (const auto& n : S.window.points())
        S.dims[n] = V.dims.at(n + a);
    init_structure(S);
    for (const auto& n : S.window.points()) {
        for (int j = 0; j < V.m; ++j) {
            for (int i = 0; i + 1 < n[j]; ++i)
                S.transp[n][static_cast<size_t>(j)][static_cast<size_t>(i)] = V.act(n + a, j, i);
            DegreeVector up = n + DegreeVector::unit(V.m, j);
            if (S.window.contains(up))
                // the appended points stay appended: the step misses value n_j
                S.incl[n][static_cast<size_t>(j)] =
                    transition(V, InjectionTuple::skip_step(n + a, j, n[j]));
        }
    }
    return S;
}

// The canonical map V -> Sigma_a V given degreewise by the standard chain.
inline ModuleMap shift_unit(const TruncatedModule& V, const DegreeVector& a)
{
    TruncatedModule Sv = shift(V, a);
    ModuleMap phi(restrict_module(V, Sv.window.hi), Sv);
    for (const auto& n : phi.source().window.points()) {
        InjectionTuple f = InjectionTuple::identity(n);
        f.dst = n + a;
        phi.at(n) = transition(V, f);
    }
    return phi;
}

inline ModuleMap shift_unit_direction(const TruncatedModule& V, int j)
{
    return shift_unit(V, DegreeVector::unit(V.m, j));
}

// ----------------------------------------------------------------------------
// The left adjoint Ind_j of the shift Sigma_j. On points it is induction
// along S_{n-e_j} <= S_n; blocks are indexed by the insertion-cycle coset
// representatives, and all structure maps are block diagonal except the
// factor-j transpositions, which permute the blocks.
// ----------------------------------------------------------------------------

inline TruncatedModule induction_adjoint(const TruncatedModule& V, int dir)
{
    TruncatedModule A;
    A.m = V.m;
    A.field = V.field;
    A.window = V.window;
    DegreeVector e = DegreeVector::unit(V.m, dir);
    for (const auto& n : A.window.points())
        A.dims[n] = n[dir] >= 1 ? n[dir] * V.dims.at(n - e) : 0;
    init_structure(A);
    auto fill_block = [&](Matrix& M, const Matrix& B, int ro, int co) {
        for (int i = 0; i < B.rows(); ++i)
            for (int j = 0; j < B.cols(); ++j)
                if (B(i, j))
                    M(ro + i, co + j) = B(i, j);
    };
    for (const auto& n : A.window.points()) {
        if (n[dir] < 1)
            continue;
        DegreeVector base = n - e;
        int d = V.dims.at(base);
        int k = n[dir];
        for (int j = 0; j < V.m; ++j) {
            for (int i = 0; i + 1 < n[j]; ++i) {
                Matrix& G = A.transp[n][static_cast<size_t>(j)][static_cast<size_t>(i)];
                if (j != dir) {
                    const Matrix& g = V.act(base, j, i);
                    for (int t = 0; t < k; ++t)
                        fill_block(G, g, t * d, t * d);
                } else {
                    Perm s = identity_perm(k);
                    std::swap(s[static_cast<size_t>(i)], s[static_cast<size_t>(i) + 1]);
                    for (int t = 0; t < k; ++t) {
                        Perm sc = compose_perm(s, insertion_cycle(k, t));
                        int t2 = sc[static_cast<size_t>(k - 1)];
                        Perm rho = compose_perm(inverse_perm(insertion_cycle(k, t2)), sc);
                        if (rho[static_cast<size_t>(k - 1)] != k - 1)
                            throw std::logic_error("coset normalization failed");
                        rho.pop_back();
                        fill_block(G, V.act_perm(base, j, rho), t2 * d, t * d);
                    }
                }
            }
            DegreeVector up = n + DegreeVector::unit(V.m, j);
            if (A.window.contains(up)) {
                Matrix& G = *A.incl[n][static_cast<size_t>(j)];
                const Matrix& g = V.inclusion(base, j);
                int dup = V.dims.at(up - e);
                for (int t = 0; t < k; ++t)
                    fill_block(G, g, t * dup, t * d);
            }
        }
    }
    return A;
}

// ----------------------------------------------------------------------------
// The submodule generated by one degree: images of all transition maps out
// of V_r, realized as the symmetric-group saturation of the standard chain.
// ----------------------------------------------------------------------------

namespace detail {
inline Matrix saturate_under_action(const TruncatedModule& V, const DegreeVector& n, Matrix span)
{
    Matrix B = column_space_basis(span);
    while (true) {
        Matrix bigger = B;
        for (int j = 0; j < V.m; ++j)
            for (int i = 0; i + 1 < n[j]; ++i)
                bigger = hstack(bigger, V.act(n, j, i) * B);
        Matrix nb = column_space_basis(bigger);
        if (nb.cols() == B.cols())
            return B;
        B = nb;
    }
}
}  // namespace detail

inline SubmodulePresentation truncate_above(const TruncatedModule& V, const DegreeVector& r)
{
    if (!V.window.contains(r))
        throw std::invalid_argument("truncate_above: degree outside window");
    std::map<DegreeVector, Matrix> bases;
    for (const auto& n : V.window.points()) {
        if (!r.leq(n)) {
            bases[n] = Matrix::zero(V.dims.at(n), 0, V.field);
            continue;
        }
        InjectionTuple f = InjectionTuple::identity(r);
        f.dst = n;
        bases[n] = detail::saturate_under_action(V, n, transition(V, f));
    }
    return submodule_from_bases(V, bases);
}

// ----------------------------------------------------------------------------
// Hom spaces as naturality linear systems
// ----------------------------------------------------------------------------

inline int hom_space_dim(const TruncatedModule& V, const TruncatedModule& U)
{
    if (V.m != U.m || V.field != U.field || !(V.window == U.window))
        throw std::invalid_argument("hom_space_dim: incompatible modules");
    std::map<DegreeVector, int> offset;
    int total = 0;
    for (const auto& n : V.window.points()) {
        offset[n] = total;
        total += V.dims.at(n) * U.dims.at(n);
    }
    std::vector<std::vector<uint32_t>> rows;
    auto idx = [&](const DegreeVector& n, int i, int j) {
        return offset.at(n) + i * V.dims.at(n) + j;
    };
    auto add_intertwine = [&](const DegreeVector& n, const DegreeVector& n2, const Matrix& Ua,
                              const Matrix& Va) {
        // U_A * X_n - X_{n2} * V_A = 0
        int dUn2 = U.dims.at(n2), dVn = V.dims.at(n);
        for (int i = 0; i < dUn2; ++i)
            for (int j = 0; j < dVn; ++j) {
                std::vector<uint32_t> row(static_cast<size_t>(total), 0);
                for (int k = 0; k < U.dims.at(n); ++k)
                    if (Ua(i, k))
                        row[static_cast<size_t>(idx(n, k, j))] =
                            V.field.add(row[static_cast<size_t>(idx(n, k, j))], Ua(i, k));
                for (int l = 0; l < V.dims.at(n2); ++l)
                    if (Va(l, j))
                        row[static_cast<size_t>(idx(n2, i, l))] = V.field.sub(
                            row[static_cast<size_t>(idx(n2, i, l))], Va(l, j));
                rows.push_back(std::move(row));
            }
    };
    for (const auto& n : V.window.points()) {
        for (int j = 0; j < V.m; ++j)
            for (int i = 0; i + 1 < n[j]; ++i)
                add_intertwine(n, n, U.act(n, j, i), V.act(n, j, i));
        for (int j = 0; j < V.m; ++j) {
            DegreeVector up = n + DegreeVector::unit(V.m, j);
            if (V.window.contains(up))
                add_intertwine(n, up, U.inclusion(n, j), V.inclusion(n, j));
        }
    }
    Matrix A(static_cast<int>(rows.size()), total, V.field);
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < total; ++j)
            A(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
    return total - rank(A);
}

}  // namespace fimhom
