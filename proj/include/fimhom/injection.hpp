#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "fimhom/degree.hpp"

namespace fimhom {

// Permutations are stored in one-line notation with 0-based entries:
// perm[x] is the image of x.
using Perm = std::vector<int>;

inline Perm identity_perm(int n)
{
    Perm p(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        p[static_cast<size_t>(i)] = i;
    return p;
}

inline bool is_identity_perm(const Perm& p)
{
    for (int i = 0; i < static_cast<int>(p.size()); ++i)
        if (p[static_cast<size_t>(i)] != i)
            return false;
    return true;
}

inline Perm compose_perm(const Perm& f, const Perm& g)  // (f o g)(x) = f(g(x))
{
    Perm r(g.size());
    for (size_t x = 0; x < g.size(); ++x)
        r[x] = f[static_cast<size_t>(g[x])];
    return r;
}

inline Perm inverse_perm(const Perm& p)
{
    Perm r(p.size());
    for (size_t x = 0; x < p.size(); ++x)
        r[static_cast<size_t>(p[x])] = static_cast<int>(x);
    return r;
}

// Writes p as a composition of adjacent transpositions s_i = (i, i+1):
// p = s_{w[0]} o s_{w[1]} o ... o s_{w.back()}. Under a functor this means
// act(p) = A_{w[0]} * A_{w[1]} * ... * A_{w.back()}.
inline std::vector<int> adjacent_word(Perm p)
{
    std::vector<int> rec;
    bool moved = true;
    while (moved) {
        moved = false;
        for (int x = 0; x + 1 < static_cast<int>(p.size()); ++x) {
            if (p[static_cast<size_t>(x)] > p[static_cast<size_t>(x) + 1]) {
                std::swap(p[static_cast<size_t>(x)], p[static_cast<size_t>(x) + 1]);
                rec.push_back(x);
                moved = true;
            }
        }
    }
    std::reverse(rec.begin(), rec.end());
    return rec;
}

// The insertion cycle c_t on {0,...,k-1}: sends the top point k-1 to t and
// shifts t,...,k-2 up by one. These are the coset representatives of
// S_{k-1} inside S_k used by the induction functor.
inline Perm insertion_cycle(int k, int t)
{
    Perm c(static_cast<size_t>(k));
    for (int x = 0; x < t; ++x)
        c[static_cast<size_t>(x)] = x;
    for (int x = t; x < k - 1; ++x)
        c[static_cast<size_t>(x)] = x + 1;
    c[static_cast<size_t>(k - 1)] = t;
    return c;
}

// A morphism of FI^m: per factor, an injection [src_j] -> [dst_j] stored as
// its image list (0-based).
struct InjectionTuple {
    DegreeVector src;
    DegreeVector dst;
    std::vector<std::vector<int>> images;  // images[j][x] = f_j(x)

    int m() const { return src.size(); }

    static InjectionTuple identity(const DegreeVector& n)
    {
        InjectionTuple f;
        f.src = f.dst = n;
        f.images.resize(static_cast<size_t>(n.size()));
        for (int j = 0; j < n.size(); ++j) {
            f.images[static_cast<size_t>(j)].resize(static_cast<size_t>(n[j]));
            for (int x = 0; x < n[j]; ++x)
                f.images[static_cast<size_t>(j)][static_cast<size_t>(x)] = x;
        }
        return f;
    }

    // The standard one-step inclusion [n] -> [n + e_j] (identity on points).
    static InjectionTuple standard_step(const DegreeVector& n, int j)
    {
        InjectionTuple f = identity(n);
        f.dst = n + DegreeVector::unit(n.size(), j);
        return f;
    }

    // The order-preserving injection [k] -> [k+1] in factor j whose image
    // misses the value `missing` (0-based); identity in the other factors.
    static InjectionTuple skip_step(const DegreeVector& n, int j, int missing)
    {
        InjectionTuple f = identity(n);
        f.dst = n + DegreeVector::unit(n.size(), j);
        auto& im = f.images[static_cast<size_t>(j)];
        for (int x = 0; x < n[j]; ++x)
            im[static_cast<size_t>(x)] = x < missing ? x : x + 1;
        return f;
    }

    static InjectionTuple from_perm_tuple(const DegreeVector& n, const std::vector<Perm>& sigma)
    {
        InjectionTuple f;
        f.src = f.dst = n;
        f.images.assign(sigma.begin(), sigma.end());
        return f;
    }

    bool is_valid() const
    {
        if (static_cast<int>(images.size()) != m() || dst.size() != m())
            return false;
        for (int j = 0; j < m(); ++j) {
            const auto& im = images[static_cast<size_t>(j)];
            if (static_cast<int>(im.size()) != src[j])
                return false;
            std::vector<bool> seen(static_cast<size_t>(dst[j]), false);
            for (int v : im) {
                if (v < 0 || v >= dst[j] || seen[static_cast<size_t>(v)])
                    return false;
                seen[static_cast<size_t>(v)] = true;
            }
        }
        return true;
    }

    bool operator==(const InjectionTuple& o) const
    {
        return src == o.src && dst == o.dst && images == o.images;
    }
};

// Categorical composition f o g. Rejects mismatched shapes.
inline InjectionTuple compose(const InjectionTuple& f, const InjectionTuple& g)
{
    if (f.src != g.dst)
        throw std::invalid_argument("compose: target of g must equal source of f");
    InjectionTuple r;
    r.src = g.src;
    r.dst = f.dst;
    r.images.resize(static_cast<size_t>(f.m()));
    for (int j = 0; j < f.m(); ++j) {
        const auto& fj = f.images[static_cast<size_t>(j)];
        const auto& gj = g.images[static_cast<size_t>(j)];
        auto& rj = r.images[static_cast<size_t>(j)];
        rj.resize(gj.size());
        for (size_t x = 0; x < gj.size(); ++x)
            rj[x] = fj[static_cast<size_t>(gj[x])];
    }
    return r;
}

namespace detail {
inline void enumerate_factor(int a, int n, std::vector<int>& cur,
                             std::vector<bool>& used, std::vector<std::vector<int>>& out)
{
    if (static_cast<int>(cur.size()) == a) {
        out.push_back(cur);
        return;
    }
    for (int v = 0; v < n; ++v) {
        if (used[static_cast<size_t>(v)])
            continue;
        used[static_cast<size_t>(v)] = true;
        cur.push_back(v);
        enumerate_factor(a, n, cur, used, out);
        cur.pop_back();
        used[static_cast<size_t>(v)] = false;
    }
}
}  // namespace detail

// All of Hom_{FI^m}(a, n) in lexicographic order of image lists (factor 0
// outermost). Empty when no injections exist.
inline std::vector<InjectionTuple> enumerate_injections(const DegreeVector& a,
                                                        const DegreeVector& n)
{
    if (a.size() != n.size())
        throw std::invalid_argument("enumerate_injections: length mismatch");
    int m = a.size();
    std::vector<std::vector<std::vector<int>>> per_factor(static_cast<size_t>(m));
    for (int j = 0; j < m; ++j) {
        if (a[j] > n[j])
            return {};
        std::vector<int> cur;
        std::vector<bool> used(static_cast<size_t>(n[j]), false);
        detail::enumerate_factor(a[j], n[j], cur, used, per_factor[static_cast<size_t>(j)]);
    }
    std::vector<InjectionTuple> out;
    std::vector<size_t> idx(static_cast<size_t>(m), 0);
    while (true) {
        InjectionTuple f;
        f.src = a;
        f.dst = n;
        f.images.resize(static_cast<size_t>(m));
        for (int j = 0; j < m; ++j)
            f.images[static_cast<size_t>(j)] = per_factor[static_cast<size_t>(j)][idx[static_cast<size_t>(j)]];
        out.push_back(std::move(f));
        int j = m - 1;
        while (j >= 0 && idx[static_cast<size_t>(j)] + 1 == per_factor[static_cast<size_t>(j)].size()) {
            idx[static_cast<size_t>(j)] = 0;
            --j;
        }
        if (j < 0)
            break;
        ++idx[static_cast<size_t>(j)];
    }
    return out;
}

// f = sigma o (standard inclusion chain [a] -> [n]); sigma is the
// lexicographically least permutation tuple extending the image lists.
struct Factorization {
    std::vector<Perm> sigma;  // per factor, a permutation of [n_j]
    DegreeVector src;
    DegreeVector dst;
};

inline Factorization factorize(const InjectionTuple& f)
{
    if (!f.src.leq(f.dst))
        throw std::invalid_argument("factorize: source must be dominated by target");
    Factorization out;
    out.src = f.src;
    out.dst = f.dst;
    out.sigma.resize(static_cast<size_t>(f.m()));
    for (int j = 0; j < f.m(); ++j) {
        const auto& im = f.images[static_cast<size_t>(j)];
        Perm s;
        s.reserve(static_cast<size_t>(f.dst[j]));
        std::vector<bool> used(static_cast<size_t>(f.dst[j]), false);
        for (int v : im) {
            s.push_back(v);
            used[static_cast<size_t>(v)] = true;
        }
        for (int v = 0; v < f.dst[j]; ++v)
            if (!used[static_cast<size_t>(v)])
                s.push_back(v);
        out.sigma[static_cast<size_t>(j)] = std::move(s);
    }
    return out;
}

// Evaluates sigma o (standard chain) back into an injection; inverse of
// factorize up to equality of morphisms.
inline InjectionTuple evaluate_factorization(const Factorization& fac)
{
    InjectionTuple f;
    f.src = fac.src;
    f.dst = fac.dst;
    f.images.resize(static_cast<size_t>(fac.src.size()));
    for (int j = 0; j < fac.src.size(); ++j) {
        auto& im = f.images[static_cast<size_t>(j)];
        im.resize(static_cast<size_t>(fac.src[j]));
        for (int x = 0; x < fac.src[j]; ++x)
            im[static_cast<size_t>(x)] = fac.sigma[static_cast<size_t>(j)][static_cast<size_t>(x)];
    }
    return f;
}

}  // namespace fimhom
