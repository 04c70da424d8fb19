#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fimhom {

// A multidegree: a point of Z^m. Module degrees live in N^m; regularity
// searches range over all of Z^m.
struct DegreeVector {
    std::vector<int> coords;

    DegreeVector() = default;
    explicit DegreeVector(std::vector<int> c) : coords(std::move(c)) {}
    DegreeVector(std::initializer_list<int> c) : coords(c) {}

    static DegreeVector zero(int m) { return DegreeVector(std::vector<int>(m, 0)); }
    static DegreeVector constant(int m, int v) { return DegreeVector(std::vector<int>(m, v)); }
    static DegreeVector unit(int m, int j)
    {
        DegreeVector e = zero(m);
        e.coords.at(j) = 1;
        return e;
    }

    int size() const { return static_cast<int>(coords.size()); }
    int operator[](int j) const { return coords[static_cast<size_t>(j)]; }
    int& operator[](int j) { return coords[static_cast<size_t>(j)]; }

    // |r|: sum of coordinates.
    int total() const { return std::accumulate(coords.begin(), coords.end(), 0); }

    bool is_nonnegative() const
    {
        return std::all_of(coords.begin(), coords.end(), [](int c) { return c >= 0; });
    }
    bool is_positive() const
    {
        return std::all_of(coords.begin(), coords.end(), [](int c) { return c > 0; });
    }

    friend DegreeVector operator+(const DegreeVector& a, const DegreeVector& b)
    {
        DegreeVector r = a;
        for (int j = 0; j < r.size(); ++j)
            r[j] += b[j];
        return r;
    }
    friend DegreeVector operator-(const DegreeVector& a, const DegreeVector& b)
    {
        DegreeVector r = a;
        for (int j = 0; j < r.size(); ++j)
            r[j] -= b[j];
        return r;
    }
    DegreeVector scaled(int k) const
    {
        DegreeVector r = *this;
        for (int& c : r.coords)
            c *= k;
        return r;
    }

    bool operator==(const DegreeVector& o) const { return coords == o.coords; }
    bool operator!=(const DegreeVector& o) const { return coords != o.coords; }
    // Lexicographic order; used for deterministic iteration and map keys.
    bool operator<(const DegreeVector& o) const { return coords < o.coords; }

    // Componentwise dominance order.
    bool leq(const DegreeVector& o) const
    {
        for (int j = 0; j < size(); ++j)
            if (coords[static_cast<size_t>(j)] > o[j])
                return false;
        return true;
    }
    bool geq(const DegreeVector& o) const { return o.leq(*this); }
    // Strict dominance: o <= this and o != this, i.e. this lies in
    // union_j (o + e_j + N^m).
    bool strictly_dominates(const DegreeVector& o) const { return o.leq(*this) && o != *this; }

    std::string str() const
    {
        std::ostringstream os;
        for (int j = 0; j < size(); ++j) {
            if (j)
                os << ',';
            os << coords[static_cast<size_t>(j)];
        }
        return os.str();
    }
};

inline DegreeVector componentwise_max(const DegreeVector& a, const DegreeVector& b)
{
    DegreeVector r = a;
    for (int j = 0; j < r.size(); ++j)
        r[j] = std::max(r[j], b[j]);
    return r;
}

inline DegreeVector componentwise_min(const DegreeVector& a, const DegreeVector& b)
{
    DegreeVector r = a;
    for (int j = 0; j < r.size(); ++j)
        r[j] = std::min(r[j], b[j]);
    return r;
}

// A rectangular box [lo, hi] in Z^m. Modules are stored on boxes with lo = 0;
// regularity searches use boxes with negative lower corners.
struct Window {
    DegreeVector lo;
    DegreeVector hi;

    Window() = default;
    Window(DegreeVector l, DegreeVector h) : lo(std::move(l)), hi(std::move(h))
    {
        if (lo.size() != hi.size())
            throw std::invalid_argument("window corners have different lengths");
        if (!lo.leq(hi))
            throw std::invalid_argument("empty window: lo !<= hi");
    }
    // The module window [0, hi].
    static Window box(DegreeVector h)
    {
        if (!h.is_nonnegative())
            throw std::invalid_argument("module window upper corner must be nonnegative");
        DegreeVector lo = DegreeVector::zero(h.size());
        return Window(std::move(lo), std::move(h));
    }

    int m() const { return lo.size(); }
    bool contains(const DegreeVector& v) const { return lo.leq(v) && v.leq(hi); }
    bool contains_box(const Window& w) const { return contains(w.lo) && contains(w.hi); }

    long long cell_count() const
    {
        long long n = 1;
        for (int j = 0; j < m(); ++j)
            n *= (hi[j] - lo[j] + 1);
        return n;
    }

    // All lattice points of the box in lexicographic order.
    std::vector<DegreeVector> points() const
    {
        std::vector<DegreeVector> out;
        out.reserve(static_cast<size_t>(cell_count()));
        DegreeVector cur = lo;
        while (true) {
            out.push_back(cur);
            int j = m() - 1;
            while (j >= 0 && cur[j] == hi[j]) {
                cur[j] = lo[j];
                --j;
            }
            if (j < 0)
                break;
            ++cur[j];
        }
        return out;
    }

    bool operator==(const Window& o) const { return lo == o.lo && hi == o.hi; }
};

inline Window intersect(const Window& a, const Window& b)
{
    return Window(componentwise_max(a.lo, b.lo), componentwise_min(a.hi, b.hi));
}

inline bool windows_intersect(const Window& a, const Window& b)
{
    return componentwise_max(a.lo, b.lo).leq(componentwise_min(a.hi, b.hi));
}

// Raised when a computation needs degrees outside the stored window.
struct window_exhausted : std::runtime_error {
    DegreeVector largest_attempt;
    explicit window_exhausted(const std::string& what, DegreeVector attempt = {})
        : std::runtime_error(what), largest_attempt(std::move(attempt))
    {
    }
};

}  // namespace fimhom
