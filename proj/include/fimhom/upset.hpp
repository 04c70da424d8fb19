#pragma once

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <vector>

#include "fimhom/degree.hpp"

namespace fimhom {

// An upward-closed subset of Z^m, stored as the antichain of its minimal
// elements together with the box on which membership was verified.
struct UpSet {
    Window window;
    std::vector<DegreeVector> antichain;  // pairwise incomparable, sorted lex

    bool contains(const DegreeVector& v) const
    {
        for (const auto& a : antichain)
            if (a.leq(v))
                return true;
        return false;
    }

    bool covers_window() const
    {
        return antichain.size() == 1 && antichain[0] == window.lo;
    }
};

namespace detail {
inline std::vector<DegreeVector> antichain_reduce(std::vector<DegreeVector> pts)
{
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    std::vector<DegreeVector> out;
    for (const auto& p : pts) {
        bool dominated = false;
        for (const auto& q : pts)
            if (q != p && q.leq(p)) {
                dominated = true;
                break;
            }
        if (!dominated)
            out.push_back(p);
    }
    return out;
}
}  // namespace detail

struct upward_closure_violation : std::invalid_argument {
    DegreeVector inside, outside;
    upward_closure_violation(DegreeVector in, DegreeVector out)
        : std::invalid_argument("predicate is not upward closed: true at " + in.str() +
                                " but false at " + out.str()),
          inside(std::move(in)),
          outside(std::move(out))
    {
    }
};

// Scans the window, verifies upward-closedness exactly on the box (a witness
// pair is reported otherwise), and extracts the antichain of minimal points.
inline UpSet upset_from_predicate(const Window& window,
                                  const std::function<bool(const DegreeVector&)>& pred)
{
    std::vector<DegreeVector> trues;
    for (const auto& v : window.points())
        if (pred(v))
            trues.push_back(v);
    for (const auto& v : trues)
        for (int j = 0; j < window.m(); ++j) {
            DegreeVector up = v + DegreeVector::unit(window.m(), j);
            if (window.contains(up) && !pred(up))
                throw upward_closure_violation(v, up);
        }
    return {window, detail::antichain_reduce(std::move(trues))};
}

inline UpSet upset_intersect(const UpSet& a, const UpSet& b)
{
    if (!windows_intersect(a.window, b.window))
        throw std::invalid_argument("upset_intersect: windows do not meet");
    std::vector<DegreeVector> mins;
    for (const auto& p : a.antichain)
        for (const auto& q : b.antichain)
            mins.push_back(componentwise_max(p, q));
    return {intersect(a.window, b.window), detail::antichain_reduce(std::move(mins))};
}

inline UpSet upset_translate(const UpSet& s, const DegreeVector& t)
{
    UpSet out;
    out.window = Window(s.window.lo + t, s.window.hi + t);
    for (const auto& p : s.antichain)
        out.antichain.push_back(p + t);
    return out;
}

// Restrict the upset to a smaller box, re-extracting minimal elements that
// fall inside it (elements below the box clamp onto its lower corner).
inline UpSet upset_clip(const UpSet& s, const Window& box)
{
    std::vector<DegreeVector> mins;
    for (const auto& p : s.antichain) {
        DegreeVector q = componentwise_max(p, box.lo);
        if (q.leq(box.hi) && p.leq(q))
            mins.push_back(q);
    }
    return {box, detail::antichain_reduce(std::move(mins))};
}

}  // namespace fimhom
