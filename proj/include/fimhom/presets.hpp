#pragma once

#include <string>

#include "fimhom/module.hpp"

namespace fimhom {
namespace presets {

// The constant module: one-dimensional everywhere, all structure maps the
// identity (the induced module on the trivial representation at degree 0).
inline TruncatedModule constant(int m, FieldSpec F, Window window)
{
    return induced(SymmetricGroupRep::trivial(DegreeVector::zero(m), F), window);
}

// One-dimensional on the x-axis with identity transitions along it, zero
// elsewhere: an FI^2-module that is entirely B-torsion.
inline TruncatedModule paper_example_v(FieldSpec F, Window window)
{
    if (window.m() != 2)
        throw std::invalid_argument("paper-example-V is an FI^2 preset");
    TruncatedModule V;
    V.m = 2;
    V.field = F;
    V.window = window;
    for (const auto& n : window.points())
        V.dims[n] = n[1] == 0 ? 1 : 0;
    init_structure(V);
    uint32_t one = 1 % F.p;
    for (const auto& n : window.points()) {
        if (n[1] != 0)
            continue;
        for (int i = 0; i + 1 < n[0]; ++i)
            V.transp[n][0][static_cast<size_t>(i)](0, 0) = one;
        DegreeVector right = n + DegreeVector::unit(2, 0);
        if (window.contains(right))
            (*V.incl[n][0])(0, 0) = one;
        // the step in direction y lands in a zero space; nothing to set
    }
    return V;
}

// One-dimensional on y >= 1 with identity transitions among those degrees:
// the kernel of the presentation constant -> paper-example-V. Torsion-free
// but not semi-induced.
inline TruncatedModule paper_example_k(FieldSpec F, Window window)
{
    if (window.m() != 2)
        throw std::invalid_argument("paper-example-K is an FI^2 preset");
    TruncatedModule K;
    K.m = 2;
    K.field = F;
    K.window = window;
    for (const auto& n : window.points())
        K.dims[n] = n[1] >= 1 ? 1 : 0;
    init_structure(K);
    uint32_t one = 1 % F.p;
    for (const auto& n : window.points()) {
        if (n[1] < 1)
            continue;
        for (int j = 0; j < 2; ++j) {
            for (int i = 0; i + 1 < n[j]; ++i)
                K.transp[n][static_cast<size_t>(j)][static_cast<size_t>(i)](0, 0) = one;
            DegreeVector up = n + DegreeVector::unit(2, j);
            if (window.contains(up))
                (*K.incl[n][static_cast<size_t>(j)])(0, 0) = one;
        }
    }
    return K;
}

// One-dimensional at a single degree; every transition map is zero.
inline TruncatedModule point(const DegreeVector& at, FieldSpec F, Window window)
{
    if (!window.contains(at))
        throw std::invalid_argument("point: degree outside window");
    TruncatedModule P;
    P.m = at.size();
    P.field = F;
    P.window = window;
    for (const auto& n : window.points())
        P.dims[n] = n == at ? 1 : 0;
    init_structure(P);
    uint32_t one = 1 % F.p;
    for (int j = 0; j < P.m; ++j)
        for (int i = 0; i + 1 < at[j]; ++i)
            P.transp[at][static_cast<size_t>(j)][static_cast<size_t>(i)](0, 0) = one;
    return P;
}

// Accepted names: constant | paper-example-V | paper-example-K |
// point(n1,...,nm) | induced(trivial@r1,...,rm) | induced(sign@...) |
// induced(regular@...).
inline TruncatedModule by_name(const std::string& name, FieldSpec F, Window window)
{
    auto parse_vec = [&](const std::string& s) {
        std::vector<int> v;
        std::string cur;
        for (char c : s + ",") {
            if (c == ',') {
                if (cur.empty())
                    throw std::invalid_argument("bad degree vector in preset name: " + s);
                v.push_back(std::stoi(cur));
                cur.clear();
            } else {
                cur += c;
            }
        }
        return DegreeVector(v);
    };
    if (name == "constant")
        return constant(window.m(), F, window);
    if (name == "paper-example-V")
        return paper_example_v(F, window);
    if (name == "paper-example-K")
        return paper_example_k(F, window);
    if (name.rfind("point(", 0) == 0 && name.back() == ')')
        return point(parse_vec(name.substr(6, name.size() - 7)), F, window);
    if (name.rfind("induced(", 0) == 0 && name.back() == ')') {
        std::string body = name.substr(8, name.size() - 9);
        auto at = body.find('@');
        if (at == std::string::npos)
            throw std::invalid_argument("induced preset needs the form induced(kind@r1,...,rm)");
        std::string kind = body.substr(0, at);
        DegreeVector r = parse_vec(body.substr(at + 1));
        if (r.size() != window.m())
            throw std::invalid_argument("preset degree length does not match the window");
        SymmetricGroupRep W;
        if (kind == "trivial")
            W = SymmetricGroupRep::trivial(r, F);
        else if (kind == "sign")
            W = SymmetricGroupRep::one_dimensional(
                r, std::vector<bool>(static_cast<size_t>(r.size()), true), F);
        else if (kind == "regular")
            W = SymmetricGroupRep::regular(r, F);
        else
            throw std::invalid_argument("unknown induced preset kind: " + kind);
        return induced(W, window);
    }
    throw std::invalid_argument("unknown preset: " + name);
}

}  // namespace presets
}  // namespace fimhom
