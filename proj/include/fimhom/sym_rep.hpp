#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "fimhom/degree.hpp"
#include "fimhom/injection.hpp"
#include "fimhom/matrix.hpp"

namespace fimhom {

// A representation of the product symmetric group S_r = S_{r_1} x ... x S_{r_m},
// stored through the matrices of the adjacent transpositions of each factor.
struct SymmetricGroupRep {
    DegreeVector r;
    int dim = 0;
    FieldSpec field;
    // gens[j][i]: action of the transposition (i, i+1) inside factor j,
    // 0 <= i <= r_j - 2.
    std::vector<std::vector<Matrix>> gens;

    int m() const { return r.size(); }

    static SymmetricGroupRep trivial(const DegreeVector& deg, FieldSpec F)
    {
        return one_dimensional(deg, std::vector<bool>(static_cast<size_t>(deg.size()), false), F);
    }

    // One-dimensional representation: each factor acts trivially or by sign.
    static SymmetricGroupRep one_dimensional(const DegreeVector& deg,
                                             const std::vector<bool>& sign_in_factor, FieldSpec F)
    {
        SymmetricGroupRep W;
        W.r = deg;
        W.dim = 1;
        W.field = F;
        W.gens.resize(static_cast<size_t>(deg.size()));
        for (int j = 0; j < deg.size(); ++j) {
            Matrix g(1, 1, F);
            g(0, 0) = sign_in_factor[static_cast<size_t>(j)] ? F.neg(1 % F.p) : 1 % F.p;
            W.gens[static_cast<size_t>(j)].assign(static_cast<size_t>(std::max(deg[j] - 1, 0)), g);
        }
        return W;
    }

    // The regular representation of S_r (dimension prod r_j!).
    static SymmetricGroupRep regular(const DegreeVector& deg, FieldSpec F)
    {
        std::vector<std::vector<Perm>> groups(static_cast<size_t>(deg.size()));
        for (int j = 0; j < deg.size(); ++j) {
            Perm p = identity_perm(deg[j]);
            do {
                groups[static_cast<size_t>(j)].push_back(p);
            } while (std::next_permutation(p.begin(), p.end()));
        }
        std::vector<std::vector<Perm>> basis;  // tuples of permutations, lex order
        std::vector<size_t> idx(static_cast<size_t>(deg.size()), 0);
        while (true) {
            std::vector<Perm> tup;
            for (int j = 0; j < deg.size(); ++j)
                tup.push_back(groups[static_cast<size_t>(j)][idx[static_cast<size_t>(j)]]);
            basis.push_back(std::move(tup));
            int j = deg.size() - 1;
            while (j >= 0 && idx[static_cast<size_t>(j)] + 1 == groups[static_cast<size_t>(j)].size()) {
                idx[static_cast<size_t>(j)] = 0;
                --j;
            }
            if (j < 0)
                break;
            ++idx[static_cast<size_t>(j)];
        }
        auto index_of = [&](const std::vector<Perm>& tup) {
            auto it = std::lower_bound(basis.begin(), basis.end(), tup);
            return static_cast<int>(it - basis.begin());
        };
        SymmetricGroupRep W;
        W.r = deg;
        W.dim = static_cast<int>(basis.size());
        W.field = F;
        W.gens.resize(static_cast<size_t>(deg.size()));
        for (int j = 0; j < deg.size(); ++j) {
            for (int i = 0; i + 1 < deg[j]; ++i) {
                Perm s = identity_perm(deg[j]);
                std::swap(s[static_cast<size_t>(i)], s[static_cast<size_t>(i) + 1]);
                Matrix g(W.dim, W.dim, F);
                for (int b = 0; b < W.dim; ++b) {
                    std::vector<Perm> tup = basis[static_cast<size_t>(b)];
                    tup[static_cast<size_t>(j)] = compose_perm(s, tup[static_cast<size_t>(j)]);
                    g(index_of(tup), b) = 1 % F.p;
                }
                W.gens[static_cast<size_t>(j)].push_back(std::move(g));
            }
        }
        return W;
    }

    // Action of one factor's permutation, assembled from the generator word.
    Matrix act_factor(int j, const Perm& p) const
    {
        Matrix A = Matrix::identity(dim, field);
        for (int i : adjacent_word(p))
            A = A * gens[static_cast<size_t>(j)][static_cast<size_t>(i)];
        return A;
    }

    // Action of a full permutation tuple (factors commute).
    Matrix act(const std::vector<Perm>& tuple) const
    {
        Matrix A = Matrix::identity(dim, field);
        for (int j = 0; j < m(); ++j)
            A = A * act_factor(j, tuple[static_cast<size_t>(j)]);
        return A;
    }

    // Restriction to S_{r - e_j}: drop the last point of factor j.
    SymmetricGroupRep restricted(int j) const
    {
        if (r[j] < 1)
            throw std::invalid_argument("restricted: factor already empty");
        SymmetricGroupRep W = *this;
        W.r = r - DegreeVector::unit(m(), j);
        auto& g = W.gens[static_cast<size_t>(j)];
        if (!g.empty())
            g.pop_back();
        return W;
    }

    SymmetricGroupRep conjugated(const Matrix& P) const
    {
        auto Pinv = inverse(P);
        if (!Pinv || P.rows() != dim)
            throw std::invalid_argument("conjugated: need an invertible dim x dim matrix");
        SymmetricGroupRep W = *this;
        for (auto& fac : W.gens)
            for (auto& g : fac)
                g = P * g * *Pinv;
        return W;
    }

    friend SymmetricGroupRep direct_sum(const SymmetricGroupRep& A, const SymmetricGroupRep& B)
    {
        if (A.r != B.r || A.field != B.field)
            throw std::invalid_argument("direct_sum: representations of different groups");
        SymmetricGroupRep W;
        W.r = A.r;
        W.dim = A.dim + B.dim;
        W.field = A.field;
        W.gens.resize(static_cast<size_t>(A.m()));
        for (int j = 0; j < A.m(); ++j) {
            for (size_t i = 0; i < A.gens[static_cast<size_t>(j)].size(); ++i) {
                Matrix g(W.dim, W.dim, W.field);
                const Matrix& a = A.gens[static_cast<size_t>(j)][i];
                const Matrix& b = B.gens[static_cast<size_t>(j)][i];
                for (int x = 0; x < A.dim; ++x)
                    for (int y = 0; y < A.dim; ++y)
                        g(x, y) = a(x, y);
                for (int x = 0; x < B.dim; ++x)
                    for (int y = 0; y < B.dim; ++y)
                        g(A.dim + x, A.dim + y) = b(x, y);
                W.gens[static_cast<size_t>(j)].push_back(std::move(g));
            }
        }
        return W;
    }

    // Coxeter relations within every factor plus commutation across factors.
    std::vector<std::string> validate() const
    {
        std::vector<std::string> bad;
        Matrix I = Matrix::identity(dim, field);
        for (int j = 0; j < m(); ++j) {
            const auto& g = gens[static_cast<size_t>(j)];
            if (static_cast<int>(g.size()) != std::max(r[j] - 1, 0))
                bad.push_back("factor " + std::to_string(j) + ": wrong generator count");
            for (size_t i = 0; i < g.size(); ++i) {
                if (g[i].rows() != dim || g[i].cols() != dim) {
                    bad.push_back("factor " + std::to_string(j) + ": bad generator shape");
                    continue;
                }
                if (g[i] * g[i] != I)
                    bad.push_back("factor " + std::to_string(j) + " s" + std::to_string(i) +
                                  ": not an involution");
            }
            for (size_t i = 0; i + 1 < g.size(); ++i)
                if (g[i] * (g[i + 1] * g[i]) != g[i + 1] * (g[i] * g[i + 1]))
                    bad.push_back("factor " + std::to_string(j) + " s" + std::to_string(i) +
                                  ": braid relation fails");
            for (size_t i = 0; i < g.size(); ++i)
                for (size_t l = i + 2; l < g.size(); ++l)
                    if (g[i] * g[l] != g[l] * g[i])
                        bad.push_back("factor " + std::to_string(j) + ": distant generators " +
                                      std::to_string(i) + "," + std::to_string(l) +
                                      " do not commute");
        }
        for (int j = 0; j < m(); ++j)
            for (int l = j + 1; l < m(); ++l)
                for (const auto& a : gens[static_cast<size_t>(j)])
                    for (const auto& b : gens[static_cast<size_t>(l)])
                        if (a * b != b * a)
                            bad.push_back("factors " + std::to_string(j) + "," + std::to_string(l) +
                                          " do not commute");
        return bad;
    }
};

}  // namespace fimhom
