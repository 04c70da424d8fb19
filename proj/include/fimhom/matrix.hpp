#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fimhom/field.hpp"

namespace fimhom {

// Dense row-major matrix over a prime field. All entries stay reduced mod p.
// Row reduction always pivots on the lexicographically first nonzero column,
// so every derived basis (kernels, column spaces, quotients) is reproducible.
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols, FieldSpec f)
        : rows_(rows), cols_(cols), field_(f), a_(static_cast<size_t>(rows) * cols, 0)
    {
        if (rows < 0 || cols < 0)
            throw std::invalid_argument("negative matrix dimension");
    }

    static Matrix identity(int n, FieldSpec f)
    {
        Matrix m(n, n, f);
        for (int i = 0; i < n; ++i)
            m(i, i) = 1 % f.p;
        return m;
    }
    static Matrix zero(int rows, int cols, FieldSpec f) { return Matrix(rows, cols, f); }
    static Matrix from_rows(const std::vector<std::vector<long long>>& rows, FieldSpec f)
    {
        int r = static_cast<int>(rows.size());
        int c = r ? static_cast<int>(rows[0].size()) : 0;
        Matrix m(r, c, f);
        for (int i = 0; i < r; ++i) {
            if (static_cast<int>(rows[static_cast<size_t>(i)].size()) != c)
                throw std::invalid_argument("ragged matrix literal");
            for (int j = 0; j < c; ++j)
                m(i, j) = f.reduce(rows[static_cast<size_t>(i)][static_cast<size_t>(j)]);
        }
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const FieldSpec& field() const { return field_; }

    uint32_t operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }
    uint32_t& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }

    bool is_zero() const
    {
        for (uint32_t v : a_)
            if (v)
                return false;
        return true;
    }

    bool operator==(const Matrix& o) const
    {
        return rows_ == o.rows_ && cols_ == o.cols_ && field_ == o.field_ && a_ == o.a_;
    }
    bool operator!=(const Matrix& o) const { return !(*this == o); }

    friend Matrix operator*(const Matrix& A, const Matrix& B)
    {
        if (A.cols_ != B.rows_ || A.field_ != B.field_)
            throw std::invalid_argument("matrix product shape/field mismatch");
        Matrix C(A.rows_, B.cols_, A.field_);
        const uint64_t p = A.field_.p;
        for (int i = 0; i < A.rows_; ++i) {
            for (int k = 0; k < A.cols_; ++k) {
                uint64_t aik = A(i, k);
                if (!aik)
                    continue;  // structure maps are often block-sparse
                uint32_t* crow = &C.a_[static_cast<size_t>(i) * C.cols_];
                const uint32_t* brow = &B.a_[static_cast<size_t>(k) * B.cols_];
                for (int j = 0; j < B.cols_; ++j) {
                    if (brow[j])
                        crow[j] = static_cast<uint32_t>((crow[j] + aik * brow[j]) % p);
                }
            }
        }
        return C;
    }

    friend Matrix operator+(const Matrix& A, const Matrix& B)
    {
        if (A.rows_ != B.rows_ || A.cols_ != B.cols_ || A.field_ != B.field_)
            throw std::invalid_argument("matrix sum shape/field mismatch");
        Matrix C = A;
        for (size_t i = 0; i < C.a_.size(); ++i)
            C.a_[i] = A.field_.add(C.a_[i], B.a_[i]);
        return C;
    }
    friend Matrix operator-(const Matrix& A, const Matrix& B)
    {
        if (A.rows_ != B.rows_ || A.cols_ != B.cols_ || A.field_ != B.field_)
            throw std::invalid_argument("matrix difference shape/field mismatch");
        Matrix C = A;
        for (size_t i = 0; i < C.a_.size(); ++i)
            C.a_[i] = A.field_.sub(C.a_[i], B.a_[i]);
        return C;
    }

    Matrix negated() const
    {
        Matrix C = *this;
        for (uint32_t& v : C.a_)
            v = field_.neg(v);
        return C;
    }

    Matrix scaled(uint32_t c) const
    {
        Matrix C = *this;
        for (uint32_t& v : C.a_)
            v = field_.mul(v, c);
        return C;
    }

    Matrix transposed() const
    {
        Matrix T(cols_, rows_, field_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j)
                T(j, i) = (*this)(i, j);
        return T;
    }

    Matrix columns(const std::vector<int>& idx) const
    {
        Matrix C(rows_, static_cast<int>(idx.size()), field_);
        for (int j = 0; j < C.cols_; ++j)
            for (int i = 0; i < rows_; ++i)
                C(i, j) = (*this)(i, idx[static_cast<size_t>(j)]);
        return C;
    }

    friend Matrix hstack(const Matrix& A, const Matrix& B)
    {
        if (A.rows_ != B.rows_ || A.field_ != B.field_)
            throw std::invalid_argument("hstack row/field mismatch");
        Matrix C(A.rows_, A.cols_ + B.cols_, A.field_);
        for (int i = 0; i < A.rows_; ++i) {
            for (int j = 0; j < A.cols_; ++j)
                C(i, j) = A(i, j);
            for (int j = 0; j < B.cols_; ++j)
                C(i, A.cols_ + j) = B(i, j);
        }
        return C;
    }

private:
    int rows_ = 0;
    int cols_ = 0;
    FieldSpec field_;
    std::vector<uint32_t> a_;
};

// Reduced row echelon form together with the pivot columns.
struct Echelon {
    Matrix rref;
    std::vector<int> pivot_cols;
    int rank = 0;
};

inline Echelon row_reduce(Matrix M)
{
    const FieldSpec F = M.field();
    Echelon e{M, {}, 0};
    Matrix& R = e.rref;
    int r = 0;
    for (int c = 0; c < R.cols() && r < R.rows(); ++c) {
        int piv = -1;
        for (int i = r; i < R.rows(); ++i)
            if (R(i, c)) {
                piv = i;
                break;
            }
        if (piv < 0)
            continue;
        if (piv != r)
            for (int j = c; j < R.cols(); ++j)
                std::swap(R(r, j), R(piv, j));
        uint32_t inv = F.inv(R(r, c));
        for (int j = c; j < R.cols(); ++j)
            R(r, j) = F.mul(R(r, j), inv);
        for (int i = 0; i < R.rows(); ++i) {
            if (i == r || !R(i, c))
                continue;
            uint32_t f = R(i, c);
            for (int j = c; j < R.cols(); ++j)
                R(i, j) = F.sub(R(i, j), F.mul(f, R(r, j)));
        }
        e.pivot_cols.push_back(c);
        ++r;
    }
    e.rank = r;
    return e;
}

struct RankProfile {
    int rank;
    std::vector<int> pivot_columns;
};

// rank + the lexicographically first independent column set.
inline RankProfile rank_profile(const Matrix& M)
{
    Echelon e = row_reduce(M);
    return {e.rank, e.pivot_cols};
}

inline int rank(const Matrix& M) { return row_reduce(M).rank; }

// Columns form a basis of the null space; M * K == 0 exactly and the number
// of columns equals cols - rank (rank-nullity by construction).
inline Matrix kernel_basis(const Matrix& M)
{
    const FieldSpec F = M.field();
    Echelon e = row_reduce(M);
    std::vector<bool> is_pivot(static_cast<size_t>(M.cols()), false);
    for (int c : e.pivot_cols)
        is_pivot[static_cast<size_t>(c)] = true;
    int nullity = M.cols() - e.rank;
    Matrix K(M.cols(), nullity, F);
    int k = 0;
    for (int c = 0; c < M.cols(); ++c) {
        if (is_pivot[static_cast<size_t>(c)])
            continue;
        K(c, k) = 1 % F.p;
        for (int i = 0; i < e.rank; ++i)
            K(e.pivot_cols[static_cast<size_t>(i)], k) = F.neg(e.rref(i, c));
        ++k;
    }
    assert(k == nullity);
    return K;
}

// Solves A X = B; returns nothing when the system is inconsistent. Free
// variables are set to zero, so the solution is deterministic.
inline std::optional<Matrix> solve(const Matrix& A, const Matrix& B)
{
    if (A.rows() != B.rows() || A.field() != B.field())
        throw std::invalid_argument("solve shape/field mismatch");
    Echelon e = row_reduce(hstack(A, B));
    for (int c : e.pivot_cols)
        if (c >= A.cols())
            return std::nullopt;  // pivot in the augmented part: inconsistent
    Matrix X(A.cols(), B.cols(), A.field());
    for (int i = 0; i < static_cast<int>(e.pivot_cols.size()); ++i) {
        int c = e.pivot_cols[static_cast<size_t>(i)];
        for (int j = 0; j < B.cols(); ++j)
            X(c, j) = e.rref(i, A.cols() + j);
    }
    return X;
}

inline std::optional<Matrix> inverse(const Matrix& A)
{
    if (A.rows() != A.cols())
        return std::nullopt;
    auto X = solve(A, Matrix::identity(A.rows(), A.field()));
    if (!X)
        return std::nullopt;
    if (rank(A) != A.rows())
        return std::nullopt;
    return X;
}

// The pivot columns of M, as a deterministic basis of the column space.
inline Matrix column_space_basis(const Matrix& M)
{
    return M.columns(row_reduce(M).pivot_cols);
}

// Does every column of X lie in the column space of B?
inline bool columns_contained(const Matrix& B, const Matrix& X)
{
    return solve(B, X).has_value();
}

// The quotient of an ambient space by the column span of `subspace`:
// a surjection `projection` with kernel exactly the subspace, and the
// deterministic section picking out the non-pivot coordinates.
struct QuotientSpace {
    int quotient_dim;
    Matrix projection;  // quotient_dim x ambient
    Matrix section;     // ambient x quotient_dim; projection * section == I
};

inline QuotientSpace quotient_space(const Matrix& subspace, int ambient_dim)
{
    const FieldSpec F = subspace.field();
    if (subspace.rows() != ambient_dim)
        throw std::invalid_argument("subspace does not live in the ambient space");
    Echelon e = row_reduce(subspace.transposed());
    std::vector<bool> is_pivot(static_cast<size_t>(ambient_dim), false);
    for (int c : e.pivot_cols)
        is_pivot[static_cast<size_t>(c)] = true;
    int q = ambient_dim - e.rank;
    Matrix P(q, ambient_dim, F), S(ambient_dim, q, F);
    int k = 0;
    for (int c = 0; c < ambient_dim; ++c) {
        if (is_pivot[static_cast<size_t>(c)])
            continue;
        P(k, c) = 1 % F.p;
        for (int i = 0; i < e.rank; ++i)
            P(k, e.pivot_cols[static_cast<size_t>(i)]) = F.neg(e.rref(i, c));
        S(c, k) = 1 % F.p;
        ++k;
    }
    assert(k == q);
    return {q, P, S};
}

// Quotient calculus: quotient the domain of `map` by `subspace`, the codomain
// by `target_subspace`, and form the induced map on the quotients. Rejects
// the input when the map does not carry the subspace into the target subspace
// (the induced map would not be well defined).
struct QuotientCalculus {
    int quotient_dim;
    Matrix projection;
    Matrix induced_map;
};

inline QuotientCalculus quotient_calculus(const Matrix& map, const Matrix& subspace,
                                          const Matrix& target_subspace)
{
    QuotientSpace src = quotient_space(subspace, map.cols());
    QuotientSpace dst = quotient_space(target_subspace, map.rows());
    Matrix carried = dst.projection * (map * subspace);
    if (!carried.is_zero())
        throw std::invalid_argument(
            "quotient_calculus: map does not carry the subspace into the target subspace");
    Matrix induced = dst.projection * (map * src.section);
    return {src.quotient_dim, src.projection, induced};
}

namespace detail {

// Sparse rank for the large, very sparse differentials that show up in
// Koszul complexes. Pivots are chosen Markowitz-style (scarcest column,
// then shortest row) to limit fill; if the active part densifies anyway the
// routine finishes with dense elimination. Rank is basis independent, and
// the pivot choice below is deterministic.
struct SparseTriplet {
    int row, col;
    uint32_t val;
};

inline int sparse_rank(int nrows, int ncols, const std::vector<SparseTriplet>& trips, FieldSpec F)
{
    if (nrows == 0 || ncols == 0)
        return 0;
    using Entry = std::pair<int, uint32_t>;  // (col, val), rows kept sorted by col
    std::vector<std::vector<Entry>> row(static_cast<size_t>(nrows));
    {
        std::vector<std::vector<SparseTriplet>> per_row(static_cast<size_t>(nrows));
        for (const auto& t : trips) {
            uint32_t v = t.val % F.p;
            if (v)
                per_row[static_cast<size_t>(t.row)].push_back({t.row, t.col, v});
        }
        for (int r = 0; r < nrows; ++r) {
            auto& v = per_row[static_cast<size_t>(r)];
            std::sort(v.begin(), v.end(),
                      [](const SparseTriplet& a, const SparseTriplet& b) { return a.col < b.col; });
            auto& out = row[static_cast<size_t>(r)];
            for (const auto& t : v) {
                if (!out.empty() && out.back().first == t.col)
                    out.back().second = F.add(out.back().second, t.val);
                else
                    out.push_back({t.col, t.val});
            }
            out.erase(std::remove_if(out.begin(), out.end(),
                                     [](const Entry& e) { return e.second == 0; }),
                      out.end());
        }
    }

    std::vector<int> col_nnz(static_cast<size_t>(ncols), 0);
    std::vector<std::vector<int>> col_rows(static_cast<size_t>(ncols));  // may hold stale ids
    std::vector<bool> row_active(static_cast<size_t>(nrows), true);
    std::vector<bool> col_alive(static_cast<size_t>(ncols), true);
    for (int r = 0; r < nrows; ++r)
        for (const auto& e : row[static_cast<size_t>(r)]) {
            ++col_nnz[static_cast<size_t>(e.first)];
            col_rows[static_cast<size_t>(e.first)].push_back(r);
        }

    auto row_has = [&](int r, int c) -> const Entry* {
        const auto& v = row[static_cast<size_t>(r)];
        auto it = std::lower_bound(v.begin(), v.end(), c,
                                   [](const Entry& e, int col) { return e.first < col; });
        return (it != v.end() && it->first == c) ? &*it : nullptr;
    };

    int rnk = 0;
    std::vector<Entry> merged;
    while (true) {
        // pick the scarcest alive column
        int best_c = -1;
        for (int c = 0; c < ncols; ++c) {
            if (!col_alive[static_cast<size_t>(c)] || col_nnz[static_cast<size_t>(c)] == 0)
                continue;
            if (best_c < 0 || col_nnz[static_cast<size_t>(c)] < col_nnz[static_cast<size_t>(best_c)])
                best_c = c;
        }
        if (best_c < 0)
            break;
        // shortest active row with a genuine entry in best_c
        int best_r = -1;
        auto& cand = col_rows[static_cast<size_t>(best_c)];
        size_t w = 0;
        for (size_t k = 0; k < cand.size(); ++k) {
            int r = cand[k];
            if (!row_active[static_cast<size_t>(r)] || !row_has(r, best_c))
                continue;  // stale
            cand[w++] = r;
            if (best_r < 0 ||
                row[static_cast<size_t>(r)].size() < row[static_cast<size_t>(best_r)].size() ||
                (row[static_cast<size_t>(r)].size() == row[static_cast<size_t>(best_r)].size() &&
                 r < best_r))
                best_r = r;
        }
        cand.resize(w);
        if (best_r < 0) {
            col_nnz[static_cast<size_t>(best_c)] = 0;
            col_alive[static_cast<size_t>(best_c)] = false;
            continue;
        }

        ++rnk;
        row_active[static_cast<size_t>(best_r)] = false;
        col_alive[static_cast<size_t>(best_c)] = false;
        const std::vector<Entry> pivot_row = row[static_cast<size_t>(best_r)];
        for (const auto& e : pivot_row)
            --col_nnz[static_cast<size_t>(e.first)];
        uint32_t pinv = F.inv(row_has(best_r, best_c)->second);

        for (int r : cand) {
            if (!row_active[static_cast<size_t>(r)])
                continue;
            const Entry* e = row_has(r, best_c);
            if (!e)
                continue;
            uint32_t factor = F.mul(e->second, pinv);  // r <- r - factor * pivot_row
            merged.clear();
            const auto& a = row[static_cast<size_t>(r)];
            size_t ia = 0, ib = 0;
            while (ia < a.size() || ib < pivot_row.size()) {
                if (ib == pivot_row.size() ||
                    (ia < a.size() && a[ia].first < pivot_row[ib].first)) {
                    merged.push_back(a[ia++]);
                } else if (ia == a.size() || pivot_row[ib].first < a[ia].first) {
                    uint32_t nv = F.neg(F.mul(factor, pivot_row[ib].second));
                    if (nv) {
                        merged.push_back({pivot_row[ib].first, nv});
                        ++col_nnz[static_cast<size_t>(pivot_row[ib].first)];
                        col_rows[static_cast<size_t>(pivot_row[ib].first)].push_back(r);
                    }
                    ++ib;
                } else {
                    uint32_t nv = F.sub(a[ia].second, F.mul(factor, pivot_row[ib].second));
                    if (nv)
                        merged.push_back({a[ia].first, nv});
                    else
                        --col_nnz[static_cast<size_t>(a[ia].first)];
                    ++ia;
                    ++ib;
                }
            }
            row[static_cast<size_t>(r)] = merged;
        }
        row[static_cast<size_t>(best_r)].clear();
    }
    return rnk;
}

}  // namespace detail

}  // namespace fimhom
