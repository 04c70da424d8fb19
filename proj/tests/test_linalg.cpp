#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "fimhom/matrix.hpp"

using namespace fimhom;

namespace {

// Independent rank oracle: the largest k with a nonzero k x k minor, with
// determinants computed by cofactor expansion. Deliberately shares nothing
// with the elimination code it checks.
uint32_t minor_det(const Matrix& M, const std::vector<int>& rows, const std::vector<int>& cols)
{
    const FieldSpec& F = M.field();
    size_t k = rows.size();
    if (k == 0)
        return 1 % F.p;
    uint32_t acc = 0;
    bool neg = false;
    for (size_t i = 0; i < k; ++i) {
        std::vector<int> sub_rows;
        for (size_t x = 0; x < k; ++x)
            if (x != i)
                sub_rows.push_back(rows[x]);
        std::vector<int> sub_cols(cols.begin() + 1, cols.end());
        uint32_t term = F.mul(M(rows[i], cols[0]), minor_det(M, sub_rows, sub_cols));
        acc = neg ? F.sub(acc, term) : F.add(acc, term);
        neg = !neg;
    }
    return acc;
}

int brute_force_rank(const Matrix& M)
{
    int max_k = std::min(M.rows(), M.cols());
    for (int k = max_k; k >= 1; --k) {
        std::vector<int> rows(static_cast<size_t>(k)), cols(static_cast<size_t>(k));
        // iterate over all k-subsets of rows and of cols
        std::vector<int> rsel(static_cast<size_t>(k));
        for (int i = 0; i < k; ++i)
            rsel[static_cast<size_t>(i)] = i;
        auto next_subset = [](std::vector<int>& s, int n) {
            int k2 = static_cast<int>(s.size());
            int i = k2 - 1;
            while (i >= 0 && s[static_cast<size_t>(i)] == n - k2 + i)
                --i;
            if (i < 0)
                return false;
            ++s[static_cast<size_t>(i)];
            for (int j = i + 1; j < k2; ++j)
                s[static_cast<size_t>(j)] = s[static_cast<size_t>(j) - 1] + 1;
            return true;
        };
        do {
            std::vector<int> csel(static_cast<size_t>(k));
            for (int i = 0; i < k; ++i)
                csel[static_cast<size_t>(i)] = i;
            do {
                if (minor_det(M, rsel, csel) != 0)
                    return k;
            } while (next_subset(csel, M.cols()));
        } while (next_subset(rsel, M.rows()));
    }
    return 0;
}

Matrix random_matrix(int r, int c, FieldSpec F, std::mt19937_64& rng)
{
    Matrix M(r, c, F);
    std::uniform_int_distribution<uint32_t> dist(0, F.p - 1);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j)
            M(i, j) = dist(rng);
    return M;
}

}  // namespace

TEST_CASE("field spec validates primality and arithmetic")
{
    REQUIRE_THROWS_AS(FieldSpec(1), std::invalid_argument);
    REQUIRE_THROWS_AS(FieldSpec(32004), std::invalid_argument);
    FieldSpec F(32003);
    REQUIRE(F.mul(F.inv(17), 17) == 1);
    REQUIRE(F.reduce(-1) == 32002);
    FieldSpec F5(5);
    REQUIRE(F5.sub(1, 3) == 3);
}

TEST_CASE("rank profile on the frozen examples")
{
    FieldSpec F5(5);
    SECTION("0x0 matrix")
    {
        Matrix M(0, 0, F5);
        auto rp = rank_profile(M);
        REQUIRE(rp.rank == 0);
        REQUIRE(rp.pivot_columns.empty());
    }
    SECTION("identity 3x3 over F5")
    {
        auto rp = rank_profile(Matrix::identity(3, F5));
        REQUIRE(rp.rank == 3);
        REQUIRE(rp.pivot_columns == std::vector<int>{0, 1, 2});
    }
    SECTION("dependent rows over F5")
    {
        Matrix M = Matrix::from_rows({{1, 2}, {2, 4}}, F5);
        REQUIRE(brute_force_rank(M) == 1);  // oracle agrees: row 2 = 2 * row 1
        auto rp = rank_profile(M);
        REQUIRE(rp.rank == 1);
        REQUIRE(rp.pivot_columns == std::vector<int>{0});
    }
}

TEST_CASE("rank matches the minor oracle on random small matrices")
{
    FieldSpec F(7);
    std::mt19937_64 rng(20240811);
    for (int trial = 0; trial < 40; ++trial) {
        Matrix M = random_matrix(trial % 4 + 1, trial % 3 + 1, F, rng);
        REQUIRE(rank(M) == brute_force_rank(M));
    }
}

TEST_CASE("kernel bases")
{
    FieldSpec F7(7);
    SECTION("identity has trivial kernel")
    {
        REQUIRE(kernel_basis(Matrix::identity(4, F7)).cols() == 0);
    }
    SECTION("zero 2x3 has full kernel")
    {
        Matrix K = kernel_basis(Matrix::zero(2, 3, F7));
        REQUIRE(K.cols() == 3);
        REQUIRE(rank(K) == 3);
    }
    SECTION("[[1,1]] over F7: kernel proportional to (1,-1)")
    {
        Matrix M = Matrix::from_rows({{1, 1}}, F7);
        Matrix K = kernel_basis(M);
        REQUIRE(K.cols() == 1);
        REQUIRE((M * K).is_zero());
        // (k0, k1) with k0 = -k1
        REQUIRE(K(0, 0) == F7.neg(K(1, 0)));
        REQUIRE(K(0, 0) != 0);
    }
}

TEST_CASE("rank-nullity holds on random matrices and M*K = 0 exactly")
{
    FieldSpec F(32003);
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 30; ++trial) {
        Matrix M = random_matrix(trial % 5 + 1, trial % 6 + 1, F, rng);
        auto rp = rank_profile(M);
        Matrix K = kernel_basis(M);
        REQUIRE(rp.rank + K.cols() == M.cols());
        REQUIRE((M * K).is_zero());
        REQUIRE(rank(M) == rank(M.transposed()));
    }
}

TEST_CASE("solve and inverse")
{
    FieldSpec F(101);
    std::mt19937_64 rng(99);
    Matrix A = random_matrix(4, 4, F, rng);
    while (rank(A) < 4)
        A = random_matrix(4, 4, F, rng);
    Matrix B = random_matrix(4, 2, F, rng);
    auto X = solve(A, B);
    REQUIRE(X);
    REQUIRE(A * *X == B);
    auto Ai = inverse(A);
    REQUIRE(Ai);
    REQUIRE(A * *Ai == Matrix::identity(4, F));

    // inconsistent system
    Matrix S = Matrix::from_rows({{1, 0}, {1, 0}}, F);
    Matrix b2 = Matrix::from_rows({{1}, {2}}, F);
    REQUIRE_FALSE(solve(S, b2).has_value());
}

TEST_CASE("quotient calculus on the frozen examples")
{
    FieldSpec F5(5);
    SECTION("subspace = full space")
    {
        Matrix U = Matrix::identity(2, F5);
        auto q = quotient_space(U, 2);
        REQUIRE(q.quotient_dim == 0);
    }
    SECTION("subspace = 0 gives the identity projection")
    {
        Matrix U(2, 0, F5);
        auto q = quotient_space(U, 2);
        REQUIRE(q.quotient_dim == 2);
        REQUIRE(q.projection == Matrix::identity(2, F5));
    }
    SECTION("F5^2 by span{(1,1)} with the identity map")
    {
        Matrix U = Matrix::from_rows({{1}, {1}}, F5);
        auto qc = quotient_calculus(Matrix::identity(2, F5), U, U);
        REQUIRE(qc.quotient_dim == 1);
        REQUIRE(qc.induced_map == Matrix::identity(1, F5));
        // projection kills exactly the subspace
        REQUIRE((qc.projection * U).is_zero());
        REQUIRE(rank(qc.projection) == 1);
    }
    SECTION("incompatible map is rejected")
    {
        Matrix U = Matrix::from_rows({{1}, {0}}, F5);
        Matrix A = Matrix::from_rows({{0, 1}, {1, 0}}, F5);  // swaps the axes
        REQUIRE_THROWS_AS(quotient_calculus(A, U, U), std::invalid_argument);
    }
}

TEST_CASE("sparse rank agrees with dense rank")
{
    FieldSpec F(32003);
    std::mt19937_64 rng(4242);
    std::uniform_int_distribution<uint32_t> dist(0, F.p - 1);
    for (int trial = 0; trial < 25; ++trial) {
        int r = trial % 7 + 1, c = trial % 5 + 1;
        Matrix M(r, c, F);
        std::vector<detail::SparseTriplet> trips;
        std::uniform_int_distribution<int> coin(0, 2);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j)
                if (coin(rng) == 0) {
                    uint32_t v = dist(rng);
                    M(i, j) = F.add(M(i, j), v);
                    trips.push_back({i, j, v});
                }
        REQUIRE(detail::sparse_rank(r, c, trips, F) == rank(M));
    }
    // duplicated triplets must accumulate
    std::vector<detail::SparseTriplet> dup{{0, 0, 1}, {0, 0, F.p - 1}};
    REQUIRE(detail::sparse_rank(1, 1, dup, F) == 0);
}
