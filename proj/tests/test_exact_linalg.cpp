#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "arrange/error.hpp"
#include "arrange/exact_linalg.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace arrange;

namespace {

RationalMatrix m_of(std::vector<std::vector<int>> rows)
{
    std::vector<std::vector<Rational>> d;
    for (const auto& r : rows) {
        d.emplace_back();
        for (int v : r)
            d.back().emplace_back(v);
    }
    return RationalMatrix::from_dense(d);
}

} // namespace

TEST_CASE("parse_rational accepts p/q forms and rejects junk")
{
    CHECK(parse_rational("3/6") == Rational(1, 2));
    CHECK(parse_rational("-4") == Rational(-4));
    CHECK(parse_rational(" +7 / 21 ") == Rational(1, 3));
    CHECK_THROWS_AS(parse_rational("1/0"), Error);
    CHECK_THROWS_AS(parse_rational("x"), Error);
    CHECK_THROWS_AS(parse_rational("1/-2"), Error);
    CHECK_THROWS_AS(parse_rational(""), Error);
}

TEST_CASE("rank examples")
{
    CHECK(rank(RationalMatrix::identity(3)) == 3);
    CHECK(rank(RationalMatrix(2, 2)) == 0);
    CHECK(rank(m_of({{1, 2}, {2, 4}})) == 1);
}

TEST_CASE("kernel_dim examples")
{
    CHECK(kernel_dim(RationalMatrix::identity(3)) == 0);
    CHECK(kernel_dim(RationalMatrix(2, 3)) == 3);
    CHECK(kernel_dim(m_of({{1, 1, 0}, {0, 1, 1}})) == 1);
}

TEST_CASE("homology_dim examples")
{
    CHECK(homology_dim(RationalMatrix(2, 1), RationalMatrix(1, 2)) == 2);
    CHECK(homology_dim(m_of({{1}, {-1}}), m_of({{1, 1}})) == 0);
    CHECK(homology_dim(RationalMatrix(2, 1), m_of({{1, 1}})) == 1);
}

TEST_CASE("homology_dim rejects bad shapes and non-complexes")
{
    try {
        homology_dim(RationalMatrix(3, 1), RationalMatrix(1, 2));
        FAIL("expected ShapeMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::ShapeMismatch);
    }
    try {
        homology_dim(m_of({{1}, {1}}), m_of({{1, 1}}));
        FAIL("expected CompositionNonzero");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::CompositionNonzero);
    }
}

TEST_CASE("rank agrees with the minors oracle on random small matrices")
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 150; ++trial) {
        const std::size_t r = 1 + rng() % 5, c = 1 + rng() % 5;
        RationalMatrix m = gen::random_matrix(rng, r, c);
        INFO("trial " << trial);
        CHECK(rank(m) == oracle::rank_by_minors(m.dense()));
    }
}

TEST_CASE("rank of transpose and rank-nullity")
{
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t r = 1 + rng() % 9, c = 1 + rng() % 9;
        RationalMatrix m = gen::random_matrix(rng, r, c, 2, 0.4);
        CHECK(rank(m) == rank(m.transpose()));
        CHECK(kernel_dim(m) + rank(m) == m.cols());
        CHECK(kernel_basis(m).size() == kernel_dim(m));
        for (const auto& v : kernel_basis(m)) {
            RationalMatrix col(v.size(), 1);
            for (std::size_t i = 0; i < v.size(); ++i)
                col.set(i, 0, v[i]);
            CHECK((m * col).is_zero());
        }
    }
}

TEST_CASE("sparse and dense elimination agree across the threshold")
{
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 6; ++trial) {
        // Low-rank product so the answer is known: rank <= inner.
        const std::size_t inner = 5 + rng() % 20;
        RationalMatrix a = gen::random_matrix(rng, 80, inner, 3, 0.3);
        RationalMatrix b = gen::random_matrix(rng, inner, 70, 3, 0.3);
        RationalMatrix m = a * b;
        REQUIRE(m.rows() >= kDenseThreshold);
        // reduced_echelon always works on a dense copy
        std::size_t dense_rank = reduced_echelon(m.dense(), m.cols()).pivots.size();
        CHECK(rank(m) == dense_rank);
        CHECK(rank(m) <= inner);
    }
}

TEST_CASE("homology_dim is invariant under unimodular changes of basis")
{
    std::mt19937_64 rng(14);
    for (int trial = 0; trial < 60; ++trial) {
        // Build a complex A -> B -> C as d_out = P, d_in = K where P K = 0.
        const std::size_t a = 1 + rng() % 4, b = 2 + rng() % 5, c = 1 + rng() % 4;
        RationalMatrix d_out = gen::random_matrix(rng, c, b);
        auto kernel = kernel_basis(d_out);
        RationalMatrix d_in(b, a);
        for (std::size_t j = 0; j < a && !kernel.empty(); ++j)
            for (std::size_t i = 0; i < b; ++i) {
                Rational x = 0;
                for (std::size_t k = 0; k < kernel.size(); ++k)
                    x += kernel[k][i] * Rational(static_cast<long>((j + 1) * (k + 2) % 5) - 2);
                d_in.set(i, j, x);
            }
        const std::size_t h = homology_dim(d_in, d_out);
        RationalMatrix ua = gen::random_unimodular(rng, a), ub = gen::random_unimodular(rng, b),
                       uc = gen::random_unimodular(rng, c);
        // change of basis g_B: B -> B; new maps uc d_out ub^{-1} and ub d_in ua.
        // Unimodular integer matrices have integer inverses; compute via solve.
        RationalMatrix ub_inv(b, b);
        for (std::size_t j = 0; j < b; ++j) {
            std::vector<Rational> e(b, Rational(0));
            e[j] = 1;
            auto x = solve_unique(ub, e);
            REQUIRE(x);
            for (std::size_t i = 0; i < b; ++i)
                ub_inv.set(i, j, (*x)[i]);
        }
        CHECK(homology_dim(ub * d_in * ua, uc * d_out * ub_inv) == h);
    }
}

TEST_CASE("solve_unique solves nonsingular systems and reports singular ones")
{
    auto a = m_of({{2, 1}, {1, 3}});
    auto x = solve_unique(a, {Rational(3), Rational(5)});
    REQUIRE(x);
    CHECK((*x)[0] == Rational(4, 5));
    CHECK((*x)[1] == Rational(7, 5));
    CHECK_FALSE(solve_unique(m_of({{1, 2}, {2, 4}}), {Rational(1), Rational(2)}));
}
