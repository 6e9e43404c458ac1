#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "arrange/model_builders.hpp"
#include "arrange/spectral_engine.hpp"
#include "support/errors.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace arrange;
using gen::form_of;
using support::code_of;

namespace {

struct Pipeline {
    ArrangementModel model;
    SheafDecomposition dec;
    SpectralPage page;
};

Pipeline explicit_pipeline(ArrangementModel model)
{
    Pipeline p{std::move(model), {}, {}};
    p.dec = decompose(p.model);
    p.page = assemble_E2(p.model, p.dec);
    build_differential(p.model, p.dec, p.page);
    return p;
}

Pipeline e2_only(ArrangementModel model)
{
    Pipeline p{std::move(model), {}, {}};
    p.dec = decompose(p.model);
    p.page = assemble_E2(p.model, p.dec);
    return p;
}

Pipeline boolean_p2() { return explicit_pipeline(hyperplane_model(gen::coordinate_forms(2), 2, Space::Projective)); }

template <class V>
std::map<Bidegree, V> nonzero(const std::map<Bidegree, V>& ranks)
{
    std::map<Bidegree, V> out;
    for (const auto& [k, v] : ranks)
        if (v)
            out[k] = v;
    return out;
}

WeightedCell synthetic_cell(int p, int q, std::size_t dim, int weight)
{
    WeightedCell c;
    c.p = p;
    c.q = q;
    c.dim = dim;
    c.weight = weight;
    for (std::size_t i = 0; i < dim; ++i)
        c.basis.push_back(BasisLabel{0, 0, i, 0, {}});
    return c;
}

RationalMatrix ones(std::size_t rows, std::size_t cols)
{
    RationalMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            m.set(i, j, 1);
    return m;
}

Polynomial power_of_one_plus_t(int n)
{
    Polynomial r({1});
    for (int i = 0; i < n; ++i)
        r = r * Polynomial::one_plus_t();
    return r;
}

} // namespace

TEST_CASE("E2 of three coordinate lines in P^2")
{
    auto p = boolean_p2();
    const SpectralPage& e2 = p.page;
    CHECK(e2.dim(0, 0) == 1);
    CHECK(e2.dim(1, 0) == 0);
    CHECK(e2.dim(2, 0) == 1);
    CHECK(e2.dim(3, 0) == 0);
    CHECK(e2.dim(4, 0) == 1);
    CHECK(e2.dim(0, 1) == 3);
    CHECK(e2.dim(2, 1) == 3);
    CHECK(e2.dim(4, 1) == 0);
    CHECK(e2.dim(0, 2) == 3);
    CHECK(e2.dim(2, 2) == 0);
    CHECK(e2.cell(0, 1)->weight == 2);
    CHECK(e2.cell(2, 1)->weight == 4);
    CHECK(e2.cell(0, 2)->weight == 4);
    for (const auto& [pq, cell] : e2.cells) {
        CHECK(cell.dim == cell.basis.size());
        CHECK(cell.weight == pq.first + 2 * pq.second);
    }
    CHECK(e2.euler() == 0);
}

TEST_CASE("E2 of two points in P^2 x P^2")
{
    auto p = e2_only(configuration_model(ProjProduct({2}), 2));
    const SpectralPage& e2 = p.page;
    const std::vector<std::size_t> row0 = {1, 2, 3, 2, 1};
    for (int i = 0; i < 5; ++i)
        CHECK(e2.dim(2 * i, 0) == row0[i]);
    for (int i = 0; i < 3; ++i) {
        CHECK(e2.dim(2 * i, 3) == 1);
        CHECK(e2.cell(2 * i, 3)->weight == 2 * i + 4);
    }
    for (const auto& [pq, cell] : e2.cells)
        CHECK((pq.second == 0 || pq.second == 3));
}

TEST_CASE("single hypersurface: rows are H(X) and H(Z)")
{
    auto p = e2_only(hyperplane_model({form_of({1, 1, 1, 1})}, 3, Space::Projective));
    for (int i = 0; i <= 3; ++i)
        CHECK(p.page.dim(2 * i, 0) == 1);
    for (int i = 0; i <= 2; ++i) {
        CHECK(p.page.dim(2 * i, 1) == 1);
        CHECK(p.page.cell(2 * i, 1)->weight == 2 * i + 2);
    }
}

TEST_CASE("missing stratum data")
{
    auto model = hyperplane_model(gen::coordinate_forms(2), 2, Space::Projective);
    auto dec = decompose(model);
    model.stratum_betti[dec.summands.back().support].clear();
    model.stratum_geometry[dec.summands.back().support].reset();
    CHECK(code_of([&] { assemble_E2(model, dec); }) == Errc::MissingStratumData);
}

TEST_CASE("differential ranks")
{
    auto cstar = explicit_pipeline(hyperplane_model(gen::coordinate_forms(1), 1, Space::Projective));
    auto r0 = run(cstar.page);
    CHECK(nonzero(r0.ranks) == std::map<Bidegree, std::size_t>{{{0, 1}, 1}});
    CHECK(r0.betti == Polynomial({1, 1}));

    auto boolean = boolean_p2();
    auto r1 = run(boolean.page);
    CHECK(nonzero(r1.ranks) == std::map<Bidegree, std::size_t>{{{0, 1}, 1}, {{0, 2}, 2}, {{2, 1}, 1}});
    CHECK(r1.betti == Polynomial({1, 2, 1}));
    for (int k = 0; k <= 2; ++k)
        CHECK(r1.weights.at({k, 2 * k}) == static_cast<std::uint64_t>(oracle::binomial(2, k)));

    auto f12 = explicit_pipeline(configuration_model(ProjProduct({1}), 2));
    auto r2 = run(f12.page);
    CHECK(nonzero(r2.ranks) == std::map<Bidegree, std::size_t>{{{0, 1}, 1}, {{2, 1}, 1}});
    CHECK(r2.betti == Polynomial({1, 0, 1}));

    auto f22 = explicit_pipeline(configuration_model(ProjProduct({2}), 2));
    auto r3 = run(f22.page);
    CHECK(r3.betti == Polynomial({1, 0, 2, 0, 2, 0, 1}));
    for (const auto& [kw, d] : r3.weights)
        CHECK(kw.first == kw.second);

    auto f13 = explicit_pipeline(configuration_model(ProjProduct({1}), 3));
    CHECK(run(f13.page).betti == Polynomial({1, 0, 0, 1}));
}

TEST_CASE("torus: weights of H^k are 2k")
{
    for (int n = 1; n <= 4; ++n) {
        auto p = explicit_pipeline(hyperplane_model(gen::coordinate_forms(n), n, Space::Projective));
        auto r = run(p.page);
        CHECK(r.betti == power_of_one_plus_t(n));
        for (const auto& [kw, d] : r.weights)
            CHECK(kw.second == 2 * kw.first);
        CHECK(r.euler_e2 == r.euler_einfty);
    }
}

TEST_CASE("explicit mode matches the Möbius oracle on generic arrangements")
{
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 8; ++trial) {
        std::uniform_int_distribution<int> m(1, 6), n(1, 3);
        const int dim = n(rng);
        auto forms = gen::generic_projective(rng, m(rng), dim);
        auto p = explicit_pipeline(hyperplane_model(forms, dim, Space::Projective));
        auto r = run(p.page);
        CHECK(r.betti == os_oracle(*p.model.input_poset));
    }
}

TEST_CASE("E_inf classes carry E2 labels")
{
    auto p = boolean_p2();
    auto r = run(p.page);
    for (const auto& [pq, cell] : r.einfty.cells) {
        CHECK(cell.dim == cell.basis.size());
        const WeightedCell* src = p.page.cell(pq.first, pq.second);
        REQUIRE(src);
        for (const BasisLabel& l : cell.basis)
            CHECK(std::find(src->basis.begin(), src->basis.end(), l) != src->basis.end());
    }
}

TEST_CASE("zero differential leaves the page unchanged")
{
    auto p = e2_only(hyperplane_model(gen::coordinate_forms(2), 2, Space::Projective));
    CHECK(code_of([&] { run(p.page); }) == Errc::NotComposable);
    p.page.has_differential = true;
    auto r = run(p.page);
    CHECK(r.betti == p.page.row_sums());
    for (const auto& [pq, cell] : p.page.cells)
        CHECK(r.einfty.dim(pq.first, pq.second) == cell.dim);
}

TEST_CASE("malformed differentials are rejected")
{
    SpectralPage page;
    page.c = 1;
    page.has_differential = true;
    page.cells[{0, 1}] = synthetic_cell(0, 1, 1, 2);
    page.cells[{2, 0}] = synthetic_cell(2, 0, 1, 3);
    page.differential[{0, 1}] = ones(1, 1);
    CHECK(code_of([&] { run(page); }) == Errc::WeightViolation);

    page.cells[{2, 0}].weight = 2;
    page.differential[{0, 1}] = ones(2, 1);
    CHECK(code_of([&] { run(page); }) == Errc::NotComposable);

    SpectralPage chain;
    chain.c = 1;
    chain.has_differential = true;
    chain.cells[{0, 2}] = synthetic_cell(0, 2, 1, 4);
    chain.cells[{2, 1}] = synthetic_cell(2, 1, 1, 4);
    chain.cells[{4, 0}] = synthetic_cell(4, 0, 1, 4);
    chain.differential[{0, 2}] = ones(1, 1);
    chain.differential[{2, 1}] = ones(1, 1);
    CHECK(code_of([&] { run(chain); }) == Errc::CompositionNonzero);

    SpectralPage clash;
    clash.c = 1;
    clash.has_differential = true;
    clash.cells[{2, 0}] = synthetic_cell(2, 0, 1, 2);
    clash.cells[{0, 2}] = synthetic_cell(0, 2, 1, 2);
    CHECK(code_of([&] { run(clash); }) == Errc::WeightViolation);
}

TEST_CASE("explicit mode availability")
{
    auto braid = hyperplane_model({form_of({1, -1, 0}), form_of({0, 1, -1}), form_of({1, 0, -1})}, 3, Space::Central);
    auto dec = decompose(braid);
    auto page = assemble_E2(braid, dec);
    CHECK(code_of([&] { build_differential(braid, dec, page); }) == Errc::ExplicitModeUnavailable);

    auto four = configuration_model(ProjProduct({1}), 4);
    auto d4 = decompose(four);
    auto p4 = assemble_E2(four, d4);
    CHECK(code_of([&] { build_differential(four, d4, p4); }) == Errc::ExplicitModeUnavailable);
}

TEST_CASE("differentials square to zero and preserve weight")
{
    std::vector<ArrangementModel> models = {
        hyperplane_model(gen::coordinate_forms(3), 3, Space::Projective),
        configuration_model(ProjProduct({1}), 3),
        configuration_model(ProjProduct({1, 1}), 3),
        configuration_model(ProjProduct({2}), 3),
    };
    for (const auto& m : models) {
        auto p = explicit_pipeline(m);
        for (const auto& [src, block] : p.page.differential) {
            auto mid = p.page.target(src);
            auto next = p.page.differential.find(mid);
            if (next != p.page.differential.end())
                CHECK((next->second * block).is_zero());
            if (!block.is_zero())
                CHECK(p.page.cell(src.first, src.second)->weight == p.page.cell(mid.first, mid.second)->weight);
        }
        auto r = run(p.page);
        CHECK(r.euler_e2 == r.euler_einfty);
    }
}

TEST_CASE("configuration spaces of P^1 x P^1 and P^2")
{
    // F(Y,3) Euler characteristic is chi(Y)(chi(Y)-1)(chi(Y)-2)
    auto a = explicit_pipeline(configuration_model(ProjProduct({1, 1}), 3));
    CHECK(run(a.page).betti.eval(-1) == 4 * 3 * 2);
    auto b = explicit_pipeline(configuration_model(ProjProduct({2}), 3));
    CHECK(run(b.page).betti.eval(-1) == 3 * 2 * 1);
    auto c = explicit_pipeline(configuration_model(ProjProduct({1, 1}), 2));
    CHECK(run(c.page).betti == *reference_poincare(c.model));
}

TEST_CASE("skew-row homology")
{
    auto cstar = explicit_pipeline(hyperplane_model(gen::coordinate_forms(1), 1, Space::Projective));
    CHECK(skew_row_homology(cstar.page, 1, 1) == 1);
    CHECK(skew_row_homology(cstar.page, 0, 0) == 1);

    auto boolean = boolean_p2();
    CHECK(skew_row_homology(boolean.page, 2, 2) == 1);
    CHECK(skew_row_homology(boolean.page, 0, 0) == 1);
    auto r = run(boolean.page);
    for (int k = 0; k <= 4; ++k)
        for (int l = 0; l <= 4; ++l) {
            auto it = r.weights.find({k, k + l});
            CHECK(skew_row_homology(boolean.page, k, l) == (it == r.weights.end() ? 0 : it->second));
        }

    auto c2 = explicit_pipeline(configuration_model(ProjProduct({2}), 2));
    CHECK(code_of([&] { skew_row_homology(c2.page, 0, 0); }) == Errc::InvalidArgument);
}

TEST_CASE("skew rows collect cells of equal weight")
{
    auto p = boolean_p2();
    auto rows = skew_rows(p.page);
    REQUIRE_FALSE(rows.empty());
    for (const SkewRow& row : rows) {
        REQUIRE(row.cells.size() == row.dims.size());
        for (std::size_t l = 0; l < row.cells.size(); ++l) {
            CHECK(row.cells[l].second == static_cast<int>(l));
            CHECK(row.cells[l].first + 2 * row.cells[l].second == row.weight);
            CHECK(row.dims[l] == p.page.dim(row.cells[l].first, row.cells[l].second));
        }
    }
}

TEST_CASE("feasibility")
{
    auto boolean = e2_only(hyperplane_model(gen::coordinate_forms(2), 2, Space::Projective));
    auto free = feasibility(boolean.page);
    CHECK(free.euler == 0);
    REQUIRE(free.betti_bounds.size() >= 3);
    CHECK(free.betti_bounds[1].second == 3);

    auto solved = feasibility(boolean.page, Polynomial({1, 2, 1}));
    CHECK(solved.feasible);
    CHECK(solved.unique);
    REQUIRE(solved.ranks);
    CHECK(nonzero(*solved.ranks) == std::map<Bidegree, std::uint64_t>{{{0, 1}, 1}, {{0, 2}, 2}, {{2, 1}, 1}});
    REQUIRE(solved.weights);
    CHECK(solved.weights->at({2, 4}) == 1);

    CHECK(code_of([&] { feasibility(boolean.page, Polynomial({1, 5, 1})); }) == Errc::Infeasible);
    CHECK(code_of([&] { feasibility(boolean.page, Polynomial({1, 2, 1, 0, 0, 0, 0, 1})); }) == Errc::Infeasible);
    CHECK(code_of([&] { feasibility(boolean.page, Polynomial({1, 3, 1})); }) == Errc::Infeasible);

    auto braid = e2_only(hyperplane_model({form_of({1, -1, 0}), form_of({0, 1, -1}), form_of({1, 0, -1})}, 3,
                                          Space::Central));
    auto target = os_oracle(*braid.model.input_poset);
    auto b = feasibility(braid.page, target);
    CHECK(b.feasible);
    CHECK(b.euler == target.eval(-1));
}

TEST_CASE("feasibility agrees with explicit ranks")
{
    std::vector<ArrangementModel> models = {
        hyperplane_model(gen::coordinate_forms(3), 3, Space::Projective),
        configuration_model(ProjProduct({1}), 3),
        configuration_model(ProjProduct({2}), 2),
    };
    for (const auto& m : models) {
        auto p = explicit_pipeline(m);
        auto r = run(p.page);
        auto f = feasibility(p.page, r.betti, r.weights);
        CHECK(f.feasible);
        REQUIRE(f.ranks);
        std::map<Bidegree, std::size_t> got;
        for (const auto& [k, v] : *f.ranks)
            got[k] = v;
        if (f.unique)
            CHECK(nonzero(got) == nonzero(r.ranks));
        CHECK(f.euler == r.euler_e2);
    }
}
