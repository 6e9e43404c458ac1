#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>
#include <random>

#include "arrange/model_builders.hpp"
#include "arrange/sheaf_decomposition.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace arrange;
using gen::form_of;

namespace {

using Dims = std::map<int, std::uint64_t>;

std::size_t flat_with_members(const IntersectionPoset& p, std::vector<std::size_t> members)
{
    for (const Flat& f : p.flats())
        if (f.members == members)
            return f.id;
    FAIL("no flat with the given members");
    return 0;
}

std::vector<Summand> at_degree(const SheafDecomposition& d, int degree)
{
    std::vector<Summand> out;
    for (const Summand& s : d.summands)
        if (s.degree == degree)
            out.push_back(s);
    return out;
}

std::vector<ArrangementModel> sample_models()
{
    std::vector<ArrangementModel> out;
    out.push_back(hyperplane_model(gen::coordinate_forms(2), 2, Space::Projective));
    out.push_back(hyperplane_model(gen::coordinate_forms(3), 3, Space::Projective));
    out.push_back(hyperplane_model({form_of({1, -1, 0}), form_of({0, 1, -1}), form_of({1, 0, -1})}, 3,
                                   Space::Central));
    out.push_back(hyperplane_model({form_of({1, 0}), form_of({0, 1}), form_of({1, 1})}, 2, Space::Central));
    for (int n = 2; n <= 4; ++n)
        out.push_back(configuration_model(ProjProduct({1}), n));
    out.push_back(configuration_model(ProjProduct({2}), 2));
    out.push_back(configuration_model(ProjProduct({1, 1}), 3));
    LinearMember a{{form_of({1, 0, 0, 0, 0}), form_of({0, 1, 0, 0, 0})}};
    LinearMember b{{form_of({0, 0, 1, 0, 0}), form_of({0, 0, 0, 1, 0})}};
    out.push_back(subspace_model({a, b}, 4, 2));
    return out;
}

} // namespace

TEST_CASE("stalk examples")
{
    auto one = build_from_forms({form_of({1, 0})}, 2, Space::Central);
    StalkSolver s1(one);
    CHECK(s1.stalk(1).dims == Dims{{0, 1}, {1, 1}});
    CHECK(s1.stalk(0).dims == Dims{{0, 1}});

    auto two = build_from_forms({form_of({1, 0}), form_of({0, 1})}, 2, Space::Central);
    StalkSolver s2(two);
    CHECK(s2.stalk(flat_with_members(two, {0, 1})).dims == Dims{{0, 1}, {1, 2}, {2, 1}});

    auto three = build_from_forms({form_of({1, 0}), form_of({0, 1}), form_of({1, 1})}, 2, Space::Central);
    StalkSolver s3(three);
    auto t = s3.stalk(flat_with_members(three, {0, 1, 2}));
    CHECK(t.dims == Dims{{0, 1}, {1, 3}, {2, 2}});
    CHECK(t.weights == std::map<int, int>{{0, 0}, {1, 2}, {2, 4}});
}

TEST_CASE("stalks for c = 2 sit in degrees divisible by 3")
{
    auto m = configuration_model(ProjProduct({2}), 2);
    auto t = stalk_dims(m, 1);
    CHECK(t.dims == Dims{{0, 1}, {3, 1}});
    CHECK(t.weights.at(3) == 4);
}

TEST_CASE("decomposition examples")
{
    auto single = hyperplane_model({form_of({1, 1, 1})}, 2, Space::Projective);
    auto d0 = decompose(single);
    auto deg1 = at_degree(d0, 1);
    REQUIRE(deg1.size() == 1);
    CHECK(deg1[0].multiplicity == 1);
    CHECK(deg1[0].weight == 2);
    CHECK(deg1[0].level == 1);

    auto c2 = configuration_model(ProjProduct({2}), 2);
    auto dc = decompose(c2);
    auto deg3 = at_degree(dc, 3);
    REQUIRE(deg3.size() == 1);
    CHECK(deg3[0].weight == 4);
    CHECK(c2.poset.flat(deg3[0].support).codim == 2);

    auto boolean = hyperplane_model(gen::coordinate_forms(2), 2, Space::Projective);
    auto db = decompose(boolean);
    CHECK(at_degree(db, 0).size() == 1);
    auto b1 = at_degree(db, 1), b2 = at_degree(db, 2);
    REQUIRE(b1.size() == 3);
    REQUIRE(b2.size() == 3);
    for (const Summand& s : b1)
        CHECK((s.multiplicity == 1 && boolean.poset.flat(s.support).codim == 1));
    for (const Summand& s : b2)
        CHECK((s.multiplicity == 1 && boolean.poset.flat(s.support).codim == 2));

    auto diag = configuration_model(ProjProduct({1}), 3);
    auto dd = decompose(diag);
    auto d1 = at_degree(dd, 1), d2 = at_degree(dd, 2);
    CHECK(d1.size() == 3);
    REQUIRE(d2.size() == 1);
    CHECK(d2[0].multiplicity == 2);
    CHECK(diag.poset.flat(d2[0].support).label == "123");
}

TEST_CASE("pointwise verification examples")
{
    auto concurrent = hyperplane_model({form_of({1, 0}), form_of({0, 1}), form_of({1, 1})}, 2, Space::Central);
    auto rep = verify_pointwise(concurrent, decompose(concurrent));
    CHECK(rep.ok);
    CHECK(rep.checked > 0);

    auto generic = hyperplane_model({form_of({1, 0}, 0), form_of({0, 1}, 0), form_of({1, 1}, 1)}, 2, Space::Affine);
    auto dec = decompose(generic);
    CHECK(verify_pointwise(generic, dec).ok);
    // a double point sees two line summands in degree 1
    auto stalks = all_stalks(generic);
    for (std::size_t x : generic.strata())
        if (generic.poset.flat(x).codim == 2)
            CHECK(stalks[x].dim(1) == 2);
    CHECK(stalks[0].dims == Dims{{0, 1}});

    // a tampered decomposition is caught
    auto broken = dec;
    for (Summand& s : broken.summands)
        if (s.degree == 2)
            s.multiplicity += 1;
    auto bad = verify_pointwise(generic, broken);
    CHECK_FALSE(bad.ok);
    CHECK_FALSE(bad.mismatches.empty());
}

TEST_CASE("purity and pointwise consistency on sample models")
{
    for (const ArrangementModel& m : sample_models()) {
        auto stalks = all_stalks(m);
        CHECK(check_purity(m, stalks).empty());
        for (std::size_t x : m.strata()) {
            CHECK(stalks[x].dim(0) == 1);
            for (const auto& [k, d] : stalks[x].dims) {
                CHECK(k % (2 * m.c - 1) == 0);
                CHECK(stalks[x].weights.at(k) * (2 * m.c - 1) == 2 * m.c * k);
            }
        }
        auto dec = decompose(m, stalks);
        for (const Summand& s : dec.summands) {
            CHECK(s.multiplicity >= 1);
            CHECK(m.poset.flat(s.support).codim == m.c * s.level);
        }
        CHECK(verify_pointwise(m, dec, stalks).ok);
    }
}

TEST_CASE("stalks match the local Whitney polynomial")
{
    std::mt19937_64 rng(51);
    for (int trial = 0; trial < 40; ++trial) {
        auto a = gen::small_arrangement(rng, 6, 4, false);
        auto p = build_from_forms(a.forms, a.n, a.space);
        StalkSolver solver(p);
        for (const Flat& f : p.flats()) {
            oracle::Matrix local;
            for (std::size_t m : f.members) {
                std::vector<oracle::Q> row(a.forms[m].coeffs.begin(), a.forms[m].coeffs.end());
                row.push_back(0);
                local.push_back(row);
            }
            auto expected = oracle::whitney_poincare(local);
            auto t = solver.stalk(f.id);
            for (int k = 0; k <= a.n; ++k)
                CHECK(static_cast<std::int64_t>(t.dim(k)) == (k < int(expected.size()) ? expected[k] : 0));
        }
    }
}

TEST_CASE("stalks match the local Möbius sum")
{
    std::mt19937_64 rng(52);
    for (int trial = 0; trial < 20; ++trial) {
        auto a = gen::small_arrangement(rng, 6, 4, false);
        auto p = build_from_forms(a.forms, a.n, a.space);
        StalkSolver solver(p);
        for (const Flat& x : p.flats()) {
            std::map<int, std::uint64_t> expected;
            for (const Flat& y : p.flats())
                if (p.leq(y.id, x.id))
                    expected[y.codim] += static_cast<std::uint64_t>(std::abs(p.mobius(y.id)));
            CHECK(solver.stalk(x.id).dims == expected);
        }
    }
}

TEST_CASE("partition multiplicities are products of factorials")
{
    for (int n = 2; n <= 5; ++n) {
        auto m = configuration_model(ProjProduct({1}), n);
        auto dec = decompose(m);
        std::map<std::size_t, std::uint64_t> mult;
        for (const Summand& s : dec.summands)
            mult[s.support] = s.multiplicity;
        for (std::size_t x : m.strata()) {
            if (x == m.poset.bottom())
                continue;
            std::int64_t expected = 1;
            std::string label = m.poset.flat(x).label;
            std::size_t start = 0;
            while (start <= label.size()) {
                std::size_t bar = label.find('|', start);
                if (bar == std::string::npos)
                    bar = label.size();
                expected *= oracle::factorial(static_cast<std::int64_t>(bar - start) - 1);
                start = bar + 1;
            }
            CHECK(static_cast<std::int64_t>(mult[x]) == expected);
        }
    }
}

TEST_CASE("stalks do not depend on member order or split priority")
{
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 20; ++trial) {
        auto a = gen::small_arrangement(rng, 6, 4, false);
        auto p = build_from_forms(a.forms, a.n, a.space);
        StalkSolver base(p);

        std::vector<std::size_t> priority(p.size());
        std::iota(priority.begin(), priority.end(), 0);
        std::shuffle(priority.begin(), priority.end(), rng);
        StalkSolver shuffled(p, priority);

        auto forms = a.forms;
        std::shuffle(forms.begin(), forms.end(), rng);
        auto q = build_from_forms(forms, a.n, a.space);
        StalkSolver permuted(q);

        for (const Flat& f : p.flats()) {
            auto expected = base.stalk(f.id).dims;
            CHECK(shuffled.stalk(f.id).dims == expected);
            auto other = q.find_key(f.canonical_key);
            REQUIRE(other);
            CHECK(permuted.stalk(*other).dims == expected);
        }
    }
}

TEST_CASE("memo table is shared across flats")
{
    auto p = partition_lattice(5);
    StalkSolver solver(p);
    for (const Flat& f : p.flats())
        solver.stalk(f.id);
    const std::size_t after = solver.memo_size();
    CHECK(after > 0);
    for (const Flat& f : p.flats())
        solver.stalk(f.id);
    CHECK(solver.memo_size() == after);
}
