#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "arrange/error.hpp"
#include "arrange/intersection_poset.hpp"
#include "support/errors.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace arrange;
using gen::form_of;
using support::code_of;

namespace {

std::vector<Form> generic_three_lines()
{
    return {form_of({1, 0}, 0), form_of({0, 1}, 0), form_of({1, 1}, 1)};
}

std::vector<Form> concurrent_three_lines()
{
    return {form_of({1, 0}), form_of({0, 1}), form_of({1, 1})};
}

std::vector<std::int64_t> mobius_at_codim(const IntersectionPoset& p, int codim)
{
    std::vector<std::int64_t> out;
    for (const Flat& f : p.flats())
        if (f.codim == codim)
            out.push_back(p.mobius(f.id));
    std::sort(out.begin(), out.end());
    return out;
}

std::multiset<std::pair<int, std::int64_t>> codim_mu(const IntersectionPoset& p)
{
    std::multiset<std::pair<int, std::int64_t>> out;
    for (const Flat& f : p.flats())
        out.insert({f.codim, p.mobius(f.id)});
    return out;
}


} // namespace

TEST_CASE("generic lines in the affine plane")
{
    auto p = build_from_forms(generic_three_lines(), 2, Space::Affine);
    CHECK(p.size() == 7);
    CHECK(mobius_at_codim(p, 1) == std::vector<std::int64_t>{-1, -1, -1});
    CHECK(mobius_at_codim(p, 2) == std::vector<std::int64_t>{1, 1, 1});
    CHECK(p.mobius(p.bottom()) == 1);
}

TEST_CASE("concurrent lines meet in one point with mu = 2")
{
    auto p = build_from_forms(concurrent_three_lines(), 2, Space::Central);
    CHECK(p.size() == 5);
    CHECK(mobius_at_codim(p, 2) == std::vector<std::int64_t>{2});
    const Flat& top = p.flats().back();
    CHECK(top.members == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("single hyperplane and input errors")
{
    auto p = build_from_forms({form_of({1, 2, 3})}, 3, Space::Central);
    CHECK(p.size() == 2);
    CHECK(p.mobius(1) == -1);
    CHECK(code_of([] { build_from_forms({form_of({1, 1}), form_of({2, 2})}, 2, Space::Central); })
          == Errc::DuplicateMember);
    CHECK(code_of([] { build_from_forms({}, 2, Space::Central); }) == Errc::EmptyInput);
    CHECK(code_of([] { build_from_forms({form_of({0, 0})}, 2, Space::Central); }) == Errc::InvalidArgument);
}

TEST_CASE("parallel affine lines never meet")
{
    auto p = build_from_forms({form_of({1, 0}, 0), form_of({1, 0}, 1), form_of({0, 1}, 0)}, 2, Space::Affine);
    CHECK(p.size() == 6); // bottom, 3 lines, 2 points
}

TEST_CASE("partition lattices")
{
    auto p3 = partition_lattice(3);
    CHECK(p3.size() == 5);
    CHECK(mobius_at_codim(p3, 1) == std::vector<std::int64_t>{-1, -1, -1});
    CHECK(mobius_at_codim(p3, 2) == std::vector<std::int64_t>{2});
    auto p2 = partition_lattice(2);
    CHECK(p2.size() == 2);
    CHECK(p2.mobius(1) == -1);
    auto p4 = partition_lattice(4);
    CHECK(p4.size() == 15);
    CHECK(mobius_at_codim(p4, 3) == std::vector<std::int64_t>{-6});
}

TEST_CASE("partition lattice sizes are Bell numbers and |mu(top)| = (n-1)!")
{
    for (int n = 2; n <= 6; ++n) {
        auto p = partition_lattice(n);
        CHECK(static_cast<std::int64_t>(p.size()) == oracle::bell(n));
        auto top = mobius_at_codim(p, n - 1);
        REQUIRE(top.size() == 1);
        CHECK(std::abs(top[0]) == oracle::factorial(n - 1));
    }
}

TEST_CASE("deletion examples")
{
    auto concurrent = build_from_forms(concurrent_three_lines(), 2, Space::Central);
    auto d = deletion(concurrent, 2);
    CHECK(d.size() == 4);
    CHECK(mobius_at_codim(d, 2) == std::vector<std::int64_t>{1});

    auto generic = build_from_forms(generic_three_lines(), 2, Space::Affine);
    auto g = deletion(generic, 0);
    CHECK(g.size() == 4);
    CHECK(g.member_count() == 2);

    auto two = build_from_forms({form_of({1, 0}), form_of({0, 1})}, 2, Space::Central);
    auto one = deletion(two, 0);
    CHECK(one.size() == 2);
    CHECK(code_of([&] { deletion(one, 0); }) == Errc::LastMember);
}

TEST_CASE("restriction examples")
{
    auto concurrent = build_from_forms(concurrent_three_lines(), 2, Space::Central);
    auto r = restriction(concurrent, 0);
    CHECK(r.member_count() == 1); // the two traces coincide
    CHECK(r.size() == 2);

    auto generic = build_from_forms(generic_three_lines(), 2, Space::Affine);
    auto g = restriction(generic, 0);
    CHECK(g.member_count() == 2);
    CHECK(g.size() == 3);

    auto two = build_from_forms({form_of({1, 0}), form_of({0, 1})}, 2, Space::Central);
    auto t = restriction(two, 0);
    CHECK(t.member_count() == 1);

    auto parallel = build_from_forms({form_of({1, 0}, 0), form_of({1, 0}, 1)}, 2, Space::Affine);
    CHECK(code_of([&] { restriction(parallel, 0); }) == Errc::EmptyRestriction);
}

TEST_CASE("admissibility")
{
    auto lines = build_from_forms(generic_three_lines(), 2, Space::Affine);
    CHECK(check_admissible(lines).ok);

    auto p = partition_lattice(3);
    CHECK(check_admissible(p).ok);

    // {x1 = x2 = 0} and {x1 = x3 = 0} in C^4 meet in codim 3
    LinearMember a{{form_of({1, 0, 0, 0}), form_of({0, 1, 0, 0})}};
    LinearMember b{{form_of({1, 0, 0, 0}), form_of({0, 0, 1, 0})}};
    auto planes = build_from_subspaces({a, b}, 4, Space::Central, 2);
    auto report = check_admissible(planes);
    CHECK_FALSE(report.ok);
    REQUIRE(report.certificate.size() >= 1);
    CHECK(report.certificate.front().codim == 3);
}

TEST_CASE("abstract posets derive or take their order")
{
    std::vector<AbstractFlatSpec> flats = {
        {"A", 1, {"A"}, std::nullopt}, {"B", 1, {"B"}, std::nullopt}, {"C", 2, {"A", "B"}, std::nullopt}};
    auto p = build_abstract(3, 1, {"A", "B"}, flats);
    CHECK(p.size() == 4);
    CHECK(p.leq(1, 3));
    CHECK(p.leq(2, 3));
    CHECK(p.mobius(3) == 1);
    CHECK_FALSE(check_admissible(p).notes.empty());

    // two components of the same intersection need explicit order
    std::vector<AbstractFlatSpec> split = {{"A", 1, {"A"}, std::vector<std::string>{}},
                                           {"B", 1, {"B"}, std::vector<std::string>{}},
                                           {"C1", 2, {"A", "B"}, std::vector<std::string>{"A", "B"}},
                                           {"C2", 2, {"A", "B"}, std::vector<std::string>{"A", "B"}}};
    auto q = build_abstract(3, 1, {"A", "B"}, split);
    CHECK(q.size() == 5);
    CHECK_FALSE(q.leq(3, 4));
    std::size_t ab[2] = {1, 2};
    CHECK(q.minimal_upper_bounds(ab).size() == 2);
}

TEST_CASE("Möbius alternates in sign on geometric lattices")
{
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 30; ++trial) {
        auto a = gen::small_arrangement(rng, 6, 4, false);
        auto p = build_from_forms(a.forms, a.n, a.space);
        for (const Flat& f : p.flats()) {
            const std::int64_t mu = p.mobius(f.id);
            CHECK(mu != 0);
            CHECK((mu > 0) == (f.codim % 2 == 0));
        }
        for (const Flat& x : p.flats()) {
            if (x.id == p.bottom())
                continue;
            std::int64_t sum = 0;
            for (const Flat& y : p.flats())
                if (p.leq(y.id, x.id))
                    sum += p.mobius(y.id);
            CHECK(sum == 0);
        }
    }
}

TEST_CASE("permuting the forms gives the same (codim, mu) multiset and keys")
{
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 20; ++trial) {
        auto a = gen::small_arrangement(rng, 6, 4, false);
        auto perm = a.forms;
        std::shuffle(perm.begin(), perm.end(), rng);
        auto p = build_from_forms(a.forms, a.n, a.space);
        auto q = build_from_forms(perm, a.n, a.space);
        CHECK(codim_mu(p) == codim_mu(q));
        std::set<std::string> kp, kq;
        for (const Flat& f : p.flats())
            kp.insert(f.canonical_key);
        for (const Flat& f : q.flats())
            kq.insert(f.canonical_key);
        CHECK(kp == kq);
    }
}

TEST_CASE("deletion and restriction partition the flats")
{
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        auto a = gen::small_arrangement(rng, 5, 3, false);
        auto p = build_from_forms(a.forms, a.n, a.space);
        if (p.member_count() < 2)
            continue;
        auto d = deletion(p, 0);
        std::set<std::string> dkeys;
        for (const Flat& f : d.flats())
            dkeys.insert(f.canonical_key);
        for (const Flat& f : p.flats()) {
            std::vector<std::size_t> rest;
            for (std::size_t m : f.members)
                if (m != 0)
                    rest.push_back(p.member_flat(m));
            if (f.id == p.bottom())
                continue;
            auto ub = p.minimal_upper_bounds(rest, f.id);
            const bool survives = !rest.empty() && ub.size() == 1 && ub.front() == f.id;
            CHECK(survives == (dkeys.count(f.canonical_key) == 1));
        }
        // flats on member 0 correspond to the restriction's flats
        bool meets = std::any_of(p.flats().begin(), p.flats().end(), [&](const Flat& f) {
            return f.members.size() >= 2 && std::count(f.members.begin(), f.members.end(), 0);
        });
        if (!meets)
            continue;
        auto r = restriction(p, 0);
        std::size_t on_member = 0;
        for (const Flat& f : p.flats())
            if (std::count(f.members.begin(), f.members.end(), 0) && p.is_stratum(f.id))
                ++on_member;
        std::size_t r_strata = 0;
        for (const Flat& f : r.flats())
            if (r.is_stratum(f.id))
                ++r_strata;
        CHECK(r_strata == on_member);
    }
}
