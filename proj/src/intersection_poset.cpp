#include "arrange/intersection_poset.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "arrange/error.hpp"

namespace arrange {

std::string to_string(Space space)
{
    switch (space) {
    case Space::Affine: return "affine";
    case Space::Central: return "central";
    case Space::Projective: return "projective";
    }
    return "?";
}

std::string to_string(PosetKind kind)
{
    switch (kind) {
    case PosetKind::Affine: return "affine";
    case PosetKind::Central: return "central";
    case PosetKind::Projective: return "projective";
    case PosetKind::Diagonal: return "diagonal";
    case PosetKind::Abstract: return "abstract";
    }
    return "?";
}

IntersectionPoset::IntersectionPoset(PosetKind kind, int ambient_dim, int codim_c,
                                     std::vector<std::string> member_names, std::vector<Flat> flats,
                                     std::vector<std::vector<bool>> leq, bool lattice)
    : kind_(kind), ambient_dim_(ambient_dim), codim_c_(codim_c), lattice_(lattice),
      member_names_(std::move(member_names)), flats_(std::move(flats)), leq_(std::move(leq))
{
    const std::size_t n = flats_.size();
    if (n == 0 || flats_[0].codim != 0)
        throw Error(Errc::InvalidArgument, "poset needs a bottom element of codim 0 at index 0");
    if (codim_c_ < 1)
        throw Error(Errc::InvalidArgument, "member codimension must be positive");
    if (leq_.size() != n)
        throw Error(Errc::InvalidArgument, "order relation has wrong size");
    for (std::size_t x = 0; x < n; ++x) {
        flats_[x].id = x;
        if (leq_[x].size() != n || !leq_[x][x] || !leq_[0][x])
            throw Error(Errc::InvalidArgument, "order relation is not reflexive with bottom");
        if (x != 0 && flats_[x].codim < 1)
            throw Error(Errc::InvalidArgument, "proper flat '" + flats_[x].label + "' has codim < 1");
    }
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) {
            if (x == y || !leq_[x][y])
                continue;
            if (leq_[y][x])
                throw Error(Errc::InvalidArgument, "order relation is not antisymmetric");
            if (flats_[x].codim >= flats_[y].codim)
                throw Error(Errc::InvalidArgument, "order not graded by codim between '" + flats_[x].label
                                                       + "' and '" + flats_[y].label + "'");
            if (!std::includes(flats_[y].members.begin(), flats_[y].members.end(), flats_[x].members.begin(),
                               flats_[x].members.end()))
                throw Error(Errc::InvalidArgument, "member sets not monotone along the order");
            for (std::size_t z = 0; z < n; ++z)
                if (leq_[y][z] && !leq_[x][z])
                    throw Error(Errc::InvalidArgument, "order relation is not transitive");
        }

    member_flat_.assign(member_names_.size(), n);
    for (std::size_t x = 1; x < n; ++x)
        if (flats_[x].members.size() == 1) {
            std::size_t m = flats_[x].members.front();
            if (m >= member_names_.size())
                throw Error(Errc::InvalidArgument, "member index out of range");
            // the member itself is the shallowest flat containing only it
            if (member_flat_[m] == n || flats_[x].codim < flats_[member_flat_[m]].codim)
                member_flat_[m] = x;
        }
    for (std::size_t m = 0; m < member_flat_.size(); ++m)
        if (member_flat_[m] == n)
            throw Error(Errc::InvalidArgument, "member '" + member_names_[m] + "' has no flat");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return flats_[a].codim < flats_[b].codim; });
    mobius_.assign(n, 0);
    for (std::size_t x : order) {
        if (x == 0) {
            mobius_[0] = 1;
            continue;
        }
        std::int64_t sum = 0;
        for (std::size_t y = 0; y < n; ++y)
            if (y != x && leq_[y][x])
                sum += mobius_[y];
        mobius_[x] = -sum;
    }
}

bool IntersectionPoset::is_stratum(std::size_t x) const
{
    if (kind_ == PosetKind::Projective)
        return flat(x).codim <= ambient_dim_;
    return true;
}

int IntersectionPoset::max_codim() const
{
    int m = 0;
    for (const auto& f : flats_)
        m = std::max(m, f.codim);
    return m;
}

std::optional<std::size_t> IntersectionPoset::find_key(const std::string& key) const
{
    for (const auto& f : flats_)
        if (f.canonical_key == key)
            return f.id;
    return std::nullopt;
}

std::vector<std::size_t> IntersectionPoset::minimal_upper_bounds(std::span<const std::size_t> of,
                                                                 std::optional<std::size_t> bound) const
{
    std::vector<std::size_t> uppers;
    for (std::size_t y = 0; y < flats_.size(); ++y) {
        if (bound && !leq(y, *bound))
            continue;
        if (std::all_of(of.begin(), of.end(), [&](std::size_t x) { return leq(x, y); }))
            uppers.push_back(y);
    }
    std::vector<std::size_t> minimal;
    for (std::size_t y : uppers)
        if (std::none_of(uppers.begin(), uppers.end(), [&](std::size_t z) { return less(z, y); }))
            minimal.push_back(y);
    return minimal;
}

// ---------------------------------------------------------------------------
// Linear arrangements
// ---------------------------------------------------------------------------

namespace {

using Rows = std::vector<std::vector<Rational>>;

struct LinearSystem {
    EchelonForm echelon;
    bool consistent = true;
    int codim = 0;
    std::string key;
};

// Columns: coefficients followed by the constant term.
LinearSystem make_system(const Rows& rows, std::size_t width)
{
    LinearSystem s;
    s.echelon = reduced_echelon(rows, width);
    const std::size_t constant_col = width - 1;
    s.consistent = s.echelon.pivots.empty() || s.echelon.pivots.back() != constant_col;
    s.codim = static_cast<int>(s.echelon.rows.size());
    std::ostringstream os;
    for (const auto& r : s.echelon.rows) {
        os << "[";
        for (std::size_t j = 0; j < r.size(); ++j)
            os << (j ? "," : "") << r[j].get_str();
        os << "]";
    }
    s.key = os.str();
    return s;
}

Rows rows_of(const LinearMember& m, std::size_t nvars)
{
    Rows rows;
    for (const auto& f : m.equations) {
        if (f.coeffs.size() != nvars)
            throw Error(Errc::InvalidArgument, "form has " + std::to_string(f.coeffs.size())
                                                   + " coefficients, expected " + std::to_string(nvars));
        std::vector<Rational> r = f.coeffs;
        r.push_back(f.constant);
        rows.push_back(std::move(r));
    }
    return rows;
}

std::string default_label(const std::vector<std::size_t>& members, const std::vector<std::string>& names)
{
    if (members.empty())
        return "X";
    std::string s;
    for (std::size_t i = 0; i < members.size(); ++i)
        s += (i ? "&" : "") + names[members[i]];
    return s;
}

std::vector<std::vector<bool>> order_from_members(const std::vector<Flat>& flats)
{
    const std::size_t n = flats.size();
    std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
            leq[x][y] = x == y
                || (flats[x].members.size() < flats[y].members.size()
                    && std::includes(flats[y].members.begin(), flats[y].members.end(), flats[x].members.begin(),
                                     flats[x].members.end()));
    return leq;
}

} // namespace

IntersectionPoset build_from_subspaces(const std::vector<LinearMember>& members, int ambient_dim, Space space,
                                       int codim_c, std::vector<std::string> names)
{
    if (members.empty())
        throw Error(Errc::EmptyInput, "arrangement has no members");
    if (ambient_dim < 1)
        throw Error(Errc::InvalidArgument, "ambient dimension must be positive");
    const std::size_t nvars = space == Space::Projective ? ambient_dim + 1 : ambient_dim;
    const std::size_t width = nvars + 1;
    if (names.empty())
        for (std::size_t i = 0; i < members.size(); ++i)
            names.push_back((codim_c == 1 ? "H" : "Z") + std::to_string(i));
    if (names.size() != members.size())
        throw Error(Errc::InvalidArgument, "member name count mismatch");

    std::vector<Rows> member_rows;
    std::vector<LinearSystem> member_sys;
    for (std::size_t i = 0; i < members.size(); ++i) {
        Rows rows = rows_of(members[i], nvars);
        for (auto& r : rows) {
            if (space != Space::Affine && r.back() != 0)
                throw Error(Errc::InvalidArgument, "member " + names[i] + " has a constant term in "
                                                       + to_string(space) + " mode");
            if (std::all_of(r.begin(), r.end() - 1, [](const Rational& v) { return v == 0; }))
                throw Error(Errc::InvalidArgument, "member " + names[i] + " has a zero form");
        }
        LinearSystem sys = make_system(rows, width);
        if (!sys.consistent)
            throw Error(Errc::InvalidArgument, "member " + names[i] + " is empty");
        if (sys.codim != codim_c)
            throw Error(Errc::InvalidArgument, "member " + names[i] + " has codim " + std::to_string(sys.codim)
                                                   + ", expected " + std::to_string(codim_c));
        for (std::size_t j = 0; j < i; ++j)
            if (member_sys[j].key == sys.key)
                throw Error(Errc::DuplicateMember, names[j] + " and " + names[i] + " define the same subspace");
        member_rows.push_back(std::move(rows));
        member_sys.push_back(std::move(sys));
    }

    std::vector<LinearSystem> systems;
    std::map<std::string, std::size_t> by_key;
    systems.push_back(make_system({}, width));
    by_key.emplace(systems[0].key, 0);
    std::deque<std::size_t> queue;
    for (auto& sys : member_sys) {
        by_key.emplace(sys.key, systems.size());
        queue.push_back(systems.size());
        systems.push_back(sys);
    }
    // breadth-first closure: intersect every new flat with every member
    while (!queue.empty()) {
        std::size_t f = queue.front();
        queue.pop_front();
        for (std::size_t i = 0; i < members.size(); ++i) {
            Rows rows = systems[f].echelon.rows;
            rows.insert(rows.end(), member_rows[i].begin(), member_rows[i].end());
            LinearSystem g = make_system(rows, width);
            if (!g.consistent || g.codim == systems[f].codim || by_key.count(g.key))
                continue;
            by_key.emplace(g.key, systems.size());
            queue.push_back(systems.size());
            systems.push_back(std::move(g));
        }
    }

    std::vector<Flat> flats(systems.size());
    for (std::size_t f = 0; f < systems.size(); ++f) {
        flats[f].codim = systems[f].codim;
        flats[f].canonical_key = systems[f].key;
        for (std::size_t i = 0; i < members.size(); ++i) {
            Rows rows = systems[f].echelon.rows;
            rows.insert(rows.end(), member_rows[i].begin(), member_rows[i].end());
            if (make_system(rows, width).codim == systems[f].codim)
                flats[f].members.push_back(i);
        }
    }
    std::vector<std::size_t> perm(flats.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
        if (flats[a].codim != flats[b].codim)
            return flats[a].codim < flats[b].codim;
        return flats[a].members < flats[b].members;
    });
    std::vector<Flat> sorted;
    for (std::size_t f : perm) {
        sorted.push_back(flats[f]);
        sorted.back().label = default_label(sorted.back().members, names);
    }
    auto leq = order_from_members(sorted);
    PosetKind kind = space == Space::Affine ? PosetKind::Affine
        : space == Space::Central           ? PosetKind::Central
                                            : PosetKind::Projective;
    return IntersectionPoset(kind, ambient_dim, codim_c, std::move(names), std::move(sorted), std::move(leq), true);
}

IntersectionPoset build_from_forms(const std::vector<Form>& forms, int ambient_dim, Space space,
                                   std::vector<std::string> names)
{
    std::vector<LinearMember> members;
    for (const auto& f : forms)
        members.push_back(LinearMember{{f}});
    return build_from_subspaces(members, ambient_dim, space, 1, std::move(names));
}

// ---------------------------------------------------------------------------
// Partition lattices
// ---------------------------------------------------------------------------

IntersectionPoset partition_lattice(int n)
{
    if (n < 2)
        throw Error(Errc::InvalidArgument, "partition lattice needs n >= 2");
    std::vector<std::pair<int, int>> pairs;
    std::vector<std::string> names;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            pairs.emplace_back(a, b);
            names.push_back("D" + std::to_string(a + 1) + std::to_string(b + 1));
        }

    // restricted growth strings enumerate each set partition once
    std::vector<std::vector<int>> partitions;
    std::vector<int> rgs(n, 0);
    std::function<void(int, int)> rec = [&](int i, int max_block) {
        if (i == n) {
            partitions.push_back(rgs);
            return;
        }
        for (int b = 0; b <= max_block + 1; ++b) {
            rgs[i] = b;
            rec(i + 1, std::max(max_block, b));
        }
    };
    rgs[0] = 0;
    rec(1, 0);

    std::vector<Flat> flats;
    for (const auto& p : partitions) {
        Flat f;
        int blocks = *std::max_element(p.begin(), p.end()) + 1;
        f.codim = n - blocks;
        for (std::size_t m = 0; m < pairs.size(); ++m)
            if (p[pairs[m].first] == p[pairs[m].second])
                f.members.push_back(m);
        std::string label;
        for (int b = 0; b < blocks; ++b) {
            if (b)
                label += "|";
            for (int i = 0; i < n; ++i)
                if (p[i] == b)
                    label += std::to_string(i + 1);
        }
        f.label = label;
        f.canonical_key = label;
        flats.push_back(std::move(f));
    }
    std::stable_sort(flats.begin(), flats.end(), [](const Flat& a, const Flat& b) {
        if (a.codim != b.codim)
            return a.codim < b.codim;
        return a.members < b.members;
    });
    auto leq = order_from_members(flats);
    return IntersectionPoset(PosetKind::Diagonal, n, 1, std::move(names), std::move(flats), std::move(leq), true);
}

// ---------------------------------------------------------------------------
// Abstract posets
// ---------------------------------------------------------------------------

IntersectionPoset build_abstract(int ambient_dim, int codim_c, const std::vector<std::string>& member_names,
                                 const std::vector<AbstractFlatSpec>& specs)
{
    if (member_names.empty())
        throw Error(Errc::EmptyInput, "abstract arrangement has no members");
    std::map<std::string, std::size_t> member_index;
    for (std::size_t i = 0; i < member_names.size(); ++i)
        if (!member_index.emplace(member_names[i], i).second)
            throw Error(Errc::DuplicateMember, "member name '" + member_names[i] + "' repeated");

    std::vector<Flat> flats(1);
    flats[0].label = "X";
    flats[0].canonical_key = "X";
    std::map<std::string, std::size_t> flat_index;
    for (const auto& s : specs) {
        if (s.name == "X" || !flat_index.emplace(s.name, flats.size()).second)
            throw Error(Errc::InvalidArgument, "flat name '" + s.name + "' repeated or reserved");
        Flat f;
        f.codim = s.codim;
        f.label = s.name;
        f.canonical_key = s.name;
        for (const auto& m : s.members) {
            auto it = member_index.find(m);
            if (it == member_index.end())
                throw Error(Errc::InvalidArgument, "flat '" + s.name + "' names unknown member '" + m + "'");
            f.members.push_back(it->second);
        }
        std::sort(f.members.begin(), f.members.end());
        f.members.erase(std::unique(f.members.begin(), f.members.end()), f.members.end());
        if (f.members.empty())
            throw Error(Errc::InvalidArgument, "flat '" + s.name + "' lies on no member");
        flats.push_back(std::move(f));
    }
    for (const auto& m : member_names) {
        auto it = flat_index.find(m);
        if (it == flat_index.end())
            throw Error(Errc::InvalidArgument, "member '" + m + "' has no flat entry");
        const Flat& f = flats[it->second];
        if (f.members.size() != 1 || member_names[f.members[0]] != m)
            throw Error(Errc::InvalidArgument, "member flat '" + m + "' must contain exactly itself");
    }

    const std::size_t n = flats.size();
    bool explicit_order = std::any_of(specs.begin(), specs.end(), [](const auto& s) { return s.below.has_value(); });
    std::vector<std::vector<bool>> leq;
    if (!explicit_order) {
        leq = order_from_members(flats);
    } else {
        leq.assign(n, std::vector<bool>(n, false));
        for (std::size_t x = 0; x < n; ++x) {
            leq[x][x] = true;
            leq[0][x] = true;
        }
        for (std::size_t y = 1; y < n; ++y) {
            const auto& s = specs[y - 1];
            for (std::size_t m : flats[y].members)
                leq[flat_index.at(member_names[m])][y] = true;
            if (s.below)
                for (const auto& b : *s.below) {
                    if (b == "X")
                        continue;
                    auto it = flat_index.find(b);
                    if (it == flat_index.end())
                        throw Error(Errc::InvalidArgument, "flat '" + s.name + "' lists unknown flat '" + b + "'");
                    leq[it->second][y] = true;
                }
        }
        // transitive closure
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t i = 0; i < n; ++i)
                if (leq[i][k])
                    for (std::size_t j = 0; j < n; ++j)
                        if (leq[k][j])
                            leq[i][j] = true;
    }
    return IntersectionPoset(PosetKind::Abstract, ambient_dim, codim_c, member_names, std::move(flats),
                             std::move(leq), false);
}

// ---------------------------------------------------------------------------
// Deletion and restriction
// ---------------------------------------------------------------------------

namespace {

IntersectionPoset subposet(const IntersectionPoset& p, const std::vector<std::size_t>& kept, std::size_t base,
                           const std::vector<std::size_t>& member_flats, std::vector<std::string> names,
                           int ambient_dim)
{
    std::vector<std::size_t> keep = kept;
    std::stable_sort(keep.begin(), keep.end(),
                     [&](std::size_t a, std::size_t b) { return p.flat(a).codim < p.flat(b).codim; });
    std::vector<Flat> flats;
    for (std::size_t x : keep) {
        Flat f = p.flat(x);
        f.codim -= p.flat(base).codim;
        f.members.clear();
        for (std::size_t m = 0; m < member_flats.size(); ++m)
            if (p.leq(member_flats[m], x))
                f.members.push_back(m);
        if (x == base) {
            f.label = "X";
            f.members.clear();
        }
        flats.push_back(std::move(f));
    }
    std::vector<std::vector<bool>> leq(keep.size(), std::vector<bool>(keep.size()));
    for (std::size_t i = 0; i < keep.size(); ++i)
        for (std::size_t j = 0; j < keep.size(); ++j)
            leq[i][j] = p.leq(keep[i], keep[j]);
    return IntersectionPoset(p.kind(), ambient_dim, p.codim_c(), std::move(names), std::move(flats), std::move(leq),
                             p.is_lattice());
}

} // namespace

IntersectionPoset deletion(const IntersectionPoset& p, std::size_t member)
{
    if (member >= p.member_count())
        throw Error(Errc::InvalidArgument, "no member " + std::to_string(member));
    if (p.member_count() < 2)
        throw Error(Errc::LastMember, "cannot delete the only member");

    std::vector<std::size_t> member_flats;
    std::vector<std::string> names;
    for (std::size_t m = 0; m < p.member_count(); ++m)
        if (m != member) {
            member_flats.push_back(p.member_flat(m));
            names.push_back(p.member_name(m));
        }
    std::vector<std::size_t> keep{p.bottom()};
    for (std::size_t x = 1; x < p.size(); ++x) {
        std::vector<std::size_t> rest;
        for (std::size_t m : p.flat(x).members)
            if (m != member)
                rest.push_back(p.member_flat(m));
        if (rest.empty())
            continue;
        auto mub = p.minimal_upper_bounds(rest, x);
        if (std::find(mub.begin(), mub.end(), x) != mub.end())
            keep.push_back(x);
    }
    return subposet(p, keep, p.bottom(), member_flats, std::move(names), p.ambient_dim());
}

IntersectionPoset restriction(const IntersectionPoset& p, std::size_t member)
{
    if (member >= p.member_count())
        throw Error(Errc::InvalidArgument, "no member " + std::to_string(member));
    const std::size_t base = p.member_flat(member);

    std::set<std::size_t> traces;
    for (std::size_t m = 0; m < p.member_count(); ++m) {
        if (m == member)
            continue;
        std::size_t pair[2] = {base, p.member_flat(m)};
        for (std::size_t y : p.minimal_upper_bounds(pair))
            if (p.is_stratum(y))
                traces.insert(y);
    }
    if (traces.empty())
        throw Error(Errc::EmptyRestriction, "no other member meets " + p.member_name(member));

    std::vector<std::size_t> member_flats(traces.begin(), traces.end());
    std::vector<std::string> names;
    for (std::size_t y : member_flats)
        names.push_back(p.flat(y).label);
    std::vector<std::size_t> keep;
    for (std::size_t x = 0; x < p.size(); ++x)
        if (p.leq(base, x))
            keep.push_back(x);
    return subposet(p, keep, base, member_flats, std::move(names), p.ambient_dim() - p.flat(base).codim);
}

// ---------------------------------------------------------------------------
// Admissibility
// ---------------------------------------------------------------------------

AdmissibilityReport check_admissible(const IntersectionPoset& p)
{
    AdmissibilityReport report;
    const int c = p.codim_c();
    for (std::size_t m = 0; m < p.member_count(); ++m) {
        const Flat& f = p.flat(p.member_flat(m));
        if (f.codim != c)
            report.certificate.push_back({f.id, f.label, f.codim, "member codim differs from c"});
    }
    for (const auto& f : p.flats()) {
        if (f.id == p.bottom() || !p.is_stratum(f.id))
            continue;
        if (f.codim % c != 0)
            report.certificate.push_back({f.id, f.label, f.codim, "codim is not a multiple of c"});
    }
    // components of a pairwise intersection sit in codim exactly 2c
    for (std::size_t a = 0; a < p.member_count(); ++a)
        for (std::size_t b = a + 1; b < p.member_count(); ++b) {
            std::size_t pair[2] = {p.member_flat(a), p.member_flat(b)};
            for (std::size_t y : p.minimal_upper_bounds(pair)) {
                const Flat& f = p.flat(y);
                if (p.is_stratum(y) && f.codim != 2 * c && f.codim % c == 0)
                    report.certificate.push_back({f.id, f.label, f.codim,
                                                  "component of " + p.member_name(a) + " and " + p.member_name(b)
                                                      + " does not have codim 2c"});
            }
        }
    report.ok = report.certificate.empty();
    if (p.kind() == PosetKind::Abstract)
        report.notes.push_back("abstract input: smoothness and irreducibility of the listed components are "
                               "taken on trust; only the codimension pattern is checked");
    return report;
}

} // namespace arrange
