#include "arrange/sheaf_decomposition.hpp"

#include <algorithm>
#include <numeric>

#include "arrange/error.hpp"

namespace arrange {

StalkSolver::StalkSolver(const IntersectionPoset& poset, std::vector<std::size_t> priority)
    : poset_(poset)
{
    if (priority.empty()) {
        priority.resize(poset.size());
        std::iota(priority.begin(), priority.end(), 0);
    }
    if (priority.size() != poset.size())
        throw Error(Errc::InvalidArgument, "priority must rank every flat");
    rank_of_.assign(poset.size(), 0);
    for (std::size_t i = 0; i < priority.size(); ++i)
        rank_of_.at(priority[i]) = i;
    depth_limit_ = static_cast<int>(poset.size() + poset.member_count()) + 8;
}

std::size_t StalkSolver::memo_size() const
{
    std::lock_guard lock(mutex_);
    return memo_.size();
}

StalkSolver::Dims StalkSolver::local(std::size_t point, std::size_t base, std::vector<std::size_t> members, int depth)
{
    if (depth > depth_limit_)
        throw Error(Errc::RecursionDepthExceeded, "stalk recursion does not terminate at flat '"
                                                      + poset_.flat(point).label + "'");
    const int c = poset_.codim_c();
    if (members.empty())
        return {1};
    if (members.size() == 1) {
        Dims d(2 * c, 0);
        d[0] = 1;
        d[2 * c - 1] = 1;
        return d;
    }

    // In a lattice the stalk only sees the join of the members.
    if (poset_.is_lattice()) {
        auto join = poset_.minimal_upper_bounds(members, point);
        if (join.size() == 1)
            point = join.front();
    }
    std::vector<std::size_t> key_members = members;
    std::sort(key_members.begin(), key_members.end());
    Key key{point, base, std::move(key_members)};
    {
        std::lock_guard lock(mutex_);
        auto it = memo_.find(key);
        if (it != memo_.end())
            return it->second;
    }

    std::sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) { return rank_of_[a] < rank_of_[b]; });
    const std::size_t first = members.front();
    std::vector<std::size_t> rest(members.begin() + 1, members.end());

    std::vector<std::size_t> traces;
    for (std::size_t other : rest) {
        std::size_t pair[2] = {first, other};
        for (std::size_t y : poset_.minimal_upper_bounds(pair, point)) {
            if (poset_.flat(y).codim != poset_.flat(first).codim + c)
                throw Error(Errc::NotAdmissible, "trace '" + poset_.flat(y).label + "' of '" + poset_.flat(other).label
                                                     + "' on '" + poset_.flat(first).label
                                                     + "' is not of codimension c");
            traces.push_back(y);
        }
    }
    std::sort(traces.begin(), traces.end());
    traces.erase(std::unique(traces.begin(), traces.end()), traces.end());

    Dims single = local(point, base, {first}, depth + 1);
    Dims deleted = local(point, base, rest, depth + 1);
    Dims restricted = local(point, first, traces, depth + 1);

    const std::size_t shift = 2 * static_cast<std::size_t>(c) - 1;
    Dims out(std::max({single.size(), deleted.size(), restricted.size() + shift}), 0);
    out[0] = 1;
    for (std::size_t k = 1; k < out.size(); ++k) {
        if (k < single.size())
            out[k] += single[k];
        if (k < deleted.size())
            out[k] += deleted[k];
        if (k + 1 > 2 * static_cast<std::size_t>(c) && k - shift < restricted.size())
            out[k] += restricted[k - shift];
    }
    while (out.size() > 1 && out.back() == 0)
        out.pop_back();

    std::lock_guard lock(mutex_);
    memo_.emplace(std::move(key), out);
    return out;
}

StalkTable StalkSolver::stalk(std::size_t x)
{
    std::vector<std::size_t> members;
    for (std::size_t m : poset_.flat(x).members)
        members.push_back(poset_.member_flat(m));
    Dims d = local(x, poset_.bottom(), std::move(members), 0);
    const int c = poset_.codim_c();
    StalkTable t;
    t.flat = x;
    for (std::size_t k = 0; k < d.size(); ++k) {
        if (d[k] == 0)
            continue;
        t.dims[static_cast<int>(k)] = d[k];
        if (k % (2 * c - 1) == 0)
            t.weights[static_cast<int>(k)] = static_cast<int>(2 * c * k / (2 * c - 1));
    }
    return t;
}

namespace {

void require_admissible(const ArrangementModel& model)
{
    auto report = check_admissible(model.poset);
    if (!report.ok) {
        const auto& v = report.certificate.front();
        throw Error(Errc::NotAdmissible, "flat '" + v.label + "' (codim " + std::to_string(v.codim) + "): " + v.reason);
    }
}

} // namespace

StalkTable stalk_dims(const ArrangementModel& model, std::size_t x)
{
    require_admissible(model);
    StalkSolver solver(model.poset);
    return solver.stalk(x);
}

std::vector<StalkTable> all_stalks(const ArrangementModel& model)
{
    require_admissible(model);
    StalkSolver solver(model.poset);
    std::vector<StalkTable> out(model.poset.size());
    for (std::size_t x : model.strata())
        out[x] = solver.stalk(x);
    return out;
}

SheafDecomposition decompose(const ArrangementModel& model)
{
    return decompose(model, all_stalks(model));
}

SheafDecomposition decompose(const ArrangementModel& model, const std::vector<StalkTable>& stalks)
{
    require_admissible(model);
    const int c = model.c;
    SheafDecomposition dec;
    dec.c = c;
    dec.summands.push_back({model.poset.bottom(), 0, 0, 1, 0});
    for (std::size_t y : model.strata()) {
        if (y == model.poset.bottom())
            continue;
        const int codim = model.poset.flat(y).codim;
        const int level = codim / c;
        const int degree = (2 * c - 1) * level;
        std::uint64_t mult = stalks.at(y).dim(degree);
        if (mult > 0)
            dec.summands.push_back({y, level, degree, mult, 2 * c * level});
    }
    auto report = verify_pointwise(model, dec, stalks);
    if (!report.ok) {
        const auto& m = report.mismatches.front();
        throw Error(Errc::InconsistentDecomposition,
                    "at flat '" + model.poset.flat(m.flat).label + "' degree " + std::to_string(m.degree) + ": stalk "
                        + std::to_string(m.stalk) + " but summands give " + std::to_string(m.summed));
    }
    return dec;
}

PointwiseReport verify_pointwise(const ArrangementModel& model, const SheafDecomposition& dec)
{
    return verify_pointwise(model, dec, all_stalks(model));
}

PointwiseReport verify_pointwise(const ArrangementModel& model, const SheafDecomposition& dec,
                                 const std::vector<StalkTable>& stalks)
{
    PointwiseReport report;
    int max_degree = 0;
    for (const auto& s : dec.summands)
        max_degree = std::max(max_degree, s.degree);
    for (std::size_t x : model.strata())
        if (!stalks.at(x).dims.empty())
            max_degree = std::max(max_degree, stalks.at(x).dims.rbegin()->first);

    for (std::size_t x : model.strata()) {
        for (int k = 0; k <= max_degree; ++k) {
            std::uint64_t summed = 0;
            for (const auto& s : dec.summands)
                if (s.degree == k && model.poset.leq(s.support, x))
                    summed += s.multiplicity;
            std::uint64_t stalk = stalks.at(x).dim(k);
            ++report.checked;
            if (summed != stalk)
                report.mismatches.push_back({x, k, stalk, summed});
        }
    }
    report.ok = report.mismatches.empty();
    return report;
}

std::vector<PurityViolation> check_purity(const ArrangementModel& model, const std::vector<StalkTable>& stalks)
{
    std::vector<PurityViolation> out;
    const int c = model.c;
    for (std::size_t x : model.strata()) {
        const auto& t = stalks.at(x);
        if (t.dim(0) != 1)
            out.push_back({x, 0, "stalk in degree 0 is not one-dimensional"});
        for (const auto& [k, d] : t.dims) {
            if (k % (2 * c - 1) != 0) {
                out.push_back({x, k, "nonzero stalk in a degree not divisible by 2c-1"});
                continue;
            }
            auto w = t.weights.find(k);
            if (w == t.weights.end() || w->second * (2 * c - 1) != 2 * c * k)
                out.push_back({x, k, "weight differs from 2c·k/(2c-1)"});
        }
    }
    return out;
}

} // namespace arrange
