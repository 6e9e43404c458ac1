#pragma once

/**
 * Stalks of the derived pushforwards R^k j_* Q at the flats of an admissible
 * arrangement, via the deletion-restriction recursion
 *
 *     dim_A(k) = dim_{Z1}(k) + dim_{A'}(k) + [k+1 > 2c] dim_{A''}(k+1-2c),  k >= 1,
 *
 * where A' drops Z1 and A'' is the arrangement traced on Z1. Nonzero stalks
 * sit in degrees k = (2c-1)l with weight 2cl; the sheaf in degree (2c-1)l
 * splits as constant sheaves on the codim-cl flats.
 */

#include <cstddef>
#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

#include "arrange/model.hpp"

namespace arrange {

struct StalkTable {
    std::size_t flat = 0;
    std::map<int, std::uint64_t> dims; // nonzero entries only
    std::map<int, int> weights;        // same keys as dims

    std::uint64_t dim(int k) const
    {
        auto it = dims.find(k);
        return it == dims.end() ? 0 : it->second;
    }
};

/**
 * Memoized stalk evaluator. `priority` orders the flats when the recursion
 * picks the member to split off (lowest position first); the default is the
 * flat id. Stalks must not depend on it.
 */
class StalkSolver {
public:
    explicit StalkSolver(const IntersectionPoset& poset, std::vector<std::size_t> priority = {});

    StalkTable stalk(std::size_t x);
    std::size_t memo_size() const;

private:
    using Dims = std::vector<std::uint64_t>;
    using Key = std::tuple<std::size_t, std::size_t, std::vector<std::size_t>>;

    Dims local(std::size_t point, std::size_t base, std::vector<std::size_t> members, int depth);

    const IntersectionPoset& poset_;
    std::vector<std::size_t> rank_of_;
    int depth_limit_ = 0;
    mutable std::mutex mutex_;
    std::map<Key, Dims> memo_;
};

StalkTable stalk_dims(const ArrangementModel& model, std::size_t x);

/// Stalk tables at every stratum flat, indexed by flat id (non-strata empty).
std::vector<StalkTable> all_stalks(const ArrangementModel& model);

struct Summand {
    std::size_t support = 0;
    int level = 0;
    int degree = 0;
    std::uint64_t multiplicity = 0;
    int weight = 0;
};

struct SheafDecomposition {
    int c = 1;
    std::vector<Summand> summands; // level 0 is the constant sheaf on X
};

struct PointwiseMismatch {
    std::size_t flat = 0;
    int degree = 0;
    std::uint64_t stalk = 0;
    std::uint64_t summed = 0;
};

struct PointwiseReport {
    bool ok = true;
    std::size_t checked = 0;
    std::vector<PointwiseMismatch> mismatches;
};

SheafDecomposition decompose(const ArrangementModel& model);
SheafDecomposition decompose(const ArrangementModel& model, const std::vector<StalkTable>& stalks);

PointwiseReport verify_pointwise(const ArrangementModel& model, const SheafDecomposition& dec);
PointwiseReport verify_pointwise(const ArrangementModel& model, const SheafDecomposition& dec,
                                 const std::vector<StalkTable>& stalks);

struct PurityViolation {
    std::size_t flat = 0;
    int degree = 0;
    std::string reason;
};

/// Vanishing outside degrees divisible by 2c-1 and weight 2c·k/(2c-1).
std::vector<PurityViolation> check_purity(const ArrangementModel& model, const std::vector<StalkTable>& stalks);

} // namespace arrange
