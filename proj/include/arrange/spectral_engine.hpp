#pragma once

/**
 * The Leray spectral sequence of j: U -> X for an admissible arrangement.
 *
 * E_2^{p,q} = H^p(X; R^q j_* Q) is assembled from the constant-sheaf
 * decomposition: the row q = (2c-1)l is the sum over codim-cl supports Y of
 * mult(Y) copies of H^p(Y), pure of weight p + 2cl. Only d_{2c} can be
 * nonzero, so E_{2c+1} = E_inf.
 */

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "arrange/exact_linalg.hpp"
#include "arrange/model.hpp"
#include "arrange/polynomial.hpp"
#include "arrange/sheaf_decomposition.hpp"

namespace arrange {

/// Provenance of one basis vector of an E_2 cell.
struct BasisLabel {
    std::size_t support = 0;
    std::size_t summand = 0;          // index into SheafDecomposition::summands
    std::size_t multiplicity_index = 0;
    std::size_t cohomology_index = 0; // position in the H^p basis of the support
    Exponents monomial;               // empty when the support has no explicit geometry

    friend bool operator==(const BasisLabel&, const BasisLabel&) = default;
};

struct WeightedCell {
    int p = 0;
    int q = 0;
    std::size_t dim = 0;
    int weight = 0;
    std::vector<BasisLabel> basis;
};

using Bidegree = std::pair<int, int>;

/// (k, w) -> dim Gr^W_w H^k(U)
using WeightTable = std::map<std::pair<int, int>, std::uint64_t>;

struct SpectralPage {
    int c = 1;
    int r = 2;
    std::map<Bidegree, WeightedCell> cells; // nonzero cells only

    /// Blocks of d_{2c} keyed by source bidegree; rows index the target cell
    /// basis, columns the source basis. Missing blocks are zero.
    bool has_differential = false;
    std::map<Bidegree, RationalMatrix> differential;

    std::size_t dim(int p, int q) const;
    const WeightedCell* cell(int p, int q) const;
    Bidegree target(Bidegree source) const { return {source.first + 2 * c, source.second - (2 * c - 1)}; }
    std::int64_t euler() const;
    Polynomial row_sums() const;
};

/// Throws MissingStratumData when a support has neither Betti data nor geometry.
SpectralPage assemble_E2(const ArrangementModel& model, const SheafDecomposition& dec);

/**
 * Fills page.differential with d_{2c}: a class alpha on the support of the
 * word w = (s_0 < ... < s_{l-1}) maps to sum_i (-1)^i (push alpha) on the
 * support of w minus s_i. Words are the member sets for normal crossings and
 * no-broken-circuit sets for configuration spaces.
 */
void build_differential_ncd(const ArrangementModel& model, const SheafDecomposition& dec, SpectralPage& page);
void build_differential_config(const ArrangementModel& model, const SheafDecomposition& dec, SpectralPage& page);

/// Dispatches on the model kind; throws ExplicitModeUnavailable or NoGeometry.
void build_differential(const ArrangementModel& model, const SheafDecomposition& dec, SpectralPage& page);

/// Words indexing the multiplicity space of every summand (member ids).
std::vector<std::vector<std::vector<std::size_t>>> multiplicity_words(const ArrangementModel& model,
                                                                      const SheafDecomposition& dec);

struct RunResult {
    SpectralPage einfty;
    Polynomial betti;
    WeightTable weights;
    std::map<Bidegree, std::size_t> ranks; // rank of d_{2c} out of each source cell
    std::int64_t euler_e2 = 0;
    std::int64_t euler_einfty = 0;
};

/**
 * E_inf = homology of d_{2c}. Each E_inf basis vector is labeled by the E_2
 * label at the pivot of its reduced representative.
 */
RunResult run(const SpectralPage& page);

/// Homology at position l of the weight-(k+l) skew row (c = 1 only).
std::uint64_t skew_row_homology(const SpectralPage& page, int k, int l);

struct SkewRow {
    int weight = 0;
    std::vector<Bidegree> cells;     // position l -> bidegree (p, (2c-1)l)
    std::vector<std::uint64_t> dims; // position l -> dim
};

/// Skew rows of the page, ordered by weight.
std::vector<SkewRow> skew_rows(const SpectralPage& page);

struct FeasibilityResult {
    std::int64_t euler = 0;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> betti_bounds; // index k
    bool feasible = true;
    bool unique = false;
    std::optional<std::map<Bidegree, std::uint64_t>> ranks;
    std::optional<WeightTable> weights;
};

/**
 * Searches nonnegative integer ranks of d_{2c} along every skew row.
 * Without a target only bounds and the Euler characteristic are reported.
 * With a target the ranks must reproduce it exactly; an impossible target
 * throws Infeasible naming the violated constraint.
 */
FeasibilityResult feasibility(const SpectralPage& page, const std::optional<Polynomial>& target = std::nullopt,
                              const std::optional<WeightTable>& weight_target = std::nullopt);

} // namespace arrange
