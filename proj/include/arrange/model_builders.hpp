#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "arrange/model.hpp"
#include "arrange/polynomial.hpp"

namespace arrange {

/// Precomputed posets, e.g. restored from the result cache.
struct PosetHints {
    std::optional<IntersectionPoset> poset;
    std::optional<IntersectionPoset> input_poset;
};

/**
 * Hyperplane arrangement in P^n (projective) or C^n (affine, central).
 * Affine and central inputs are closed up in P^n and the hyperplane at
 * infinity is added as the last member.
 */
ArrangementModel hyperplane_model(const std::vector<Form>& forms, int ambient_dim, Space space,
                                  const PosetHints& hints = {});

/// Same as hyperplane_model but insists on normal crossings.
ArrangementModel ncd_model(const std::vector<Form>& forms, int ambient_dim, Space space,
                           const PosetHints& hints = {});

/// Arrangement of codim-c linear subspaces of P^n.
ArrangementModel subspace_model(const std::vector<LinearMember>& members, int ambient_dim, int c,
                                const PosetHints& hints = {});

/// Diagonal arrangement in Y^n whose complement is the configuration space F(Y, n).
ArrangementModel configuration_model(const ProjProduct& y, int n);

struct AbstractStratum {
    AbstractFlatSpec flat;
    std::optional<std::vector<std::uint64_t>> betti;
};

struct AbstractModelSpec {
    int c = 1;
    std::vector<std::uint64_t> ambient_betti;
    std::vector<std::string> members;
    std::vector<AbstractStratum> flats;
};

ArrangementModel abstract_model(const AbstractModelSpec& spec);

/**
 * Poincaré polynomial of a c = 1 complement from the Möbius function:
 * sum over flats of |mu| t^codim, divided by (1 + t) for projective posets.
 * Throws NotRankOne for c != 1.
 */
Polynomial os_oracle(const IntersectionPoset& p);

/// Independent Poincaré polynomial of U when one is known for the model:
/// the Orlik–Solomon count for hyperplane models and P(Y)^2 - t^{2c} P(Y)
/// for two-point configuration spaces.
std::optional<Polynomial> reference_poincare(const ArrangementModel& model);

struct LocalSystemSpec {
    std::map<std::size_t, Rational> exponents; // member index -> exponent, read mod 1
};

struct MonReport {
    std::vector<std::size_t> ok_flats;
    std::vector<std::size_t> bad_flats;
    bool holds = false;
    std::vector<std::string> conclusion;
    std::vector<std::string> warnings;
};

/// Rank-one local systems on c = 1 models: the monodromy product around
/// every flat of the boundary must differ from 1.
MonReport check_mon(const ArrangementModel& model, const LocalSystemSpec& local_system);

/// Representative of an exponent in [0, 1).
Rational reduce_mod_one(const Rational& r);

} // namespace arrange
