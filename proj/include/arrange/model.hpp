#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "arrange/intersection_poset.hpp"
#include "arrange/projective_calculus.hpp"

namespace arrange {

enum class ModelKind { Hyperplane, Ncd, Configuration, Subspace, Abstract };

std::string to_string(ModelKind kind);

/**
 * An arrangement j: U = X \ (Z_1 ∪ ... ∪ Z_s) -> X in a compact X together
 * with the cohomology of the closures of its strata.
 */
struct ArrangementModel {
    ModelKind kind = ModelKind::Abstract;
    int c = 1;

    /// Poset of the compact model; every stratum flat is a closed stratum of X.
    IntersectionPoset poset;

    /// Betti numbers of the closure of each flat (index = flat id; empty for
    /// flats that are not strata). Entry 0 is X itself.
    std::vector<std::vector<std::uint64_t>> stratum_betti;

    /// Explicit geometry when every stratum closure is a product of
    /// projective spaces.
    std::optional<ProjProduct> ambient;
    std::vector<std::optional<ProjProduct>> stratum_geometry;

    // Hyperplane models: the arrangement exactly as the user gave it (affine
    // and central inputs are compactified into P^n with a hyperplane at
    // infinity, which is appended as the last member of `poset`).
    std::optional<IntersectionPoset> input_poset;
    Space input_space = Space::Projective;
    bool ncd = false;

    // Configuration models
    std::optional<ProjProduct> factor;
    int points = 0;
    std::vector<std::vector<int>> point_block; // per flat: block index of each point

    bool explicit_available = false;
    std::string explicit_reason;

    int ambient_dim() const;
    std::vector<std::size_t> strata() const;

    /// Inclusion of the closure of `deeper` into the closure of `shallower`
    /// (requires shallower <= deeper). Throws NoGeometry without geometry.
    SpaceMap inclusion(std::size_t deeper, std::size_t shallower) const;
};

} // namespace arrange
