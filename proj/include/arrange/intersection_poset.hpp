#pragma once

/**
 * Intersection posets of arrangements.
 *
 * A flat is an irreducible component of an intersection of members. Flats are
 * ordered by reverse inclusion of their supports, so the ambient space is the
 * unique bottom element and deeper strata are larger. Linear arrangements and
 * diagonal arrangements produce geometric lattices; abstract input may carry
 * several components with the same member set and therefore needs an
 * explicit order.
 */

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "arrange/exact_linalg.hpp"

namespace arrange {

enum class Space { Affine, Central, Projective };

enum class PosetKind { Affine, Central, Projective, Diagonal, Abstract };

std::string to_string(Space space);
std::string to_string(PosetKind kind);

struct Flat {
    std::size_t id = 0;
    int codim = 0;
    std::vector<std::size_t> members; // sorted indices of the members containing the flat
    std::string canonical_key;
    std::string label;
};

class IntersectionPoset {
public:
    IntersectionPoset() = default;

    /// `leq[x][y]` means x <= y. Flat 0 must be the bottom. Validates the
    /// order invariants and computes the Möbius function.
    IntersectionPoset(PosetKind kind, int ambient_dim, int codim_c, std::vector<std::string> member_names,
                      std::vector<Flat> flats, std::vector<std::vector<bool>> leq, bool lattice);

    PosetKind kind() const noexcept { return kind_; }
    /// Complex dimension of the ambient space; for projective posets this is
    /// n for P^n while the flats live on the cone in C^{n+1}.
    int ambient_dim() const noexcept { return ambient_dim_; }
    int codim_c() const noexcept { return codim_c_; }
    bool is_lattice() const noexcept { return lattice_; }

    std::size_t size() const noexcept { return flats_.size(); }
    std::size_t bottom() const noexcept { return 0; }
    const Flat& flat(std::size_t id) const { return flats_.at(id); }
    const std::vector<Flat>& flats() const noexcept { return flats_; }

    std::size_t member_count() const noexcept { return member_names_.size(); }
    const std::string& member_name(std::size_t i) const { return member_names_.at(i); }
    const std::vector<std::string>& member_names() const noexcept { return member_names_; }
    std::size_t member_flat(std::size_t i) const { return member_flat_.at(i); }

    bool leq(std::size_t x, std::size_t y) const { return leq_.at(x).at(y); }
    bool less(std::size_t x, std::size_t y) const { return x != y && leq(x, y); }
    std::int64_t mobius(std::size_t x) const { return mobius_.at(x); }

    /// Projective posets keep the cone's origin for the Möbius computation,
    /// but it is not a point of projective space.
    bool is_stratum(std::size_t x) const;
    int max_codim() const;

    std::optional<std::size_t> find_key(const std::string& key) const;

    /// Minimal elements among the flats lying above every flat in `of`,
    /// optionally restricted to flats <= `bound`.
    std::vector<std::size_t> minimal_upper_bounds(std::span<const std::size_t> of,
                                                  std::optional<std::size_t> bound = std::nullopt) const;

private:
    PosetKind kind_ = PosetKind::Abstract;
    int ambient_dim_ = 0;
    int codim_c_ = 1;
    bool lattice_ = false;
    std::vector<std::string> member_names_;
    std::vector<std::size_t> member_flat_;
    std::vector<Flat> flats_;
    std::vector<std::vector<bool>> leq_;
    std::vector<std::int64_t> mobius_;
};

/// A linear form a·x + constant. Projective and central forms have constant 0.
struct Form {
    std::vector<Rational> coeffs;
    Rational constant = 0;
};

/// A linear subspace member given as the common zero set of its forms.
struct LinearMember {
    std::vector<Form> equations;
};

/**
 * Hyperplane arrangement poset. `ambient_dim` is n for C^n (affine, central)
 * and for P^n (projective, where each form has n+1 homogeneous coefficients).
 */
IntersectionPoset build_from_forms(const std::vector<Form>& forms, int ambient_dim, Space space,
                                   std::vector<std::string> names = {});

/// Arrangement of linear subspaces, each of codimension `codim_c`.
IntersectionPoset build_from_subspaces(const std::vector<LinearMember>& members, int ambient_dim, Space space,
                                       int codim_c, std::vector<std::string> names = {});

/// Set partitions of {1..n} ordered by refinement; codim is n - #blocks.
IntersectionPoset partition_lattice(int n);

struct AbstractFlatSpec {
    std::string name;
    int codim = 0;
    std::vector<std::string> members;
    std::optional<std::vector<std::string>> below; // strictly smaller flats (bottom implied)
};

/// Poset from user-supplied data. The bottom is added implicitly. If no flat
/// carries `below`, the order is derived from member-set inclusion.
IntersectionPoset build_abstract(int ambient_dim, int codim_c, const std::vector<std::string>& member_names,
                                 const std::vector<AbstractFlatSpec>& flats);

IntersectionPoset deletion(const IntersectionPoset& p, std::size_t member);
IntersectionPoset restriction(const IntersectionPoset& p, std::size_t member);

struct AdmissibilityViolation {
    std::size_t flat = 0;
    std::string label;
    int codim = 0;
    std::string reason;
};

struct AdmissibilityReport {
    bool ok = true;
    std::vector<AdmissibilityViolation> certificate;
    std::vector<std::string> notes;
};

AdmissibilityReport check_admissible(const IntersectionPoset& p);

} // namespace arrange
