#pragma once

/**
 * Cohomology rings of products of projective spaces
 *
 *     H^*(P^{n_1} x ... x P^{n_m}) = Q[h_1..h_m] / (h_i^{n_i+1}),
 *
 * with monomial bases, pullbacks along maps given on generators, and Gysin
 * pushforwards defined through Poincaré duality.
 */

#include <cstddef>
#include <map>
#include <vector>

#include "arrange/exact_linalg.hpp"
#include "arrange/polynomial.hpp"

namespace arrange {

using Exponents = std::vector<int>;

class ProjProduct {
public:
    ProjProduct() = default;
    explicit ProjProduct(std::vector<int> factor_dims);

    const std::vector<int>& factor_dims() const noexcept { return factor_dims_; }
    std::size_t factors() const noexcept { return factor_dims_.size(); }
    int dim() const noexcept;

    /// Monomials of H^{degree}, in lexicographic order of exponent vectors.
    /// Empty for odd degrees and degrees above 2·dim.
    std::vector<Exponents> basis(int degree) const;
    std::size_t betti(int degree) const { return basis(degree).size(); }
    Exponents top_monomial() const { return factor_dims_; }

    /// Y^k: the factor list repeated k times.
    ProjProduct power(int k) const;

    friend bool operator==(const ProjProduct&, const ProjProduct&) = default;

private:
    std::vector<int> factor_dims_;
};

class CohClass {
public:
    CohClass() = default;
    CohClass(ProjProduct space, int degree);

    static CohClass unit(const ProjProduct& space);
    static CohClass monomial(const ProjProduct& space, const Exponents& e, const Rational& coeff = 1);
    /// h_i as a degree-2 class.
    static CohClass generator(const ProjProduct& space, std::size_t i);

    const ProjProduct& space() const noexcept { return space_; }
    int degree() const noexcept { return degree_; }
    const std::map<Exponents, Rational>& coeffs() const noexcept { return coeffs_; }
    Rational coeff(const Exponents& e) const;
    bool is_zero() const noexcept { return coeffs_.empty(); }

    /// Adds c·monomial; monomials outside the truncation box are dropped.
    void add_term(const Exponents& e, const Rational& c);

    CohClass& operator+=(const CohClass& other);
    friend CohClass operator+(CohClass a, const CohClass& b) { return a += b; }
    friend CohClass operator*(const Rational& s, CohClass a);
    friend bool operator==(const CohClass&, const CohClass&) = default;

private:
    ProjProduct space_;
    int degree_ = 0;
    std::map<Exponents, Rational> coeffs_;
};

/// Ring map target -> source determined by the images of the target's
/// generators; geometrically a map source -> target.
struct SpaceMap {
    ProjProduct source;
    ProjProduct target;
    std::vector<CohClass> generator_images; // one degree-2 class on `source` per target factor

    int codim() const noexcept { return target.dim() - source.dim(); }
};

/// Map sending target generator j to source generator factor_of[j] (or to 0
/// when factor_of[j] is negative). Covers coordinate subspace inclusions and
/// partial diagonals.
SpaceMap factor_map(const ProjProduct& source, const ProjProduct& target, const std::vector<int>& factor_of);

/// g ∘ f for f: A -> B and g: B -> C.
SpaceMap compose(const SpaceMap& g, const SpaceMap& f);

CohClass cup(const CohClass& a, const CohClass& b);
CohClass pullback(const SpaceMap& f, const CohClass& a);
Rational poincare_pair(const CohClass& a, const CohClass& b);
CohClass pushforward(const SpaceMap& f, const CohClass& a);
Polynomial betti_poly(const ProjProduct& s);

} // namespace arrange
