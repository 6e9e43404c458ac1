#pragma once

/**
 * Exact linear algebra over the rationals.
 *
 * Everything downstream (flat deduplication, Gysin pushforwards, spectral
 * sequence ranks) reduces to ranks of rational matrices; there is no floating
 * point anywhere in the library.
 */

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace arrange {

using Rational = mpq_class;

/// Parses "p/q", "p" or "-p/q". Throws Error(ParseError) on malformed input.
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& value);

/**
 * Sparse rational matrix stored row-wise. Zero entries are never stored.
 */
class RationalMatrix {
public:
    RationalMatrix() = default;
    RationalMatrix(std::size_t rows, std::size_t cols);

    static RationalMatrix identity(std::size_t n);
    static RationalMatrix from_dense(const std::vector<std::vector<Rational>>& dense);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t nonzeros() const noexcept;
    bool is_zero() const noexcept { return nonzeros() == 0; }

    Rational at(std::size_t row, std::size_t col) const;
    void set(std::size_t row, std::size_t col, const Rational& value);
    void add(std::size_t row, std::size_t col, const Rational& value);

    const std::map<std::size_t, Rational>& row(std::size_t r) const { return data_.at(r); }

    RationalMatrix transpose() const;
    std::vector<std::vector<Rational>> dense() const;

    friend RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b);
    friend bool operator==(const RationalMatrix& a, const RationalMatrix& b);

private:
    void check_index(std::size_t row, std::size_t col) const;

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::map<std::size_t, Rational>> data_;
};

/// Below this size in both dimensions rank() eliminates on a dense copy.
inline constexpr std::size_t kDenseThreshold = 64;

std::size_t rank(const RationalMatrix& m);
std::size_t kernel_dim(const RationalMatrix& m);

/**
 * Dimension of ker(d_out) / im(d_in) at the middle space of
 *     A --d_in--> B --d_out--> C.
 * Throws ShapeMismatch when rows(d_in) != cols(d_out) and CompositionNonzero
 * when d_out * d_in != 0.
 */
std::size_t homology_dim(const RationalMatrix& d_in, const RationalMatrix& d_out);

struct EchelonForm {
    std::vector<std::vector<Rational>> rows; // nonzero rows, reduced
    std::vector<std::size_t> pivots;         // pivot column of each row, increasing
};

/// Reduced row echelon form of a dense row system.
EchelonForm reduced_echelon(std::vector<std::vector<Rational>> rows, std::size_t cols);

/// Basis of the null space, one vector per free column of the echelon form.
std::vector<std::vector<Rational>> kernel_basis(const RationalMatrix& m);

/// Unique solution of a square nonsingular system, or nullopt if singular.
std::optional<std::vector<Rational>> solve_unique(const RationalMatrix& a, const std::vector<Rational>& b);

} // namespace arrange
