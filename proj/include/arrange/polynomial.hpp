#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace arrange {

/// Integer polynomial in t, used for Betti/Poincaré polynomials. coeffs[k] is
/// the coefficient of t^k; trailing zeros are trimmed.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<std::int64_t> coeffs);

    static Polynomial one_plus_t() { return Polynomial({1, 1}); }

    /// Accepts "1 + 2t + t^2", "1+3t^2-t^4" or a comma list "1,2,1".
    static Polynomial parse(const std::string& text);

    const std::vector<std::int64_t>& coeffs() const noexcept { return coeffs_; }
    std::int64_t operator[](std::size_t k) const noexcept { return k < coeffs_.size() ? coeffs_[k] : 0; }
    int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const noexcept { return coeffs_.empty(); }

    std::int64_t eval(std::int64_t t) const;

    /// Exact division; throws InvalidArgument if the divisor does not divide.
    Polynomial divided_by(const Polynomial& divisor) const;

    std::string str() const;

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend bool operator==(const Polynomial&, const Polynomial&) = default;

private:
    void trim();
    std::vector<std::int64_t> coeffs_;
};

} // namespace arrange
