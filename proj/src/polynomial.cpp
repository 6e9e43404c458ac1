#include "arrange/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "arrange/error.hpp"

namespace arrange {

Polynomial::Polynomial(std::vector<std::int64_t> coeffs)
    : coeffs_(std::move(coeffs))
{
    trim();
}

void Polynomial::trim()
{
    while (!coeffs_.empty() && coeffs_.back() == 0)
        coeffs_.pop_back();
}

std::int64_t Polynomial::eval(std::int64_t t) const
{
    std::int64_t acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
        acc = acc * t + *it;
    return acc;
}

Polynomial Polynomial::divided_by(const Polynomial& divisor) const
{
    if (divisor.is_zero())
        throw Error(Errc::InvalidArgument, "division by the zero polynomial");
    std::vector<std::int64_t> rem = coeffs_;
    const auto& d = divisor.coeffs_;
    if (is_zero())
        return {};
    if (rem.size() < d.size())
        throw Error(Errc::InvalidArgument, str() + " is not divisible by " + divisor.str());
    std::vector<std::int64_t> quot(rem.size() - d.size() + 1, 0);
    for (std::size_t i = quot.size(); i-- > 0;) {
        std::int64_t lead = rem[i + d.size() - 1];
        if (lead % d.back() != 0)
            throw Error(Errc::InvalidArgument, str() + " is not divisible by " + divisor.str());
        quot[i] = lead / d.back();
        for (std::size_t j = 0; j < d.size(); ++j)
            rem[i + j] -= quot[i] * d[j];
    }
    if (std::any_of(rem.begin(), rem.end(), [](std::int64_t v) { return v != 0; }))
        throw Error(Errc::InvalidArgument, str() + " is not divisible by " + divisor.str());
    return Polynomial(std::move(quot));
}

std::string Polynomial::str() const
{
    if (coeffs_.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
        std::int64_t c = coeffs_[k];
        if (c == 0)
            continue;
        if (!first)
            os << (c < 0 ? " - " : " + ");
        else if (c < 0)
            os << "-";
        std::int64_t a = c < 0 ? -c : c;
        if (k == 0 || a != 1)
            os << a;
        if (k >= 1)
            os << "t";
        if (k >= 2)
            os << "^" << k;
        first = false;
    }
    return os.str();
}

Polynomial Polynomial::parse(const std::string& text)
{
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch)))
            s.push_back(ch);
    if (s.empty())
        throw Error(Errc::ParseError, "empty polynomial");

    if (s.find('t') == std::string::npos && s.find(',') != std::string::npos) {
        std::vector<std::int64_t> c;
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                std::size_t used = 0;
                c.push_back(std::stoll(item, &used));
                if (used != item.size())
                    throw std::invalid_argument(item);
            } catch (const std::exception&) {
                throw Error(Errc::ParseError, "bad coefficient '" + item + "' in '" + text + "'");
            }
        }
        return Polynomial(std::move(c));
    }

    std::vector<std::int64_t> c;
    std::size_t i = 0;
    auto fail = [&]() { throw Error(Errc::ParseError, "cannot parse polynomial '" + text + "'"); };
    while (i < s.size()) {
        std::int64_t sign = 1;
        if (s[i] == '+' || s[i] == '-') {
            sign = s[i] == '-' ? -1 : 1;
            ++i;
        } else if (i != 0) {
            fail();
        }
        std::size_t start = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
            ++i;
        std::int64_t coef = start == i ? 1 : std::stoll(s.substr(start, i - start));
        bool has_digits = start != i;
        if (i < s.size() && s[i] == '*')
            ++i;
        std::size_t power = 0;
        if (i < s.size() && s[i] == 't') {
            ++i;
            power = 1;
            if (i < s.size() && s[i] == '^') {
                ++i;
                std::size_t ps = i;
                while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
                    ++i;
                if (ps == i)
                    fail();
                power = std::stoul(s.substr(ps, i - ps));
            }
        } else if (!has_digits) {
            fail();
        }
        if (c.size() <= power)
            c.resize(power + 1, 0);
        c[power] += sign * coef;
    }
    return Polynomial(std::move(c));
}

Polynomial operator+(const Polynomial& a, const Polynomial& b)
{
    std::vector<std::int64_t> c(std::max(a.coeffs_.size(), b.coeffs_.size()), 0);
    for (std::size_t i = 0; i < c.size(); ++i)
        c[i] = a[i] + b[i];
    return Polynomial(std::move(c));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b)
{
    std::vector<std::int64_t> c(std::max(a.coeffs_.size(), b.coeffs_.size()), 0);
    for (std::size_t i = 0; i < c.size(); ++i)
        c[i] = a[i] - b[i];
    return Polynomial(std::move(c));
}

Polynomial operator*(const Polynomial& a, const Polynomial& b)
{
    if (a.is_zero() || b.is_zero())
        return {};
    std::vector<std::int64_t> c(a.coeffs_.size() + b.coeffs_.size() - 1, 0);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
        for (std::size_t j = 0; j < b.coeffs_.size(); ++j)
            c[i + j] += a.coeffs_[i] * b.coeffs_[j];
    return Polynomial(std::move(c));
}

} // namespace arrange
