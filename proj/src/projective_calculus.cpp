#include "arrange/projective_calculus.hpp"

#include <functional>
#include <numeric>

#include "arrange/error.hpp"

namespace arrange {

ProjProduct::ProjProduct(std::vector<int> factor_dims)
    : factor_dims_(std::move(factor_dims))
{
    for (int n : factor_dims_)
        if (n < 0)
            throw Error(Errc::InvalidArgument, "projective factor of negative dimension");
}

int ProjProduct::dim() const noexcept
{
    return std::accumulate(factor_dims_.begin(), factor_dims_.end(), 0);
}

std::vector<Exponents> ProjProduct::basis(int degree) const
{
    std::vector<Exponents> out;
    if (degree < 0 || degree % 2 != 0 || degree > 2 * dim())
        return out;
    Exponents e(factor_dims_.size(), 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int remaining) {
        if (i == factor_dims_.size()) {
            if (remaining == 0)
                out.push_back(e);
            return;
        }
        for (int a = 0; a <= std::min(remaining, factor_dims_[i]); ++a) {
            e[i] = a;
            rec(i + 1, remaining - a);
        }
        e[i] = 0;
    };
    rec(0, degree / 2);
    return out;
}

ProjProduct ProjProduct::power(int k) const
{
    std::vector<int> dims;
    for (int i = 0; i < k; ++i)
        dims.insert(dims.end(), factor_dims_.begin(), factor_dims_.end());
    return ProjProduct(std::move(dims));
}

CohClass::CohClass(ProjProduct space, int degree)
    : space_(std::move(space)), degree_(degree)
{
    if (degree < 0 || degree % 2 != 0)
        throw Error(Errc::DegreeMismatch, "classes live in even nonnegative degrees, got " + std::to_string(degree));
}

CohClass CohClass::unit(const ProjProduct& space)
{
    return monomial(space, Exponents(space.factors(), 0));
}

CohClass CohClass::monomial(const ProjProduct& space, const Exponents& e, const Rational& coeff)
{
    if (e.size() != space.factors())
        throw Error(Errc::SpaceMismatch, "exponent vector length differs from the number of factors");
    CohClass c(space, 2 * std::accumulate(e.begin(), e.end(), 0));
    c.add_term(e, coeff);
    return c;
}

CohClass CohClass::generator(const ProjProduct& space, std::size_t i)
{
    Exponents e(space.factors(), 0);
    e.at(i) = 1;
    return monomial(space, e);
}

Rational CohClass::coeff(const Exponents& e) const
{
    auto it = coeffs_.find(e);
    return it == coeffs_.end() ? Rational(0) : it->second;
}

void CohClass::add_term(const Exponents& e, const Rational& c)
{
    if (e.size() != space_.factors())
        throw Error(Errc::SpaceMismatch, "exponent vector length differs from the number of factors");
    if (2 * std::accumulate(e.begin(), e.end(), 0) != degree_)
        throw Error(Errc::DegreeMismatch, "mixed-degree class");
    for (std::size_t i = 0; i < e.size(); ++i)
        if (e[i] < 0 || e[i] > space_.factor_dims()[i])
            return;
    if (c == 0)
        return;
    auto [it, inserted] = coeffs_.try_emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0)
            coeffs_.erase(it);
    }
}

CohClass& CohClass::operator+=(const CohClass& other)
{
    if (!(space_ == other.space_))
        throw Error(Errc::SpaceMismatch, "adding classes on different spaces");
    if (degree_ != other.degree_)
        throw Error(Errc::DegreeMismatch, "adding classes of different degree");
    for (const auto& [e, c] : other.coeffs_)
        add_term(e, c);
    return *this;
}

CohClass operator*(const Rational& s, CohClass a)
{
    if (s == 0) {
        a.coeffs_.clear();
        return a;
    }
    for (auto& [e, c] : a.coeffs_)
        c *= s;
    return a;
}

CohClass cup(const CohClass& a, const CohClass& b)
{
    if (!(a.space() == b.space()))
        throw Error(Errc::SpaceMismatch, "cup product of classes on different spaces");
    CohClass out(a.space(), a.degree() + b.degree());
    for (const auto& [ea, ca] : a.coeffs())
        for (const auto& [eb, cb] : b.coeffs()) {
            Exponents e(ea.size());
            for (std::size_t i = 0; i < e.size(); ++i)
                e[i] = ea[i] + eb[i];
            out.add_term(e, ca * cb);
        }
    return out;
}

SpaceMap factor_map(const ProjProduct& source, const ProjProduct& target, const std::vector<int>& factor_of)
{
    if (factor_of.size() != target.factors())
        throw Error(Errc::SpaceMismatch, "factor map needs one entry per target factor");
    SpaceMap f{source, target, {}};
    for (int j : factor_of) {
        if (j < 0)
            f.generator_images.emplace_back(source, 2);
        else
            f.generator_images.push_back(CohClass::generator(source, static_cast<std::size_t>(j)));
    }
    return f;
}

CohClass pullback(const SpaceMap& f, const CohClass& a)
{
    if (!(a.space() == f.target))
        throw Error(Errc::SpaceMismatch, "pullback of a class not on the map's target");
    if (f.generator_images.size() != f.target.factors())
        throw Error(Errc::SpaceMismatch, "map is missing generator images");
    CohClass out(f.source, a.degree());
    for (const auto& [e, c] : a.coeffs()) {
        CohClass term = CohClass::unit(f.source);
        for (std::size_t j = 0; j < e.size(); ++j)
            for (int k = 0; k < e[j]; ++k)
                term = cup(term, f.generator_images[j]);
        out += c * term;
    }
    return out;
}

SpaceMap compose(const SpaceMap& g, const SpaceMap& f)
{
    if (!(f.target == g.source))
        throw Error(Errc::SpaceMismatch, "maps are not composable");
    SpaceMap h{f.source, g.target, {}};
    for (const auto& img : g.generator_images)
        h.generator_images.push_back(pullback(f, img));
    return h;
}

Rational poincare_pair(const CohClass& a, const CohClass& b)
{
    if (!(a.space() == b.space()))
        throw Error(Errc::SpaceMismatch, "pairing classes on different spaces");
    if (a.degree() + b.degree() != 2 * a.space().dim())
        throw Error(Errc::DegreeMismatch, "pairing needs complementary degrees");
    return cup(a, b).coeff(a.space().top_monomial());
}

CohClass pushforward(const SpaceMap& f, const CohClass& a)
{
    if (!(a.space() == f.source))
        throw Error(Errc::SpaceMismatch, "pushforward of a class not on the map's source");
    if (f.codim() < 0)
        throw Error(Errc::InvalidArgument, "pushforward along a map of negative codimension");
    const int degree = a.degree() + 2 * f.codim();
    CohClass out(f.target, degree);
    const auto unknowns = f.target.basis(degree);
    if (unknowns.empty() || a.is_zero())
        return out;

    // <push(a), b>_target = <a, f^*b>_source for every b of complementary degree
    const auto tests = f.target.basis(2 * f.target.dim() - degree);
    RationalMatrix pairing(tests.size(), unknowns.size());
    std::vector<Rational> rhs(tests.size());
    for (std::size_t i = 0; i < tests.size(); ++i) {
        CohClass b = CohClass::monomial(f.target, tests[i]);
        for (std::size_t j = 0; j < unknowns.size(); ++j)
            pairing.set(i, j, poincare_pair(CohClass::monomial(f.target, unknowns[j]), b));
        rhs[i] = poincare_pair(a, pullback(f, b));
    }
    auto x = solve_unique(pairing, rhs);
    if (!x)
        throw Error(Errc::InvalidArgument, "degenerate Poincaré pairing on a projective product");
    for (std::size_t j = 0; j < unknowns.size(); ++j)
        out.add_term(unknowns[j], (*x)[j]);
    return out;
}

Polynomial betti_poly(const ProjProduct& s)
{
    Polynomial p({1});
    for (int n : s.factor_dims()) {
        std::vector<std::int64_t> f(2 * n + 1, 0);
        for (int k = 0; k <= n; ++k)
            f[2 * k] = 1;
        p = p * Polynomial(std::move(f));
    }
    return p;
}

} // namespace arrange
