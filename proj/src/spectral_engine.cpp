#include "arrange/spectral_engine.hpp"

#include <algorithm>
#include <functional>
#include <tuple>

#include "arrange/error.hpp"

namespace arrange {

std::size_t SpectralPage::dim(int p, int q) const
{
    auto it = cells.find({p, q});
    return it == cells.end() ? 0 : it->second.dim;
}

const WeightedCell* SpectralPage::cell(int p, int q) const
{
    auto it = cells.find({p, q});
    return it == cells.end() ? nullptr : &it->second;
}

std::int64_t SpectralPage::euler() const
{
    std::int64_t chi = 0;
    for (const auto& [pq, cell] : cells)
        chi += ((pq.first + pq.second) % 2 == 0 ? 1 : -1) * static_cast<std::int64_t>(cell.dim);
    return chi;
}

Polynomial SpectralPage::row_sums() const
{
    std::vector<std::int64_t> b;
    for (const auto& [pq, cell] : cells) {
        std::size_t k = static_cast<std::size_t>(pq.first + pq.second);
        if (b.size() <= k)
            b.resize(k + 1, 0);
        b[k] += static_cast<std::int64_t>(cell.dim);
    }
    return Polynomial(std::move(b));
}

SpectralPage assemble_E2(const ArrangementModel& model, const SheafDecomposition& dec)
{
    const int c = dec.c;
    SpectralPage page;
    page.c = c;
    page.r = 2 * c;
    for (std::size_t s = 0; s < dec.summands.size(); ++s) {
        const Summand& sm = dec.summands[s];
        const auto* geometry = sm.support < model.stratum_geometry.size() && model.stratum_geometry[sm.support]
                                   ? &*model.stratum_geometry[sm.support]
                                   : nullptr;
        const std::vector<std::uint64_t>* betti =
            sm.support < model.stratum_betti.size() && !model.stratum_betti[sm.support].empty()
                ? &model.stratum_betti[sm.support]
                : nullptr;
        if (!geometry && !betti)
            throw Error(Errc::MissingStratumData,
                        "no cohomology for support '" + model.poset.flat(sm.support).label + "'");
        const int top = geometry ? 2 * geometry->dim() : static_cast<int>(betti->size()) - 1;
        const int q = (2 * c - 1) * sm.level;
        for (int p = 0; p <= top; ++p) {
            std::vector<Exponents> monomials;
            std::size_t bp = 0;
            if (geometry) {
                monomials = geometry->basis(p);
                bp = monomials.size();
            } else {
                bp = (*betti)[static_cast<std::size_t>(p)];
            }
            if (bp == 0 || sm.multiplicity == 0)
                continue;
            WeightedCell& cell = page.cells[{p, q}];
            cell.p = p;
            cell.q = q;
            cell.weight = p + 2 * c * sm.level;
            for (std::uint64_t m = 0; m < sm.multiplicity; ++m)
                for (std::size_t i = 0; i < bp; ++i)
                    cell.basis.push_back({sm.support, s, m, i, geometry ? monomials[i] : Exponents{}});
            cell.dim = cell.basis.size();
        }
    }
    return page;
}

namespace {

std::size_t join_of(const IntersectionPoset& poset, const std::vector<std::size_t>& members, std::size_t bound)
{
    if (members.empty())
        return poset.bottom();
    std::vector<std::size_t> flats;
    for (std::size_t m : members)
        flats.push_back(poset.member_flat(m));
    auto ub = poset.minimal_upper_bounds(flats, bound);
    if (ub.size() != 1)
        throw Error(Errc::NotAdmissible, "members have no unique join below '" + poset.flat(bound).label + "'");
    return ub.front();
}

// S = (s_0 < ... < s_{l-1}) is a no-broken-circuit set iff every suffix is
// independent and s_j is the smallest member under the join of its suffix.
bool is_nbc(const IntersectionPoset& poset, const std::vector<std::size_t>& word, std::size_t bound)
{
    const int c = poset.codim_c();
    for (std::size_t j = 0; j < word.size(); ++j) {
        std::vector<std::size_t> suffix(word.begin() + static_cast<std::ptrdiff_t>(j), word.end());
        std::vector<std::size_t> flats;
        for (std::size_t m : suffix)
            flats.push_back(poset.member_flat(m));
        auto ub = poset.minimal_upper_bounds(flats, bound);
        if (ub.size() != 1)
            return false;
        const Flat& f = poset.flat(ub.front());
        if (f.codim != c * static_cast<int>(suffix.size()))
            return false;
        if (f.members.front() != word[j])
            return false;
    }
    return true;
}

} // namespace

std::vector<std::vector<std::vector<std::size_t>>> multiplicity_words(const ArrangementModel& model,
                                                                      const SheafDecomposition& dec)
{
    const IntersectionPoset& poset = model.poset;
    std::vector<std::vector<std::vector<std::size_t>>> out;
    for (const Summand& sm : dec.summands) {
        std::vector<std::vector<std::size_t>> words;
        const auto& members = poset.flat(sm.support).members;
        const std::size_t l = static_cast<std::size_t>(sm.level);
        std::vector<std::size_t> word;
        std::function<void(std::size_t)> extend = [&](std::size_t from) {
            if (word.size() == l) {
                if (join_of(poset, word, sm.support) == sm.support && is_nbc(poset, word, sm.support))
                    words.push_back(word);
                return;
            }
            for (std::size_t i = from; i < members.size(); ++i) {
                word.push_back(members[i]);
                extend(i + 1);
                word.pop_back();
            }
        };
        if (l <= members.size())
            extend(0);
        if (words.size() != sm.multiplicity)
            throw Error(Errc::ExplicitModeUnavailable,
                        "support '" + poset.flat(sm.support).label + "' has multiplicity "
                            + std::to_string(sm.multiplicity) + " but " + std::to_string(words.size())
                            + " independent words");
        out.push_back(std::move(words));
    }
    return out;
}

namespace {

void build_gysin(const ArrangementModel& model, const SheafDecomposition& dec, SpectralPage& page)
{
    const IntersectionPoset& poset = model.poset;
    auto words = multiplicity_words(model, dec);

    std::map<std::size_t, std::size_t> summand_of_support;
    for (std::size_t s = 0; s < dec.summands.size(); ++s)
        summand_of_support[dec.summands[s].support] = s;

    using LabelKey = std::tuple<std::size_t, std::size_t, Exponents>;
    std::map<Bidegree, std::map<LabelKey, std::size_t>> position;
    for (const auto& [pq, cell] : page.cells)
        for (std::size_t i = 0; i < cell.basis.size(); ++i) {
            const BasisLabel& b = cell.basis[i];
            position[pq][{b.summand, b.multiplicity_index, b.monomial}] = i;
        }

    page.differential.clear();
    for (const auto& [pq, cell] : page.cells) {
        if (pq.second == 0)
            continue;
        const Bidegree tgt = page.target(pq);
        const WeightedCell* target_cell = page.cell(tgt.first, tgt.second);
        RationalMatrix block(target_cell ? target_cell->dim : 0, cell.dim);
        for (std::size_t col = 0; col < cell.basis.size(); ++col) {
            const BasisLabel& b = cell.basis[col];
            const auto& word = words.at(b.summand).at(b.multiplicity_index);
            const ProjProduct& source = *model.stratum_geometry.at(b.support);
            CohClass alpha = CohClass::monomial(source, b.monomial);
            for (std::size_t i = 0; i < word.size(); ++i) {
                std::vector<std::size_t> face = word;
                face.erase(face.begin() + static_cast<std::ptrdiff_t>(i));
                const std::size_t y = join_of(poset, face, b.support);
                auto t = summand_of_support.find(y);
                if (t == summand_of_support.end())
                    throw Error(Errc::InconsistentDecomposition,
                                "face support '" + poset.flat(y).label + "' is missing from the decomposition");
                const auto& target_words = words.at(t->second);
                auto w = std::find(target_words.begin(), target_words.end(), face);
                if (w == target_words.end())
                    throw Error(Errc::InconsistentDecomposition, "face word is not a basis word");
                const std::size_t mult = static_cast<std::size_t>(w - target_words.begin());
                CohClass image = pushforward(model.inclusion(b.support, y), alpha);
                const Rational sign = i % 2 == 0 ? 1 : -1;
                for (const auto& [mono, coeff] : image.coeffs()) {
                    auto& lookup = position[tgt];
                    auto row = lookup.find({t->second, mult, mono});
                    if (row == lookup.end())
                        throw Error(Errc::NotComposable, "pushforward lands outside the target cell");
                    block.add(row->second, col, sign * coeff);
                }
            }
        }
        page.differential.emplace(pq, std::move(block));
    }
    page.has_differential = true;
}

void require_geometry(const ArrangementModel& model, const SheafDecomposition& dec)
{
    for (const Summand& sm : dec.summands)
        if (sm.support >= model.stratum_geometry.size() || !model.stratum_geometry[sm.support])
            throw Error(Errc::NoGeometry, "support '" + model.poset.flat(sm.support).label
                                              + "' has no explicit geometry");
}

} // namespace

void build_differential_ncd(const ArrangementModel& model, const SheafDecomposition& dec, SpectralPage& page)
{
    require_geometry(model, dec);
    if (!model.ncd)
        throw Error(Errc::ExplicitModeUnavailable, "arrangement is not normal crossings");
    build_gysin(model, dec, page);
}

void build_differential_config(const ArrangementModel& model, const SheafDecomposition& dec, SpectralPage& page)
{
    if (model.kind != ModelKind::Configuration)
        throw Error(Errc::InvalidArgument, "not a configuration-space model");
    if (model.points > 3)
        throw Error(Errc::ExplicitModeUnavailable,
                    "explicit differential for configuration spaces needs n <= 3, got n = "
                        + std::to_string(model.points));
    require_geometry(model, dec);
    build_gysin(model, dec, page);
}

void build_differential(const ArrangementModel& model, const SheafDecomposition& dec, SpectralPage& page)
{
    switch (model.kind) {
    case ModelKind::Hyperplane:
    case ModelKind::Ncd:
        build_differential_ncd(model, dec, page);
        return;
    case ModelKind::Configuration:
        build_differential_config(model, dec, page);
        return;
    default:
        throw Error(Errc::ExplicitModeUnavailable, model.explicit_reason.empty()
                                                       ? "no explicit differential for " + to_string(model.kind)
                                                       : model.explicit_reason);
    }
}

namespace {

// Block of d_{2c} out of `source`, zero-filled and shape-checked.
RationalMatrix block_from(const SpectralPage& page, Bidegree source)
{
    const Bidegree tgt = page.target(source);
    const std::size_t rows = page.dim(tgt.first, tgt.second);
    const std::size_t cols = page.dim(source.first, source.second);
    auto it = page.differential.find(source);
    if (it == page.differential.end())
        return RationalMatrix(rows, cols);
    const RationalMatrix& m = it->second;
    if (m.is_zero())
        return RationalMatrix(rows, cols);
    if (m.rows() != rows || m.cols() != cols)
        throw Error(Errc::NotComposable, "block at (" + std::to_string(source.first) + ","
                                             + std::to_string(source.second) + ") is " + std::to_string(m.rows())
                                             + "x" + std::to_string(m.cols()) + ", expected "
                                             + std::to_string(rows) + "x" + std::to_string(cols));
    return m;
}

void check_page(const SpectralPage& page)
{
    if (!page.has_differential)
        throw Error(Errc::NotComposable, "page carries no differential");
    for (const auto& [src, m] : page.differential) {
        if (m.is_zero())
            continue;
        block_from(page, src);
        const Bidegree tgt = page.target(src);
        const WeightedCell* a = page.cell(src.first, src.second);
        const WeightedCell* b = page.cell(tgt.first, tgt.second);
        if (a && b && a->weight != b->weight)
            throw Error(Errc::WeightViolation, "d maps weight " + std::to_string(a->weight) + " at ("
                                                   + std::to_string(src.first) + "," + std::to_string(src.second)
                                                   + ") to weight " + std::to_string(b->weight));
    }
}

using SparseVec = std::map<std::size_t, Rational>;

// Reduces v against pivots (keyed by leading index); returns the reduced vector.
SparseVec reduce(SparseVec v, const std::map<std::size_t, SparseVec>& pivots)
{
    while (!v.empty()) {
        auto lead = v.begin();
        auto p = pivots.find(lead->first);
        if (p == pivots.end())
            break;
        Rational factor = lead->second / p->second.begin()->second;
        for (const auto& [j, x] : p->second) {
            Rational& entry = v[j];
            entry -= factor * x;
            if (entry == 0)
                v.erase(j);
        }
    }
    return v;
}

// Leading indices of a basis of span(kernel) / span(image).
std::vector<std::size_t> quotient_pivots(const RationalMatrix& d_in, const std::vector<std::vector<Rational>>& kernel)
{
    std::map<std::size_t, SparseVec> pivots;
    RationalMatrix cols = d_in.transpose();
    for (std::size_t j = 0; j < cols.rows(); ++j) {
        SparseVec v = reduce(cols.row(j), pivots);
        if (!v.empty())
            pivots.emplace(v.begin()->first, std::move(v));
    }
    std::vector<std::size_t> out;
    for (const auto& k : kernel) {
        SparseVec v;
        for (std::size_t i = 0; i < k.size(); ++i)
            if (k[i] != 0)
                v[i] = k[i];
        v = reduce(std::move(v), pivots);
        if (v.empty())
            continue;
        out.push_back(v.begin()->first);
        pivots.emplace(v.begin()->first, std::move(v));
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

RunResult run(const SpectralPage& page)
{
    check_page(page);
    RunResult res;
    res.einfty.c = page.c;
    res.einfty.r = 2 * page.c + 1;
    res.einfty.has_differential = true;
    res.euler_e2 = page.euler();

    const int shift = 2 * page.c - 1;
    std::map<std::pair<int, int>, Bidegree> weight_owner;
    std::vector<std::int64_t> betti;
    for (const auto& [pq, cell] : page.cells) {
        const Bidegree src{pq.first - 2 * page.c, pq.second + shift};
        RationalMatrix d_out = block_from(page, pq);
        RationalMatrix d_in = block_from(page, src);
        const std::size_t h = homology_dim(d_in, d_out);
        if (!d_out.is_zero())
            res.ranks[pq] = rank(d_out);
        if (h == 0)
            continue;

        auto pivots = quotient_pivots(d_in, kernel_basis(d_out));
        if (pivots.size() != h)
            throw Error(Errc::NotComposable, "homology representatives disagree with the rank count");
        WeightedCell out;
        out.p = pq.first;
        out.q = pq.second;
        out.weight = cell.weight;
        for (std::size_t i : pivots)
            out.basis.push_back(cell.basis.at(i));
        out.dim = h;
        res.einfty.cells.emplace(pq, std::move(out));

        const int k = pq.first + pq.second;
        auto [owner, fresh] = weight_owner.emplace(std::make_pair(k, cell.weight), pq);
        if (!fresh)
            throw Error(Errc::WeightViolation, "cells (" + std::to_string(owner->second.first) + ","
                                                   + std::to_string(owner->second.second) + ") and ("
                                                   + std::to_string(pq.first) + "," + std::to_string(pq.second)
                                                   + ") share total degree and weight");
        res.weights[{k, cell.weight}] = h;
        if (betti.size() <= static_cast<std::size_t>(k))
            betti.resize(static_cast<std::size_t>(k) + 1, 0);
        betti[static_cast<std::size_t>(k)] += static_cast<std::int64_t>(h);
    }
    res.betti = Polynomial(std::move(betti));
    res.euler_einfty = res.einfty.euler();
    if (res.euler_e2 != res.euler_einfty)
        throw Error(Errc::NotComposable, "Euler characteristic changed from " + std::to_string(res.euler_e2) + " to "
                                             + std::to_string(res.euler_einfty));
    return res;
}

std::uint64_t skew_row_homology(const SpectralPage& page, int k, int l)
{
    if (page.c != 1)
        throw Error(Errc::InvalidArgument, "skew-row homology is implemented for c = 1");
    if (k < 0 || l < 0)
        throw Error(Errc::InvalidArgument, "negative index");
    check_page(page);
    if (l > k)
        return 0;
    // Positions j of the weight-(k+l) row sit at (k+l-2j, j); d lowers j by one.
    const int w = k + l;
    auto position = [&](int j) { return Bidegree{w - 2 * j, j}; };
    return homology_dim(block_from(page, position(l + 1)), block_from(page, position(l)));
}

std::vector<SkewRow> skew_rows(const SpectralPage& page)
{
    const int c = page.c;
    const int shift = 2 * c - 1;
    std::map<int, SkewRow> rows;
    for (const auto& [pq, cell] : page.cells) {
        if (pq.second % shift != 0)
            throw Error(Errc::WeightViolation, "nonzero cell in row q = " + std::to_string(pq.second)
                                                   + " not divisible by 2c-1");
        const int l = pq.second / shift;
        const int w = pq.first + 2 * c * l;
        SkewRow& row = rows[w];
        row.weight = w;
        if (row.dims.size() <= static_cast<std::size_t>(l)) {
            row.dims.resize(static_cast<std::size_t>(l) + 1, 0);
            row.cells.resize(static_cast<std::size_t>(l) + 1);
        }
        row.dims[static_cast<std::size_t>(l)] = cell.dim;
    }
    std::vector<SkewRow> out;
    for (auto& [w, row] : rows) {
        for (std::size_t l = 0; l < row.cells.size(); ++l)
            row.cells[l] = {w - 2 * c * static_cast<int>(l), shift * static_cast<int>(l)};
        out.push_back(std::move(row));
    }
    return out;
}

namespace {

struct RowOption {
    std::vector<std::uint64_t> ranks; // position l -> rank out of l (ranks[0] = 0)
    std::vector<std::uint64_t> einf;  // position l -> E_inf dim
};

std::vector<RowOption> row_options(const SkewRow& row)
{
    const std::size_t len = row.dims.size();
    std::vector<RowOption> out;
    RowOption cur;
    cur.ranks.assign(len, 0);
    cur.einf.assign(len, 0);
    std::function<void(std::size_t)> choose = [&](std::size_t l) {
        if (l == len) {
            cur.einf[len - 1] = row.dims[len - 1] - cur.ranks[len - 1];
            out.push_back(cur);
            return;
        }
        const std::uint64_t free_below = row.dims[l - 1] - cur.ranks[l - 1];
        const std::uint64_t cap = std::min(free_below, row.dims[l]);
        for (std::uint64_t r = 0; r <= cap; ++r) {
            cur.ranks[l] = r;
            cur.einf[l - 1] = free_below - r;
            choose(l + 1);
        }
    };
    choose(1);
    return out;
}

} // namespace

FeasibilityResult feasibility(const SpectralPage& page, const std::optional<Polynomial>& target,
                              const std::optional<WeightTable>& weight_target)
{
    FeasibilityResult res;
    res.euler = page.euler();
    const auto rows = skew_rows(page);

    int max_k = 0;
    for (const auto& [pq, cell] : page.cells)
        max_k = std::max(max_k, pq.first + pq.second);
    const std::size_t nk = static_cast<std::size_t>(max_k) + 1;
    auto degree_of = [&](const SkewRow& row, std::size_t l) {
        return static_cast<std::size_t>(row.cells[l].first + row.cells[l].second);
    };

    std::vector<std::vector<RowOption>> options;
    for (const SkewRow& row : rows) {
        auto opts = row_options(row);
        if (weight_target) {
            std::erase_if(opts, [&](const RowOption& o) {
                for (std::size_t l = 0; l < o.einf.size(); ++l) {
                    auto it = weight_target->find({static_cast<int>(degree_of(row, l)), row.weight});
                    const std::uint64_t want = it == weight_target->end() ? 0 : it->second;
                    if (o.einf[l] != want)
                        return true;
                }
                return false;
            });
            if (opts.empty())
                throw Error(Errc::Infeasible, "no ranks on the weight-" + std::to_string(row.weight)
                                                         + " skew row reproduce the weight-graded target");
        }
        options.push_back(std::move(opts));
    }

    // Per-row and suffix bounds on each b_k.
    const std::size_t nrows = rows.size();
    std::vector<std::vector<std::uint64_t>> row_min(nrows, std::vector<std::uint64_t>(nk, 0));
    std::vector<std::vector<std::uint64_t>> row_max(nrows, std::vector<std::uint64_t>(nk, 0));
    for (std::size_t i = 0; i < nrows; ++i) {
        const SkewRow& row = rows[i];
        for (std::size_t l = 0; l < row.dims.size(); ++l) {
            const std::size_t k = degree_of(row, l);
            std::uint64_t lo = UINT64_MAX, hi = 0;
            for (const RowOption& o : options[i]) {
                lo = std::min(lo, o.einf[l]);
                hi = std::max(hi, o.einf[l]);
            }
            row_min[i][k] += lo;
            row_max[i][k] += hi;
        }
    }
    std::vector<std::vector<std::uint64_t>> suffix_min(nrows + 1, std::vector<std::uint64_t>(nk, 0));
    std::vector<std::vector<std::uint64_t>> suffix_max(nrows + 1, std::vector<std::uint64_t>(nk, 0));
    for (std::size_t i = nrows; i-- > 0;)
        for (std::size_t k = 0; k < nk; ++k) {
            suffix_min[i][k] = suffix_min[i + 1][k] + row_min[i][k];
            suffix_max[i][k] = suffix_max[i + 1][k] + row_max[i][k];
        }
    res.betti_bounds.resize(nk);
    for (std::size_t k = 0; k < nk; ++k)
        res.betti_bounds[k] = {suffix_min[0][k], suffix_max[0][k]};

    if (!target)
        return res;

    const auto& want = target->coeffs();
    for (std::size_t k = 0; k < want.size(); ++k)
        if (want[k] < 0)
            throw Error(Errc::Infeasible, "target b_" + std::to_string(k) + " is negative");
    if (target->eval(-1) != res.euler)
        throw Error(Errc::Infeasible, "Euler characteristic: target gives " + std::to_string(target->eval(-1))
                                                 + " but E_2 gives " + std::to_string(res.euler));
    auto target_at = [&](std::size_t k) -> std::uint64_t {
        return k < want.size() ? static_cast<std::uint64_t>(want[k]) : 0;
    };
    if (want.size() > nk)
        throw Error(Errc::Infeasible, "target b_" + std::to_string(want.size() - 1)
                                                 + " lies above the page (max degree " + std::to_string(max_k) + ")");
    for (std::size_t k = 0; k < nk; ++k) {
        const auto [lo, hi] = res.betti_bounds[k];
        if (target_at(k) < lo || target_at(k) > hi)
            throw Error(Errc::Infeasible, "b_" + std::to_string(k) + " = " + std::to_string(target_at(k))
                                                     + " outside [" + std::to_string(lo) + ", " + std::to_string(hi)
                                                     + "]");
    }

    std::vector<std::uint64_t> partial(nk, 0);
    std::vector<std::size_t> chosen(nrows, 0), first;
    std::size_t solutions = 0;
    std::function<void(std::size_t)> search = [&](std::size_t i) {
        if (solutions >= 2)
            return;
        for (std::size_t k = 0; k < nk; ++k)
            if (partial[k] + suffix_min[i][k] > target_at(k) || partial[k] + suffix_max[i][k] < target_at(k))
                return;
        if (i == nrows) {
            if (solutions++ == 0)
                first = chosen;
            return;
        }
        for (std::size_t o = 0; o < options[i].size(); ++o) {
            const RowOption& opt = options[i][o];
            for (std::size_t l = 0; l < opt.einf.size(); ++l)
                partial[degree_of(rows[i], l)] += opt.einf[l];
            chosen[i] = o;
            search(i + 1);
            for (std::size_t l = 0; l < opt.einf.size(); ++l)
                partial[degree_of(rows[i], l)] -= opt.einf[l];
            if (solutions >= 2)
                return;
        }
    };
    search(0);
    if (solutions == 0)
        throw Error(Errc::Infeasible,
                    "no rank assignment along the skew rows reproduces " + target->str());

    res.unique = solutions == 1;
    std::map<Bidegree, std::uint64_t> ranks;
    WeightTable weights;
    for (std::size_t i = 0; i < nrows; ++i) {
        const RowOption& opt = options[i][first[i]];
        for (std::size_t l = 0; l < opt.einf.size(); ++l) {
            if (l >= 1 && rows[i].dims[l] > 0)
                ranks[rows[i].cells[l]] = opt.ranks[l];
            if (opt.einf[l] > 0)
                weights[{static_cast<int>(degree_of(rows[i], l)), rows[i].weight}] = opt.einf[l];
        }
    }
    res.ranks = std::move(ranks);
    res.weights = std::move(weights);
    return res;
}

} // namespace arrange
