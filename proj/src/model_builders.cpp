#include "arrange/model_builders.hpp"

#include <algorithm>
#include <numeric>

#include "arrange/error.hpp"

namespace arrange {

std::string to_string(ModelKind kind)
{
    switch (kind) {
    case ModelKind::Hyperplane: return "hyperplane";
    case ModelKind::Ncd: return "ncd";
    case ModelKind::Configuration: return "configuration";
    case ModelKind::Subspace: return "subspace";
    case ModelKind::Abstract: return "abstract";
    }
    return "?";
}

int ArrangementModel::ambient_dim() const
{
    if (ambient)
        return ambient->dim();
    return poset.ambient_dim();
}

std::vector<std::size_t> ArrangementModel::strata() const
{
    std::vector<std::size_t> out;
    for (std::size_t x = 0; x < poset.size(); ++x)
        if (poset.is_stratum(x))
            out.push_back(x);
    return out;
}

SpaceMap ArrangementModel::inclusion(std::size_t deeper, std::size_t shallower) const
{
    if (deeper >= stratum_geometry.size() || shallower >= stratum_geometry.size() || !stratum_geometry[deeper]
        || !stratum_geometry[shallower])
        throw Error(Errc::NoGeometry, "stratum has no explicit geometry");
    if (!poset.leq(shallower, deeper))
        throw Error(Errc::InvalidArgument, "flat '" + poset.flat(deeper).label + "' does not lie in '"
                                               + poset.flat(shallower).label + "'");
    const ProjProduct& source = *stratum_geometry[deeper];
    const ProjProduct& target = *stratum_geometry[shallower];
    std::vector<int> factor_of;
    if (kind == ModelKind::Configuration) {
        const int m = static_cast<int>(factor->factors());
        const auto& from = point_block[shallower];
        const auto& to = point_block[deeper];
        factor_of.assign(target.factors(), -1);
        for (int p = 0; p < points; ++p)
            for (int f = 0; f < m; ++f)
                factor_of[from[p] * m + f] = to[p] * m + f;
    } else {
        // projective subspaces: the hyperplane class restricts to the hyperplane class
        factor_of.assign(target.factors(), 0);
    }
    return factor_map(source, target, factor_of);
}

namespace {

std::vector<std::uint64_t> betti_vector(const ProjProduct& s)
{
    std::vector<std::uint64_t> b(2 * s.dim() + 1, 0);
    for (int k = 0; k <= 2 * s.dim(); ++k)
        b[k] = s.betti(k);
    return b;
}

void attach_projective_strata(ArrangementModel& m, int n)
{
    m.ambient = ProjProduct({n});
    m.stratum_geometry.assign(m.poset.size(), std::nullopt);
    m.stratum_betti.assign(m.poset.size(), {});
    for (std::size_t x = 0; x < m.poset.size(); ++x) {
        if (!m.poset.is_stratum(x))
            continue;
        ProjProduct s({n - m.poset.flat(x).codim});
        m.stratum_betti[x] = betti_vector(s);
        m.stratum_geometry[x] = std::move(s);
    }
}

bool normal_crossings(const IntersectionPoset& p)
{
    for (std::size_t x = 1; x < p.size(); ++x)
        if (p.is_stratum(x) && static_cast<int>(p.flat(x).members.size()) != p.flat(x).codim)
            return false;
    return true;
}

} // namespace

ArrangementModel hyperplane_model(const std::vector<Form>& forms, int ambient_dim, Space space,
                                  const PosetHints& hints)
{
    ArrangementModel m;
    m.kind = ModelKind::Hyperplane;
    m.c = 1;
    m.input_space = space;
    if (space == Space::Projective) {
        m.poset = hints.poset ? *hints.poset : build_from_forms(forms, ambient_dim, space);
        m.input_poset = m.poset;
    } else {
        m.input_poset = hints.input_poset ? *hints.input_poset : build_from_forms(forms, ambient_dim, space);
        if (hints.poset) {
            m.poset = *hints.poset;
        } else {
            std::vector<Form> closed;
            std::vector<std::string> names;
            for (std::size_t i = 0; i < forms.size(); ++i) {
                Form h;
                h.coeffs = forms[i].coeffs;
                h.coeffs.push_back(space == Space::Affine ? forms[i].constant : Rational(0));
                closed.push_back(std::move(h));
                names.push_back("H" + std::to_string(i));
            }
            Form infinity;
            infinity.coeffs.assign(ambient_dim + 1, Rational(0));
            infinity.coeffs.back() = 1;
            closed.push_back(std::move(infinity));
            names.emplace_back("Hinf");
            m.poset = build_from_forms(closed, ambient_dim, Space::Projective, std::move(names));
        }
    }
    attach_projective_strata(m, ambient_dim);
    m.ncd = normal_crossings(m.poset);
    m.explicit_available = m.ncd;
    m.explicit_reason = m.ncd ? "normal crossings: Gysin differential available"
                              : "not in normal crossing position: differential not constructed";
    return m;
}

ArrangementModel ncd_model(const std::vector<Form>& forms, int ambient_dim, Space space, const PosetHints& hints)
{
    ArrangementModel m = hyperplane_model(forms, ambient_dim, space, hints);
    if (!m.ncd)
        throw Error(Errc::InvalidArgument, "arrangement is not a normal crossing divisor");
    m.kind = ModelKind::Ncd;
    return m;
}

ArrangementModel subspace_model(const std::vector<LinearMember>& members, int ambient_dim, int c,
                                const PosetHints& hints)
{
    ArrangementModel m;
    m.kind = ModelKind::Subspace;
    m.c = c;
    m.poset = hints.poset ? *hints.poset : build_from_subspaces(members, ambient_dim, Space::Projective, c);
    attach_projective_strata(m, ambient_dim);
    m.explicit_available = false;
    m.explicit_reason = "subspace arrangements: differential not constructed";
    return m;
}

ArrangementModel configuration_model(const ProjProduct& y, int n)
{
    if (n < 2)
        throw Error(Errc::InvalidArgument, "configuration spaces need n >= 2");
    const int c = y.dim();
    if (c < 1)
        throw Error(Errc::InvalidArgument, "configuration factor must have positive dimension");

    IntersectionPoset lattice = partition_lattice(n);
    std::vector<Flat> flats = lattice.flats();
    std::vector<std::vector<bool>> leq(flats.size(), std::vector<bool>(flats.size()));
    for (std::size_t x = 0; x < flats.size(); ++x) {
        flats[x].codim *= c;
        for (std::size_t z = 0; z < flats.size(); ++z)
            leq[x][z] = lattice.leq(x, z);
    }

    ArrangementModel m;
    m.kind = ModelKind::Configuration;
    m.c = c;
    m.factor = y;
    m.points = n;
    m.poset = IntersectionPoset(PosetKind::Diagonal, n * c, c, lattice.member_names(), std::move(flats),
                                std::move(leq), true);
    m.ambient = y.power(n);

    std::vector<std::pair<int, int>> pairs;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            pairs.emplace_back(a, b);

    m.point_block.resize(m.poset.size());
    m.stratum_geometry.resize(m.poset.size());
    m.stratum_betti.resize(m.poset.size());
    for (std::size_t x = 0; x < m.poset.size(); ++x) {
        std::vector<int> root(n);
        std::iota(root.begin(), root.end(), 0);
        for (std::size_t mem : m.poset.flat(x).members) {
            auto [a, b] = pairs[mem];
            int ra = root[a], rb = root[b];
            for (int& r : root)
                if (r == rb)
                    r = ra;
        }
        // blocks numbered in order of their smallest point
        std::vector<int> block(n, -1);
        int next = 0;
        for (int p = 0; p < n; ++p) {
            int first = static_cast<int>(std::find(root.begin(), root.end(), root[p]) - root.begin());
            block[p] = first == p ? next++ : block[first];
        }
        ProjProduct s = y.power(next);
        if (s.dim() != m.ambient->dim() - m.poset.flat(x).codim)
            throw Error(Errc::InvalidArgument, "diagonal stratum has the wrong dimension");
        m.point_block[x] = std::move(block);
        m.stratum_betti[x] = betti_vector(s);
        m.stratum_geometry[x] = std::move(s);
    }
    m.explicit_available = n <= 3;
    m.explicit_reason = n <= 3 ? "configuration space with n <= 3: diagonal Gysin differential available"
                               : "configuration space with n >= 4: differential not constructed";
    return m;
}

ArrangementModel abstract_model(const AbstractModelSpec& spec)
{
    if (spec.ambient_betti.empty() || spec.ambient_betti.size() % 2 == 0)
        throw Error(Errc::MissingBetti, "ambient Betti numbers must run over degrees 0..2n");
    const int dim = static_cast<int>(spec.ambient_betti.size() - 1) / 2;
    std::vector<AbstractFlatSpec> flats;
    for (const auto& s : spec.flats)
        flats.push_back(s.flat);

    ArrangementModel m;
    m.kind = ModelKind::Abstract;
    m.c = spec.c;
    m.poset = build_abstract(dim, spec.c, spec.members, flats);
    m.stratum_betti.assign(m.poset.size(), {});
    m.stratum_geometry.assign(m.poset.size(), std::nullopt);
    m.stratum_betti[0] = spec.ambient_betti;
    for (std::size_t i = 0; i < spec.flats.size(); ++i) {
        const auto& s = spec.flats[i];
        if (!s.betti)
            throw Error(Errc::MissingBetti, "flat '" + s.flat.name + "' has no Betti data");
        const std::size_t expected = 2 * static_cast<std::size_t>(std::max(dim - s.flat.codim, 0)) + 1;
        if (s.betti->size() > expected)
            throw Error(Errc::MissingBetti, "flat '" + s.flat.name + "' has Betti data beyond its real dimension");
        m.stratum_betti[i + 1] = *s.betti;
    }
    auto report = check_admissible(m.poset);
    if (!report.ok) {
        const auto& v = report.certificate.front();
        throw Error(Errc::NotAdmissible, "flat '" + v.label + "' (codim " + std::to_string(v.codim) + "): " + v.reason);
    }
    m.explicit_available = false;
    m.explicit_reason = "abstract input: feasibility and bounds only";
    return m;
}

Polynomial os_oracle(const IntersectionPoset& p)
{
    if (p.codim_c() != 1)
        throw Error(Errc::NotRankOne, "the Möbius oracle needs a hyperplane-type poset (c = 1)");
    if (p.kind() == PosetKind::Abstract)
        throw Error(Errc::InvalidArgument, "no Möbius oracle for abstract posets");
    std::vector<std::int64_t> coeffs(p.max_codim() + 1, 0);
    for (const auto& f : p.flats())
        coeffs[f.codim] += std::abs(p.mobius(f.id));
    Polynomial poincare(std::move(coeffs));
    if (p.kind() == PosetKind::Projective)
        return poincare.divided_by(Polynomial::one_plus_t());
    return poincare;
}

std::optional<Polynomial> reference_poincare(const ArrangementModel& model)
{
    switch (model.kind) {
    case ModelKind::Hyperplane:
    case ModelKind::Ncd:
        return os_oracle(*model.input_poset);
    case ModelKind::Configuration:
        if (model.points == 2) {
            // the diagonal pushforward is injective (split by a projection)
            Polynomial py = betti_poly(*model.factor);
            std::vector<std::int64_t> shift(2 * model.c + 1, 0);
            shift.back() = 1;
            return py * py - Polynomial(std::move(shift)) * py;
        }
        return std::nullopt;
    default:
        return std::nullopt;
    }
}

Rational reduce_mod_one(const Rational& r)
{
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    Rational out = r - Rational(q);
    out.canonicalize();
    return out;
}

MonReport check_mon(const ArrangementModel& model, const LocalSystemSpec& local_system)
{
    if (model.c != 1)
        throw Error(Errc::NotRankOne, "(Mon) is stated for hypersurface arrangements (c = 1)");
    const IntersectionPoset& p = model.input_poset ? *model.input_poset : model.poset;
    for (const auto& [member, e] : local_system.exponents)
        if (member >= p.member_count())
            throw Error(Errc::InvalidArgument, "local system names unknown member " + std::to_string(member));

    MonReport report;
    for (std::size_t x = 1; x < p.size(); ++x) {
        if (!p.is_stratum(x))
            continue;
        Rational sum = 0;
        for (std::size_t m : p.flat(x).members) {
            auto it = local_system.exponents.find(m);
            if (it != local_system.exponents.end())
                sum += it->second;
        }
        if (reduce_mod_one(sum) == 0)
            report.bad_flats.push_back(x);
        else
            report.ok_flats.push_back(x);
    }
    report.holds = report.bad_flats.empty();
    if (p.kind() == PosetKind::Projective) {
        Rational total = 0;
        for (const auto& [member, e] : local_system.exponents)
            total += e;
        if (reduce_mod_one(total) != 0)
            report.warnings.push_back("exponents do not sum to an integer: no rank-one local system on a projective "
                                      "complement has these monodromies");
    }
    if (report.holds) {
        report.conclusion = {
            "Rj_*L = j_!L: the derived pushforward has no stalks on the boundary",
            "H^*(U;L) = H^*_c(U;L)",
            "the Leray spectral sequence reduces to the bottom row E_2^{p,0} = H^p(X; j_!L)",
        };
    } else {
        report.conclusion = {"(Mon) fails: the monodromy product is trivial along at least one flat"};
    }
    return report;
}

} // namespace arrange
