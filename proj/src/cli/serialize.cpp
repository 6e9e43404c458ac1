#include "arrange/cli/serialize.hpp"

#include "arrange/error.hpp"

namespace arrange::cli {

namespace {

PosetKind kind_from_string(const std::string& s)
{
    for (PosetKind k :
         {PosetKind::Affine, PosetKind::Central, PosetKind::Projective, PosetKind::Diagonal, PosetKind::Abstract})
        if (arrange::to_string(k) == s)
            return k;
    throw Error(Errc::ParseError, "unknown poset kind '" + s + "'");
}

} // namespace

Json poset_to_json(const IntersectionPoset& p)
{
    Json j;
    j["kind"] = arrange::to_string(p.kind());
    j["ambient_dim"] = p.ambient_dim();
    j["c"] = p.codim_c();
    j["lattice"] = p.is_lattice();
    j["members"] = p.member_names();
    Json flats = Json::array();
    for (const Flat& f : p.flats()) {
        Json below = Json::array();
        for (std::size_t y = 0; y < p.size(); ++y)
            if (p.less(y, f.id))
                below.push_back(y);
        flats.push_back({{"id", f.id},
                         {"label", f.label},
                         {"key", f.canonical_key},
                         {"codim", f.codim},
                         {"members", f.members},
                         {"below", below}});
    }
    j["flats"] = std::move(flats);
    return j;
}

IntersectionPoset poset_from_json(const nlohmann::json& j)
{
    try {
        std::vector<Flat> flats;
        const auto& jf = j.at("flats");
        const std::size_t n = jf.size();
        std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
        for (std::size_t i = 0; i < n; ++i) {
            const auto& e = jf[i];
            Flat f;
            f.id = e.at("id").get<std::size_t>();
            if (f.id != i)
                throw Error(Errc::ParseError, "flat ids out of order");
            f.label = e.at("label").get<std::string>();
            f.canonical_key = e.at("key").get<std::string>();
            f.codim = e.at("codim").get<int>();
            f.members = e.at("members").get<std::vector<std::size_t>>();
            leq[i][i] = true;
            for (std::size_t y : e.at("below").get<std::vector<std::size_t>>())
                leq.at(y).at(i) = true;
            flats.push_back(std::move(f));
        }
        return IntersectionPoset(kind_from_string(j.at("kind").get<std::string>()), j.at("ambient_dim").get<int>(),
                                 j.at("c").get<int>(), j.at("members").get<std::vector<std::string>>(),
                                 std::move(flats), std::move(leq), j.at("lattice").get<bool>());
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::ParseError, std::string("stored poset: ") + e.what());
    }
}

Json stalks_to_json(const std::vector<StalkTable>& stalks)
{
    Json out = Json::array();
    for (const StalkTable& t : stalks) {
        Json dims = Json::array();
        for (const auto& [k, d] : t.dims)
            dims.push_back({k, d, t.weights.count(k) ? Json(t.weights.at(k)) : Json(nullptr)});
        out.push_back({{"flat", t.flat}, {"dims", dims}});
    }
    return out;
}

std::vector<StalkTable> stalks_from_json(const nlohmann::json& j)
{
    try {
        std::vector<StalkTable> out;
        for (const auto& e : j) {
            StalkTable t;
            t.flat = e.at("flat").get<std::size_t>();
            for (const auto& d : e.at("dims")) {
                const int k = d.at(0).get<int>();
                t.dims[k] = d.at(1).get<std::uint64_t>();
                if (!d.at(2).is_null())
                    t.weights[k] = d.at(2).get<int>();
            }
            out.push_back(std::move(t));
        }
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::ParseError, std::string("stored stalks: ") + e.what());
    }
}

Json replay_model(const ArrangementModel& model)
{
    const IntersectionPoset& p = model.poset;
    // Member flats must carry their member's name.
    auto name_of = [&](std::size_t x) {
        const Flat& f = p.flat(x);
        if (f.members.size() == 1 && p.member_flat(f.members.front()) == x)
            return p.member_name(f.members.front());
        return f.label;
    };
    Json poset;
    poset["ambient_betti"] = model.stratum_betti.at(0);
    poset["members"] = p.member_names();
    Json flats = Json::array();
    for (std::size_t x : model.strata()) {
        if (x == p.bottom())
            continue;
        const Flat& f = p.flat(x);
        Json members = Json::array();
        for (std::size_t m : f.members)
            members.push_back(p.member_name(m));
        Json below = Json::array();
        for (std::size_t y : model.strata())
            if (y != p.bottom() && p.less(y, x))
                below.push_back(name_of(y));
        flats.push_back({{"name", name_of(x)},
                         {"codim", f.codim},
                         {"members", members},
                         {"betti", model.stratum_betti.at(x)},
                         {"below", below}});
    }
    poset["flats"] = std::move(flats);
    Json out;
    out["kind"] = "abstract";
    out["c"] = model.c;
    out["poset"] = std::move(poset);
    return out;
}

} // namespace arrange::cli
