#include "arrange/cli/report.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include "arrange/cli/cache.hpp"
#include "arrange/model_builders.hpp"
#include "arrange/sheaf_decomposition.hpp"
#include "arrange/spectral_engine.hpp"

namespace arrange::cli {

int exit_code_for(Errc code)
{
    switch (code) {
    case Errc::Infeasible:
        return kExitInfeasible;
    case Errc::CompositionNonzero:
    case Errc::WeightViolation:
    case Errc::InconsistentDecomposition:
    case Errc::NotComposable:
        return kExitMismatch;
    default:
        return kExitInput;
    }
}

namespace {

Json error_json(const Error& e)
{
    return Json{{"code", errc_name(e.code())}, {"message", e.what()}};
}

Json bidegree(Bidegree b)
{
    return Json::array({b.first, b.second});
}

Json cells_json(const SpectralPage& page, const IntersectionPoset& poset, bool with_classes)
{
    Json cells = Json::array();
    for (const auto& [pq, cell] : page.cells) {
        Json c{{"p", pq.first}, {"q", pq.second}, {"dim", cell.dim}, {"weight", cell.weight}};
        if (with_classes) {
            Json classes = Json::array();
            for (const BasisLabel& b : cell.basis) {
                Json l{{"support", poset.flat(b.support).label}, {"multiplicity_index", b.multiplicity_index}};
                if (!b.monomial.empty())
                    l["monomial"] = b.monomial;
                else
                    l["cohomology_index"] = b.cohomology_index;
                classes.push_back(std::move(l));
            }
            c["classes"] = std::move(classes);
        }
        cells.push_back(std::move(c));
    }
    return cells;
}

Json weights_json(const WeightTable& w)
{
    Json out = Json::array();
    for (const auto& [kw, d] : w)
        out.push_back({{"k", kw.first}, {"w", kw.second}, {"dim", d}});
    return out;
}

void add_check(Json& report, const std::string& name, bool ok, const std::string& detail)
{
    report["checks"].push_back({{"name", name}, {"ok", ok}, {"detail", detail}});
}

Json poset_summary(const IntersectionPoset& p)
{
    Json flats = Json::array();
    for (const Flat& f : p.flats()) {
        Json members = Json::array();
        for (std::size_t m : f.members)
            members.push_back(p.member_name(m));
        flats.push_back({{"id", f.id},
                         {"label", f.label},
                         {"codim", f.codim},
                         {"members", members},
                         {"mobius", p.mobius(f.id)},
                         {"stratum", p.is_stratum(f.id)}});
    }
    return Json{{"kind", arrange::to_string(p.kind())}, {"lattice", p.is_lattice()}, {"flats", flats}};
}

Json model_summary(const ArrangementModel& m, Mode mode)
{
    Json j{{"kind", to_string(m.kind)},
           {"c", m.c},
           {"ambient_dim", m.ambient_dim()},
           {"members", m.poset.member_count()},
           {"explicit_available", m.explicit_available},
           {"explicit_reason", m.explicit_reason},
           {"mode", to_string(mode)}};
    if (m.kind == ModelKind::Hyperplane || m.kind == ModelKind::Ncd) {
        j["space"] = arrange::to_string(m.input_space);
        j["normal_crossings"] = m.ncd;
    }
    if (m.kind == ModelKind::Configuration) {
        j["factor"] = m.factor->factor_dims();
        j["points"] = m.points;
    }
    return j;
}

struct Prepared {
    ArrangementModel model;
    std::vector<StalkTable> stalks;
};

Prepared prepare(const JobSpec& job, const ExecOptions& options)
{
    std::optional<ResultCache> cache;
    std::string key;
    std::optional<CacheEntry> hit;
    if (options.use_cache) {
        cache.emplace(options.cache_dir ? *options.cache_dir : ResultCache::default_dir());
        key = ResultCache::key(job.model.source);
        hit = cache->load(key);
    }
    PosetHints hints;
    if (hit) {
        hints.poset = hit->poset;
        hints.input_poset = hit->input_poset;
    }
    Prepared out{build_model(job.model, hints), {}};
    if (hit && hit->poset.size() == out.model.poset.size()) {
        out.stalks = hit->stalks;
    } else {
        out.stalks = all_stalks(out.model);
        if (cache)
            cache->store(key, {out.model.poset, out.model.input_poset, out.stalks});
    }
    return out;
}

std::map<std::size_t, Rational> resolve_local_system(const std::map<std::string, Rational>& byname,
                                                     const ArrangementModel& model)
{
    const IntersectionPoset& p = model.input_poset ? *model.input_poset : model.poset;
    std::map<std::size_t, Rational> out;
    for (const auto& [name, e] : byname) {
        const auto& names = p.member_names();
        auto it = std::find(names.begin(), names.end(), name);
        if (it == names.end())
            throw Error(Errc::SchemaError, "local_system.exponents: unknown member '" + name + "'");
        out[static_cast<std::size_t>(it - names.begin())] = e;
    }
    return out;
}

Json mon_json(const MonReport& r, const IntersectionPoset& p)
{
    Json ok = Json::array(), bad = Json::array();
    for (std::size_t x : r.ok_flats)
        ok.push_back(p.flat(x).label);
    for (std::size_t x : r.bad_flats)
        bad.push_back(p.flat(x).label);
    return Json{{"holds", r.holds},
                {"ok_flats", ok},
                {"bad_flats", bad},
                {"conclusion", r.conclusion},
                {"warnings", r.warnings}};
}

std::optional<std::pair<std::string, Polynomial>> oracle_for(const ArrangementModel& m)
{
    auto ref = reference_poincare(m);
    if (!ref)
        return std::nullopt;
    if (m.kind == ModelKind::Configuration)
        return std::make_pair(std::string("two-point formula P(Y)^2 - t^(2c) P(Y)"), *ref);
    return std::make_pair(std::string("Orlik-Solomon count with deconing"), *ref);
}

int finish(Json& report, int code)
{
    for (const auto& c : report["checks"])
        if (!c["ok"].get<bool>())
            code = std::max(code, kExitMismatch);
    report["verdict"] = code == kExitOk             ? "ok"
                        : code == kExitMismatch    ? "mismatch"
                        : code == kExitInfeasible ? "infeasible"
                                                  : "error";
    report["exit_code"] = code;
    return code;
}

} // namespace

Outcome error_outcome(Command command, const Error& error)
{
    Outcome out;
    out.exit_code = exit_code_for(error.code());
    out.report["schema_version"] = kSchemaVersion;
    out.report["command"] = to_string(command);
    out.report["error"] = error_json(error);
    out.report["verdict"] = "error";
    out.report["exit_code"] = out.exit_code;
    return out;
}

Outcome execute(const JobSpec& job, const ExecOptions& options)
{
    Outcome out;
    Json& report = out.report;
    report["schema_version"] = kSchemaVersion;
    report["command"] = to_string(options.command);
    report["checks"] = Json::array();
    try {
        Prepared prep = prepare(job, options);
        const ArrangementModel& model = prep.model;
        const Mode mode = resolve_mode(job, model);
        report["model"] = model_summary(model, mode);
        report["poset"] = poset_summary(model.poset);
        if (model.input_poset && model.input_space != Space::Projective)
            report["input_poset"] = poset_summary(*model.input_poset);

        auto adm = check_admissible(model.poset);
        Json violations = Json::array();
        for (const auto& v : adm.certificate)
            violations.push_back({{"flat", v.label}, {"codim", v.codim}, {"reason", v.reason}});
        report["admissibility"] = {{"ok", adm.ok}, {"violations", violations}, {"notes", adm.notes}};
        add_check(report, "admissible", adm.ok, adm.ok ? "condition holds on every flat" : "see violations");
        if (!adm.ok)
            throw Error(Errc::NotAdmissible, "flat '" + adm.certificate.front().label + "': "
                                                 + adm.certificate.front().reason);

        if (job.local_system) {
            MonReport mon = check_mon(model, {resolve_local_system(*job.local_system, model)});
            report["mon"] = mon_json(mon, model.input_poset ? *model.input_poset : model.poset);
        }
        if (options.command == Command::Lattice) {
            out.exit_code = finish(report, kExitOk);
            return out;
        }

        Json stalks = Json::array();
        for (std::size_t x : model.strata()) {
            Json dims = Json::array();
            for (const auto& [k, d] : prep.stalks.at(x).dims) {
                auto w = prep.stalks[x].weights.find(k);
                dims.push_back({{"k", k}, {"dim", d}, {"weight", w == prep.stalks[x].weights.end() ? Json(nullptr)
                                                                                               : Json(w->second)}});
            }
            stalks.push_back({{"flat", model.poset.flat(x).label}, {"dims", dims}});
        }
        report["stalks"] = std::move(stalks);
        auto purity = check_purity(model, prep.stalks);
        Json pv = Json::array();
        for (const auto& v : purity)
            pv.push_back({{"flat", model.poset.flat(v.flat).label}, {"degree", v.degree}, {"reason", v.reason}});
        report["purity"] = {{"ok", purity.empty()}, {"violations", pv}};
        add_check(report, "vanishing and purity", purity.empty(),
                  std::to_string(purity.size()) + " violations over " + std::to_string(model.strata().size())
                      + " stalks");

        SheafDecomposition dec = decompose(model, prep.stalks);
        Json summands = Json::array();
        for (const Summand& s : dec.summands)
            summands.push_back({{"support", model.poset.flat(s.support).label},
                                {"level", s.level},
                                {"degree", s.degree},
                                {"multiplicity", s.multiplicity},
                                {"weight", s.weight}});
        report["decomposition"] = std::move(summands);
        auto pointwise = verify_pointwise(model, dec, prep.stalks);
        report["pointwise"] = {{"ok", pointwise.ok}, {"checked", pointwise.checked},
                               {"mismatches", pointwise.mismatches.size()}};
        add_check(report, "pointwise decomposition", pointwise.ok,
                  std::to_string(pointwise.checked) + " stalk degrees compared");
        if (options.command == Command::Stalks) {
            out.exit_code = finish(report, kExitOk);
            return out;
        }

        SpectralPage page = assemble_E2(model, dec);
        report["e2"] = {{"r", page.r}, {"cells", cells_json(page, model.poset, false)}, {"euler", page.euler()}};
        auto oracle = oracle_for(model);
        if (options.command == Command::Oracle) {
            if (oracle) {
                const bool euler_ok = oracle->second.eval(-1) == page.euler();
                report["oracle"] = {{"source", oracle->first},
                                    {"polynomial", oracle->second.str()},
                                    {"betti", oracle->second.coeffs()},
                                    {"euler", oracle->second.eval(-1)}};
                add_check(report, "oracle euler characteristic", euler_ok,
                          "oracle " + std::to_string(oracle->second.eval(-1)) + ", E_2 "
                              + std::to_string(page.euler()));
            } else {
                report["oracle"] = {{"source", nullptr}, {"euler", page.euler()}};
            }
            out.exit_code = finish(report, kExitOk);
            return out;
        }

        int code = kExitOk;
        if (mode == Mode::Explicit) {
            build_differential(model, dec, page);
            RunResult res;
            try {
                res = run(page);
            } catch (const Error& e) {
                add_check(report, "differential", false, e.what());
                report["error"] = error_json(e);
                out.exit_code = finish(report, exit_code_for(e.code()));
                return out;
            }
            Json ranks = Json::array();
            for (const auto& [src, r] : res.ranks)
                ranks.push_back({{"source", bidegree(src)}, {"target", bidegree(page.target(src))}, {"rank", r}});
            report["differential"] = {{"r", page.r}, {"ranks", ranks}};
            report["einfty"] = {{"cells", cells_json(res.einfty, model.poset, true)}, {"euler", res.euler_einfty}};
            report["betti"] = res.betti.coeffs();
            report["poincare"] = res.betti.str();
            report["weights"] = weights_json(res.weights);
            report["euler"] = res.euler_einfty;
            add_check(report, "d^2 = 0 and weight preservation", true, "checked on every block");
            add_check(report, "euler characteristic", res.euler_e2 == res.euler_einfty,
                      "E_2 " + std::to_string(res.euler_e2) + ", E_inf " + std::to_string(res.euler_einfty));
            if (page.c == 1) {
                bool skew_ok = true;
                const int top = res.betti.degree();
                for (int k = 0; k <= top; ++k)
                    for (int l = 0; l <= k; ++l) {
                        auto it = res.weights.find({k, k + l});
                        const std::uint64_t want = it == res.weights.end() ? 0 : it->second;
                        if (skew_row_homology(page, k, l) != want)
                            skew_ok = false;
                    }
                add_check(report, "skew-row homology", skew_ok, "Gr^W_{k+l} H^k against the weight table");
            }
            if (oracle) {
                const bool match = oracle->second == res.betti;
                report["oracle"] = {{"source", oracle->first},
                                    {"polynomial", oracle->second.str()},
                                    {"verdict", match ? "MATCH" : "MISMATCH"}};
                add_check(report, "oracle", match, "E_inf " + res.betti.str() + " vs " + oracle->second.str());
            } else {
                report["oracle"] = {{"source", nullptr}, {"verdict", "UNAVAILABLE"}};
            }
        } else {
            std::optional<Polynomial> target;
            std::string target_source;
            if (mode == Mode::Feasibility) {
                if (job.target) {
                    target = job.target;
                    target_source = "options";
                } else if (oracle) {
                    target = oracle->second;
                    target_source = "oracle";
                }
            }
            FeasibilityResult bounds = feasibility(page);
            Json jb = Json::array();
            for (const auto& [lo, hi] : bounds.betti_bounds)
                jb.push_back({lo, hi});
            report["euler"] = bounds.euler;
            report["bounds"] = jb;
            Json feas{{"target", target ? Json(target->str()) : Json(nullptr)},
                      {"target_source", target ? Json(target_source) : Json(nullptr)}};
            if (target) {
                try {
                    FeasibilityResult fr = feasibility(page, target);
                    Json ranks = Json::array();
                    for (const auto& [src, r] : *fr.ranks)
                        ranks.push_back({{"source", bidegree(src)}, {"target", bidegree(page.target(src))},
                                         {"rank", r}});
                    feas["feasible"] = true;
                    feas["unique"] = fr.unique;
                    feas["ranks"] = ranks;
                    feas["weights"] = weights_json(*fr.weights);
                } catch (const Error& e) {
                    if (e.code() != Errc::Infeasible)
                        throw;
                    feas["feasible"] = false;
                    feas["violated"] = e.what();
                    code = kExitInfeasible;
                }
            }
            report["feasibility"] = feas;
            if (oracle) {
                const bool euler_ok = oracle->second.eval(-1) == bounds.euler;
                report["oracle"] = {{"source", oracle->first},
                                    {"polynomial", oracle->second.str()},
                                    {"euler", oracle->second.eval(-1)},
                                    {"verdict", euler_ok ? "EULER MATCH" : "EULER MISMATCH"}};
                add_check(report, "oracle euler characteristic", euler_ok,
                          "oracle " + std::to_string(oracle->second.eval(-1)) + ", E_2 "
                              + std::to_string(bounds.euler));
            }
        }
        report["replay"] = replay_model(model);
        out.exit_code = finish(report, code);
    } catch (const Error& e) {
        report["error"] = error_json(e);
        out.exit_code = finish(report, exit_code_for(e.code()));
    }
    return out;
}

std::string render_machine(const Json& report)
{
    return report.dump(2) + "\n";
}

namespace {

std::string pad(const std::string& s, std::size_t width, bool right = true)
{
    if (s.size() >= width)
        return s;
    return right ? std::string(width - s.size(), ' ') + s : s + std::string(width - s.size(), ' ');
}

std::string j2s(const Json& j)
{
    return j.is_string() ? j.get<std::string>() : j.dump();
}

// Rows q ascending, columns p; zero cells shown as '.'.
void render_page(std::ostringstream& out, const Json& cells, int c)
{
    std::map<std::pair<int, int>, std::uint64_t> dims;
    int max_p = 0, max_q = 0;
    for (const auto& cell : cells) {
        const int p = cell["p"].get<int>(), q = cell["q"].get<int>();
        dims[{p, q}] = cell["dim"].get<std::uint64_t>();
        max_p = std::max(max_p, p);
        max_q = std::max(max_q, q);
    }
    std::size_t width = 3;
    for (const auto& [pq, d] : dims)
        width = std::max(width, std::to_string(d).size() + 1);
    out << "     q  twist |";
    for (int p = 0; p <= max_p; ++p)
        out << pad("p" + std::to_string(p), width + 1);
    out << "\n";
    out << "  " << std::string(12, '-') << "+" << std::string(static_cast<std::size_t>(max_p + 1) * (width + 1), '-')
        << "\n";
    for (int q = 0; q <= max_q; ++q) {
        std::string twist = q % (2 * c - 1) == 0 ? std::to_string(2 * c * (q / (2 * c - 1))) : "";
        out << pad(std::to_string(q), 6) << pad(twist, 7) << " |";
        for (int p = 0; p <= max_p; ++p) {
            auto it = dims.find({p, q});
            out << pad(it == dims.end() ? "." : std::to_string(it->second), width + 1);
        }
        out << "\n";
    }
    out << "  weight of a cell = p + twist\n";
}

} // namespace

std::string render_human(const Json& r)
{
    std::ostringstream out;
    out << "arrange " << j2s(r["command"]);
    if (r.contains("model")) {
        const Json& m = r["model"];
        out << ": " << j2s(m["kind"]) << " model, c = " << m["c"] << ", complex dimension " << m["ambient_dim"]
            << ", " << m["members"] << " members\n";
        out << "mode: " << j2s(m["mode"]) << " (" << j2s(m["explicit_reason"]) << ")\n";
    } else {
        out << "\n";
    }

    if (r.contains("poset")) {
        out << "\nflats\n";
        std::size_t lw = 5;
        for (const auto& f : r["poset"]["flats"])
            lw = std::max(lw, j2s(f["label"]).size());
        out << "  " << pad("id", 4) << "  " << pad("label", lw, false) << "  codim  " << pad("mu", 5) << "\n";
        for (const auto& f : r["poset"]["flats"]) {
            out << "  " << pad(j2s(f["id"]), 4) << "  " << pad(j2s(f["label"]), lw, false) << "  "
                << pad(j2s(f["codim"]), 5) << "  " << pad(j2s(f["mobius"]), 5);
            if (!f["stratum"].get<bool>())
                out << "  (cone point, not a stratum)";
            out << "\n";
        }
    }
    if (r.contains("admissibility")) {
        const Json& a = r["admissibility"];
        out << "admissible: " << (a["ok"].get<bool>() ? "yes" : "no") << "\n";
        for (const auto& v : a["violations"])
            out << "  violation at " << j2s(v["flat"]) << " (codim " << v["codim"] << "): " << j2s(v["reason"]) << "\n";
        for (const auto& n : a["notes"])
            out << "  note: " << j2s(n) << "\n";
    }
    if (r.contains("mon")) {
        const Json& m = r["mon"];
        out << "\n(Mon): " << (m["holds"].get<bool>() ? "holds" : "fails");
        if (!m["bad_flats"].empty()) {
            out << " at";
            for (const auto& b : m["bad_flats"])
                out << " " << j2s(b);
        }
        out << "\n";
        for (const auto& c : m["conclusion"])
            out << "  " << j2s(c) << "\n";
        for (const auto& w : m["warnings"])
            out << "  warning: " << j2s(w) << "\n";
    }
    if (r.contains("stalks")) {
        out << "\nstalks  (degree:dim@weight)\n";
        for (const auto& s : r["stalks"]) {
            out << "  " << pad(j2s(s["flat"]), 12, false);
            for (const auto& d : s["dims"])
                out << "  " << d["k"] << ":" << d["dim"] << "@" << j2s(d["weight"]);
            out << "\n";
        }
        out << "\ndecomposition into constant sheaves\n";
        for (const auto& s : r["decomposition"])
            out << "  R^" << s["degree"] << ": " << s["multiplicity"] << " x Q on " << j2s(s["support"])
                << "  (weight " << s["weight"] << ")\n";
    }
    const int c = r.contains("model") ? r["model"]["c"].get<int>() : 1;
    if (r.contains("e2")) {
        out << "\nE_2\n";
        render_page(out, r["e2"]["cells"], c);
        out << "  euler characteristic: " << r["e2"]["euler"] << "\n";
    }
    if (r.contains("differential")) {
        out << "\nd_" << r["differential"]["r"] << " ranks\n";
        for (const auto& d : r["differential"]["ranks"])
            out << "  (" << d["source"][0] << "," << d["source"][1] << ") -> (" << d["target"][0] << ","
                << d["target"][1] << "): " << d["rank"] << "\n";
    }
    if (r.contains("einfty")) {
        out << "\nE_inf\n";
        render_page(out, r["einfty"]["cells"], c);
    }
    if (r.contains("poincare"))
        out << "\nbetti: " << j2s(r["poincare"]) << "\n";
    if (r.contains("weights")) {
        out << "weights:";
        for (const auto& w : r["weights"])
            out << "  Gr^W_" << w["w"] << " H^" << w["k"] << " = " << w["dim"];
        out << "\n";
    }
    if (r.contains("bounds")) {
        out << "\nbetti bounds:";
        std::size_t k = 0;
        for (const auto& b : r["bounds"])
            out << "  b" << k++ << " in [" << b[0] << "," << b[1] << "]";
        out << "\n";
    }
    if (r.contains("euler"))
        out << "euler characteristic: " << r["euler"] << "\n";
    if (r.contains("feasibility") && !r["feasibility"]["target"].is_null()) {
        const Json& f = r["feasibility"];
        out << "target " << j2s(f["target"]) << " (" << j2s(f["target_source"]) << "): ";
        if (f["feasible"].get<bool>()) {
            out << "feasible" << (f["unique"].get<bool>() ? ", unique" : ", not unique") << "\n";
            for (const auto& d : f["ranks"])
                out << "  rank (" << d["source"][0] << "," << d["source"][1] << ") -> (" << d["target"][0] << ","
                    << d["target"][1] << "): " << d["rank"] << "\n";
        } else {
            out << "infeasible: " << j2s(f["violated"]) << "\n";
        }
    }
    if (r.contains("oracle") && !r["oracle"]["source"].is_null()) {
        const Json& o = r["oracle"];
        out << "oracle: " << (o.contains("verdict") ? j2s(o["verdict"]) : std::string("reference")) << " ("
            << j2s(o["source"]) << ": " << j2s(o["polynomial"]) << ")\n";
    }
    if (r.contains("checks") && !r["checks"].empty()) {
        out << "\nchecks\n";
        for (const auto& ch : r["checks"])
            out << "  [" << (ch["ok"].get<bool>() ? "ok" : "FAIL") << "] " << j2s(ch["name"]) << ": "
                << j2s(ch["detail"]) << "\n";
    }
    if (r.contains("error"))
        out << "\nerror: " << j2s(r["error"]["message"]) << "\n";
    out << "verdict: " << j2s(r["verdict"]) << " (exit " << r["exit_code"] << ")\n";
    return out.str();
}

} // namespace arrange::cli
