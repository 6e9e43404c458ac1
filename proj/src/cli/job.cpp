#include "arrange/cli/job.hpp"

#include <algorithm>

#include "arrange/error.hpp"

namespace arrange::cli {

using nlohmann::json;

std::string to_string(Mode mode)
{
    switch (mode) {
    case Mode::Explicit:
        return "explicit";
    case Mode::Feasibility:
        return "feasibility";
    case Mode::Bounds:
        return "bounds";
    }
    return "?";
}

std::string to_string(Command command)
{
    switch (command) {
    case Command::Run:
        return "run";
    case Command::Verify:
        return "verify";
    case Command::Lattice:
        return "lattice";
    case Command::Stalks:
        return "stalks";
    case Command::Oracle:
        return "oracle";
    }
    return "?";
}

Mode parse_mode(const std::string& text)
{
    if (text == "explicit")
        return Mode::Explicit;
    if (text == "feasibility")
        return Mode::Feasibility;
    if (text == "bounds")
        return Mode::Bounds;
    throw Error(Errc::ParseError, "mode must be explicit, feasibility or bounds, got '" + text + "'");
}

Command parse_command(const std::string& text)
{
    for (Command c : {Command::Run, Command::Verify, Command::Lattice, Command::Stalks, Command::Oracle})
        if (to_string(c) == text)
            return c;
    throw Error(Errc::ParseError, "unknown command '" + text + "'");
}

Format parse_format(const std::string& text)
{
    if (text == "human")
        return Format::Human;
    if (text == "machine")
        return Format::Machine;
    throw Error(Errc::ParseError, "format must be human or machine, got '" + text + "'");
}

namespace {

// Field accessors that report the JSON path of whatever is wrong.
class Field {
public:
    Field(const json& value, std::string path) : value_(value), path_(std::move(path)) {}

    const json& value() const { return value_; }
    const std::string& path() const { return path_; }

    bool has(const std::string& key) const { return value_.is_object() && value_.contains(key); }

    Field at(const std::string& key) const
    {
        require_object();
        if (!value_.contains(key))
            throw Error(Errc::SchemaError, path_ + ": missing field '" + key + "'");
        return Field(value_.at(key), path_ + "." + key);
    }

    std::vector<Field> items() const
    {
        if (!value_.is_array())
            throw Error(Errc::ParseError, path_ + ": expected an array");
        std::vector<Field> out;
        for (std::size_t i = 0; i < value_.size(); ++i)
            out.emplace_back(value_[i], path_ + "[" + std::to_string(i) + "]");
        return out;
    }

    int integer() const
    {
        if (!value_.is_number_integer())
            throw Error(Errc::ParseError, path_ + ": expected an integer");
        return value_.get<int>();
    }

    std::uint64_t natural() const
    {
        if (!value_.is_number_integer() || value_.get<std::int64_t>() < 0)
            throw Error(Errc::ParseError, path_ + ": expected a nonnegative integer");
        return value_.get<std::uint64_t>();
    }

    std::string string() const
    {
        if (!value_.is_string())
            throw Error(Errc::ParseError, path_ + ": expected a string");
        return value_.get<std::string>();
    }

    Rational rational() const
    {
        if (value_.is_number_integer())
            return Rational(value_.get<long>());
        if (!value_.is_string())
            throw Error(Errc::ParseError, path_ + ": expected a rational as \"p/q\"");
        try {
            return parse_rational(value_.get<std::string>());
        } catch (const Error& e) {
            throw Error(Errc::ParseError, path_ + ": " + e.what());
        }
    }

    void require_object() const
    {
        if (!value_.is_object())
            throw Error(Errc::ParseError, path_ + ": expected an object");
    }

    void only(std::initializer_list<const char*> allowed) const
    {
        require_object();
        for (const auto& [key, v] : value_.items())
            if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
                throw Error(Errc::SchemaError, path_ + ": unknown field '" + key + "'");
    }

private:
    const json& value_;
    std::string path_;
};

std::vector<std::string> strings(const Field& f)
{
    std::vector<std::string> out;
    for (const Field& item : f.items())
        out.push_back(item.string());
    return out;
}

Form parse_form(const Field& f, std::size_t expected)
{
    auto items = f.items();
    if (items.size() != expected)
        throw Error(Errc::SchemaError, f.path() + ": expected " + std::to_string(expected) + " coefficients, got "
                                           + std::to_string(items.size()));
    Form form;
    for (const Field& item : items)
        form.coeffs.push_back(item.rational());
    return form;
}

Space parse_space(const Field& f)
{
    std::string s = f.string();
    if (s == "projective")
        return Space::Projective;
    if (s == "affine")
        return Space::Affine;
    if (s == "central")
        return Space::Central;
    throw Error(Errc::ParseError, f.path() + ": space must be projective, affine or central");
}

ModelKind parse_kind(const Field& f)
{
    std::string s = f.string();
    for (ModelKind k : {ModelKind::Hyperplane, ModelKind::Ncd, ModelKind::Subspace, ModelKind::Configuration,
                        ModelKind::Abstract})
        if (to_string(k) == s)
            return k;
    throw Error(Errc::ParseError, f.path() + ": unknown model kind '" + s + "'");
}

ModelSpec parse_model(const Field& m)
{
    ModelSpec spec;
    spec.source = m.value();
    spec.kind = parse_kind(m.at("kind"));
    switch (spec.kind) {
    case ModelKind::Hyperplane:
    case ModelKind::Ncd: {
        m.only({"kind", "space", "ambient", "forms", "names"});
        spec.space = m.has("space") ? parse_space(m.at("space")) : Space::Projective;
        spec.ambient = m.at("ambient").integer();
        if (spec.ambient < 1)
            throw Error(Errc::SchemaError, m.path() + ".ambient: must be at least 1");
        const std::size_t width = spec.space == Space::Central ? spec.ambient : spec.ambient + 1;
        for (const Field& f : m.at("forms").items()) {
            Form form = parse_form(f, width);
            if (spec.space == Space::Affine) {
                form.constant = form.coeffs.back();
                form.coeffs.pop_back();
            }
            spec.forms.push_back(std::move(form));
        }
        if (spec.forms.empty())
            throw Error(Errc::SchemaError, m.path() + ".forms: at least one form is required");
        if (m.has("names")) {
            spec.names = strings(m.at("names"));
            if (spec.names.size() != spec.forms.size())
                throw Error(Errc::SchemaError, m.path() + ".names: one name per form");
        }
        break;
    }
    case ModelKind::Subspace: {
        m.only({"kind", "space", "ambient", "c", "members", "names"});
        if (m.has("space") && parse_space(m.at("space")) != Space::Projective)
            throw Error(Errc::SchemaError, m.path() + ".space: subspace arrangements are taken in P^n");
        spec.ambient = m.at("ambient").integer();
        spec.c = m.at("c").integer();
        if (spec.ambient < 1 || spec.c < 1)
            throw Error(Errc::SchemaError, m.path() + ": ambient and c must be positive");
        for (const Field& member : m.at("members").items()) {
            LinearMember lm;
            for (const Field& eq : member.items())
                lm.equations.push_back(parse_form(eq, static_cast<std::size_t>(spec.ambient) + 1));
            spec.subspaces.push_back(std::move(lm));
        }
        if (spec.subspaces.empty())
            throw Error(Errc::SchemaError, m.path() + ".members: at least one member is required");
        if (m.has("names")) {
            spec.names = strings(m.at("names"));
            if (spec.names.size() != spec.subspaces.size())
                throw Error(Errc::SchemaError, m.path() + ".names: one name per member");
        }
        break;
    }
    case ModelKind::Configuration: {
        m.only({"kind", "factor", "points"});
        for (const Field& f : m.at("factor").items()) {
            int d = f.integer();
            if (d < 1)
                throw Error(Errc::SchemaError, f.path() + ": factor dimensions must be positive");
            spec.factor.push_back(d);
        }
        if (spec.factor.empty())
            throw Error(Errc::SchemaError, m.path() + ".factor: at least one projective factor is required");
        spec.points = m.at("points").integer();
        if (spec.points < 2)
            throw Error(Errc::SchemaError, m.path() + ".points: need at least 2 points");
        int c = 0;
        for (int d : spec.factor)
            c += d;
        spec.c = c;
        break;
    }
    case ModelKind::Abstract: {
        m.only({"kind", "c", "poset"});
        spec.c = m.at("c").integer();
        if (spec.c < 1)
            throw Error(Errc::SchemaError, m.path() + ".c: must be positive");
        Field poset = m.at("poset");
        poset.only({"ambient_betti", "members", "flats"});
        AbstractModelSpec& a = spec.abstract;
        a.c = spec.c;
        for (const Field& b : poset.at("ambient_betti").items())
            a.ambient_betti.push_back(b.natural());
        a.members = strings(poset.at("members"));
        for (const Field& f : poset.at("flats").items()) {
            f.only({"name", "codim", "members", "betti", "below"});
            AbstractStratum s;
            s.flat.name = f.at("name").string();
            s.flat.codim = f.at("codim").integer();
            s.flat.members = strings(f.at("members"));
            if (f.has("below"))
                s.flat.below = strings(f.at("below"));
            if (!f.has("betti"))
                throw Error(Errc::SchemaError, f.path() + ": flat '" + s.flat.name + "' has no Betti data");
            std::vector<std::uint64_t> betti;
            for (const Field& b : f.at("betti").items())
                betti.push_back(b.natural());
            s.betti = std::move(betti);
            a.flats.push_back(std::move(s));
        }
        if (a.ambient_betti.empty())
            throw Error(Errc::SchemaError, poset.path() + ".ambient_betti: Betti data of the ambient space is missing");
        spec.ambient = static_cast<int>(a.ambient_betti.size() - 1) / 2;
        break;
    }
    }
    return spec;
}

void check_consistency(const JobSpec& job)
{
    const ModelKind kind = job.model.kind;
    if (job.mode == Mode::Explicit) {
        if (kind == ModelKind::Abstract || kind == ModelKind::Subspace)
            throw Error(Errc::SchemaError, "options.mode: explicit mode is not available for " + to_string(kind)
                                               + " models");
        if (kind == ModelKind::Configuration && job.model.points > 3)
            throw Error(Errc::SchemaError, "options.mode: explicit mode for configuration spaces needs points <= 3");
    }
    if (job.target && job.mode && *job.mode != Mode::Feasibility)
        throw Error(Errc::SchemaError, "options.target: a target polynomial requires feasibility mode");
    if (job.local_system && job.model.c != 1)
        throw Error(Errc::SchemaError, "local_system: rank-one local systems need c = 1");
}

} // namespace

JobSpec parse_job(const std::string& text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw Error(Errc::ParseError, "line " + std::to_string(line) + ", column " + std::to_string(col) + ": "
                                          + e.what());
    }
    return parse_job_json(doc);
}

JobSpec parse_job_json(const json& doc)
{
    Field root(doc, "$");
    root.only({"schema_version", "model", "options", "local_system"});
    JobSpec job;
    job.schema_version = root.at("schema_version").integer();
    if (job.schema_version != kSchemaVersion)
        throw Error(Errc::SchemaError, "$.schema_version: unsupported version " + std::to_string(job.schema_version)
                                           + " (expected " + std::to_string(kSchemaVersion) + ")");
    job.model = parse_model(root.at("model"));
    if (root.has("options")) {
        Field opts = root.at("options");
        opts.only({"mode", "target"});
        if (opts.has("mode")) {
            try {
                job.mode = parse_mode(opts.at("mode").string());
            } catch (const Error& e) {
                throw Error(Errc::ParseError, "$.options.mode: " + std::string(e.what()));
            }
        }
        if (opts.has("target")) {
            try {
                job.target = Polynomial::parse(opts.at("target").string());
            } catch (const Error& e) {
                throw Error(Errc::ParseError, "$.options.target: " + std::string(e.what()));
            }
            if (!job.mode)
                job.mode = Mode::Feasibility;
        }
    }
    if (root.has("local_system")) {
        Field ls = root.at("local_system");
        ls.only({"exponents"});
        Field ex = ls.at("exponents");
        ex.require_object();
        std::map<std::string, Rational> exps;
        for (const auto& [name, value] : ex.value().items())
            exps[name] = Field(value, ex.path() + "." + name).rational();
        job.local_system = std::move(exps);
    }
    check_consistency(job);
    return job;
}

void override_options(JobSpec& job, const std::optional<Mode>& mode, const std::optional<std::string>& target)
{
    if (mode)
        job.mode = mode;
    if (target) {
        try {
            job.target = Polynomial::parse(*target);
        } catch (const Error& e) {
            throw Error(Errc::ParseError, "--target: " + std::string(e.what()));
        }
        if (!job.mode)
            job.mode = Mode::Feasibility;
    }
    check_consistency(job);
}

ArrangementModel build_model(const ModelSpec& spec, const PosetHints& hints)
{
    switch (spec.kind) {
    case ModelKind::Hyperplane:
    case ModelKind::Ncd: {
        if (!spec.names.empty() && !hints.poset) {
            // Names only affect labels; build the input poset with them.
            PosetHints named = hints;
            if (spec.space == Space::Projective)
                named.poset = build_from_forms(spec.forms, spec.ambient, spec.space, spec.names);
            else
                named.input_poset = build_from_forms(spec.forms, spec.ambient, spec.space, spec.names);
            return spec.kind == ModelKind::Ncd ? ncd_model(spec.forms, spec.ambient, spec.space, named)
                                               : hyperplane_model(spec.forms, spec.ambient, spec.space, named);
        }
        return spec.kind == ModelKind::Ncd ? ncd_model(spec.forms, spec.ambient, spec.space, hints)
                                           : hyperplane_model(spec.forms, spec.ambient, spec.space, hints);
    }
    case ModelKind::Subspace: {
        ArrangementModel m = subspace_model(spec.subspaces, spec.ambient, spec.c, hints);
        if (!spec.names.empty() && !hints.poset) {
            m.poset = build_from_subspaces(spec.subspaces, spec.ambient, Space::Projective, spec.c, spec.names);
            m.input_poset = m.poset;
        }
        return m;
    }
    case ModelKind::Configuration:
        return configuration_model(ProjProduct(spec.factor), spec.points);
    case ModelKind::Abstract:
        return abstract_model(spec.abstract);
    }
    throw Error(Errc::InvalidArgument, "unknown model kind");
}

Mode resolve_mode(const JobSpec& job, const ArrangementModel& model)
{
    if (job.mode)
        return *job.mode;
    return model.explicit_available ? Mode::Explicit : Mode::Feasibility;
}

} // namespace arrange::cli
