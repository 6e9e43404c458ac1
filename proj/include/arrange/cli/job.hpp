#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "arrange/model.hpp"
#include "arrange/model_builders.hpp"
#include "arrange/polynomial.hpp"

namespace arrange::cli {

inline constexpr int kSchemaVersion = 1;

enum class Mode { Explicit, Feasibility, Bounds };
enum class Command { Run, Verify, Lattice, Stalks, Oracle };
enum class Format { Human, Machine };

std::string to_string(Mode mode);
std::string to_string(Command command);
Mode parse_mode(const std::string& text);
Command parse_command(const std::string& text);
Format parse_format(const std::string& text);

struct ModelSpec {
    ModelKind kind = ModelKind::Hyperplane;
    Space space = Space::Projective;
    int ambient = 0;
    int c = 1;
    std::vector<Form> forms;               // hyperplane, ncd
    std::vector<LinearMember> subspaces;   // subspace
    std::vector<std::string> names;        // optional member names
    std::vector<int> factor;               // configuration
    int points = 0;                        // configuration
    AbstractModelSpec abstract;            // abstract

    nlohmann::json source; // the model section as given, for hashing
};

struct JobSpec {
    int schema_version = kSchemaVersion;
    ModelSpec model;
    std::optional<Mode> mode; // unset: explicit when available, else feasibility
    std::optional<Polynomial> target;
    std::optional<std::map<std::string, Rational>> local_system; // member name -> exponent
};

/**
 * Parses and validates a job document. Throws ParseError for malformed JSON
 * (with line and column) or bad field values, and SchemaError for
 * structurally inconsistent jobs; messages name the offending field.
 */
JobSpec parse_job(const std::string& text);
JobSpec parse_job_json(const nlohmann::json& doc);

/// Applies command-line overrides and rechecks option consistency.
void override_options(JobSpec& job, const std::optional<Mode>& mode, const std::optional<std::string>& target);

ArrangementModel build_model(const ModelSpec& spec, const PosetHints& hints = {});

/// Explicit when the model supports it, otherwise feasibility.
Mode resolve_mode(const JobSpec& job, const ArrangementModel& model);

} // namespace arrange::cli
