#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "arrange/cli/job.hpp"
#include "arrange/cli/serialize.hpp"
#include "arrange/error.hpp"

namespace arrange::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitMismatch = 2;
inline constexpr int kExitInfeasible = 3;
inline constexpr int kExitInput = 4;

int exit_code_for(Errc code);

struct ExecOptions {
    Command command = Command::Run;
    bool use_cache = true;
    std::optional<std::filesystem::path> cache_dir; // default: ResultCache::default_dir()
};

struct Outcome {
    Json report;
    int exit_code = kExitOk;
};

/// Runs a job end to end. Module errors are caught and reported, never thrown.
Outcome execute(const JobSpec& job, const ExecOptions& options);

/// Report for a job that failed before execution (parse or schema errors).
Outcome error_outcome(Command command, const Error& error);

std::string render_machine(const Json& report);
std::string render_human(const Json& report);

} // namespace arrange::cli
