#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "arrange/cli/job.hpp"
#include "arrange/cli/report.hpp"

using namespace arrange;
using namespace arrange::cli;

int main(int argc, char** argv)
{
    CLI::App app{"Leray spectral sequences of arrangement complements"};
    app.require_subcommand(1);

    std::string file;
    std::string mode_flag;
    std::string target_flag;
    std::string format_flag = "human";
    bool no_cache = false;

    const std::vector<std::pair<Command, std::string>> commands = {
        {Command::Run, "full pipeline: stalks, E_2, d_2c, E_inf, Betti and weight tables"},
        {Command::Verify, "run every consistency check and the oracle comparison"},
        {Command::Lattice, "intersection poset, Möbius function and admissibility"},
        {Command::Stalks, "stalk tables and the constant-sheaf decomposition"},
        {Command::Oracle, "independent reference Poincaré polynomial"},
    };
    for (const auto& [cmd, help] : commands) {
        CLI::App* sub = app.add_subcommand(to_string(cmd), help);
        sub->add_option("file", file, "job document (JSON), '-' for stdin")->required();
        sub->add_option("--mode", mode_flag, "explicit | feasibility | bounds")
            ->check(CLI::IsMember({"explicit", "feasibility", "bounds"}));
        sub->add_option("--target", target_flag, "target Poincaré polynomial, e.g. \"1 + 2t + t^2\"");
        sub->add_option("--format", format_flag, "human | machine")->check(CLI::IsMember({"human", "machine"}));
        sub->add_flag("--no-cache", no_cache, "ignore and do not write the result cache");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int status = app.exit(e);
        return status == 0 ? kExitOk : kExitInput;
    }

    Command command = parse_command(app.get_subcommands().front()->get_name());
    Format format = parse_format(format_flag);

    Outcome outcome;
    try {
        std::stringstream buf;
        if (file == "-") {
            buf << std::cin.rdbuf();
        } else {
            std::ifstream in(file);
            if (!in)
                throw Error(Errc::ParseError, "cannot open '" + file + "'");
            buf << in.rdbuf();
        }
        JobSpec job = parse_job(buf.str());
        std::optional<Mode> mode;
        if (!mode_flag.empty())
            mode = parse_mode(mode_flag);
        std::optional<std::string> target;
        if (!target_flag.empty())
            target = target_flag;
        override_options(job, mode, target);
        ExecOptions opts;
        opts.command = command;
        opts.use_cache = !no_cache;
        if (command == Command::Verify && !job.mode && job.model.kind == ModelKind::Abstract)
            job.mode = Mode::Bounds;
        outcome = execute(job, opts);
    } catch (const Error& e) {
        outcome = error_outcome(command, e);
    }

    std::cout << (format == Format::Machine ? render_machine(outcome.report) : render_human(outcome.report));
    if (outcome.report.contains("error") && format == Format::Human)
        std::cerr << "arrange: " << outcome.report["error"]["message"].get<std::string>() << "\n";
    return outcome.exit_code;
}
