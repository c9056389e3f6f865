#include "mixedfrac/runner.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    using namespace mixedfrac;

    CLI::App app{"Mixed local-nonlocal Neumann solver and verification runner"};
    app.require_subcommand(1);

    std::filesystem::path config_path;
    std::filesystem::path out;
    std::int64_t seed = -1;
    int threads = 0;
    for (const auto& name : command_names()) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "key = value configuration file")->required();
        sub->add_option("--out", out, "output directory (overrides 'output')");
        sub->add_option("--seed", seed, "RNG seed (overrides 'seed')")->check(CLI::NonNegativeNumber);
        sub->add_option("--threads", threads, "OpenMP threads (0: runtime default)")->check(CLI::NonNegativeNumber);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(ExitStatus::ConfigError);
    }

    const std::string command = app.get_subcommands().front()->get_name();
    RunConfig config;
    try {
        config = RunConfig::load(config_path);
        if (!out.empty()) {
            config.output = out;
        }
        if (seed >= 0) {
            config.seed = static_cast<std::uint64_t>(seed);
        }
    } catch (const std::exception& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return static_cast<int>(ExitStatus::ConfigError);
    }
    set_thread_count(threads);
    return static_cast<int>(run_command(command, config, std::cout, std::cerr));
}
