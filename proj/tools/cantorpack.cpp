// cantorpack: run one analysis from a JSON config and write its report.

#include "cantorpack/commands.hpp"
#include "cantorpack/errors.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Packing and covering pre-measures for Cantor-series sets"};
    app.require_subcommand(1, 1);

    std::string config_path;
    std::string out_dir;
    std::string format;
    std::uint64_t seed = 0;
    std::size_t depth = 0;

    for (const char* name : {"faithful", "dim", "tstar", "billingsley", "proptest"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "JSON experiment config");
        sub->add_option("--out", out_dir, "output directory (overrides output.dir)");
        sub->add_option("--seed", seed, "random seed (proptest)");
        sub->add_option("--depth", depth, "depth override")->check(CLI::PositiveNumber);
        sub->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    const std::string command = app.get_subcommands().front()->get_name();
    auto* sub = app.get_subcommands().front();

    try {
        cantorpack::ExperimentConfig cfg;
        if (!config_path.empty()) {
            cfg = cantorpack::load_config(config_path);
        } else if (command != "tstar" && command != "proptest") {
            std::cerr << "error: " << command << " needs --config\n";
            return 2;
        }
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (!format.empty()) cfg.format = format;

        cantorpack::CommandOverrides o;
        if (sub->count("--seed")) o.seed = seed;
        if (sub->count("--depth")) o.depth = depth;

        const auto report = cantorpack::run_command(command, cfg, o);
        for (const auto& path : cantorpack::write_report(report, cfg.out_dir, cfg.format)) std::cout << path << "\n";
        for (const auto& f : report.failures) std::cerr << "negative: " << f << "\n";
        return cantorpack::exit_code(report, cfg);
    } catch (const cantorpack::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}
