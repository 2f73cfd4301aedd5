#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hhlab/config.hpp"
#include "hhlab/persist.hpp"
#include "hhlab/pipeline.hpp"

namespace {

std::string joined_names()
{
    std::string s;
    for (const std::string& n : hhlab::pipeline_names()) s += (s.empty() ? "" : ", ") + n;
    return s;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Numerical experiments for the deformed Hitchin system on a cylinder"};
    app.require_subcommand(0, 1);

    std::string pipeline, config_path, out_dir;
    std::uint64_t seed = 0;
    auto* pipe = app.add_option("pipeline", pipeline, "one of: " + joined_names());
    app.add_option("--config", config_path, "key=value configuration file")->check(CLI::ExistingFile);
    auto* out_opt = app.add_option("--out", out_dir, "output directory");
    auto* seed_opt = app.add_option("--seed", seed, "seed for random probes (default 42)");

    std::string inspect_path;
    auto* inspect = app.add_subcommand("inspect", "print the header of a configuration snapshot");
    inspect->add_option("file", inspect_path)->required()->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*inspect) {
            std::cout << hhlab::inspect_configuration(inspect_path).describe() << "\n";
            return 0;
        }
        if (pipe->count() == 0 || config_path.empty()) {
            std::cerr << "usage: hhlab <pipeline> --config <path> [--out <dir>] [--seed N]\n"
                      << "pipelines: " << joined_names() << "\n";
            return 1;
        }
        hhlab::RunConfig cfg = hhlab::load_config_file(config_path);
        cfg.experiment = pipeline;
        if (out_opt->count()) cfg.out_dir = out_dir;
        if (seed_opt->count()) cfg.seed = seed;

        const hhlab::PipelineOutcome res = hhlab::run_experiment(cfg);
        int failed = 0;
        for (const hhlab::CriterionReport& r : res.reports) {
            std::printf("%-28s %s\n", r.name.c_str(), r.status());
            if (!r.pass()) ++failed;
        }
        std::printf("outputs in %s: checks.csv, report.txt (%zu files)\n", cfg.out_dir.c_str(), res.files.size());
        return failed == 0 ? 0 : 2;
    } catch (const hhlab::ValidationError& e) {
        std::cerr << "hhlab: invalid " << e.key() << ": " << e.what() << "\n";
    } catch (const hhlab::Error& e) {
        std::cerr << "hhlab: " << e.what() << "\n";
    } catch (const std::exception& e) {
        std::cerr << "hhlab: " << e.what() << "\n";
    }
    return 1;
}
