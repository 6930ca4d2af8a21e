#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "snls/experiments.hpp"

namespace {

// Worker priority: --workers flag, then SNLS_LAB_WORKERS, then the config.
void apply_workers(snls::ExperimentConfig& cfg, int flag_value)
{
    if (flag_value > 0) {
        cfg.workers = static_cast<std::size_t>(flag_value);
        return;
    }
    const char* env = std::getenv("SNLS_LAB_WORKERS");
    if (!env || !*env)
        return;
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (*end != '\0' || v == 0)
        throw snls::ConfigError("SNLS_LAB_WORKERS: expected a positive integer, got '"
                                + std::string(env) + "'");
    cfg.workers = static_cast<std::size_t>(v);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Spectral laboratory for the stochastic mass-critical Schrodinger "
                 "equation: preset studies, path ensembles, CSV reports"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
    std::string config_file;
    std::string out_dir;
    std::string resume_dir;
    int workers = 0;
    run->add_option("config", config_file, "flat key = value experiment description")
        ->required();
    run->add_option("--out", out_dir, "output directory (overrides output.dir)");
    run->add_option("--workers", workers,
                    "worker threads (overrides SNLS_LAB_WORKERS and ensemble.workers)")
        ->check(CLI::PositiveNumber);
    run->add_option("--resume", resume_dir,
                    "output directory of a halted run; its state/ continues here");

    CLI11_PARSE(app, argc, argv);

    try {
        std::ifstream in(config_file, std::ios::binary);
        if (!in) {
            std::cerr << "error: cannot read " << config_file << "\n";
            return 2;
        }
        std::stringstream text;
        text << in.rdbuf();

        auto cfg = snls::parse_config(text.str());
        if (!out_dir.empty())
            cfg.output_dir = out_dir;
        apply_workers(cfg, workers);

        const auto result = snls::run_experiment(cfg, resume_dir);
        std::cout << result.summary;
        return result.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
