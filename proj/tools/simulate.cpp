#include <exception>
#include <filesystem>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "qdmnp/errors.hpp"
#include "qdmnp/experiments.hpp"
#include "qdmnp/log.hpp"

namespace {

enum ExitCode { ok = 0, config_error = 2, solver_error = 3, partial_failure = 4 };

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Steady-state and correlation experiments for a quantum dot coupled to a metal nanoparticle"};
    std::filesystem::path config_path;
    std::filesystem::path out_dir;
    int workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    std::optional<int> fock_cap;
    bool verbose = false;
    app.add_option("config", config_path, "experiment config file")->required();
    app.add_option("--out", out_dir, "output directory (default: ./<experiment name>)");
    app.add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--fock-cap", fock_cap, "largest Fock cutoff tried by the automatic cutoff search")
        ->check(CLI::Range(2, 1024));
    app.add_flag("--verbose", verbose, "progress messages on stderr");
    app.set_version_flag("--version", QDMNP_VERSION);
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : config_error;
    }
    qdmnp::log::set_level(verbose ? qdmnp::log::Level::info : qdmnp::log::Level::warning);

    qdmnp::ExperimentConfig cfg;
    try {
        const auto kv = qdmnp::KeyValueConfig::load(config_path);
        cfg = qdmnp::ExperimentConfig::from(kv, config_path.parent_path());
        if (fock_cap) cfg.fock_cap = *fock_cap;
        cfg.validate();
    } catch (const qdmnp::Error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return config_error;
    }
    if (out_dir.empty()) out_dir = cfg.name;

    qdmnp::ExperimentResult result;
    int code = ok;
    try {
        qdmnp::log::info("running " + qdmnp::to_string(cfg.kind) + " '" + cfg.name + "'");
        result = qdmnp::run_experiment(cfg, workers);
        if (result.all_failed) code = solver_error;
        else if (!result.failures.empty()) code = partial_failure;
    } catch (const qdmnp::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return config_error;
    } catch (const std::exception& e) {
        result.failures.push_back(e.what());
        result.all_failed = true;
        code = solver_error;
    }
    for (const auto& f : result.failures) std::cerr << "failure: " << f << '\n';
    try {
        qdmnp::write_experiment(cfg, result, out_dir);
    } catch (const std::exception& e) {
        std::cerr << "cannot write output: " << e.what() << '\n';
        return solver_error;
    }
    qdmnp::log::info("wrote " + (out_dir / "results.csv").string());
    return code;
}
