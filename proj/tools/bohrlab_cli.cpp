#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "bohrlab/experiment.hpp"
#include "bohrlab/io.hpp"

// exit codes: 0 success, 2 config error, 3 precondition/validation failure,
// 4 numeric non-convergence
int main(int argc, char** argv) {
    CLI::App app{"bohrlab: numerical experiments on Bohr almost periodic semigroup actions"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::int64_t seed = -1;
    int threads = -1;

    CLI::App* run = app.add_subcommand("run", "run one experiment from a config file");
    run->add_option("config", config_path, "path to a key=value config file")->required();
    run->add_option("--out", out_dir, "output directory (overrides the config)");
    run->add_option("--seed", seed, "seed override");
    run->add_option("--threads", threads, "worker threads (affects speed, never results)");

    CLI::App* list = app.add_subcommand("list", "list built-in systems and experiments");

    CLI11_PARSE(app, argc, argv);

    if (list->parsed()) {
        std::cout << bohrlab::list_systems();
        return 0;
    }

    try {
        bohrlab::ExperimentConfig cfg = bohrlab::ExperimentConfig::from_file(config_path);
        if (seed >= 0) cfg.kv["seed"] = std::to_string(seed);
        if (threads >= 0) cfg.kv["threads"] = std::to_string(threads);
        if (!out_dir.empty()) cfg.kv["out"] = out_dir;
        std::string out = cfg.get("out", "out");

        bohrlab::RunReport rep = bohrlab::run_experiment(cfg, out);
        std::cout << rep.report["result"].dump(2) << '\n';
        std::cout << "wrote " << rep.files.size() << " files to " << out << " ("
                  << bohrlab::io::format_double(rep.wall_seconds) << " s)\n";
        return 0;
    } catch (const bohrlab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const bohrlab::InvalidInputError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return 3;
    } catch (const bohrlab::ResolutionError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return 3;
    } catch (const bohrlab::ResourceError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return 3;
    } catch (const bohrlab::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        for (std::size_t i = 0; i < e.residual_history.size(); ++i)
            std::cerr << "  residual[" << i << "] = " << e.residual_history[i] << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
