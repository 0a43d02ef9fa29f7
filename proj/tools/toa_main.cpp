#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "toa/config.hpp"
#include "toa/errors.hpp"
#include "toa/runner.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitComputation = 2;
constexpr int kExitIo = 3;

int classify(const std::exception& e) {
    if (dynamic_cast<const toa::config_error*>(&e)) return kExitConfig;
    if (dynamic_cast<const toa::io_error*>(&e)) return kExitIo;
    if (dynamic_cast<const toa::error*>(&e)) return kExitComputation;
    return kExitComputation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"toa: time-of-arrival distributions for 1-D quantum wave packets"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    int threads = 0;

    CLI::App* run = app.add_subcommand("run", "run a scenario config and write its CSV");
    run->add_option("config", config_path, "scenario config file")->required();
    run->add_option("--out", out_dir, "output directory (default: current)");
    run->add_option("--threads", threads, "worker thread count (default: all cores)");

    std::string validate_path;
    CLI::App* validate = app.add_subcommand("validate", "parse and validate a config");
    validate->add_option("config", validate_path, "scenario config file")->required();

    std::string demo_kind;
    CLI::App* demo = app.add_subcommand("demo", "print a canonical config for a scenario");
    demo->add_option("kind", demo_kind,
                     "one of density|currents|means|negative_flux|semiclassical|barrier|"
                     "wigner_check")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
#ifdef _OPENMP
            if (threads > 0) omp_set_num_threads(threads);
#endif
            const toa::ScenarioConfig cfg = toa::load_config(config_path);
            toa::run_scenario(cfg, out_dir, std::cout);
            return kExitOk;
        }
        if (validate->parsed()) {
            toa::load_config(validate_path);
            std::cout << "OK\n";
            return kExitOk;
        }
        if (demo->parsed()) {
            std::cout << toa::demo_config(toa::parse_scenario(demo_kind));
            return kExitOk;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return classify(e);
    }
    return kExitOk;
}
