// muskat: evolve | validate | symbol | field | rt-check
//
// MUSKAT_THREADS sets the OpenMP thread count.
#include <omp.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "muskat/runner.hpp"

namespace {

void apply_thread_env() {
    const char* env = std::getenv("MUSKAT_THREADS");
    if (!env || !*env) return;
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (*end != '\0' || n < 1) throw muskat::ConfigError(std::string("MUSKAT_THREADS must be a positive integer, got '") + env + "'");
    omp_set_num_threads(static_cast<int>(n));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Muskat interface evolution and operator identity checks"};
    app.require_subcommand(1);

    std::string config_path;
    std::string suite;
    std::string probes_path;
    std::string snapshot_path;
    std::string output_path;
    muskat::SymbolRequest symbol;

    auto* evolve = app.add_subcommand("evolve", "Run a time evolution");
    evolve->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);

    auto* validate = app.add_subcommand("validate", "Run identity suites at M and 2M");
    validate->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);
    validate->add_option("--suite", suite, "Single suite (overrides validate.suites)");

    auto* sym = app.add_subcommand("symbol", "Dump a multiplier symbol as CSV");
    sym->add_option("--A", symbol.slope, "Frozen slope, one entry per axis")->required()->delimiter(',');
    sym->add_option("--n", symbol.n, "Difference slots");
    sym->add_option("--nu", symbol.nu, "Angular multi-index")->delimiter(',');
    sym->add_option("--symbol", symbol.symbol, "D or T")->check(CLI::IsMember({"D", "T"}));
    sym->add_option("--profile", symbol.profile, "base or constant")->check(CLI::IsMember({"base", "constant"}));
    auto* ray = sym->add_option("--ray", symbol.ray, "Direction of the frequency ray")->delimiter(',');
    auto* grid = sym->add_flag("--grid", "Sample all integer z with |z_d| <= kmax");
    ray->excludes(grid);
    sym->add_option("--kmax", symbol.kmax, "Largest frequency");
    sym->add_option("--count", symbol.count, "Points along the ray");
    sym->add_option("-o,--output", output_path, "CSV path (default stdout)");

    auto* field = app.add_subcommand("field", "Velocity and pressure at probe points");
    field->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);
    field->add_option("--probes", probes_path, "CSV of probe points (x..., y)")->required()->check(CLI::ExistingFile);
    field->add_option("-o,--output", output_path, "CSV path (default stdout)");

    auto* rt = app.add_subcommand("rt-check", "Rayleigh-Taylor margin of a snapshot");
    rt->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);
    rt->add_option("--snapshot", snapshot_path, "Binary snapshot")->required()->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(muskat::ExitCode::config);
    }

    using muskat::ExitCode;
    try {
        apply_thread_env();
        std::ofstream file;
        auto sink = [&]() -> std::ostream& {
            if (output_path.empty()) return std::cout;
            file.open(output_path);
            if (!file) throw muskat::ConfigError("cannot write " + output_path);
            return file;
        };

        ExitCode code = ExitCode::ok;
        if (*sym) {
            if (symbol.ray.empty() && !*grid) throw muskat::ConfigError("symbol: give --ray or --grid");
            muskat::write_symbol_csv(sink(), symbol);
        } else {
            muskat::SimConfig config = muskat::load_config(config_path);
            if (*evolve) {
                code = muskat::run_evolve(config, std::cerr);
            } else if (*validate) {
                if (!suite.empty()) config.suites = {suite};
                code = muskat::run_validate(config, std::cout);
            } else if (*field) {
                code = muskat::run_field(config, probes_path, sink(), std::cerr);
            } else if (*rt) {
                code = muskat::run_rt_check(config, snapshot_path, std::cout, std::cerr);
            }
        }
        return static_cast<int>(code);
    } catch (const muskat::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::config);
    } catch (const muskat::SolverError& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return static_cast<int>(ExitCode::solver);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
