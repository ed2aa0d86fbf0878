// Orchestration behind the command-line tool: evolve runs, identity suites,
// symbol dumps, probe evaluation and stability checks.
#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "muskat/config.hpp"

namespace muskat {

enum class ExitCode : int { ok = 0, config = 2, solver = 3, rt_halt = 4, validation = 5 };

// Observed order log2(coarse / fine) with a rounding-floor escape: a fine
// residual at or below floor * scale passes regardless of the order.
struct RefinementVerdict {
    double order = 0.0;
    bool at_floor = false;
    bool pass = false;
};

[[nodiscard]] RefinementVerdict judge_refinement(double coarse, double fine, double scale, double min_order = 1.0,
                                                 double floor = 1e-10);

struct ValidationRow {
    std::string suite;
    std::string check;
    int points = 0;
    double residual = 0.0;
    double tolerance = 0.0;  // absolute bound, or 0 when judged by order
    double order = 0.0;      // NaN on rows without a refinement pair
    bool pass = false;
};

struct ValidationReport {
    std::vector<ValidationRow> rows;
    [[nodiscard]] bool passed() const;
};

[[nodiscard]] std::vector<std::string> validation_suites();

// Runs the named suites ("all" expands) on the configured cell at M and 2M.
// The interface is the configured initial field; densities are drawn from
// the configured seed. Throws ConfigError on an unknown suite name.
[[nodiscard]] ValidationReport run_validation(const SimConfig& config, const std::vector<std::string>& suites);

void write_validation_csv(std::ostream& out, const ValidationReport& report);
void print_validation_table(std::ostream& out, const ValidationReport& report);

struct SymbolRequest {
    std::string symbol = "D";   // D: i m(z) of D_{n,nu}; T: m_T(A, z)
    std::string profile = "base";  // base | constant
    std::vector<double> slope;
    int n = 0;
    std::vector<int> nu;
    std::vector<double> ray;  // direction; empty: sample the integer grid
    double kmax = 8.0;
    int count = 32;
};

void write_symbol_csv(std::ostream& out, const SymbolRequest& request);

// Each returns the process exit code and reports progress on `log`.
[[nodiscard]] ExitCode run_evolve(const SimConfig& config, std::ostream& log);
[[nodiscard]] ExitCode run_validate(const SimConfig& config, std::ostream& log);
[[nodiscard]] ExitCode run_field(const SimConfig& config, const std::string& probes_path, std::ostream& out,
                                 std::ostream& log);
[[nodiscard]] ExitCode run_rt_check(const SimConfig& config, const std::string& snapshot_path, std::ostream& out,
                                    std::ostream& log);

// manifest.json: config echo, resolved values, versions, seed, thread count.
void write_manifest(const SimConfig& config, const std::string& command, const std::string& dir);

}  // namespace muskat
