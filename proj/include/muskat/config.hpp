// Run configuration: a flat key = value file with dotted section names.
//
//   # comment
//   grid.dim = 1
//   grid.points = 512
//   params.Lambda = 1
//
// Every key must be known and appear at most once.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "muskat/dynamics.hpp"
#include "muskat/grid.hpp"

namespace muskat {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SimConfig {
    GridSpec grid{1, 64, 16.0};
    PhysicalParams params;
    FieldRecipe initial;
    std::string initial_path;  // non-empty: start from this snapshot
    bool strict_initial = true;
    StepperConfig stepper;
    EvolveOptions evolve;
    std::string output_dir = "out";
    std::vector<std::string> suites{"all"};
    std::uint64_t seed = 1;

    // Exactly as read, for the manifest.
    std::map<std::string, std::string> entries;
};

[[nodiscard]] SimConfig parse_config(std::istream& in, const std::string& source = "<config>");
[[nodiscard]] SimConfig load_config(const std::string& path);

// The initial height on the configured grid (or the snapshot's own grid).
[[nodiscard]] ScalarField initial_field(const SimConfig& config);
// Same recipe sampled on `grid` (snapshots are resampled spectrally).
[[nodiscard]] ScalarField initial_field(const SimConfig& config, const GridSpec& grid);

// Band-limited resampling onto a grid with the same dim and extent.
[[nodiscard]] ScalarField resample(const ScalarField& u, const GridSpec& target);

[[nodiscard]] std::vector<std::string> known_config_keys();

}  // namespace muskat
