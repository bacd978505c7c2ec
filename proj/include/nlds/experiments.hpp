#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "nlds/config.hpp"
#include "nlds/io.hpp"
#include "nlds/spectral.hpp"

namespace nlds {

struct TrendCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct SweepRow {
    double parameter = 0.0;
    SpectrumRowContext context;
    SpectralReport report;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::vector<TrendCheck> checks;
    std::vector<std::string> warnings;
    double a_max = 0.0;
    double a_hat = 0.0;
    std::string nodes;

    std::string csv() const;
    bool all_pass() const;
};

/// One dense-eig row per nu on the configured grid, with trend annotations.
SweepResult sweep_nu(const ScenarioConfig& base, const std::vector<double>& nu_list, int workers = 1);

/// One row per delta; the grid is refined so that delta_min * nodes_per_unit >= sweep.nodes_per_delta.
SweepResult sweep_delta(const ScenarioConfig& base, const std::vector<double>& delta_list, int workers = 1);

/// Nodes per axis satisfying the sweep_delta resolution rule (never below the configured count).
std::vector<int> auto_resolution(const GridSpec& grid, double delta_min, int nodes_per_delta);

struct RunContext {
    std::string out_dir;          // empty: config.output.dir
    std::string format = "csv";   // stdout flavour: csv | report
    int workers = 0;              // 0: config.workers
    std::ostream* out = nullptr;  // defaults to std::cout
    std::ostream* log = nullptr;  // defaults to std::cerr
};

struct RunOutcome {
    int exit_code = 0;  // 0 success, 1 check failure
    std::vector<std::string> files;
};

/// Executes config.experiment. ConfigError and NumericalError propagate.
RunOutcome run_scenario(const ScenarioConfig& config, const RunContext& ctx);

}  // namespace nlds
