#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nlds/coefficients.hpp"
#include "nlds/competition.hpp"
#include "nlds/grid.hpp"
#include "nlds/kernels.hpp"

namespace nlds {

enum class Experiment { Spectrum, SweepNu, SweepDelta, Evolve, Compete, Verify };

std::string to_string(Experiment e);
Experiment experiment_from_string(const std::string& s);

struct GridSpec {
    std::vector<double> lower{0.0};
    std::vector<double> upper{1.0};
    std::vector<int> nodes{128};
    Boundary bc = Boundary::Neumann;
};

struct KernelSpec {
    Profile profile = Profile::TriangleTensor;
    double delta = 0.5;
    Point shift{0.0, 0.0};
};

struct CoefficientSpec {
    std::string form = "sine";  // constant | sine | cosine | linear | random_fourier | file
    double amplitude = 0.5;
    double frequency = 1.0;
    double offset = 0.0;
    double slope = 1.0;
    double value = 0.0;  // constant form
    int modes = 3;
    std::string file;
    double flatten_epsilon = 0.0;  // > 0 applies the flat-maximum construction
};

struct SweepSpec {
    std::vector<double> nu;
    std::vector<double> delta;
    bool assert_trends = true;
    double divergence_threshold = 100.0;  // Dirichlet large-nu check: lambda < -threshold
    double endpoint_tol = 5e-3;
    double small_delta_tol = 1e-2;
    int nodes_per_delta = 8;  // auto resolution: delta_min * nodes_per_unit >= this
    int dense_budget = 4096;
    bool cross_check = false;  // re-run every row at doubled resolution
};

struct EvolveSpec {
    double T = 1.0;
    double dt = 0.0;
    int stride = 10;
    std::string initial = "constant";  // constant | bump | random
    std::string format = "long";
};

struct CompeteSpec {
    GrowthForm growth = GrowthForm::Logistic;
    double tol = 1e-3;
    double t_cap = 1e4;
    double u0 = 0.5;
    double v0 = 0.5;
    int stride = 10;
    std::string format = "long";
};

struct ToleranceSpec {
    double eps_gap_rel = 1e-6;
    double positivity_ratio = 1e-8;
    double growth_tol = 1e-10;
    double alpha_tol = 1e-10;
    double power_rel_tol = 1e-12;
};

struct OutputSpec {
    std::string dir = "out";
    bool plots = true;
    bool dump_matrix = false;
};

struct VerifySpec {
    std::vector<std::string> skip;
    double tolerance_scale = 1.0;
};

struct ScenarioConfig {
    Experiment experiment = Experiment::Spectrum;
    GridSpec grid;
    KernelSpec kernel;
    std::vector<double> nu{1.0};
    CoefficientSpec coefficient;
    std::vector<std::string> routes{"dense_eig", "rayleigh", "growth_rate", "radius_root"};
    bool existence = false;
    int refinement_levels = 3;
    SweepSpec sweep;
    EvolveSpec evolve;
    CompeteSpec compete;
    ToleranceSpec tolerances;
    OutputSpec output;
    std::uint64_t seed = 1;
    int workers = 1;
    VerifySpec verify;
};

/// Parses JSON text; every problem is reported as a ConfigError naming the field.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);

BoxDomain make_domain(const GridSpec& g);
Grid make_grid(const GridSpec& g);
Kernel make_kernel(const KernelSpec& k, int dim);
/// The kernel used on `grid`: periodized for periodic grids.
DispersalKernel make_dispersal_kernel(const Kernel& k, const Grid& grid);
/// Coefficient on `grid`; file-backed fields cannot be resampled.
CoefficientSource make_coefficient_source(const CoefficientSpec& c, const BoxDomain& domain, std::uint64_t seed,
                                          const Kernel& kernel, double nu);

}  // namespace nlds
