#include "nlds/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "nlds/errors.hpp"
#include "nlds/flatten.hpp"
#include "nlds/io.hpp"
#include "nlds/random.hpp"

namespace nlds {

using nlohmann::json;

std::string to_string(Experiment e) {
    switch (e) {
        case Experiment::Spectrum: return "spectrum";
        case Experiment::SweepNu: return "sweep_nu";
        case Experiment::SweepDelta: return "sweep_delta";
        case Experiment::Evolve: return "evolve";
        case Experiment::Compete: return "compete";
        case Experiment::Verify: return "verify";
    }
    return "unknown";
}

Experiment experiment_from_string(const std::string& s) {
    std::string t = s;
    for (char& c : t)
        if (c == '-') c = '_';
    for (auto e : {Experiment::Spectrum, Experiment::SweepNu, Experiment::SweepDelta, Experiment::Evolve,
                   Experiment::Compete, Experiment::Verify})
        if (to_string(e) == t) return e;
    throw ConfigError("experiment: unknown kind '" + s + "'");
}

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& msg) { throw ConfigError(field + ": " + msg); }

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> known) {
    if (!obj.is_object()) fail(where.empty() ? "<root>" : where, "expected an object");
    const std::set<std::string> ok(known.begin(), known.end());
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!ok.count(it.key())) fail(where.empty() ? it.key() : where + "." + it.key(), "unknown field");
}

std::string path(const std::string& where, const char* key) { return where.empty() ? key : where + "." + key; }

double get_number(const json& obj, const std::string& where, const char* key, double def) {
    if (!obj.contains(key)) return def;
    const json& v = obj.at(key);
    if (!v.is_number()) fail(path(where, key), "expected a number");
    return v.get<double>();
}

double get_positive(const json& obj, const std::string& where, const char* key, double def) {
    const double v = get_number(obj, where, key, def);
    if (!(v > 0.0)) fail(path(where, key), "must be positive");
    return v;
}

int get_int(const json& obj, const std::string& where, const char* key, int def, int min_value) {
    if (!obj.contains(key)) return def;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) fail(path(where, key), "expected an integer");
    const long long x = v.get<long long>();
    if (x < min_value || x > 1000000000LL) fail(path(where, key), "must be at least " + std::to_string(min_value));
    return static_cast<int>(x);
}

bool get_bool(const json& obj, const std::string& where, const char* key, bool def) {
    if (!obj.contains(key)) return def;
    if (!obj.at(key).is_boolean()) fail(path(where, key), "expected true or false");
    return obj.at(key).get<bool>();
}

std::string get_string(const json& obj, const std::string& where, const char* key, const std::string& def) {
    if (!obj.contains(key)) return def;
    if (!obj.at(key).is_string()) fail(path(where, key), "expected a string");
    return obj.at(key).get<std::string>();
}

std::vector<double> number_list(const json& v, const std::string& field) {
    std::vector<double> out;
    if (v.is_number()) return {v.get<double>()};
    if (!v.is_array()) fail(field, "expected a number or a list of numbers");
    for (const auto& x : v) {
        if (!x.is_number()) fail(field, "expected a list of numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

std::vector<double> sweep_list(const json& v, const std::string& field) {
    std::vector<double> out = number_list(v, field);
    if (out.empty()) fail(field, "must not be empty");
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (!(out[i] > 0.0)) fail(field, "entries must be positive");
        if (i && !(out[i] > out[i - 1])) fail(field, "entries must be strictly increasing");
    }
    return out;
}

template <typename F>
auto convert(const std::string& field, F&& f) {
    try {
        return f();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        fail(field, e.what());
    }
}

GridSpec parse_grid(const json& j) {
    const std::string w = "grid";
    reject_unknown(j, w, {"lower", "upper", "nodes", "bc"});
    GridSpec g;
    if (j.contains("lower")) g.lower = number_list(j.at("lower"), "grid.lower");
    if (j.contains("upper")) g.upper = number_list(j.at("upper"), "grid.upper");
    if (j.contains("nodes")) {
        const json& n = j.at("nodes");
        g.nodes.clear();
        if (n.is_number_integer()) {
            g.nodes.push_back(n.get<int>());
        } else if (n.is_array()) {
            for (const auto& x : n) {
                if (!x.is_number_integer()) fail("grid.nodes", "expected integers");
                g.nodes.push_back(x.get<int>());
            }
        } else {
            fail("grid.nodes", "expected an integer or a list of integers");
        }
    }
    if (g.lower.size() != g.upper.size()) fail("grid.upper", "length differs from grid.lower");
    if (g.lower.empty() || g.lower.size() > 2) fail("grid.lower", "dimension must be 1 or 2");
    if (g.nodes.size() == 1 && g.lower.size() == 2) g.nodes.push_back(g.nodes[0]);
    if (g.nodes.size() != g.lower.size()) fail("grid.nodes", "one entry per axis expected");
    for (std::size_t a = 0; a < g.lower.size(); ++a) {
        if (!(g.upper[a] > g.lower[a])) fail("grid.upper", "must exceed grid.lower on every axis");
        if (g.nodes[a] < 2) fail("grid.nodes", "at least 2 nodes per axis");
    }
    const std::string bc = get_string(j, w, "bc", "neumann");
    g.bc = convert("grid.bc", [&] { return boundary_from_string(bc); });
    return g;
}

KernelSpec parse_kernel(const json& j) {
    reject_unknown(j, "kernel", {"profile", "delta", "shift"});
    KernelSpec k;
    const std::string prof = get_string(j, "kernel", "profile", to_string(k.profile));
    k.profile = convert("kernel.profile", [&] { return profile_from_string(prof); });
    k.delta = get_positive(j, "kernel", "delta", k.delta);
    if (j.contains("shift")) {
        auto s = number_list(j.at("shift"), "kernel.shift");
        if (s.size() > 2) fail("kernel.shift", "at most two components");
        for (std::size_t a = 0; a < s.size(); ++a) k.shift[a] = s[a];
    }
    return k;
}

CoefficientSpec parse_coefficient(const json& j) {
    const std::string w = "coefficient";
    reject_unknown(j, w, {"form", "amplitude", "frequency", "offset", "slope", "value", "modes", "file",
                          "flatten_epsilon"});
    CoefficientSpec c;
    c.file = get_string(j, w, "file", "");
    c.form = get_string(j, w, "form", c.file.empty() ? c.form : "file");
    static const std::set<std::string> forms{"constant", "sine", "cosine", "linear", "random_fourier", "file"};
    if (!forms.count(c.form)) fail("coefficient.form", "unknown form '" + c.form + "'");
    if (c.form == "file" && c.file.empty()) fail("coefficient.file", "required for form 'file'");
    c.amplitude = get_number(j, w, "amplitude", c.amplitude);
    c.frequency = get_number(j, w, "frequency", c.frequency);
    c.offset = get_number(j, w, "offset", c.offset);
    c.slope = get_number(j, w, "slope", c.slope);
    c.value = get_number(j, w, "value", c.value);
    c.modes = get_int(j, w, "modes", c.modes, 1);
    c.flatten_epsilon = get_number(j, w, "flatten_epsilon", 0.0);
    if (c.flatten_epsilon < 0.0) fail("coefficient.flatten_epsilon", "must be nonnegative");
    return c;
}

SweepSpec parse_sweep(const json& j) {
    const std::string w = "sweep";
    reject_unknown(j, w, {"nu", "delta", "assert_trends", "divergence_threshold", "endpoint_tol", "small_delta_tol",
                          "nodes_per_delta", "dense_budget", "cross_check"});
    SweepSpec s;
    if (j.contains("nu")) s.nu = sweep_list(j.at("nu"), "sweep.nu");
    if (j.contains("delta")) s.delta = sweep_list(j.at("delta"), "sweep.delta");
    s.assert_trends = get_bool(j, w, "assert_trends", s.assert_trends);
    s.divergence_threshold = get_positive(j, w, "divergence_threshold", s.divergence_threshold);
    s.endpoint_tol = get_positive(j, w, "endpoint_tol", s.endpoint_tol);
    s.small_delta_tol = get_positive(j, w, "small_delta_tol", s.small_delta_tol);
    s.nodes_per_delta = get_int(j, w, "nodes_per_delta", s.nodes_per_delta, 1);
    s.dense_budget = get_int(j, w, "dense_budget", s.dense_budget, 2);
    s.cross_check = get_bool(j, w, "cross_check", s.cross_check);
    return s;
}

EvolveSpec parse_evolve(const json& j) {
    const std::string w = "evolve";
    reject_unknown(j, w, {"T", "dt", "stride", "initial", "format"});
    EvolveSpec e;
    e.T = get_positive(j, w, "T", e.T);
    e.dt = get_number(j, w, "dt", e.dt);
    if (e.dt < 0.0) fail("evolve.dt", "must be nonnegative (0 selects the default)");
    e.stride = get_int(j, w, "stride", e.stride, 1);
    e.initial = get_string(j, w, "initial", e.initial);
    if (e.initial != "constant" && e.initial != "bump" && e.initial != "random")
        fail("evolve.initial", "expected constant, bump or random");
    e.format = get_string(j, w, "format", e.format);
    convert("evolve.format", [&] { return trajectory_format_from_string(e.format); });
    return e;
}

CompeteSpec parse_compete(const json& j) {
    const std::string w = "compete";
    reject_unknown(j, w, {"growth", "tol", "t_cap", "u0", "v0", "stride", "format"});
    CompeteSpec c;
    const std::string g = get_string(j, w, "growth", to_string(c.growth));
    c.growth = convert("compete.growth", [&] { return growth_form_from_string(g); });
    c.tol = get_positive(j, w, "tol", c.tol);
    c.t_cap = get_positive(j, w, "t_cap", c.t_cap);
    c.u0 = get_positive(j, w, "u0", c.u0);
    c.v0 = get_positive(j, w, "v0", c.v0);
    c.stride = get_int(j, w, "stride", c.stride, 1);
    c.format = get_string(j, w, "format", c.format);
    convert("compete.format", [&] { return trajectory_format_from_string(c.format); });
    return c;
}

ToleranceSpec parse_tolerances(const json& j) {
    const std::string w = "tolerances";
    reject_unknown(j, w, {"eps_gap_rel", "positivity_ratio", "growth_tol", "alpha_tol", "power_rel_tol"});
    ToleranceSpec t;
    t.eps_gap_rel = get_positive(j, w, "eps_gap_rel", t.eps_gap_rel);
    t.positivity_ratio = get_positive(j, w, "positivity_ratio", t.positivity_ratio);
    t.growth_tol = get_positive(j, w, "growth_tol", t.growth_tol);
    t.alpha_tol = get_positive(j, w, "alpha_tol", t.alpha_tol);
    t.power_rel_tol = get_positive(j, w, "power_rel_tol", t.power_rel_tol);
    return t;
}

}  // namespace

ScenarioConfig parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    reject_unknown(root, "", {"experiment", "grid", "kernel", "nu", "coefficient", "routes", "existence",
                              "refinement_levels", "sweep", "evolve", "compete", "tolerances", "output", "seed",
                              "workers", "verify"});
    ScenarioConfig c;
    if (root.contains("experiment")) c.experiment = experiment_from_string(get_string(root, "", "experiment", ""));
    if (root.contains("grid")) c.grid = parse_grid(root.at("grid"));
    if (root.contains("kernel")) c.kernel = parse_kernel(root.at("kernel"));
    if (root.contains("nu")) {
        c.nu = number_list(root.at("nu"), "nu");
        if (c.nu.empty()) fail("nu", "must not be empty");
        for (double v : c.nu)
            if (!(v > 0.0)) fail("nu", "must be positive");
    }
    if (root.contains("coefficient")) c.coefficient = parse_coefficient(root.at("coefficient"));
    if (root.contains("routes")) {
        const json& r = root.at("routes");
        if (!r.is_array() || r.empty()) fail("routes", "expected a non-empty list of route names");
        c.routes.clear();
        static const std::set<std::string> known{"dense_eig", "rayleigh", "growth_rate", "radius_root"};
        for (const auto& x : r) {
            if (!x.is_string() || !known.count(x.get<std::string>()))
                fail("routes", "entries must be among dense_eig, rayleigh, growth_rate, radius_root");
            c.routes.push_back(x.get<std::string>());
        }
    }
    c.existence = get_bool(root, "", "existence", c.existence);
    c.refinement_levels = get_int(root, "", "refinement_levels", c.refinement_levels, 2);
    if (root.contains("sweep")) c.sweep = parse_sweep(root.at("sweep"));
    if (root.contains("evolve")) c.evolve = parse_evolve(root.at("evolve"));
    if (root.contains("compete")) c.compete = parse_compete(root.at("compete"));
    if (root.contains("tolerances")) c.tolerances = parse_tolerances(root.at("tolerances"));
    if (root.contains("output")) {
        const json& o = root.at("output");
        reject_unknown(o, "output", {"dir", "plots", "dump_matrix"});
        c.output.dir = get_string(o, "output", "dir", c.output.dir);
        c.output.plots = get_bool(o, "output", "plots", c.output.plots);
        c.output.dump_matrix = get_bool(o, "output", "dump_matrix", c.output.dump_matrix);
    }
    if (root.contains("seed")) {
        if (!root.at("seed").is_number_unsigned()) fail("seed", "expected a nonnegative integer");
        c.seed = root.at("seed").get<std::uint64_t>();
    }
    c.workers = get_int(root, "", "workers", c.workers, 1);
    if (root.contains("verify")) {
        const json& v = root.at("verify");
        reject_unknown(v, "verify", {"skip", "tolerance_scale"});
        if (v.contains("skip")) {
            if (!v.at("skip").is_array()) fail("verify.skip", "expected a list of strings");
            for (const auto& x : v.at("skip")) {
                if (!x.is_string()) fail("verify.skip", "expected a list of strings");
                c.verify.skip.push_back(x.get<std::string>());
            }
        }
        c.verify.tolerance_scale = get_number(v, "verify", "tolerance_scale", 1.0);
        if (c.verify.tolerance_scale < 0.0) fail("verify.tolerance_scale", "must be nonnegative");
    }
    // Cross-field checks.
    if (c.kernel.shift[1] != 0.0 && c.grid.lower.size() == 1) fail("kernel.shift", "second component in 1D");
    convert("kernel", [&] { return make_kernel(c.kernel, static_cast<int>(c.grid.lower.size())); });
    return c;
}

ScenarioConfig load_config(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot open config '" + file + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

BoxDomain make_domain(const GridSpec& g) { return BoxDomain(g.lower, g.upper); }

Grid make_grid(const GridSpec& g) { return Grid::build(make_domain(g), g.nodes, g.bc); }

Kernel make_kernel(const KernelSpec& k, int dim) { return Kernel(k.profile, dim, k.delta, k.shift); }

DispersalKernel make_dispersal_kernel(const Kernel& k, const Grid& grid) {
    if (grid.bc() == Boundary::Periodic) return periodize_kernel(k, grid.periods());
    return k;
}

CoefficientSource make_coefficient_source(const CoefficientSpec& c, const BoxDomain& domain, std::uint64_t seed,
                                          const Kernel& kernel, double nu) {
    CoefficientSource base;
    if (c.form == "file") {
        const std::string file = c.file;
        base = [file](const Grid& g) {
            return CoefficientField(g, load_node_values(file, g.size()), "file");
        };
    } else {
        AnalyticForm form;
        if (c.form == "constant") form = forms::constant(c.value);
        else if (c.form == "sine") form = forms::sine(domain, c.amplitude, c.frequency, c.offset);
        else if (c.form == "cosine") form = forms::cosine(domain, c.amplitude, c.frequency, c.offset);
        else if (c.form == "linear") form = forms::linear(domain, c.slope, c.offset);
        else {
            Rng rng(seed);
            form = forms::random_fourier(domain, rng, c.modes, c.amplitude, c.offset);
        }
        base = source_of(form);
    }
    if (c.flatten_epsilon <= 0.0) return base;
    const double eps = c.flatten_epsilon;
    return [base, eps, kernel, nu](const Grid& g) {
        return mollify_flatten(base(g), eps, g, make_dispersal_kernel(kernel, g), nu).field;
    };
}

}  // namespace nlds
