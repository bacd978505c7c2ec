#include <sstream>

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nlds/competition.hpp"
#include "nlds/config.hpp"
#include "nlds/errors.hpp"
#include "nlds/evolution.hpp"
#include "nlds/experiments.hpp"
#include "nlds/operators.hpp"
#include "nlds/spectral.hpp"
#include "nlds/verify.hpp"

namespace py = pybind11;
using namespace nlds;

namespace {

Grid make_box_grid(std::vector<int> nodes, const std::string& bc, std::vector<double> lower, std::vector<double> upper) {
    if (lower.empty()) lower.assign(nodes.size(), 0.0);
    if (upper.empty()) upper.assign(nodes.size(), 1.0);
    return Grid::build(BoxDomain(lower, upper), std::move(nodes), boundary_from_string(bc));
}

DispersalKernel dispersal_for(const Kernel& k, const Grid& g) { return make_dispersal_kernel(k, g); }

OperatorMatrix dispersal_operator(const Grid& g, const Kernel& k, double nu, const Eigen::VectorXd& a) {
    return assemble_dispersal(g, dispersal_for(k, g), nu, CoefficientField(g, a));
}

py::dict report_dict(const SpectralReport& r) {
    py::dict d;
    d["lambda_tilde"] = r.lambda_tilde;
    d["route"] = to_string(r.route);
    d["h_max"] = r.h_max;
    d["gap"] = r.gap;
    d["verdict"] = to_string(r.verdict);
    d["note"] = r.note;
    if (r.eigenfunction) d["eigenfunction"] = *r.eigenfunction;
    else d["eigenfunction"] = py::none();
    return d;
}

}  // namespace

PYBIND11_MODULE(_nlds, m) {
    m.doc() = "Principal spectrum points of nonlocal dispersal operators";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    py::class_<Grid>(m, "Grid")
        .def(py::init(&make_box_grid), py::arg("nodes"), py::arg("bc") = "neumann",
             py::arg("lower") = std::vector<double>{}, py::arg("upper") = std::vector<double>{})
        .def_property_readonly("size", &Grid::size)
        .def_property_readonly("dim", &Grid::dim)
        .def_property_readonly("bc", [](const Grid& g) { return to_string(g.bc()); })
        .def_property_readonly("cell_volume", &Grid::cell_volume)
        .def_property_readonly("nodes", [](const Grid& g) {
            Eigen::MatrixXd x(static_cast<Eigen::Index>(g.size()), g.dim());
            for (std::size_t j = 0; j < g.size(); ++j)
                for (int a = 0; a < g.dim(); ++a) x(static_cast<Eigen::Index>(j), a) = g.node(j)[a];
            return x;
        })
        .def("refined", &Grid::refined)
        .def("__repr__", &Grid::label);

    py::class_<Kernel>(m, "Kernel")
        .def(py::init([](const std::string& profile, int dim, double delta, std::vector<double> shift) {
                 Point s{0.0, 0.0};
                 for (std::size_t a = 0; a < shift.size() && a < 2; ++a) s[a] = shift[a];
                 return Kernel(profile_from_string(profile), dim, delta, s);
             }),
             py::arg("profile") = "triangle", py::arg("dim") = 1, py::arg("delta") = 0.5,
             py::arg("shift") = std::vector<double>{})
        .def_property_readonly("delta", &Kernel::delta)
        .def_property_readonly("symmetric", &Kernel::symmetric)
        .def("__call__", [](const Kernel& k, double z0, double z1) { return k(Point{z0, z1}); }, py::arg("z0"),
             py::arg("z1") = 0.0);

    m.def("sine", [](const Grid& g, double amplitude, double frequency, double offset) {
        return CoefficientField::sample(g, forms::sine(g.domain(), amplitude, frequency, offset)).values();
    }, py::arg("grid"), py::arg("amplitude") = 1.0, py::arg("frequency") = 1.0, py::arg("offset") = 0.0,
       "Sine coefficient sampled on the grid nodes.");

    m.def("kernel_matrix", [](const Grid& g, const Kernel& k) { return kernel_matrix(g, dispersal_for(k, g)); });
    m.def("dispersal_matrix", [](const Grid& g, const Kernel& k, double nu, const Eigen::VectorXd& a) {
        return dispersal_operator(g, k, nu, a).entries;
    });

    m.def("principal_point", [](const Grid& g, const Kernel& k, double nu, const Eigen::VectorXd& a,
                                const std::string& route) {
        const OperatorMatrix A = dispersal_operator(g, k, nu, a);
        if (route == "dense_eig") return report_dict(principal_point_eig(A));
        if (route == "growth_rate")
            return report_dict(principal_point_growth(A, 1e6, Eigen::VectorXd::Ones(A.size())));
        if (route == "rayleigh") {
            SpectralReport r;
            r.route = Route::Rayleigh;
            r.lambda_tilde = principal_point_rayleigh(A);
            r.h_max = A.h_max();
            r.gap = r.lambda_tilde - r.h_max;
            return report_dict(r);
        }
        throw ConfigError("route: expected dense_eig, rayleigh or growth_rate");
    }, py::arg("grid"), py::arg("kernel"), py::arg("nu"), py::arg("a"), py::arg("route") = "dense_eig");

    m.def("alpha_star", [](const Grid& g, const Kernel& k, double nu, const Eigen::VectorXd& a, const std::string& which) {
        return solve_r_equals_one(g, dispersal_for(k, g), nu, CoefficientField(g, a),
                                  which == "V" ? AuxOperator::V : AuxOperator::U);
    }, py::arg("grid"), py::arg("kernel"), py::arg("nu"), py::arg("a"), py::arg("which") = "U",
       "Root of r(U_alpha) = 1, or None.");

    m.def("bar_lambda3", [](const Grid& g, double nu, const Eigen::VectorXd& a) {
        return bar_lambda3(nu, CoefficientField(g, a), g);
    });

    m.def("existence_test", [](const Grid& g, const Kernel& k, double nu, double amplitude, int levels) {
        ExistenceOptions eo;
        eo.refinement_levels = levels;
        const auto ev = existence_test(g, dispersal_for(k, g), nu, source_of(forms::sine(g.domain(), amplitude)), eo);
        py::dict d;
        d["verdict"] = to_string(ev.verdict);
        d["reason"] = ev.reason;
        py::list lv;
        for (const auto& L : ev.levels) lv.append(py::make_tuple(L.nodes, L.lambda_tilde, L.gap, L.min_max_ratio));
        d["levels"] = lv;
        return d;
    }, py::arg("grid"), py::arg("kernel"), py::arg("nu"), py::arg("amplitude"), py::arg("levels") = 3,
       "Refinement study for a sine coefficient.");

    m.def("evolve", [](const Grid& g, const Kernel& k, double nu, const Eigen::VectorXd& a, const Eigen::VectorXd& u0,
                       double T, double dt) {
        EvolutionOptions eo;
        eo.dt = dt;
        eo.capture = false;
        return evolve_linear(dispersal_operator(g, k, nu, a), u0, T, eo).final_state.values;
    }, py::arg("grid"), py::arg("kernel"), py::arg("nu"), py::arg("a"), py::arg("u0"), py::arg("T"),
       py::arg("dt") = 0.0);

    m.def("steady_state", [](const Grid& g, const Kernel& k, double nu, const Eigen::VectorXd& r, const std::string& species) {
        const auto p = CompetitionProblem::make(g, k, nu, CoefficientField(g, r));
        return steady_state_single(p, species == "neumann" ? Species::Neumann : Species::Dirichlet).values;
    }, py::arg("grid"), py::arg("kernel"), py::arg("nu"), py::arg("r"), py::arg("species") = "dirichlet");

    m.def("verify", [](std::uint64_t seed, std::vector<std::string> skip, double tolerance_scale, int workers) {
        VerifyOptions o;
        o.seed = seed;
        o.skip = std::move(skip);
        o.tolerance_scale = tolerance_scale;
        o.workers = workers;
        py::gil_scoped_release release;
        return verify_suite(o).csv();
    }, py::arg("seed") = 20240611, py::arg("skip") = std::vector<std::string>{}, py::arg("tolerance_scale") = 1.0,
       py::arg("workers") = 1, "Runs the verification battery and returns its CSV.");

    m.def("run_config", [](const std::string& text, const std::string& out_dir) {
        const ScenarioConfig cfg = parse_config(text);
        std::ostringstream out, log;
        RunContext ctx;
        ctx.out_dir = out_dir;
        ctx.out = &out;
        ctx.log = &log;
        const auto res = run_scenario(cfg, ctx);
        return py::make_tuple(res.exit_code, out.str(), res.files);
    }, py::arg("config_json"), py::arg("out_dir"), "Runs a JSON scenario; returns (exit_code, stdout, files).");
}
