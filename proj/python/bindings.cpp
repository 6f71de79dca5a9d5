#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "mems/diagnostics.hpp"
#include "mems/duhamel.hpp"
#include "mems/error.hpp"
#include "mems/runner/config.hpp"
#include "mems/runner/experiments.hpp"
#include "mems/runner/record.hpp"

namespace py = pybind11;
using namespace mems;

namespace {

DomainSpec make_spec(const std::string& kind, double extent, int dim, int resolution) {
  if (kind == "interval") return DomainSpec::interval(extent, resolution);
  if (kind == "ball") return DomainSpec::ball(extent, dim, resolution);
  throw Error(ErrorKind::InvalidSpec, "kind must be 'interval' or 'ball'");
}

}  // namespace

PYBIND11_MODULE(_mems, m) {
  m.doc() = "Nonlocal MEMS model: steady states, thresholds and evolution";

  py::register_exception<Error>(m, "MemsError");

  py::class_<Domain>(m, "Domain")
      .def(py::init([](const std::string& kind, double extent, int dim, int resolution) {
             return build_domain(make_spec(kind, extent, dim, resolution));
           }),
           py::arg("kind") = "interval", py::arg("extent") = 1.0, py::arg("dim") = 1, py::arg("resolution") = 128)
      .def_property_readonly("nodes", [](const Domain& d) { return std::vector<double>(d.nodes().begin(), d.nodes().end()); })
      .def_property_readonly("weights", [](const Domain& d) { return std::vector<double>(d.weights().begin(), d.weights().end()); })
      .def_property_readonly("volume", &Domain::volume)
      .def_property_readonly("spacing", &Domain::spacing)
      .def_property_readonly("dim", &Domain::dim)
      .def("integrate", [](const Domain& d, const std::vector<double>& f) {
        DiscreteField g = d.zeros();
        if (f.size() != g.size()) throw Error(ErrorKind::DomainMismatch, "field length differs from node count");
        g.values = f;
        return integrate(d, g);
      });

  m.def("principal_eigenpair", [](const Domain& d) {
    const EigenPair e = principal_eigenpair(d);
    return py::make_tuple(e.mu1, e.phi1.values);
  });

  m.def("pull_in_voltage", [](const Domain& d) {
    const SteadyBranch br = pull_in_voltage(d);
    py::dict out;
    out["lambda_star"] = br.lambda_star;
    out["fold_lower"] = br.fold_lower;
    out["fold_upper"] = br.fold_upper;
    out["mu1"] = br.mu1;
    out["w_star"] = br.w_star.values;
    return out;
  });

  m.def("minimal_solution", [](const Domain& d, double lambda) { return minimal_solution(d, lambda).values; },
        py::arg("domain"), py::arg("lam"));

  m.def("solve_nonlocal_steady", [](const Domain& d, double chi, double lambda) {
    const NonlocalSolution s = solve_nonlocal_steady(d, chi, lambda);
    return py::make_tuple(s.mu_root, s.v.values);
  }, py::arg("domain"), py::arg("chi"), py::arg("lam"));

  m.def("thresholds", [](const Domain& d, double chi) {
    const ThresholdReport t = thresholds(d, chi);
    py::dict out;
    out["lambda_star_local"] = t.lambda_star_local;
    out["lambda_star_N"] = t.lambda_star_N;
    out["lambda_N_upper"] = t.lambda_N_upper ? py::cast(*t.lambda_N_upper) : py::none();
    out["threshold_1d"] = t.threshold_1d ? py::cast(*t.threshold_1d) : py::none();
    return out;
  });

  m.def("picard_existence_horizon", &picard_existence_horizon, py::arg("a"), py::arg("lam"));

  m.def("evolve", [](const Domain& d, double chi, double lambda, std::vector<double> u0, double dt, double t_max) {
    DiscreteField f = d.zeros();
    if (!u0.empty()) {
      if (u0.size() != f.size()) throw Error(ErrorKind::DomainMismatch, "field length differs from node count");
      f.values = std::move(u0);
    }
    EvolveOptions opts;
    opts.dt_init = dt;
    opts.t_max = t_max;
    const EvolutionResult r = evolve(d, chi, lambda, f, opts);
    py::dict out;
    out["status"] = std::string(to_string(r.status));
    out["times"] = r.times;
    out["sup_u"] = r.sup_u;
    out["u_final"] = r.snapshots.back().u.values;
    out["quench_time"] = r.quench_estimate;
    return out;
  }, py::arg("domain"), py::arg("chi"), py::arg("lam"), py::arg("u0") = std::vector<double>{},
     py::arg("dt") = 1e-3, py::arg("t_max") = 1.0);

  m.def("experiments", [] {
    std::vector<std::string> names;
    for (const auto& [name, help] : runner::experiment_catalog()) names.push_back(name);
    return names;
  });

  m.def("run_experiment", [](const std::string& name, const std::string& config_path,
                             const std::vector<std::string>& overrides, const std::filesystem::path& out_dir) {
    const auto cfg = runner::load_config(name, config_path, overrides);
    return runner::to_json_text(runner::run_experiment(cfg, out_dir));
  }, py::arg("experiment"), py::arg("config") = "", py::arg("overrides") = std::vector<std::string>{},
     py::arg("out_dir") = std::filesystem::path("."));
}
