#include "mems/runner/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "mems/error.hpp"
#include "mems/spectral.hpp"
#include "mems/steady_local.hpp"

namespace mems::runner {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorKind::ConfigError, msg); }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &pos);
  } catch (const std::exception&) {
    fail(key + ": expected a number, got '" + v + "'");
  }
  if (pos != v.size() || !std::isfinite(x)) fail(key + ": expected a number, got '" + v + "'");
  return x;
}

long to_int(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  long x = 0;
  try {
    x = std::stol(v, &pos);
  } catch (const std::exception&) {
    fail(key + ": expected an integer, got '" + v + "'");
  }
  if (pos != v.size()) fail(key + ": expected an integer, got '" + v + "'");
  return x;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  fail(key + ": expected true or false, got '" + v + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
  if (out.empty()) fail(key + ": expected a comma-separated list");
  return out;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt_list(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + fmt(xs[i]);
  return out;
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"domain.kind",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         if (v == "interval") {
           c.domain.kind = DomainKind::Interval;
           c.domain.dim = 1;
         } else if (v == "ball") {
           c.domain.kind = DomainKind::Ball;
           if (c.domain.dim < 2) c.domain.dim = 2;
         } else {
           fail(k + ": expected interval or ball");
         }
       }},
      {"domain.extent", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.domain.extent = to_double(k, v); }},
      {"domain.dim", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.domain.dim = static_cast<int>(to_int(k, v)); }},
      {"domain.resolution", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.domain.resolution = static_cast<int>(to_int(k, v)); }},
      {"model.chi", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.chi = to_double(k, v); }},
      {"model.lambda", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.lambda = to_double(k, v); }},
      {"model.lambdas", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.lambdas = to_list(k, v); }},
      {"initial.kind",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         if (v == "zero") c.initial.kind = InitialKind::Zero;
         else if (v == "eigenfunction") c.initial.kind = InitialKind::Eigenfunction;
         else if (v == "steady") c.initial.kind = InitialKind::Steady;
         else if (v == "file") c.initial.kind = InitialKind::File;
         else fail(k + ": expected zero, eigenfunction, steady or file");
       }},
      {"initial.scale", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.initial.scale = to_double(k, v); }},
      {"initial.mu", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.initial.mu = to_double(k, v); }},
      {"initial.path", [](ExperimentConfig& c, const std::string&, const std::string& v) { c.initial.path = v; }},
      {"evolve.dt_init", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.evolve.dt_init = to_double(k, v); }},
      {"evolve.t_max", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.evolve.t_max = to_double(k, v); }},
      {"evolve.quench_tol", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.evolve.quench_tol = to_double(k, v); }},
      {"evolve.steady_tol", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.evolve.steady_tol = to_double(k, v); }},
      {"evolve.steady_window", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.evolve.steady_window = static_cast<int>(to_int(k, v)); }},
      {"evolve.sample_stride", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.evolve.sample_stride = static_cast<int>(to_int(k, v)); }},
      {"evolve.stop_on_steady", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.evolve.stop_on_steady = to_bool(k, v); }},
      {"evolve.smooth_initial_data", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.evolve.smooth_initial_data = to_bool(k, v); }},
      {"picard.iterations", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.picard_iterations = static_cast<int>(to_int(k, v)); }},
      {"picard.time_steps", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.picard_time_steps = static_cast<int>(to_int(k, v)); }},
      {"output.plots", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.plots = to_bool(k, v); }},
      {"run.seed", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.seed = static_cast<std::uint64_t>(to_int(k, v)); }},
  };
  return table;
}

void validate(const ExperimentConfig& c) {
  if (!(c.domain.extent > 0.0)) fail("domain.extent must be > 0");
  if (c.domain.resolution < 16) fail("domain.resolution must be >= 16");
  if (c.domain.kind == DomainKind::Interval && c.domain.dim != 1) fail("domain.dim must be 1 for an interval");
  if (c.domain.kind == DomainKind::Ball && c.domain.dim < 1) fail("domain.dim must be >= 1");
  if (!(c.chi >= 0.0)) fail("model.chi must be >= 0");
  if (!(c.lambda >= 0.0)) fail("model.lambda must be >= 0");
  for (double l : c.lambdas)
    if (!(l >= 0.0)) fail("model.lambdas must be >= 0");
  if (!std::is_sorted(c.lambdas.begin(), c.lambdas.end()) ||
      std::adjacent_find(c.lambdas.begin(), c.lambdas.end()) != c.lambdas.end())
    fail("model.lambdas must be strictly increasing");
  if (!(c.evolve.dt_init > 0.0)) fail("evolve.dt_init must be > 0");
  if (!(c.evolve.t_max > 0.0)) fail("evolve.t_max must be > 0");
  if (!(c.evolve.quench_tol > 0.0) || !(c.evolve.quench_tol < 0.5)) fail("evolve.quench_tol must lie in (0, 0.5)");
  if (!(c.evolve.steady_tol > 0.0)) fail("evolve.steady_tol must be > 0");
  if (c.evolve.steady_window < 1) fail("evolve.steady_window must be >= 1");
  if (c.evolve.sample_stride < 1) fail("evolve.sample_stride must be >= 1");
  if (c.picard_iterations < 1) fail("picard.iterations must be >= 1");
  if (c.picard_time_steps < 1) fail("picard.time_steps must be >= 1");
  if (c.initial.kind == InitialKind::Eigenfunction && !(c.initial.scale >= 0.0 && c.initial.scale < 1.0))
    fail("initial.scale must lie in [0, 1)");
  if (c.initial.kind == InitialKind::Steady && !(c.initial.mu >= 0.0)) fail("initial.mu must be >= 0");
  if (c.initial.kind == InitialKind::File && c.initial.path.empty()) fail("initial.path is required for kind = file");
}

}  // namespace

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = {
      {"domain.kind", "interval", "interval (-b, b) or ball B_R"},
      {"domain.extent", "1", "half width b or radius R"},
      {"domain.dim", "1", "space dimension (1 for the interval)"},
      {"domain.resolution", "128", "number of interior nodes M"},
      {"model.chi", "1", "capacitance coupling chi >= 0"},
      {"model.lambda", "0.5", "applied voltage parameter lambda >= 0"},
      {"model.lambdas", "5,10,20,40", "increasing lambda list for quench-sweep"},
      {"initial.kind", "zero", "zero | eigenfunction | steady | file"},
      {"initial.scale", "0.5", "eigenfunction: u0 = scale phi1 / max phi1"},
      {"initial.mu", "0.1", "steady: u0 = minimal steady solution at mu"},
      {"initial.path", "", "file: nodal values, whitespace separated"},
      {"evolve.dt_init", "0.001", "initial and largest time step"},
      {"evolve.t_max", "1", "time horizon"},
      {"evolve.quench_tol", "0.001", "quench once sup u >= 1 - quench_tol"},
      {"evolve.steady_tol", "1e-08", "steady once max |u_t| <= steady_tol"},
      {"evolve.steady_window", "10", "consecutive steady samples required"},
      {"evolve.sample_stride", "1", "record every k-th step"},
      {"evolve.stop_on_steady", "true", "stop once steadiness is detected"},
      {"evolve.smooth_initial_data", "false", "one implicit diffusion step of size h^2 first"},
      {"picard.iterations", "30", "maximum Picard iterates"},
      {"picard.time_steps", "200", "time steps on the existence horizon"},
      {"output.plots", "true", "write SVG plots"},
      {"run.seed", "0", "reserved; all methods are deterministic"},
  };
  return keys;
}

const std::vector<std::pair<std::string, std::string>>& experiment_catalog() {
  static const std::vector<std::pair<std::string, std::string>> list = {
      {"steady-branch", "minimal-solution branch and pull-in voltage of the local problem"},
      {"nonlocal-steady", "nonlocal steady state via the scalar root of h(mu) = lambda"},
      {"thresholds", "existence and nonexistence thresholds of the nonlocal problem"},
      {"evolve", "time evolution of the nonlocal parabolic problem"},
      {"picard", "Picard iterates of the Duhamel formula against the time stepper"},
      {"energy", "energy identity and its capped form along a run"},
      {"quench-sweep", "quenching times over a lambda sweep"},
      {"verify-all", "the full acceptance suite, one verdict per criterion"},
  };
  return list;
}

bool is_experiment(const std::string& name) {
  const auto& list = experiment_catalog();
  return std::any_of(list.begin(), list.end(), [&](const auto& e) { return e.first == name; });
}

ExperimentConfig load_config(const std::string& experiment, const std::string& path,
                             const std::vector<std::string>& overrides) {
  if (!is_experiment(experiment)) fail("unknown experiment '" + experiment + "'");
  // Ordered so that domain.kind is applied before domain.dim.
  std::vector<std::pair<std::string, std::string>> entries;
  if (!path.empty()) {
    boost::property_tree::ptree tree;
    try {
      boost::property_tree::ini_parser::read_ini(path, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
      fail("cannot read config: " + std::string(e.what()));
    }
    for (const auto& [section, body] : tree) {
      if (body.empty()) fail("key '" + section + "' must live in a section");
      for (const auto& [key, value] : body) entries.emplace_back(section + "." + key, trim(value.data()));
    }
  }
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) fail("override '" + o + "' is not key=value");
    entries.emplace_back(trim(o.substr(0, eq)), trim(o.substr(eq + 1)));
  }
  std::stable_partition(entries.begin(), entries.end(), [](const auto& e) { return e.first == "domain.kind"; });

  ExperimentConfig cfg;
  cfg.experiment = experiment;
  const auto& table = setters();
  for (const auto& [key, value] : entries) {
    const auto it = table.find(key);
    if (it == table.end()) fail("unknown config key '" + key + "'");
    it->second(cfg, key, value);
  }
  validate(cfg);
  return cfg;
}

std::map<std::string, std::string> echo(const ExperimentConfig& c) {
  std::map<std::string, std::string> m;
  m["experiment"] = c.experiment;
  m["domain.kind"] = c.domain.kind == DomainKind::Interval ? "interval" : "ball";
  m["domain.extent"] = fmt(c.domain.extent);
  m["domain.dim"] = std::to_string(c.domain.dim);
  m["domain.resolution"] = std::to_string(c.domain.resolution);
  m["model.chi"] = fmt(c.chi);
  m["model.lambda"] = fmt(c.lambda);
  m["model.lambdas"] = fmt_list(c.lambdas);
  m["initial.kind"] = describe(c.initial);
  m["evolve.dt_init"] = fmt(c.evolve.dt_init);
  m["evolve.t_max"] = fmt(c.evolve.t_max);
  m["evolve.quench_tol"] = fmt(c.evolve.quench_tol);
  m["evolve.steady_tol"] = fmt(c.evolve.steady_tol);
  m["evolve.steady_window"] = std::to_string(c.evolve.steady_window);
  m["evolve.sample_stride"] = std::to_string(c.evolve.sample_stride);
  m["evolve.stop_on_steady"] = c.evolve.stop_on_steady ? "true" : "false";
  m["evolve.smooth_initial_data"] = c.evolve.smooth_initial_data ? "true" : "false";
  m["picard.iterations"] = std::to_string(c.picard_iterations);
  m["picard.time_steps"] = std::to_string(c.picard_time_steps);
  m["output.plots"] = c.plots ? "true" : "false";
  m["run.seed"] = std::to_string(c.seed);
  return m;
}

std::string describe(const InitialSpec& s) {
  switch (s.kind) {
    case InitialKind::Zero: return "zero";
    case InitialKind::Eigenfunction: return "eigenfunction(" + fmt(s.scale) + ")";
    case InitialKind::Steady: return "steady(" + fmt(s.mu) + ")";
    case InitialKind::File: return "file(" + s.path + ")";
  }
  return "unknown";
}

DiscreteField initial_field(const Domain& d, const InitialSpec& s) {
  switch (s.kind) {
    case InitialKind::Zero:
      return d.zeros();
    case InitialKind::Eigenfunction: {
      DiscreteField u = principal_eigenpair(d).phi1;
      const double m = max_value(u);
      for (double& v : u.values) v *= s.scale / m;
      return u;
    }
    case InitialKind::Steady:
      return s.mu > 0.0 ? minimal_solution(d, s.mu) : d.zeros();
    case InitialKind::File: {
      std::ifstream in(s.path);
      if (!in) throw Error(ErrorKind::IoError, "cannot open " + s.path);
      std::vector<double> values{std::istream_iterator<double>(in), std::istream_iterator<double>()};
      if (!in.eof()) throw Error(ErrorKind::ConfigError, s.path + ": malformed number");
      if (values.size() != d.size())
        throw Error(ErrorKind::ConfigError, s.path + ": expected " + std::to_string(d.size()) + " values");
      DiscreteField u = d.zeros();
      u.values = std::move(values);
      return u;
    }
  }
  return d.zeros();
}

}  // namespace mems::runner
