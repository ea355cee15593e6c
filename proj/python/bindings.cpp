#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "whitham/config.hpp"
#include "whitham/continuation.hpp"
#include "whitham/evolution.hpp"
#include "whitham/run.hpp"
#include "whitham/stability.hpp"
#include "whitham/transforms.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace whitham;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) { return py::array_t<double>(v.size(), v.data()); }

HeightMeasure parse_measure(const std::string& s) {
  if (s == "primary") return HeightMeasure::Primary;
  if (s == "companion") return HeightMeasure::Companion;
  throw ConfigError("height measure must be 'primary' or 'companion'");
}

template <class F>
std::vector<double> column(const Branch& b, F f) {
  std::vector<double> out;
  out.reserve(b.size());
  for (const auto& s : b.summaries) out.push_back(f(s));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Periodic traveling waves of bidirectional Whitham models";

  static py::exception<Error> base(m, "WhithamError");
  static py::exception<Error> validation(m, "ValidationError", base.ptr());
  static py::exception<Error> numerical(m, "NumericalError", base.ptr());
  static py::exception<Error> io(m, "WhithamIOError", base.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const std::string msg = e.code() + ": " + e.what();
      switch (e.kind()) {
        case ErrorKind::Validation: py::set_error(validation, msg.c_str()); break;
        case ErrorKind::Numerical: py::set_error(numerical, msg.c_str()); break;
        case ErrorKind::Io: py::set_error(io, msg.c_str()); break;
      }
    }
  });

  m.def("khat", &khat, "xi"_a, "tanh(xi)/xi, 1 at 0");
  m.def("c_kappa", [](double kappa) { return linear_speed(kappa); }, "kappa"_a, "Bifurcation speed sqrt(khat(kappa))");
  m.def(
      "positive_branch_point",
      [](double kappa, int n0) {
        const auto bp = solve_positive_branch_point(kappa, n0);
        return py::make_tuple(bp.c_star, bp.phi_star);
      },
      "kappa"_a = 1.0, "n0"_a = 1);

  py::class_<ContinuationPoint>(m, "Point")
      .def(py::init([](double c, std::vector<double> values) { return ContinuationPoint{c, std::move(values), 0.0}; }),
           "c"_a, "values"_a)
      .def_readonly("c", &ContinuationPoint::c)
      .def_property_readonly("values", [](const ContinuationPoint& p) { return to_array(p.values); })
      .def_readonly("residual", &ContinuationPoint::residual_norm)
      .def("__repr__", [](const ContinuationPoint& p) {
        std::ostringstream s;
        s << "Point(c=" << p.c << ", n_points=" << p.values.size() << ")";
        return s.str();
      });

  py::class_<Branch>(m, "Branch")
      .def_property_readonly("model", [](const Branch& b) { return std::string(to_string(b.model->id())); })
      .def_readonly("kappa", &Branch::kappa)
      .def_readonly("n_points", &Branch::n_points)
      .def_property_readonly("stop_reason", [](const Branch& b) { return std::string(to_string(b.stop_reason)); })
      .def_readonly("stop_detail", &Branch::stop_detail)
      .def_readonly("folds", &Branch::folds)
      .def_readonly("points", &Branch::points)
      .def_property_readonly("c", [](const Branch& b) { return to_array(column(b, [](auto& s) { return s.c; })); })
      .def_property_readonly("waveheight",
                             [](const Branch& b) { return to_array(column(b, [](auto& s) { return s.waveheight; })); })
      .def_property_readonly("companion_height", [](const Branch& b) {
        return to_array(column(b, [](auto& s) { return s.companion_height; }));
      })
      .def_property_readonly("max_value",
                             [](const Branch& b) { return to_array(column(b, [](auto& s) { return s.max_value; })); })
      .def_property_readonly("min_value",
                             [](const Branch& b) { return to_array(column(b, [](auto& s) { return s.min_value; })); })
      .def_property_readonly("tangent_dc", [](const Branch& b) { return to_array(b.tangent_dc); })
      .def(
          "sample",
          [](const Branch& b, std::vector<double> targets, const std::string& measure) {
            return sample_branch(b, targets, parse_measure(measure));
          },
          "targets"_a, "measure"_a = "primary")
      .def("__len__", &Branch::size);

  m.def(
      "continue_branch",
      [](const std::string& model, double kappa, int n_points, double h, double eps0, int max_steps,
         std::optional<double> max_height, int n0) {
        ContinuationConfig c;
        c.kappa = kappa;
        c.n_points = n_points;
        c.h = h;
        c.eps0 = eps0;
        c.max_steps = max_steps;
        c.max_height = max_height;
        auto ptr = make_model(parse_model_id(model), n0);
        py::gil_scoped_release release;
        return continue_branch(ptr, c);
      },
      "model"_a, "kappa"_a = 1.0, "n_points"_a = 256, "h"_a = 1e-3, "eps0"_a = 1e-5, "max_steps"_a = 200000,
      "max_height"_a = py::none(), "n0"_a = 1);

  m.def(
      "refine",
      [](const std::string& model, double kappa, const ContinuationPoint& p, int n_points, double target,
         const std::string& measure, int n0) {
        return refine_resolution(make_model(parse_model_id(model), n0), kappa, p, n_points, target,
                                 parse_measure(measure));
      },
      "model"_a, "kappa"_a, "point"_a, "n_points"_a, "target"_a, "measure"_a = "primary", "n0"_a = 1);

  m.def(
      "spectrum",
      [](const std::string& model, double kappa, const ContinuationPoint& p, int n_modes, double dmu, double mu_max,
         double tol_grow, double r_origin, double mu_mod, double kernel_radius, int workers, int n0) {
        SweepOptions o;
        o.dmu = dmu;
        o.mu_max = mu_max;
        o.workers = workers;
        o.thresholds = {tol_grow, r_origin, mu_mod, kernel_radius};
        auto ptr = make_model(parse_model_id(model), n0);
        SpectrumSweep s;
        {
          py::gil_scoped_release release;
          s = sweep(ptr, kappa, p, n_modes, o);
        }
        std::vector<double> mu, growth;
        std::vector<std::vector<cplx>> eig;
        for (const auto& sl : s.slices) {
          mu.push_back(sl.mu);
          growth.push_back(sl.max_growth);
          eig.push_back(sl.eigenvalues);
        }
        py::dict flags("modulational"_a = s.flags.modulational, "high_frequency"_a = s.flags.high_frequency,
                       "coperiodic"_a = s.flags.coperiodic);
        return py::dict("mu"_a = to_array(mu), "max_growth"_a = to_array(growth), "eigenvalues"_a = eig,
                        "flags"_a = flags, "full_mesh"_a = s.full_mesh);
      },
      "model"_a, "kappa"_a, "point"_a, "n_modes"_a = 50, "dmu"_a = 1.0 / 500.0, "mu_max"_a = 1.0,
      "tol_grow"_a = 1e-6, "r_origin"_a = 0.05, "mu_mod"_a = 0.1, "kernel_radius"_a = 1e-3, "workers"_a = 1,
      "n0"_a = 1);

  m.def(
      "evolve",
      [](const std::string& model, double kappa, const ContinuationPoint& p, double t_final, double dt, int substeps,
         int snapshot_every, double tail_fraction, int n0) {
        const auto state = state_from_point(make_model(parse_model_id(model), n0), kappa, p);
        auto scheme = SplittingScheme::yoshida6(dt);
        scheme.nonlinear_substeps = substeps;
        EvolutionOptions o;
        o.snapshot_every = snapshot_every;
        o.tail_fraction = tail_fraction;
        o.wave_speed = p.c;
        EvolutionResult r;
        {
          py::gil_scoped_release release;
          r = evolve(state, t_final, scheme, o);
        }
        std::vector<double> t, resid, maxn, tail;
        for (const auto& s : r.snapshots) {
          t.push_back(s.t);
          resid.push_back(s.l2_residual);
          maxn.push_back(s.max_norm);
          tail.push_back(s.tail_energy);
        }
        return py::dict("t"_a = to_array(t), "l2_residual"_a = to_array(resid), "max_norm"_a = to_array(maxn),
                        "tail_energy"_a = to_array(tail), "u"_a = to_array(r.final_state.u),
                        "eta"_a = to_array(r.final_state.eta), "steps"_a = r.steps, "blew_up"_a = r.blew_up,
                        "blowup_time"_a = r.blowup_time);
      },
      "model"_a, "kappa"_a, "point"_a, "t_final"_a, "dt"_a = 1e-3, "substeps"_a = 1, "snapshot_every"_a = 100,
      "tail_fraction"_a = 0.25, "n0"_a = 1);

  m.def(
      "tail_energy",
      [](std::vector<double> field, double fraction) { return tail_energy(field, fraction); }, "field"_a,
      "fraction"_a = 0.25);

  m.def(
      "run",
      [](const std::string& command, const std::map<std::string, std::string>& settings) {
        std::vector<std::pair<std::string, std::string>> flags(settings.begin(), settings.end());
        const auto config = resolve_config(parse_command(command), {}, flags);
        std::ostringstream log;
        RunResult r;
        {
          py::gil_scoped_release release;
          r = run(config, log);
        }
        return py::dict("exit_code"_a = r.exit_code, "dir"_a = r.dir.string(), "log"_a = log.str(),
                        "error"_a = r.error_json);
      },
      "command"_a, "settings"_a = std::map<std::string, std::string>{},
      "Run a CLI command with key = value settings; returns exit code, run directory and log.");
}
