#include "fwgame/fw.hpp"
#include "fwgame/harness.hpp"
#include "fwgame/learners.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace fwgame;

namespace {

py::dict trace_dict(const GameTrace& tr) {
  py::dict d;
  d["xs"] = tr.xs;
  d["ys"] = tr.ys;
  d["alphas"] = tr.alphas;
  d["A_T"] = tr.A_T;
  d["x_bar"] = tr.x_bar;
  d["y_bar"] = tr.y_bar;
  d["regret_x"] = tr.regret_x;
  d["regret_y"] = tr.regret_y;
  d["gap"] = tr.gap;
  d["floor_round"] = tr.floor_round;
  return d;
}

py::list rows_list(const std::vector<FWRow>& rows) {
  py::list out;
  for (const auto& r : rows) out.append(py::make_tuple(r.t, r.point, r.value));
  return out;
}

}  // namespace

PYBIND11_MODULE(_fwgame, m) {
  m.doc() = "Weighted no-regret game dynamics and projection-free optimisers";

  py::register_exception<Error>(m, "Error");
  py::register_exception<ConfigError>(m, "ConfigError");
  py::register_exception<DegenerateGradientError>(m, "DegenerateGradientError");
  py::register_exception<UnsupportedOperation>(m, "UnsupportedOperation");
  py::register_exception<FitError>(m, "FitError");

  py::class_<ConvexSet>(m, "ConvexSet")
      .def_static("lp_ball", &ConvexSet::lp_ball, py::arg("p"), py::arg("r"), py::arg("dim"))
      .def_static("l2_ball", &ConvexSet::l2_ball, py::arg("r"), py::arg("dim"))
      .def_static("box", &ConvexSet::box, py::arg("lower"), py::arg("upper"))
      .def_property_readonly("dim", &ConvexSet::dim)
      .def_property_readonly("lam", &ConvexSet::lambda)
      .def_property_readonly("beta", &ConvexSet::beta)
      .def("gauge", &ConvexSet::gauge)
      .def("lin_opt", &ConvexSet::lin_opt)
      .def("project", &ConvexSet::project)
      .def("contains", &ConvexSet::contains, py::arg("x"), py::arg("tol") = 1e-12)
      .def("__repr__", &ConvexSet::describe);

  py::class_<FWInstance>(m, "FWInstance")
      .def_readonly("name", &FWInstance::name)
      .def_readonly("f_min", &FWInstance::f_min)
      .def_readonly("y_star", &FWInstance::y_star)
      .def_property_readonly("B", [](const FWInstance& i) { return i.constants.B; })
      .def("value", [](const FWInstance& i, const Point& y) { return i.f.value(y); })
      .def("error", &FWInstance::error);

  m.def("quadratic_instance", &quadratic_instance, py::arg("H"), py::arg("c"), py::arg("set"),
        py::arg("y0"), py::arg("name") = "quadratic");
  m.def("classic_fw", [](const FWInstance& i, int T) { return rows_list(classic_fw(i, T)); });
  m.def("fw_as_game", [](const FWInstance& i, int T) { return trace_dict(fw_as_game(i, T)); });
  m.def(
      "new_fw",
      [](const FWInstance& i, int T, std::optional<double> eta) {
        const NewFWResult r = new_fw(i, T, eta);
        py::dict d;
        d["ys"] = r.ys;
        d["y_bars"] = r.y_bars;
        d["values"] = r.values;
        d["eta"] = r.eta;
        d["lin_opt_calls"] = r.lin_opt_calls;
        return d;
      },
      py::arg("inst"), py::arg("T"), py::arg("eta") = py::none());
  m.def(
      "linear_rate_fw",
      [](const FWInstance& i, int T) {
        const LinearRateResult r = linear_rate_fw(i, T);
        py::dict d;
        d["rows"] = rows_list(r.rows);
        d["alphas"] = r.alphas;
        d["floor_round"] = r.floor_round;
        return d;
      },
      py::arg("inst"), py::arg("T"));
  m.def(
      "gauge_ftrl_step",
      [](const ConvexSet& set, const Point& L, double eta) {
        LearnerState s = LearnerState::make(LearnerKind::GaugeFTRL, set.dim(), eta);
        s.cumulative_loss = L;
        return gauge_ftrl_step(s, set, eta);
      },
      py::arg("set"), py::arg("L"), py::arg("eta") = 1.0);
  m.def("fw_equilibrium_gap", [](const FWInstance& i, const Point& x, const Point& y) {
    return equilibrium_gap(fw_game_payoff(i), x, y);
  });

  m.def(
      "fit_rate",
      [](const std::vector<std::pair<double, double>>& series, const std::string& model) {
        const RateFit f = fit_rate(series, model == "exponential" ? RateModel::Exponential
                                                                  : RateModel::PowerLaw);
        py::dict d;
        d["slope"] = f.slope_or_decay;
        d["intercept"] = f.intercept;
        d["r_squared"] = f.r_squared;
        d["points_used"] = f.points_used;
        return d;
      },
      py::arg("series"), py::arg("model") = "power");

  m.def("preset_names", &preset_names);
  m.def(
      "run_preset",
      [](const std::string& preset, std::vector<int> T, std::uint64_t seed, double eta_mult,
         std::optional<int> dims) {
        ExperimentConfig cfg;
        cfg.preset = preset;
        cfg.T_list = std::move(T);
        cfg.seed = seed;
        cfg.eta_multiplier = eta_mult;
        cfg.dims = dims;
        const PresetResult r = run_preset(cfg);
        py::dict checks;
        for (const auto& c : r.checks) checks[py::str(c.name)] = py::make_tuple(c.value, c.pass);
        py::dict d;
        d["passed"] = r.passed();
        d["checks"] = checks;
        d["report"] = r.report();
        return d;
      },
      py::arg("preset"), py::arg("T") = std::vector<int>{}, py::arg("seed") = 0,
      py::arg("eta_mult") = 1.0, py::arg("dims") = py::none());
}
