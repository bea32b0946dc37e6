#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lcc/ctrl_analysis.hpp"
#include "lcc/errors.hpp"
#include "lcc/scenarios.hpp"
#include "lcc/string_stability.hpp"
#include "lcc/system_assembly.hpp"
#include "lcc/traffic_sim.hpp"
#include "lcc/vehicle_models.hpp"

namespace py = pybind11;
using namespace lcc;

namespace {

FeedbackGains gains_from_dict(const std::map<int, std::pair<double, double>>& d) {
  FeedbackGains g;
  for (const auto& [id, mk] : d) g.set(id, mk.first, mk.second);
  return g;
}

std::map<int, std::pair<double, double>> gains_to_dict(const FeedbackGains& g) {
  std::map<int, std::pair<double, double>> d;
  for (int id : g.ids()) d[id] = {g.mu_of(id), g.k_of(id)};
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Leading cruise control core bindings";
  m.attr("__version__") = "0.1.0";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<TopologyError>(m, "TopologyError", base.ptr());
  auto numerical = py::register_exception<NumericalError>(m, "NumericalError", base.ptr());
  py::register_exception<CollisionError>(m, "CollisionError", base.ptr());
  py::register_exception<SingularityError>(m, "SingularityError", numerical.ptr());
  py::register_exception<EvaluationError>(m, "EvaluationError", numerical.ptr());

  py::class_<DriverParams>(m, "DriverParams")
      .def(py::init<>())
      .def_readwrite("alpha", &DriverParams::alpha)
      .def_readwrite("beta", &DriverParams::beta)
      .def_readwrite("v_max", &DriverParams::v_max)
      .def_readwrite("s_st", &DriverParams::s_st)
      .def_readwrite("s_go", &DriverParams::s_go)
      .def_readwrite("delay", &DriverParams::delay)
      .def("validate", &DriverParams::validate);

  py::class_<Equilibrium>(m, "Equilibrium")
      .def_readonly("v_star", &Equilibrium::v_star)
      .def_readonly("s_star", &Equilibrium::s_star);

  py::class_<LinearCoeffs>(m, "LinearCoeffs")
      .def(py::init<double, double, double>(), py::arg("alpha1"), py::arg("alpha2"),
           py::arg("alpha3"))
      .def_property_readonly("alpha1", &LinearCoeffs::alpha1)
      .def_property_readonly("alpha2", &LinearCoeffs::alpha2)
      .def_property_readonly("alpha3", &LinearCoeffs::alpha3)
      .def("__repr__", [](const LinearCoeffs& c) {
        return "LinearCoeffs(" + std::to_string(c.alpha1()) + ", " + std::to_string(c.alpha2()) +
               ", " + std::to_string(c.alpha3()) + ")";
      });

  m.def("desired_velocity", &desired_velocity, py::arg("spacing"), py::arg("params") = DriverParams{});
  m.def("equilibrium_spacing", &equilibrium_spacing, py::arg("v_star"),
        py::arg("params") = DriverParams{});
  m.def("linearize", &linearize, py::arg("equilibrium"), py::arg("params") = DriverParams{});
  m.def("default_coeffs", &default_coeffs);
  m.def("condition_check", &condition_check);

  py::class_<StateSpaceModel>(m, "StateSpaceModel")
      .def_readonly("m", &StateSpaceModel::m)
      .def_readonly("n", &StateSpaceModel::n)
      .def_readonly("A", &StateSpaceModel::A)
      .def_readonly("B", &StateSpaceModel::B)
      .def_readonly("H", &StateSpaceModel::H)
      .def_property_readonly("variant",
                             [](const StateSpaceModel& s) { return std::string(to_string(s.variant)); })
      .def_property_readonly("dim", &StateSpaceModel::dim);

  m.def(
      "build_system",
      [](const std::string& variant, int mm, int n, const LinearCoeffs& c) {
        return build_system(parse_variant(variant), mm, n, c);
      },
      py::arg("variant"), py::arg("m"), py::arg("n"), py::arg("coeffs"));

  py::class_<ControllabilityReport>(m, "ControllabilityReport")
      .def_readonly("controllable", &ControllabilityReport::controllable)
      .def_readonly("controllable_dim", &ControllabilityReport::controllable_dim)
      .def_readonly("uncontrollable_mode_eigenvalues",
                    &ControllabilityReport::uncontrollable_mode_eigenvalues)
      .def_readonly("condition_value", &ControllabilityReport::condition_value)
      .def_readonly("pbh_controllable", &ControllabilityReport::pbh_controllable);
  m.def("analyze_controllability", &analyze_controllability, py::arg("model"),
        py::arg("tol") = kDefaultRankTol);

  py::class_<ObservabilityReport>(m, "ObservabilityReport")
      .def_readonly("observable", &ObservabilityReport::observable)
      .def_readonly("observable_dim", &ObservabilityReport::observable_dim)
      .def_readonly("unobservable_vehicle_ids", &ObservabilityReport::unobservable_vehicle_ids);
  m.def("analyze_observability", &analyze_observability, py::arg("model"), py::arg("C"),
        py::arg("tol") = kDefaultRankTol);
  m.def("build_output_matrix", &build_output_matrix, py::arg("model"), py::arg("k"));

  py::class_<GramianResult>(m, "GramianResult")
      .def_readonly("W", &GramianResult::W)
      .def_readonly("lambda_min", &GramianResult::lambda_min)
      .def_readonly("lambda_max", &GramianResult::lambda_max)
      .def_readonly("trace_inv", &GramianResult::trace_inv)
      .def_property_readonly("singular", &GramianResult::singular);
  m.def(
      "gramian",
      [](const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, double t, double dt) {
        return gramian(A, B, t, dt);
      },
      py::arg("A"), py::arg("B"), py::arg("t"), py::arg("dt") = kDefaultGramianStep);
  m.def("min_energy", &min_energy, py::arg("A"), py::arg("B"), py::arg("t"), py::arg("x0"),
        py::arg("x_tar"), py::arg("dt") = kDefaultGramianStep);

  m.def(
      "head_to_tail",
      [](int mm, int n, const LinearCoeffs& c,
         const std::map<int, std::pair<double, double>>& gains, double omega) {
        return head_to_tail(TransferSpec{mm, n, c, gains_from_dict(gains)}, omega);
      },
      py::arg("m"), py::arg("n"), py::arg("coeffs"), py::arg("gains"), py::arg("omega"));

  m.def(
      "is_string_stable",
      [](int mm, int n, const LinearCoeffs& c,
         const std::map<int, std::pair<double, double>>& gains) {
        const auto r = is_string_stable(TransferSpec{mm, n, c, gains_from_dict(gains)});
        py::dict d;
        d["stable"] = r.stable;
        d["peak_omega"] = r.peak_omega;
        d["peak_mag"] = r.peak_mag;
        d["asymptotically_stable"] = r.asymptotically_stable;
        return d;
      },
      py::arg("m"), py::arg("n"), py::arg("coeffs"), py::arg("gains"));

  m.def("table1_gains", [](const std::string& name) { return gains_to_dict(table1_gains(name)); });

  py::class_<SimulationTrace>(m, "SimulationTrace")
      .def_readonly("times", &SimulationTrace::times)
      .def_readonly("vehicles", &SimulationTrace::vehicles)
      .def_readonly("pos", &SimulationTrace::pos)
      .def_readonly("vel", &SimulationTrace::vel)
      .def_readonly("acc", &SimulationTrace::acc)
      .def_readonly("spacing", &SimulationTrace::spacing)
      .def("column", &SimulationTrace::column);

  m.def(
      "simulate_sinusoid", [](const std::string& case_name) {
        return simulate(sinusoid_scenario(case_name));
      },
      py::arg("case_name"));
  m.def(
      "simulate_brake",
      [](const std::string& controller, bool heterogeneous, std::uint64_t seed) {
        BrakeController c = BrakeController::LookingAhead;
        if (controller == "fd_lcc") c = BrakeController::FdLcc;
        else if (controller == "cf_lcc") c = BrakeController::CfLcc;
        else if (controller != "looking_ahead") throw DomainError("unknown controller " + controller);
        std::optional<HeterogeneitySpec> h;
        if (heterogeneous) h = HeterogeneitySpec{};
        return simulate(brake_scenario(c, h, seed));
      },
      py::arg("controller"), py::arg("heterogeneous") = false, py::arg("seed") = 0);
  m.def(
      "brake_metrics",
      [](const SimulationTrace& t) {
        const auto r = brake_metrics(t);
        return std::make_pair(r.aave, r.fuel);
      },
      "(AAVE m/s, fuel mL) of vehicles 0..10 over 20-40 s");
  m.def("fuel_rate", &fuel_rate, py::arg("v"), py::arg("a"));
}
