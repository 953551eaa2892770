#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qsector/fan.hpp"
#include "qsector/fourier.hpp"
#include "qsector/io.hpp"
#include "qsector/measure.hpp"
#include "qsector/solver.hpp"

namespace py = pybind11;
using namespace qsector;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Sector measures, their Fourier profiles and centering hyperplanes";
  m.attr("__version__") = QSECTOR_VERSION;

  py::register_exception<DegenerateConfiguration>(m, "DegenerateConfiguration", PyExc_ValueError);
  py::register_exception<AccuracyError>(m, "AccuracyError", PyExc_ArithmeticError);
  py::register_exception<io::SpecError>(m, "SpecError", PyExc_ValueError);

  py::class_<Gaussian>(m, "Gaussian")
      .def(py::init<ComplexVector, double, double>(), py::arg("mean"), py::arg("sigma") = 1.0,
           py::arg("weight") = 1.0)
      .def_readwrite("mean", &Gaussian::mean)
      .def_readwrite("sigma", &Gaussian::sigma)
      .def_readwrite("weight", &Gaussian::weight);

  py::class_<Disk>(m, "Disk")
      .def(py::init<Complex, double, double>(), py::arg("center"), py::arg("radius") = 1.0,
           py::arg("weight") = 1.0)
      .def_readwrite("center", &Disk::center)
      .def_readwrite("radius", &Disk::radius)
      .def_readwrite("weight", &Disk::weight);

  py::class_<MassSpec>(m, "MassSpec")
      .def(py::init<int, std::vector<Component>>(), py::arg("dim"), py::arg("components"))
      .def_property_readonly("dim", &MassSpec::dim)
      .def_property_readonly("components", &MassSpec::components)
      .def_property_readonly("total_mass", &MassSpec::total_mass)
      .def("to_json", [](const MassSpec& s) { return io::to_json(s).dump(); })
      .def("__eq__", [](const MassSpec& a, const MassSpec& b) { return a == b; });

  py::class_<Configuration>(m, "Configuration")
      .def(py::init<ComplexVector, Complex>(), py::arg("a"), py::arg("b"))
      .def_static("from_apex", &Configuration::from_apex, py::arg("apex"))
      .def_property_readonly("a", &Configuration::a)
      .def_property_readonly("b", &Configuration::b)
      .def_property_readonly("dim", &Configuration::dim)
      .def_property_readonly("degenerate", &Configuration::degenerate)
      .def("rotated", &Configuration::rotated, py::arg("phase"))
      .def("affine_form", &Configuration::affine_form, py::arg("u"));

  m.def("sector_measure", &sector_measure, py::arg("mass"), py::arg("x"), py::arg("q"), py::arg("theta"));
  m.def("sector_contains", &sector_contains, py::arg("x"), py::arg("q"), py::arg("theta"), py::arg("u"));

  py::class_<MonteCarloEstimate>(m, "MonteCarloEstimate")
      .def_readonly("value", &MonteCarloEstimate::value)
      .def_readonly("std_error", &MonteCarloEstimate::std_error)
      .def_readonly("hits", &MonteCarloEstimate::hits)
      .def_readonly("samples", &MonteCarloEstimate::samples);
  m.def("monte_carlo_sector_measure", &monte_carlo_sector_measure, py::arg("mass"), py::arg("x"), py::arg("q"),
        py::arg("theta"), py::arg("samples"), py::arg("seed"));

  py::class_<FourierProfile>(m, "FourierProfile")
      .def_readonly("q", &FourierProfile::q)
      .def_readonly("grid", &FourierProfile::grid)
      .def_readonly("samples", &FourierProfile::samples)
      .def_readonly("total", &FourierProfile::total)
      .def_readonly("smooth", &FourierProfile::smooth)
      .def("coefficient", &FourierProfile::coefficient, py::arg("m"))
      .def("theta", &FourierProfile::theta, py::arg("k"));
  m.def("profile", &profile, py::arg("mass"), py::arg("x"), py::arg("q"), py::arg("grid") = kDefaultGrid,
        py::arg("max_order") = 0);
  m.def("degenerate_coefficient", &degenerate_coefficient, py::arg("mass"), py::arg("x"), py::arg("q"),
        py::arg("m"));
  m.def("l2_deviation", &l2_deviation, py::arg("profile"));
  m.def("linf_deviation", &linf_deviation, py::arg("profile"));
  m.def("total_variation", &total_variation, py::arg("profile"));
  m.def("acceleration", [](const FourierProfile& p) {
    const AccelerationEstimate a = acceleration(p);
    return py::make_tuple(a.value, a.reliable);
  });
  m.def("tail_sum", &tail_sum, py::arg("q"), py::arg("n"));
  m.def("l2_bound_fraction", &l2_bound_fraction, py::arg("q"), py::arg("n"));
  m.def("linf_bound", &linf_bound, py::arg("acceleration"), py::arg("q"), py::arg("n"));

  py::class_<DeviationReport>(m, "DeviationReport")
      .def_readonly("l2", &DeviationReport::l2)
      .def_readonly("linf", &DeviationReport::linf)
      .def_readonly("variation", &DeviationReport::variation)
      .def_readonly("acceleration", &DeviationReport::acceleration)
      .def_readonly("acceleration_reliable", &DeviationReport::acceleration_reliable)
      .def_readonly("annihilated", &DeviationReport::annihilated)
      .def_readonly("bound_l2", &DeviationReport::bound_l2)
      .def_readonly("bound_linf", &DeviationReport::bound_linf);
  m.def("deviation_report", &deviation_report, py::arg("profile"), py::arg("annihilated"));

  py::class_<SolveProblem>(m, "SolveProblem")
      .def(py::init([](std::vector<MassSpec> masses, std::vector<int> exponents, int q, int grid, double tol,
                       int starts, std::uint64_t seed) {
             SolveProblem p;
             p.masses = std::move(masses);
             p.exponents = std::move(exponents);
             p.q = q;
             p.grid = grid;
             p.tol = tol;
             p.starts = starts;
             p.seed = seed;
             p.validate();
             return p;
           }),
           py::arg("masses"), py::arg("exponents"), py::arg("q") = 2, py::arg("grid") = kDefaultGrid,
           py::arg("tol") = 1e-6, py::arg("starts") = 32, py::arg("seed") = 0)
      .def_readonly("q", &SolveProblem::q)
      .def_readonly("exponents", &SolveProblem::exponents);

  py::class_<SolveResult>(m, "SolveResult")
      .def_readonly("x", &SolveResult::x)
      .def_readonly("residual", &SolveResult::residual)
      .def_readonly("threshold", &SolveResult::threshold)
      .def_readonly("converged", &SolveResult::converged)
      .def_readonly("coefficients", &SolveResult::coefficients)
      .def_readonly("per_mass", &SolveResult::per_mass)
      .def_readonly("witnesses", &SolveResult::witnesses)
      .def_property_readonly("apex", [](const SolveResult& r) { return r.hyperplane.apex; });
  m.def("solve", &solve, py::arg("problem"), py::call_guard<py::gil_scoped_release>());
  m.def("residual", &residual, py::arg("problem"), py::arg("x"));
  m.def("test_map", &test_map, py::arg("problem"), py::arg("x"));

  py::class_<PlanarMassSpec>(m, "PlanarMassSpec")
      .def(py::init([](const MassSpec& s) { return planar_from_mass(s); }), py::arg("mass"))
      .def_property_readonly("total_mass", &PlanarMassSpec::total_mass)
      .def("as_mass", &PlanarMassSpec::as_mass);

  py::class_<SixFan>(m, "SixFan")
      .def_readonly("center", &SixFan::center)
      .def_readonly("base_angle", &SixFan::base_angle)
      .def_readonly("bisection_errors", &SixFan::bisection_errors)
      .def_property_readonly("directions", [](const SixFan& f) {
        return std::vector<double>{f.lines[0].direction, f.lines[1].direction, f.lines[2].direction};
      });
  m.def("regular_six_fan", &regular_six_fan, py::arg("mass"), py::arg("scan_points") = 720);

  py::class_<CertificateReport>(m, "CertificateReport")
      .def_readonly("fan", &CertificateReport::fan)
      .def_readonly("bound", &CertificateReport::bound)
      .def_readonly("linf", &CertificateReport::linf)
      .def_readonly("max_sector", &CertificateReport::max_sector)
      .def_readonly("passed", &CertificateReport::pass);
  m.def("centerpoint_certificate", &centerpoint_certificate, py::arg("mass"), py::arg("q"),
        py::arg("grid") = kDefaultGrid);
  m.def("epsilon_infinity", &epsilon_infinity, py::arg("q"));
  m.def("adversarial_lower_bound", &adversarial_lower_bound, py::arg("q"), py::arg("n"));
  m.def(
      "adversarial_mass",
      [](int q, int n, double r, double delta, std::uint64_t seed) {
        return adversarial_mass(AdversarialSpec{q, n, r, delta}, seed);
      },
      py::arg("q") = 3, py::arg("n") = 10, py::arg("r") = 100.0, py::arg("delta") = 1e-3, py::arg("seed") = 0);
  m.def("worst_center_deviation", &worst_center_deviation, py::arg("mass"), py::arg("q"), py::arg("center"),
        py::arg("grid") = kDefaultGrid);

  m.def("parse_masses", [](const std::string& text) { return io::parse_masses(text); }, py::arg("text"));
  m.def("load_masses", [](const std::string& path) { return io::load_masses(path); }, py::arg("path"));
}
