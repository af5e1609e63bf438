#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "memdomain/errors.hpp"
#include "memdomain/fock.hpp"
#include "memdomain/io.hpp"
#include "memdomain/lifetime.hpp"
#include "memdomain/memory_codes.hpp"
#include "memdomain/oscillator.hpp"
#include "memdomain/special_functions.hpp"

namespace py = pybind11;
using namespace memdomain;

namespace {

special::BesselKind kind_from(const std::string& name) {
  if (name == "j" || name == "first") return special::BesselKind::FirstKind;
  if (name == "y" || name == "second") return special::BesselKind::SecondKind;
  throw DomainError("kind must be 'j' or 'y', got '" + name + "'");
}

SystemParams params_of(double L, double c) {
  SystemParams p{L, c};
  p.validate();
  return p;
}

memory::StimulusSpectrum spectrum_of(const std::vector<std::tuple<double, int, double>>& comps) {
  memory::StimulusSpectrum s;
  for (const auto& [k, n, intensity] : comps) s.components.push_back({k, n, intensity});
  return s;
}

py::dict trajectory_dict(const Trajectory& tr) {
  py::dict d;
  d["t"] = tr.times;
  d["u"] = tr.u;
  d["v"] = tr.v;
  d["r"] = tr.r;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Dissipative memory-domain model: Bessel functions, oscillator pair, lifetimes, Fock space, codes.";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<RealityViolation>(m, "RealityViolation", base.ptr());
  py::register_exception<NeverRecordable>(m, "NeverRecordable", base.ptr());
  py::register_exception<ModeDead>(m, "ModeDead", base.ptr());
  py::register_exception<UnsupportedBranch>(m, "UnsupportedBranch", base.ptr());
  py::register_exception<StepSizeUnderflow>(m, "StepSizeUnderflow", base.ptr());
  py::register_exception<GridTooCoarse>(m, "GridTooCoarse", base.ptr());
  py::register_exception<CutoffTooSmall>(m, "CutoffTooSmall", base.ptr());

  m.def("sph_j", &special::sph_j, py::arg("n"), py::arg("z"));
  m.def("sph_y", &special::sph_y, py::arg("n"), py::arg("z"));
  m.def(
      "sph_deriv", [](const std::string& kind, int n, double z) { return special::sph_deriv(kind_from(kind), n, z); },
      py::arg("kind"), py::arg("n"), py::arg("z"));

  m.def(
      "closed_form_pair",
      [](double k, int n, double t, double a, double b, double L, double c) {
        const PairState s = closed_form_state(params_of(L, c), {k, n}, {a, b}, t);
        return py::make_tuple(s.u, s.du, s.v, s.dv);
      },
      py::arg("k"), py::arg("n"), py::arg("t"), py::arg("a") = 1.0, py::arg("b") = 0.0, py::arg("L") = 1.0,
      py::arg("c") = 1.0, "(u, du/dt, v, dv/dt) of the closed-form pair.");
  m.def(
      "parametric_radius",
      [](double k, int n, double t, double a, double b, double L, double c) {
        return parametric_radius(params_of(L, c), {k, n}, {a, b}, t);
      },
      py::arg("k"), py::arg("n"), py::arg("t"), py::arg("a") = 1.0, py::arg("b") = 0.0, py::arg("L") = 1.0,
      py::arg("c") = 1.0);
  m.def(
      "evolve",
      [](double k, int n, double t_max, int points, const std::string& method, double rel_tol, double L, double c) {
        const SystemParams p = params_of(L, c);
        const ModeIndex mode{k, n};
        if (points < 2) throw DomainError("points must be >= 2");
        const auto grid = uniform_grid(0.0, t_max, static_cast<std::size_t>(points));
        if (method == "closed") return trajectory_dict(closed_form_trajectory(p, mode, {}, grid));
        if (method == "ode") return trajectory_dict(integrate_pair(p, mode, closed_form_state(p, mode, {}, 0.0), grid, rel_tol));
        throw DomainError("method must be 'closed' or 'ode'");
      },
      py::arg("k"), py::arg("n"), py::arg("t_max"), py::arg("points") = 201, py::arg("method") = "closed",
      py::arg("rel_tol") = 1e-10, py::arg("L") = 1.0, py::arg("c") = 1.0);

  m.def(
      "recording_window", [](double k, int n, double L, double c) { return recording_window(params_of(L, c), {k, n}); },
      py::arg("k"), py::arg("n"), py::arg("L") = 1.0, py::arg("c") = 1.0);
  m.def(
      "lambda_lifetime",
      [](double k, int n, double t, double L, double c) { return lambda_lifetime(params_of(L, c), {k, n}, t); },
      py::arg("k"), py::arg("n"), py::arg("t"), py::arg("L") = 1.0, py::arg("c") = 1.0);
  m.def(
      "domain_size", [](int n, double t, double L, double c) { return domain_size(params_of(L, c), n, t); },
      py::arg("n"), py::arg("t"), py::arg("L") = 1.0, py::arg("c") = 1.0);
  m.def(
      "figure_table",
      [](const std::string& name, double L, double c) {
        const CurveTable table = curve_table(params_of(L, c), default_figure_spec(figure_from_string(name)));
        py::list rows;
        for (const auto& r : table.rows) rows.append(py::make_tuple(r.curve_id, r.t, r.lambda));
        return rows;
      },
      py::arg("name"), py::arg("L") = 1.0, py::arg("c") = 1.0, "Rows (curve_id, t, lambda) of a default figure.");

  m.def(
      "squeezed_vacuum",
      [](double gamma, double t, int cutoff) {
        const fock::TwoModeState s = fock::squeezed_vacuum(gamma, t, cutoff);
        std::vector<double> re;
        re.reserve(s.coeffs.size());
        for (const auto& z : s.coeffs) re.push_back(z.real());
        return re;
      },
      py::arg("gamma"), py::arg("t"), py::arg("cutoff") = 0, "Real coefficients c_0..c_cutoff.");
  m.def(
      "pair_numbers",
      [](double gamma, double t, int cutoff) {
        const fock::PairNumbers pn = fock::expected_pair_number(fock::squeezed_vacuum(gamma, t, cutoff));
        return py::make_tuple(pn.n_a, pn.n_tilde);
      },
      py::arg("gamma"), py::arg("t"), py::arg("cutoff") = 0);
  m.def(
      "vacuum_overlap",
      [](const std::vector<double>& gammas, double t, double t_prime) { return fock::vacuum_overlap(gammas, t, t_prime); },
      py::arg("gammas"), py::arg("t"), py::arg("t_prime") = 0.0);
  m.def("vacuum_decay_rate", &fock::vacuum_decay_rate, py::arg("gamma"), py::arg("t"), py::arg("dt") = 1e-4);

  py::class_<memory::Registry>(m, "Registry")
      .def(py::init<>())
      .def_static("loads", [](const std::string& text) { return io::parse_registry(text); })
      .def("dumps", [](const memory::Registry& r) { return io::dump_registry(r); })
      .def_readonly("clock", &memory::Registry::clock)
      .def("__len__", [](const memory::Registry& r) { return r.codes.size(); })
      .def("ids",
           [](const memory::Registry& r) {
             std::vector<std::string> ids;
             for (const auto& c : r.codes) ids.push_back(c.id);
             return ids;
           })
      .def("status", [](const memory::Registry& r, const std::string& id) {
        const memory::MemoryCode* code = r.find(id);
        if (!code) throw DomainError("unknown code '" + id + "'");
        return memory::to_string(code->status);
      });

  m.def(
      "record",
      [](memory::Registry& reg, const std::vector<std::tuple<double, int, double>>& comps, double t, double L, double c) {
        const memory::RecordResult r = memory::record(reg, spectrum_of(comps), t, params_of(L, c));
        py::list rejected;
        for (const auto& rej : r.rejected) rejected.append(py::make_tuple(rej.component.k, memory::to_string(rej.reason)));
        return py::make_tuple(r.code_id ? py::cast(*r.code_id) : py::none(), rejected);
      },
      py::arg("registry"), py::arg("components"), py::arg("t"), py::arg("L") = 1.0, py::arg("c") = 1.0,
      "Components are (k, n, intensity). Returns (code_id or None, [(k, reason)]).");
  m.def(
      "decay", [](memory::Registry& reg, double t, double L, double c) { memory::decay_codes(reg, t, params_of(L, c)); },
      py::arg("registry"), py::arg("t"), py::arg("L") = 1.0, py::arg("c") = 1.0);
  m.def(
      "recall",
      [](const memory::Registry& reg, const std::vector<std::tuple<double, int, double>>& comps, double energy, double t,
         double L, double c) {
        const memory::RecallResult r = memory::recall(reg, spectrum_of(comps), energy, t, params_of(L, c));
        return py::make_tuple(r.matched ? py::cast(*r.matched) : py::none(), memory::to_string(r.outcome), r.score);
      },
      py::arg("registry"), py::arg("components"), py::arg("energy"), py::arg("t"), py::arg("L") = 1.0,
      py::arg("c") = 1.0, "Returns (code_id or None, outcome, score).");
}
