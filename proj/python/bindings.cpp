#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

#include "svc/analysis.hpp"
#include "svc/error.hpp"
#include "svc/geometry.hpp"
#include "svc/oracle.hpp"
#include "svc/parallel.hpp"
#include "svc/spp.hpp"
#include "svc/sweep.hpp"

namespace py = pybind11;
using namespace svc;

namespace {

using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

template <typename Fn>
py::array_t<double> map_wave_numbers(const DoubleArray& k, Fn&& fn) {
  const auto in = k.unchecked();
  std::vector<double> values(in.data(0), in.data(0) + in.size());
  std::vector<double> out;
  {
    py::gil_scoped_release release;
    out = parallel_map(values.size(), [&](std::size_t i) { return fn(values[i]); });
  }
  py::array_t<double> result(k.request().shape);
  std::copy(out.begin(), out.end(), result.mutable_data());
  return result;
}

py::dict point_dict(const ScatteringPoint& p) {
  py::dict d;
  d["k"] = p.k;
  d["T"] = p.T;
  d["R"] = p.R;
  d["log10_T"] = p.log10_T;
  d["underflow"] = p.underflow;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Scattering through Smith-Volterra-Cantor potentials";
  m.attr("__version__") = SVC_VERSION;

  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<ConsistencyError>(m, "ConsistencyError", PyExc_ArithmeticError);
  py::register_exception<OracleMismatch>(m, "OracleMismatch", PyExc_ArithmeticError);
  py::register_exception<DegenerateFit>(m, "DegenerateFit", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  py::class_<PotentialSpec>(m, "PotentialSpec")
      .def(py::init([](double rho, double n, int stage, double V, double L, std::vector<double> poly) {
             PotentialSpec s;
             s.rho = rho;
             s.n = n;
             s.stage = stage;
             s.V = V;
             s.L = L;
             s.exponent_poly = std::move(poly);
             s.validate();
             return s;
           }),
           py::arg("rho") = 2.0, py::arg("n") = 1.0, py::arg("stage") = 0, py::arg("V") = 10.0,
           py::arg("L") = 10.0, py::arg("exponent_poly") = std::vector<double>{})
      .def_readwrite("rho", &PotentialSpec::rho)
      .def_readwrite("n", &PotentialSpec::n)
      .def_readwrite("stage", &PotentialSpec::stage)
      .def_readwrite("V", &PotentialSpec::V)
      .def_readwrite("L", &PotentialSpec::L)
      .def_readwrite("exponent_poly", &PotentialSpec::exponent_poly)
      .def("exponent", &PotentialSpec::exponent, py::arg("g"))
      .def("__repr__", [](const PotentialSpec& s) {
        return "PotentialSpec(rho=" + format_number(s.rho) + ", n=" + format_number(s.n) +
               ", stage=" + std::to_string(s.stage) + ", V=" + format_number(s.V) +
               ", L=" + format_number(s.L) + ")";
      });

  m.def(
      "layout",
      [](const PotentialSpec& spec) {
        const auto layout = build_layout(spec);
        py::array_t<double> intervals({static_cast<py::ssize_t>(layout.intervals.size()), py::ssize_t{2}});
        auto view = intervals.mutable_unchecked<2>();
        for (std::size_t i = 0; i < layout.intervals.size(); ++i) {
          view(i, 0) = layout.intervals[i].start;
          view(i, 1) = layout.intervals[i].end;
        }
        py::dict d;
        d["l"] = layout.l;
        d["d"] = layout.d;
        d["s"] = layout.s;
        d["intervals"] = intervals;
        return d;
      },
      py::arg("spec"), "Segment lengths l, d, s and the barrier intervals as an (2^G, 2) array.");

  py::class_<SvcEngine>(m, "Engine")
      .def(py::init<const PotentialSpec&>(), py::arg("spec"))
      .def_property_readonly("spec", &SvcEngine::spec)
      .def(
          "transmission",
          [](const SvcEngine& e, const DoubleArray& k) {
            return map_wave_numbers(k, [&](double kk) { return e.at_wave_number(kk).T; });
          },
          py::arg("k"), "T at each wave number in `k`.")
      .def(
          "log10_transmission",
          [](const SvcEngine& e, const DoubleArray& k) {
            return map_wave_numbers(k, [&](double kk) { return e.at_wave_number(kk).log10_T; });
          },
          py::arg("k"))
      .def(
          "point", [](const SvcEngine& e, double k) { return point_dict(e.at_wave_number(k)); }, py::arg("k"))
      .def(
          "omega", [](const SvcEngine& e, double k) { return e.bloch(k * k).omega; }, py::arg("k"));

  m.def(
      "transmission",
      [](const PotentialSpec& spec, const DoubleArray& k) {
        const SvcEngine engine(spec);
        return map_wave_numbers(k, [&](double kk) { return engine.at_wave_number(kk).T; });
      },
      py::arg("spec"), py::arg("k"), "Closed-form T_G(k).");

  m.def(
      "brute_force_transmission",
      [](const PotentialSpec& spec, const DoubleArray& k) {
        const auto chain = chain_from_layout(build_layout(spec));
        return map_wave_numbers(k, [&](double kk) { return brute_force_T(chain, spec.V, kk * kk).T; });
      },
      py::arg("spec"), py::arg("k"), "T from the product of 2^G barrier matrices.");

  m.def("renormalized_height", &renormalized_height, py::arg("spec"));
  m.def(
      "reflection_scaled",
      [](const PotentialSpec& spec, const DoubleArray& k) {
        return map_wave_numbers(k, [&](double kk) { return reflection_scaled(spec, kk * kk); });
      },
      py::arg("spec"), py::arg("k"), "R at height V_G = L V / (2^G l_G).");

  m.def(
      "fit_scaling",
      [](const PotentialSpec& spec, double k_min, double k_max, int points) {
        const auto fit = fit_scaling(spec, k_min, k_max, points);
        py::dict d;
        d["slope"] = fit.slope;
        d["intercept"] = fit.intercept;
        d["r_squared"] = fit.r_squared;
        d["maxima"] = fit.maxima;
        return d;
      },
      py::arg("spec"), py::arg("k_min"), py::arg("k_max"), py::arg("points") = 4000);

  m.def(
      "find_resonances",
      [](const PotentialSpec& spec, double k_min, double k_max, double threshold, int points) {
        const auto list = find_resonances(spec, k_min, k_max, threshold, points);
        py::list out;
        for (const auto& r : list.resonances) {
          py::dict d;
          d["k"] = r.k_center;
          d["width"] = r.width;
          d["T_peak"] = r.T_peak;
          out.append(d);
        }
        return out;
      },
      py::arg("spec"), py::arg("k_min"), py::arg("k_max"), py::arg("threshold") = 0.999,
      py::arg("points") = 4000);

  m.def(
      "saturation_metric",
      [](const PotentialSpec& base, double n_a, double n_b, const DoubleArray& k) {
        const auto in = k.unchecked();
        const std::vector<double> grid(in.data(0), in.data(0) + in.size());
        return saturation_metric(base, n_a, n_b, grid);
      },
      py::arg("base"), py::arg("n_a"), py::arg("n_b"), py::arg("k"));

  m.def(
      "sweep",
      [](const std::string& config_text, const std::vector<std::string>& overrides) {
        auto config = parse_config(config_text);
        for (const auto& item : overrides) {
          const auto eq = item.find('=');
          if (eq == std::string::npos) throw InvalidArgument("override must be KEY=VALUE: " + item);
          config.set(item.substr(0, eq), item.substr(eq + 1));
        }
        config.validate();
        const auto grid = run_sweep(config);
        py::array_t<double> values({static_cast<py::ssize_t>(grid.rows()), static_cast<py::ssize_t>(grid.columns())});
        std::copy(grid.values.begin(), grid.values.end(), values.mutable_data());
        py::list axes;
        for (const auto& axis : grid.axes) axes.append(py::make_tuple(std::string(to_string(axis.name)), axis.values()));
        py::dict d;
        d["values"] = values;
        d["axes"] = axes;
        d["text"] = format_grid(grid, {.reproducible = true});
        return d;
      },
      py::arg("config_text"), py::arg("overrides") = std::vector<std::string>{},
      "Runs a sweep described by config text; returns values, axes and the grid file text.");
}
