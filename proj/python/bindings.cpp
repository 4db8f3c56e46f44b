#include <pybind11/functional.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "uirisk/convergence.hpp"
#include "uirisk/folding.hpp"
#include "uirisk/invest.hpp"
#include "uirisk/io.hpp"
#include "uirisk/risk_measure.hpp"
#include "uirisk/ui_diag.hpp"

namespace py = pybind11;
using namespace uirisk;

namespace {

// Reports cross the boundary as plain dicts, reusing the JSON serializers.
py::object to_py(const io::Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

// Specs may be given as dicts or as JSON text / file paths.
io::Json from_py(const py::object& o) {
  if (py::isinstance<py::str>(o)) return io::parse_json(o.cast<std::string>());
  const auto text = py::module_::import("json").attr("dumps")(o).cast<std::string>();
  return io::Json::parse(text);
}

DistortionFunction as_distortion(const py::object& o) {
  if (py::isinstance<DistortionFunction>(o)) return o.cast<DistortionFunction>();
  return io::distortion_from_json(from_py(o));
}

RiskMeasure as_measure(const py::object& o) {
  if (py::isinstance<RiskMeasure>(o)) return o.cast<RiskMeasure>();
  if (py::isinstance<DistortionFunction>(o)) return RiskMeasure::distortion(o.cast<DistortionFunction>());
  return io::measure_from_json(from_py(o));
}

Position as_position(const py::object& o) {
  if (py::isinstance<StateVector>(o)) return o.cast<StateVector>();
  return o.cast<DiscreteDistribution>();
}

double py_value(const ExtendedReal& v) { return v.to_double(); }

std::vector<double> copy(std::span<const double> s) { return {s.begin(), s.end()}; }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Risk measures, folding ratios and uniform integrability diagnostics";
  m.attr("__version__") = "0.1.0";

  py::register_exception<io::IoError>(m, "IoError", PyExc_OSError);
  py::register_exception<io::SpecError>(m, "SpecError", PyExc_ValueError);

  py::class_<DiscreteDistribution>(m, "DiscreteDistribution")
      .def(py::init<std::vector<double>, std::vector<double>>(), py::arg("atoms"), py::arg("weights"))
      .def_static("point_mass", &DiscreteDistribution::point_mass)
      .def_static("uniform_over",
                  [](const std::vector<double>& v) { return DiscreteDistribution::uniform_over(v); })
      .def_static("bernoulli", &DiscreteDistribution::bernoulli, py::arg("theta"), py::arg("scale") = 1.0)
      .def_property_readonly("atoms", [](const DiscreteDistribution& x) { return copy(x.atoms()); })
      .def_property_readonly("weights", [](const DiscreteDistribution& x) { return copy(x.weights()); })
      .def("cdf", &DiscreteDistribution::cdf)
      .def("survival", &DiscreteDistribution::survival)
      .def("quantile", [](const DiscreteDistribution& x, double t) { return x.quantile()(t); })
      .def("__len__", &DiscreteDistribution::size)
      .def(py::self == py::self)
      .def("to_dict", [](const DiscreteDistribution& x) { return to_py(io::to_json(x)); })
      .def_static("from_dict", [](const py::object& o) { return io::distribution_from_json(from_py(o)); })
      .def("__repr__", [](const DiscreteDistribution& x) {
        return "DiscreteDistribution(" + io::to_json(x).dump() + ")";
      });

  py::class_<StateVector>(m, "StateVector")
      .def(py::init<std::vector<double>>(), py::arg("values"))
      .def(py::init<std::vector<double>, std::vector<double>>(), py::arg("values"), py::arg("probabilities"))
      .def_readonly("values", &StateVector::values)
      .def_readonly("probabilities", &StateVector::probabilities)
      .def("law", &StateVector::law);

  m.def("from_samples", [](const std::vector<double>& s) { return from_samples(s); });
  m.def("var", &var, py::arg("x"), py::arg("p"));
  m.def("fold", py::overload_cast<const DiscreteDistribution&>(&fold));
  m.def("negate", py::overload_cast<const DiscreteDistribution&>(&negate));
  m.def("truncate", static_cast<DiscreteDistribution (*)(const DiscreteDistribution&, double)>(&uirisk::truncate), py::arg("x"), py::arg("cap"));
  m.def("shift", &uirisk::shift, py::arg("x"), py::arg("c"));
  m.def("scale", &uirisk::scale, py::arg("x"), py::arg("factor"));
  m.def("mix", [](const std::vector<DiscreteDistribution>& xs, const std::vector<double>& ws) { return mix(xs, ws); });
  m.def("mean", &mean);

  py::class_<DistributionFamily>(m, "DistributionFamily")
      .def(py::init<std::string, std::vector<DiscreteDistribution>>(), py::arg("label"), py::arg("members"))
      .def(py::init<std::string, DistributionFamily::Generator, std::size_t>(), py::arg("label"),
           py::arg("generator"), py::arg("horizon"))
      .def_static(
          "builtin", [](const std::string& name, std::size_t horizon,
                        std::uint64_t seed) { return io::builtin_family(name, horizon, seed).family; },
          py::arg("name"), py::arg("horizon"), py::arg("seed") = 7)
      .def_static("from_directory", [](const std::string& dir, std::size_t horizon) {
        return io::family_from_directory(dir, horizon);
      })
      .def_property_readonly("label", &DistributionFamily::label)
      .def_property_readonly("horizon", &DistributionFamily::horizon)
      .def("member", &DistributionFamily::member)
      .def("__len__", &DistributionFamily::horizon);
  m.def("builtin_family_names", &io::builtin_family_names);

  py::class_<DistortionFunction>(m, "DistortionFunction")
      .def_static("identity", &DistortionFunction::identity)
      .def_static("es_clip", &DistortionFunction::es_clip, py::arg("p"))
      .def_static("power", &DistortionFunction::power, py::arg("alpha"))
      .def_static("ies", &DistortionFunction::ies)
      .def_static("piecewise_linear", &DistortionFunction::piecewise_linear, py::arg("t"), py::arg("v"))
      .def_static("es_level_sum", [](const std::vector<double>& levels) { return DistortionFunction::es_level_sum(levels); })
      .def_static("pointwise_min", &DistortionFunction::pointwise_min)
      .def_static("from_spec", [](const py::object& o) { return io::distortion_from_json(from_py(o)); })
      .def("__call__", &DistortionFunction::operator())
      .def("is_concave", &DistortionFunction::is_concave)
      .def("at_half", &DistortionFunction::at_half)
      .def("to_dict", [](const DistortionFunction& h) { return to_py(io::to_json(h)); })
      .def("__repr__", [](const DistortionFunction& h) { return "DistortionFunction(" + io::to_json(h).dump() + ")"; });
  m.def("slope_limit", [](const DistortionFunction& h) { return py_value(slope_limit(h)); });
  m.def("is_Dc", &is_Dc);

  py::class_<RiskMeasure>(m, "RiskMeasure")
      .def_static("distortion", &RiskMeasure::distortion)
      .def_static("expected_shortfall", &RiskMeasure::expected_shortfall, py::arg("p"))
      .def_static("mean", &RiskMeasure::mean)
      .def_static("entropic", &RiskMeasure::entropic, py::arg("beta"))
      .def_static("scenario_sup", &RiskMeasure::scenario_sup)
      .def_static("capacity", &RiskMeasure::capacity)
      .def_static("kusuoka_sup", &RiskMeasure::kusuoka_sup)
      .def_static("from_spec", [](const py::object& o) { return io::measure_from_json(from_py(o)); })
      .def_property_readonly("name", &RiskMeasure::name)
      .def("to_dict", [](const RiskMeasure& r) { return to_py(io::to_json(r)); });

  m.def("choquet", [](const py::object& h, const DiscreteDistribution& x) { return choquet(as_distortion(h), x); });
  m.def("es", &es, py::arg("x"), py::arg("p"));
  m.def("es_folded", &es_folded, py::arg("x"), py::arg("p"));
  m.def("ies", &ies_direct);
  m.def("ies_counterexample_law", &ies_counterexample_law, py::arg("bulk_cells") = 2000,
        py::arg("tail_octaves") = 60);
  m.def("evaluate", [](const py::object& rho, const py::object& x) { return py_value(evaluate(as_measure(rho), as_position(x))); });

  m.def("folding_ratio",
        [](const py::object& rho, const py::object& x) {
          return to_py(io::to_json(folding_ratio(as_measure(rho), as_position(x))));
        });
  m.def("lemma_max", [](double a, double b) { return py_value(lemma_max(a, b)); });
  m.def("bound_b", [](const py::object& h) { return py_value(bound_b(as_distortion(h))); });
  m.def("sharpness_family", &sharpness_family, py::arg("p"), py::arg("epsilon"));
  m.def(
      "empirical_folding_score",
      [](const py::object& rho, int atoms, std::uint64_t iterations, std::uint64_t seed) {
        return to_py(io::to_json(empirical_folding_score(as_measure(rho), {atoms, iterations, seed})));
      },
      py::arg("rho"), py::arg("atoms") = 4, py::arg("iterations") = 100000, py::arg("seed") = 7);
  m.def(
      "counterexample_gallery",
      [](std::uint64_t seed) {
        py::list out;
        for (const auto& e : counterexample_gallery(seed)) out.append(to_py(io::to_json(e)));
        return out;
      },
      py::arg("seed") = 7);

  m.def("dyadic_grid", &dyadic_grid);
  m.def("parse_grid", &parse_grid);
  m.def(
      "tail_envelope",
      [](const DistributionFamily& f, const std::vector<double>& grid) {
        return to_py(io::to_json(tail_envelope(f, grid)));
      },
      py::arg("family"), py::arg("grid"));
  m.def("ui_from_distortion", [](const DistributionFamily& f, const py::object& h) {
    return to_py(io::to_json(ui_from_distortion(f, as_distortion(h))));
  });
  m.def("ui_from_distortion_pair", [](const DistributionFamily& f, const py::object& g, const py::object& h) {
    const auto r = ui_from_distortion_pair(f, as_distortion(g), as_distortion(h));
    py::dict d;
    d["ell"] = to_py(io::to_json(r.ell));
    d["upper"] = to_py(io::to_json(r.upper));
    d["lower"] = to_py(io::to_json(r.lower));
    d["verdict"] = to_string(r.verdict);
    return d;
  });
  m.def(
      "classify_finiteness",
      [](const py::object& h, double threshold) {
        return to_py(io::to_json(classify_finiteness(as_distortion(h), threshold)));
      },
      py::arg("h"), py::arg("threshold") = 10.0);

  m.def("w1", &w1);
  m.def(
      "lln_experiment",
      [](const std::string& generator, std::size_t n_max, std::size_t reps, std::uint64_t seed,
         const py::object& rho, const py::object& rho_prime) {
        LlnConfig c;
        c.generator = SampleGenerator::parse(generator);
        c.n_max = n_max;
        c.reps = reps;
        c.seed = seed;
        return to_py(io::to_json(lln_experiment(c, as_measure(rho), as_measure(rho_prime))));
      },
      py::arg("generator") = "coin", py::arg("n_max") = 10000, py::arg("reps") = 200, py::arg("seed") = 7,
      py::arg("rho") = "{\"kind\":\"ies\"}", py::arg("rho_prime") = "{\"kind\":\"ies\"}");
  m.def(
      "es_convergence",
      [](const std::vector<DiscreteDistribution>& seq, const DiscreteDistribution& limit,
         const std::vector<double>& levels) { return to_py(io::to_json(es_convergence_experiment(seq, limit, levels))); },
      py::arg("sequence"), py::arg("limit"), py::arg("levels") = std::vector<double>{0.5, 0.9, 0.99});
  m.def(
      "subsequence_extract",
      [](const DistributionFamily& f, int levels) { return to_py(io::to_json(subsequence_extract(f, levels))); },
      py::arg("family"), py::arg("max_levels") = 20);

  m.def("default_background", &default_background, py::arg("points") = 201);
  m.def(
      "invest_solve",
      [](const py::object& spec, double eps, std::uint64_t seed) {
        const auto s = io::invest_spec_from_json(from_py(spec));
        return to_py(io::to_json(solve_eps(s.problem, s.background, eps, seed)));
      },
      py::arg("spec"), py::arg("eps") = 1e-3, py::arg("seed") = 7);
  m.def(
      "invest_prop61",
      [](const py::object& spec, std::size_t levels, std::uint64_t seed) {
        const auto s = io::invest_spec_from_json(from_py(spec));
        return to_py(io::to_json(prop61_experiment(s.problem, s.background, levels, seed)));
      },
      py::arg("spec"), py::arg("levels") = 8, py::arg("seed") = 7);
}
