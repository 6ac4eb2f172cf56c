#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "culturesim/experiment.hpp"
#include "culturesim/fitness.hpp"
#include "culturesim/metrics.hpp"
#include "culturesim/network.hpp"
#include "culturesim/world.hpp"

namespace py = pybind11;
using namespace culturesim;

namespace {

py::dict series_dict(const RunSeries& s) {
  py::dict d;
  d["mean_fitness"] = s.mean_fitness;
  d["diversity"] = s.diversity;
  std::vector<std::vector<std::uint32_t>> hist;
  for (const auto& h : s.p_create_hist) hist.emplace_back(h.begin(), h.end());
  d["p_create_hist"] = hist;
  d["run_index"] = s.run_index;
  return d;
}

py::dict averaged_dict(const AveragedSeries& s) {
  py::dict d;
  d["mean_fitness"] = s.mean_fitness;
  d["diversity"] = s.diversity;
  std::vector<double> low, mid, high;
  for (const auto& g : s.segregation) {
    low.push_back(g.low);
    mid.push_back(g.mid);
    high.push_back(g.high);
  }
  d["frac_low"] = low;
  d["frac_mid"] = mid;
  d["frac_high"] = high;
  return d;
}

py::dict result_dict(const ExperimentResult& r) {
  py::dict d;
  std::vector<std::string> files;
  for (const auto& f : r.files) files.push_back(f.generic_string());
  d["files"] = files;
  d["config_digest"] = r.config_digest;
  py::list rows;
  for (const auto& row : r.surface) {
    py::dict x;
    x["C"] = row.creator_fraction;
    x["p"] = row.creativity;
    x["runs"] = row.runs;
    x["mean_ttt_log10"] = row.mean_ttt_log10;
    x["censored_count"] = row.censored_count;
    x["mean_piv"] = row.mean_piv;
    rows.append(x);
  }
  d["surface"] = rows;
  d["series"] = averaged_dict(r.series);
  d["series_no_sr"] = averaged_dict(r.series_no_sr);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Lattice simulations of creation, imitation and social regulation.";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  m.def("parse_subaction", [](const std::string& s) {
    const auto d = parse_subaction(s);
    return std::vector<int>(d.positions.begin(), d.positions.end());
  });
  m.def("format_subaction", [](const std::array<int, kBodyParts>& v) {
    return format_subaction(make_subaction(v));
  });
  m.def("fitness_single", [](const std::string& s) { return fitness_single(parse_subaction(s)); },
        py::arg("subaction"));
  m.def("fitness_template",
        [](const std::string& chain) { return fitness_chain(parse_chain(chain), default_template_set()); },
        py::arg("chain"), "Template fitness of a '|'-separated chain under the default set.");
  m.def("default_templates", [] {
    std::vector<std::string> out;
    for (const auto& t : default_template_set().templates()) out.push_back(format_template(t));
    return out;
  });
  m.def("validate_templates", [](const std::filesystem::path& p) { return load_template_file(p).size(); });

  py::class_<Network>(m, "Network")
      .def(py::init([](std::uint64_t seed) {
             Rng rng(seed);
             return Network(rng);
           }),
           py::arg("seed") = 0)
      .def("train", [](Network& n, const std::string& s) {
        const auto r = n.train(parse_subaction(s));
        return py::make_tuple(r.epochs, r.converged);
      })
      .def("recall", [](const Network& n, const std::string& s) {
        return format_subaction(n.recall(parse_subaction(s)));
      })
      .def("invention_bias", [](const Network& n, const std::string& s) {
        const auto b = n.invention_bias(parse_subaction(s));
        return py::make_tuple(b.movement, b.symmetry);
      })
      .def_property_readonly("weights", &Network::weights);

  m.def("discount_rate", &discount_rate, py::arg("interest_percent"));
  m.def("npv", [](const std::vector<double>& s, double r) { return npv(s, r); }, py::arg("series"), py::arg("r"));
  m.def("time_to_threshold", [](const std::vector<double>& s, double tau) {
    const auto t = time_to_threshold(s, tau);
    return py::make_tuple(t.iterations, t.censored);
  }, py::arg("series"), py::arg("tau"));
  m.def("piv", [](const std::vector<double>& s, const std::vector<double>& b) { return piv(s, b); },
        py::arg("series"), py::arg("baseline"));

  m.def("run_world", [](const std::string& config_json, std::uint64_t run_index) {
    const auto spec = parse_config(config_json);
    RunSeries s;
    {
      py::gil_scoped_release release;
      s = run(spec.world, run_index);
    }
    return series_dict(s);
  }, py::arg("config_json"), py::arg("run_index") = 0);

  m.def("effective_config", [](const std::string& config_json) {
    return effective_config(parse_config(config_json));
  });

  m.def("execute", [](const std::string& config_json, std::size_t workers, bool write) {
    const auto spec = parse_config(config_json);
    ExperimentResult r;
    {
      py::gil_scoped_release release;
      if (workers == 0) workers = workers_from_env();
      r = write ? execute(spec, workers) : compute(spec, workers);
    }
    return result_dict(r);
  }, py::arg("config_json"), py::arg("workers") = 0, py::arg("write") = true);

  m.def("preset_config", [](const std::string& name) {
    return effective_config(preset_spec(parse_preset(name)));
  });
}
