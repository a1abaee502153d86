#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "nnmbfl/errors.hpp"
#include "nnmbfl/model_io.hpp"
#include "nnmbfl/mutation.hpp"
#include "nnmbfl/pipeline.hpp"
#include "nnmbfl/report.hpp"
#include "nnmbfl/suspicion.hpp"

namespace py = pybind11;
using namespace nnmbfl;

namespace {

Formula formula_arg(const std::string& name) {
  if (auto f = parse_formula(name)) return *f;
  throw py::value_error("unknown formula '" + name + "'");
}

std::optional<ImpactType> impact_arg(const std::optional<std::string>& name) {
  if (!name) return std::nullopt;
  if (*name == "type1") return ImpactType::type1;
  if (*name == "type2") return ImpactType::type2;
  throw py::value_error("unknown impact type '" + *name + "'");
}

py::dict descriptor_dict(const MutantDescriptor& d) {
  py::dict out;
  out["id"] = d.id;
  out["layer"] = d.layer_id;
  out["neuron"] = d.neuron_index;
  out["mutator"] = std::string(to_string(d.mutator));
  out["operation"] = to_string(d.operation);
  out["description"] = d.description;
  return out;
}

std::vector<double> forward_flat(const SequentialModel& m, const std::vector<double>& input) {
  const Tensor out = forward(m, Tensor(m.input_shape, input));
  return {out.values().begin(), out.values().end()};
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "Mutation-based fault localization for sequential neural networks.";

  auto base = py::register_exception<Error>(mod, "Error", PyExc_RuntimeError);
  py::register_exception<ShapeError>(mod, "ShapeError", base);
  py::register_exception<ParseError>(mod, "ParseError", base);
  py::register_exception<SchemaError>(mod, "SchemaError", base);
  py::register_exception<IoError>(mod, "IoError", base);
  py::register_exception<InvalidFraction>(mod, "InvalidFraction", base);

  py::class_<SequentialModel>(mod, "Model")
      .def_static("load", [](const std::filesystem::path& p) { return load_model(p); }, py::arg("path"))
      .def_static("parse", [](const std::string& text) { return parse_model(text, "<string>"); }, py::arg("text"))
      .def("to_json", [](const SequentialModel& m) { return serialize_model(m); })
      .def("save", [](const SequentialModel& m, const std::filesystem::path& p) { save_model(m, p); },
           py::arg("path"))
      .def_property_readonly("input_shape", [](const SequentialModel& m) { return m.input_shape; })
      .def_property_readonly("layer_kinds",
                             [](const SequentialModel& m) {
                               std::vector<std::string> kinds;
                               for (const auto& l : m.layers) kinds.emplace_back(layer_kind(l));
                               return kinds;
                             })
      .def_property_readonly("parameter_count", &SequentialModel::parameter_count)
      .def("output_shapes", [](const SequentialModel& m) { return validate_shapes(m); })
      .def("forward", &forward_flat, py::arg("input"),
           "Run one input given as a flat row-major list; returns the flat output.")
      .def("__len__", [](const SequentialModel& m) { return m.layers.size(); });

  mod.def(
      "mutants",
      [](const SequentialModel& m, bool demo) {
        py::list out;
        for (const auto& d : generate_mutants(m, demo ? Catalog::demo : Catalog::full)) out.append(descriptor_dict(d));
        return out;
      },
      py::arg("model"), py::arg("demo_profile") = false);

  mod.def(
      "select",
      [](const SequentialModel& m, double fraction, std::uint64_t seed, bool demo) {
        std::vector<std::size_t> ids;
        for (const auto& d : select_mutants(generate_mutants(m, demo ? Catalog::demo : Catalog::full), fraction, seed))
          ids.push_back(d.id);
        return ids;
      },
      py::arg("model"), py::arg("fraction"), py::arg("seed") = 0, py::arg("demo_profile") = false,
      "Ids of the seeded subset of the model's mutant pool.");

  mod.def(
      "localize",
      [](const std::filesystem::path& model, const std::filesystem::path& data, const std::string& formula,
         const std::optional<std::string>& impact, double threshold, double select_fraction, std::uint64_t seed,
         std::size_t workers, bool demo_profile) {
        RunConfig c;
        c.model_path = model;
        c.data_path = data;
        c.formula = formula_arg(formula);
        c.impact = impact_arg(impact);
        c.threshold = threshold;
        c.select_fraction = select_fraction;
        c.seed = seed;
        c.workers = workers;
        c.catalog = demo_profile ? Catalog::demo : Catalog::full;
        RunResult r;
        {
          py::gil_scoped_release release;
          r = run(c);
        }
        py::dict out;
        out["exit_code"] = r.exit_code;
        out["console"] = r.console;
        out["diagnostics"] = r.diagnostics;
        out["report_json"] = r.report ? py::object(py::str(render_report(*r.report, ReportFormat::json)))
                                      : py::object(py::none());
        return out;
      },
      py::arg("model"), py::arg("data"), py::arg("formula") = "metallaxis-sbi", py::arg("impact") = py::none(),
      py::arg("threshold") = 0.001, py::arg("select_fraction") = 1.0, py::arg("seed") = 0,
      py::arg("workers") = 0, py::arg("demo_profile") = false);

  mod.def("sbi", &sbi_mutant, py::arg("n_fail_impacted"), py::arg("n_pass_impacted"));
  mod.def("ochiai", &ochiai_mutant, py::arg("n_fail_impacted"), py::arg("n_pass_impacted"),
          py::arg("total_failing"));
  mod.def("muse_alpha", &muse_alpha, py::arg("fail_to_pass"), py::arg("pass_to_fail"), py::arg("total_failing"),
          py::arg("total_passing"));
}
