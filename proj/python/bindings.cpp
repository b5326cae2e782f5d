#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <Python.h>

#include "chaid/chaid.hpp"
#include "chaid/error.hpp"
#include "chaid/ingest.hpp"
#include "chaid/stats.hpp"
#include "chaid/tree.hpp"

namespace py = pybind11;

namespace {

py::int_ to_python(const chaid::BigInt& value) {
  const auto text = value.str();
  return py::reinterpret_steal<py::int_>(
      PyLong_FromString(text.c_str(), nullptr, 10));
}

chaid::ContingencyTable table_from(
    const std::vector<std::vector<std::int64_t>>& counts) {
  const std::size_t cols = counts.empty() ? 0 : counts.front().size();
  std::vector<int> row_labels(counts.size());
  std::vector<int> col_labels(cols);
  for (std::size_t i = 0; i < row_labels.size(); ++i) row_labels[i] = static_cast<int>(i);
  for (std::size_t j = 0; j < cols; ++j) col_labels[j] = static_cast<int>(j);
  return chaid::ContingencyTable(row_labels, col_labels, counts);
}

chaid::Tree train_files(const std::string& data, const std::string& schema,
                        const chaid::GrowthParams& params) {
  const auto raw = chaid::load_dataset_file(data, chaid::read_schema_file(schema));
  return chaid::grow_tree(chaid::prepare_dataset(raw), params);
}

}  // namespace

PYBIND11_MODULE(_chaid, m) {
  m.doc() = "CHAID classification trees";

  py::register_exception<chaid::Error>(m, "ChaidError", PyExc_ValueError);

  py::enum_<chaid::Scale>(m, "Scale")
      .value("monotonic", chaid::Scale::monotonic)
      .value("free", chaid::Scale::free)
      .value("float", chaid::Scale::floating);

  py::class_<chaid::ChiSquareResult>(m, "ChiSquareResult")
      .def_readonly("statistic", &chaid::ChiSquareResult::statistic)
      .def_readonly("degrees_of_freedom", &chaid::ChiSquareResult::degrees_of_freedom)
      .def_readonly("p_value", &chaid::ChiSquareResult::p_value);

  m.def("chi_square_p_value", &chaid::chi_square_p_value, py::arg("statistic"),
        py::arg("df"));
  m.def(
      "chi_square_test",
      [](const std::vector<std::vector<std::int64_t>>& counts) {
        return chaid::chi_square_test(table_from(counts));
      },
      py::arg("counts"), "Pearson test on a category x class count matrix.");
  m.def(
      "bonferroni_multiplier",
      [](chaid::Scale scale, int c, int r) {
        return to_python(chaid::bonferroni_multiplier({scale, c, r}));
      },
      py::arg("scale"), py::arg("c"), py::arg("r"));

  m.def(
      "bin_numeric",
      [](const std::vector<double>& values, const std::string& strategy,
         int bin_count, const std::vector<double>& boundaries) {
        chaid::BinningSpec spec;
        spec.strategy = chaid::bin_strategy_from_string(strategy);
        spec.bin_count = bin_count;
        spec.boundaries = boundaries;
        const auto binned = chaid::bin_numeric(values, spec);
        return py::make_tuple(binned.intervals, binned.edges);
      },
      py::arg("values"), py::arg("strategy") = "equal_frequency",
      py::arg("bin_count") = 12, py::arg("boundaries") = std::vector<double>{});

  py::class_<chaid::GrowthParams>(m, "GrowthParams")
      .def(py::init<>())
      .def_readwrite("alpha_merge", &chaid::GrowthParams::alpha_merge)
      .def_readwrite("alpha_split", &chaid::GrowthParams::alpha_split)
      .def_readwrite("max_depth", &chaid::GrowthParams::max_depth)
      .def_readwrite("min_parent_size", &chaid::GrowthParams::min_parent_size)
      .def_readwrite("min_child_size", &chaid::GrowthParams::min_child_size);

  py::class_<chaid::ClassDistribution>(m, "ClassDistribution")
      .def_readonly("classes", &chaid::ClassDistribution::classes)
      .def_readonly("probabilities", &chaid::ClassDistribution::probabilities)
      .def_readonly("support", &chaid::ClassDistribution::support)
      .def("as_dict", [](const chaid::ClassDistribution& d) {
        py::dict out;
        for (std::size_t j = 0; j < d.classes.size(); ++j) {
          out[py::str(d.classes[j])] = d.probabilities[j];
        }
        return out;
      });

  py::class_<chaid::Tree>(m, "Tree")
      .def_static("load", &chaid::read_model_file, py::arg("path"))
      .def_static("from_document", &chaid::deserialize, py::arg("document"))
      .def("save", [](const chaid::Tree& t, const std::string& path) {
        chaid::write_model_file(t, path);
      })
      .def("to_document", [](const chaid::Tree& t) { return chaid::serialize(t); })
      .def("to_dot", [](const chaid::Tree& t) { return chaid::export_dot(t); })
      .def_property_readonly("size", &chaid::Tree::size)
      .def_property_readonly("terminal_count", &chaid::Tree::terminal_count)
      .def_property_readonly("depth", &chaid::Tree::depth)
      .def_property_readonly("split_variables", &chaid::Tree::split_variables)
      .def_property_readonly("classes",
                             [](const chaid::Tree& t) { return t.target().classes; })
      .def(
          "route",
          [](const chaid::Tree& t, const std::map<std::string, std::string>& cells) {
            return t.route(chaid::encode_record(cells, t.schema())).leaf;
          },
          py::arg("record"), "Leaf id for a record of raw cell values.")
      .def(
          "predict",
          [](const chaid::Tree& t, const std::map<std::string, std::string>& cells) {
            return t.predict_distribution(chaid::encode_record(cells, t.schema()));
          },
          py::arg("record"));

  m.def("train", &train_files, py::arg("data"), py::arg("schema"),
        py::arg("params") = chaid::GrowthParams{},
        "Load a delimited file against a schema file and grow a tree.");

  m.attr("__version__") = "0.1.0";
}
