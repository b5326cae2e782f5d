#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "chaid/error.hpp"
#include "chaid/tree.hpp"
#include "json_io.hpp"

namespace chaid {

using nlohmann::ordered_json;

namespace {

ordered_json labels_of(const PredictorSpec& spec, const std::vector<int>& group) {
  ordered_json out = ordered_json::array();
  for (int code : group) out.push_back(spec.categories.at(code));
  return out;
}

}  // namespace

std::string serialize(const Tree& tree) {
  ordered_json doc;
  doc["format_version"] = kModelFormatVersion;
  doc["schema"] = detail::schema_to_json(tree.schema());

  ordered_json predictors = ordered_json::array();
  for (const auto& p : tree.predictors()) {
    ordered_json pj;
    pj["name"] = p.name;
    pj["scale"] = to_string(p.scale);
    pj["categories"] = p.categories;
    if (p.floating_category >= 0) pj["floating_category"] = p.floating_category;
    predictors.push_back(std::move(pj));
  }
  doc["predictors"] = std::move(predictors);
  doc["target"] = {{"name", tree.target().name},
                   {"classes", tree.target().classes}};

  const auto& params = tree.params();
  doc["params"] = {{"alpha_merge", params.alpha_merge},
                   {"alpha_split", params.alpha_split},
                   {"max_depth", params.max_depth},
                   {"min_parent_size", params.min_parent_size},
                   {"min_child_size", params.min_child_size}};

  ordered_json nodes = ordered_json::array();
  for (const auto& node : tree.nodes()) {
    ordered_json nj;
    nj["id"] = node.id;
    nj["depth"] = node.depth;
    nj["parent"] = node.parent ? ordered_json(*node.parent) : ordered_json();
    nj["class_counts"] = node.class_counts;
    if (node.split) {
      const auto& s = *node.split;
      const auto& spec = tree.predictors()[s.predictor];
      ordered_json groups = ordered_json::array();
      for (const auto& g : s.partition.groups) groups.push_back(labels_of(spec, g));
      nj["split"] = {{"predictor", spec.name},
                     {"groups", std::move(groups)},
                     {"statistic", s.statistic},
                     {"df", s.degrees_of_freedom},
                     {"raw_p", s.raw_p},
                     {"adjusted_p", s.adjusted_p},
                     {"multiplier", s.multiplier}};
      nj["children"] = node.children;
    } else {
      nj["children"] = ordered_json::array();
      nj["stop_reason"] = to_string(*node.stop_reason);
    }
    nodes.push_back(std::move(nj));
  }
  doc["nodes"] = std::move(nodes);
  return doc.dump(2) + "\n";
}

Tree deserialize(const std::string& document) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(document);
  } catch (const nlohmann::json::exception&) {
    throw Error("malformed model document: not valid JSON");
  }
  try {
    if (!doc.is_object() || !doc.contains("format_version")) {
      throw Error("malformed model document: missing format_version");
    }
    const int version = doc["format_version"].get<int>();
    if (version != kModelFormatVersion) {
      throw Error("model format_version " + std::to_string(version) +
                  " is not supported (expected " +
                  std::to_string(kModelFormatVersion) + ")");
    }
    DatasetSchema schema = detail::schema_from_json(doc.at("schema"));

    std::vector<PredictorSpec> predictors;
    for (const auto& pj : doc.at("predictors")) {
      PredictorSpec p;
      p.name = pj.at("name").get<std::string>();
      p.scale = scale_from_string(pj.at("scale").get<std::string>());
      p.categories = pj.at("categories").get<std::vector<std::string>>();
      p.floating_category = pj.value("floating_category", -1);
      predictors.push_back(std::move(p));
    }
    TargetSpec target;
    target.name = doc.at("target").at("name").get<std::string>();
    target.classes =
        doc.at("target").at("classes").get<std::vector<std::string>>();

    const auto& pj = doc.at("params");
    GrowthParams params;
    params.alpha_merge = pj.at("alpha_merge").get<double>();
    params.alpha_split = pj.at("alpha_split").get<double>();
    params.max_depth = pj.at("max_depth").get<int>();
    params.min_parent_size = pj.at("min_parent_size").get<std::int64_t>();
    params.min_child_size = pj.at("min_child_size").get<std::int64_t>();

    std::vector<TreeNode> nodes;
    for (const auto& nj : doc.at("nodes")) {
      TreeNode node;
      node.id = nj.at("id").get<int>();
      node.depth = nj.at("depth").get<int>();
      if (!nj.at("parent").is_null()) node.parent = nj["parent"].get<int>();
      node.class_counts = nj.at("class_counts").get<std::vector<std::int64_t>>();
      node.children = nj.at("children").get<std::vector<int>>();
      if (nj.contains("stop_reason")) {
        node.stop_reason =
            stop_reason_from_string(nj["stop_reason"].get<std::string>());
      }
      if (nj.contains("split")) {
        const auto& sj = nj["split"];
        const auto name = sj.at("predictor").get<std::string>();
        Split s;
        const auto it = std::find_if(predictors.begin(), predictors.end(),
                                     [&](const auto& p) { return p.name == name; });
        if (it == predictors.end()) {
          throw Error("invalid tree: node " + std::to_string(node.id) +
                      " splits on unknown predictor '" + name + "'");
        }
        s.predictor = static_cast<std::size_t>(it - predictors.begin());
        for (const auto& gj : sj.at("groups")) {
          std::vector<int> group;
          for (const auto& label : gj) {
            const int code = it->code_of(label.get<std::string>());
            if (code < 0) {
              throw Error("invalid tree: node " + std::to_string(node.id) +
                          " groups unknown category '" +
                          label.get<std::string>() + "'");
            }
            group.push_back(code);
          }
          s.partition.groups.push_back(std::move(group));
        }
        s.statistic = sj.at("statistic").get<double>();
        s.degrees_of_freedom = sj.at("df").get<int>();
        s.raw_p = sj.at("raw_p").get<double>();
        s.adjusted_p = sj.at("adjusted_p").get<double>();
        s.multiplier = sj.at("multiplier").get<std::string>();
        node.split = std::move(s);
      }
      nodes.push_back(std::move(node));
    }
    return Tree(std::move(predictors), std::move(target), std::move(schema),
                params, std::move(nodes));
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed model document: ") + e.what());
  }
}

Tree read_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open model file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return deserialize(buffer.str());
}

void write_model_file(const Tree& tree, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write model file '" + path + "'");
  out << serialize(tree);
  if (!out) throw Error("failed writing model file '" + path + "'");
}

namespace {

std::string escape(const std::string& text) {
  std::string out;
  for (char ch : text) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out;
}

std::string format_probability(double p) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", p);
  return buf;
}

}  // namespace

std::string export_dot(const Tree& tree) {
  std::ostringstream out;
  out << "digraph chaid {\n";
  out << "  node [shape=box, fontname=\"Helvetica\"];\n";
  for (const auto& node : tree.nodes()) {
    std::string label = "node " + std::to_string(node.id) +
                        "\\nn = " + std::to_string(node.support());
    if (node.split) {
      label += "\\nsplit: " +
               escape(tree.predictors()[node.split->predictor].name);
      char buf[64];
      std::snprintf(buf, sizeof buf, "\\nadj. p = %.3g", node.split->adjusted_p);
      label += buf;
    } else {
      const auto d = tree.distribution(node.id);
      for (std::size_t j = 0; j < d.classes.size(); ++j) {
        label += "\\n" + escape(d.classes[j]) + ": " +
                 format_probability(d.probabilities[j]);
      }
    }
    out << "  n" << node.id << " [label=\"" << label << "\"";
    if (node.terminal()) out << ", style=rounded";
    out << "];\n";
  }
  for (const auto& node : tree.nodes()) {
    if (!node.split) continue;
    const auto& spec = tree.predictors()[node.split->predictor];
    for (std::size_t g = 0; g < node.children.size(); ++g) {
      std::string label;
      for (int code : node.split->partition.groups[g]) {
        if (!label.empty()) label += ", ";
        label += escape(spec.categories[code]);
      }
      out << "  n" << node.id << " -> n" << node.children[g] << " [label=\""
          << label << "\"];\n";
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace chaid
