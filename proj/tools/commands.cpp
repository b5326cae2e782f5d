#include "commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "chaid/chaid.hpp"
#include "chaid/csv.hpp"
#include "chaid/error.hpp"
#include "chaid/ingest.hpp"
#include "chaid/tree.hpp"

namespace chaid::cli {

namespace {

struct RunConfig {
  std::string data;
  std::string schema;
  std::string model;
  std::string out;
  std::optional<double> alpha_merge;
  std::optional<double> alpha_split;
  std::optional<int> max_depth;
  std::optional<std::int64_t> min_parent;
  std::optional<std::int64_t> min_child;
  bool verbose = false;
};

std::string shortest(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string join(const std::vector<std::string>& items, const char* sep) {
  std::string out;
  for (const auto& item : items) {
    if (!out.empty()) out += sep;
    out += item;
  }
  return out;
}

std::string group_text(const PredictorSpec& spec, const std::vector<int>& group) {
  std::vector<std::string> labels;
  for (int code : group) labels.push_back(spec.categories[code]);
  return "{" + join(labels, ", ") + "}";
}

std::string distribution_text(const ClassDistribution& d) {
  std::vector<std::string> parts;
  for (std::size_t j = 0; j < d.classes.size(); ++j) {
    parts.push_back(d.classes[j] + "=" + fixed4(d.probabilities[j]));
  }
  return join(parts, " ");
}

void write_text(const std::string& path, const std::string& text,
                std::ostream& fallback) {
  if (path.empty()) {
    fallback << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error("cannot write '" + path + "'");
  file << text;
  if (!file) throw Error("failed writing '" + path + "'");
}

std::string summary_line(const Tree& tree) {
  return "nodes: " + std::to_string(tree.size()) +
         ", terminal: " + std::to_string(tree.terminal_count()) +
         ", depth: " + std::to_string(tree.depth());
}

void cmd_train(const RunConfig& config, std::ostream& out) {
  const auto schema = read_schema_file(config.schema);
  const auto raw = load_dataset_file(config.data, schema);

  GrowthParams params;
  if (config.alpha_merge) params.alpha_merge = *config.alpha_merge;
  if (config.alpha_split) params.alpha_split = *config.alpha_split;
  if (config.max_depth) params.max_depth = *config.max_depth;
  if (config.min_parent) params.min_parent_size = *config.min_parent;
  if (config.min_child) params.min_child_size = *config.min_child;
  params.validate();

  const auto data = prepare_dataset(raw);
  const auto tree = grow_tree(data, params);
  write_model_file(tree, config.model);

  const auto& report = raw.report;
  std::ostringstream text;
  text << summary_line(tree) << "\n";
  text << "split variables: " << join(tree.split_variables(), ", ") << "\n";
  text << "params: alpha_merge=" << shortest(params.alpha_merge)
       << " alpha_split=" << shortest(params.alpha_split)
       << " max_depth=" << params.max_depth
       << " min_parent=" << params.min_parent_size
       << " min_child=" << params.min_child_size << "\n";
  text << "rows: read " << report.rows_read << ", used " << report.rows_kept
       << ", rejected " << report.rows_rejected << "\n";
  if (config.verbose) {
    for (const auto& why : report.rejections) text << "  rejected " << why << "\n";
    for (const auto& [name, count] : report.missing) {
      if (count > 0) text << "  missing " << name << ": " << count << "\n";
    }
  }
  text << "leaves:\n";
  for (int id : tree.terminal_ids()) {
    const auto d = tree.distribution(id);
    text << "  node " << id << " (n=" << d.support << ", "
         << to_string(*tree.node(id).stop_reason)
         << "): " << distribution_text(d) << "\n";
  }
  out << text.str();
}

void cmd_predict(const RunConfig& config, std::ostream& err) {
  const auto tree = read_model_file(config.model);
  const auto& schema = tree.schema();
  const char delim = schema.delimiter;

  std::ifstream in(config.data, std::ios::binary);
  if (!in) throw Error("cannot open data file '" + config.data + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  auto table = parse_csv(buffer.str(), delim);

  if (table.header.empty()) {
    for (const auto* p : schema.predictors()) table.header.push_back(p->name);
  }
  for (const auto& name : tree.split_variables()) {
    if (std::find(table.header.begin(), table.header.end(), name) ==
        table.header.end()) {
      throw Error("input lacks predictor column '" + name + "'");
    }
  }

  const auto& classes = tree.target().classes;
  std::vector<std::string> header = table.header;
  header.push_back("leaf_id");
  header.push_back("predicted_class");
  for (const auto& c : classes) header.push_back("p_" + c);

  std::string text = format_csv_row(header, delim) + "\n";
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    std::map<std::string, std::string> cells;
    for (std::size_t c = 0; c < row.size(); ++c) cells[table.header[c]] = row[c];

    std::vector<std::string> fields = row;
    try {
      const auto record = encode_record(cells, schema);
      const auto routed = tree.route(record);
      for (const auto& w : routed.warnings) {
        err << "warning: row " << r + 1 << ": " << w << "\n";
      }
      const auto d = tree.distribution(routed.leaf);
      fields.push_back(std::to_string(routed.leaf));
      fields.push_back(classes[d.modal_index()]);
      for (double p : d.probabilities) fields.push_back(shortest(p));
    } catch (const Error& e) {
      err << "warning: row " << r + 1 << ": " << e.what() << "\n";
      fields.resize(header.size());
    }
    text += format_csv_row(fields, delim) + "\n";
  }
  write_text(config.out, text, err);
}

void inspect_node(const Tree& tree, int id, const std::string& edge,
                  int indent, std::ostringstream& text) {
  const auto& node = tree.node(id);
  text << std::string(static_cast<std::size_t>(indent) * 2, ' ') << "[" << id
       << "]";
  if (!edge.empty()) text << " " << edge;
  text << " n=" << node.support();
  if (node.split) {
    const auto& s = *node.split;
    text << " split " << tree.predictors()[s.predictor].name
         << " (chi2=" << shortest(s.statistic) << ", df=" << s.degrees_of_freedom
         << ", p=" << shortest(s.raw_p) << ", M=" << s.multiplier
         << ", adj.p=" << shortest(s.adjusted_p) << ")\n";
    const auto& spec = tree.predictors()[s.predictor];
    for (std::size_t g = 0; g < node.children.size(); ++g) {
      inspect_node(tree, node.children[g],
                   spec.name + " in " + group_text(spec, s.partition.groups[g]),
                   indent + 1, text);
    }
  } else {
    text << " terminal (" << to_string(*node.stop_reason)
         << "): " << distribution_text(tree.distribution(id)) << "\n";
  }
}

void cmd_inspect(const RunConfig& config, std::ostream& out) {
  const auto tree = read_model_file(config.model);
  std::ostringstream text;
  inspect_node(tree, 0, "", 0, text);
  write_text(config.out, text.str(), out);
}

void cmd_export_dot(const RunConfig& config, std::ostream& out) {
  const auto tree = read_model_file(config.model);
  write_text(config.out, export_dot(tree), out);
}

std::string one_line(std::string text) {
  std::replace(text.begin(), text.end(), '\n', ' ');
  while (!text.empty() && text.back() == ' ') text.pop_back();
  return text;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"CHAID classification trees: train, predict, inspect, export"};
  app.name("chaid");
  app.require_subcommand(1);

  RunConfig config;
  auto add_growth_flags = [&config](CLI::App* cmd) {
    cmd->add_option("--alpha-merge", config.alpha_merge,
                    "significance level for merging categories (0.05)");
    cmd->add_option("--alpha-split", config.alpha_split,
                    "significance level for accepting a split (0.05)");
    cmd->add_option("--max-depth", config.max_depth, "maximum tree depth (3)");
    cmd->add_option("--min-parent", config.min_parent,
                    "minimum records to split a node (10)");
    cmd->add_option("--min-child", config.min_child,
                    "minimum records per child (5)");
  };

  auto* train = app.add_subcommand("train", "grow a tree from data + schema");
  train->add_option("--data", config.data, "delimited input file")->required();
  train->add_option("--schema", config.schema, "schema JSON file")->required();
  train->add_option("--model", config.model, "model file to write")->required();
  add_growth_flags(train);
  train->add_flag("--verbose", config.verbose, "report rejected rows");

  auto* predict = app.add_subcommand("predict", "predict class distributions");
  predict->add_option("--model", config.model, "model file")->required();
  predict->add_option("--data", config.data, "delimited input file")->required();
  predict->add_option("--out", config.out, "predictions file")->required();
  predict->add_flag("--verbose", config.verbose);

  auto* inspect = app.add_subcommand("inspect", "print the tree");
  inspect->add_option("--model", config.model, "model file")->required();
  inspect->add_option("--out", config.out, "output file (default stdout)");
  inspect->add_flag("--verbose", config.verbose);

  auto* dot = app.add_subcommand("export-dot", "write a Graphviz digraph");
  dot->add_option("--model", config.model, "model file")->required();
  dot->add_option("--out", config.out, "output file (default stdout)");
  dot->add_flag("--verbose", config.verbose);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << one_line(e.what()) << "\n";
    return 2;
  }

  try {
    if (train->parsed()) {
      cmd_train(config, out);
    } else if (predict->parsed()) {
      cmd_predict(config, err);
    } else if (inspect->parsed()) {
      cmd_inspect(config, out);
    } else if (dot->parsed()) {
      cmd_export_dot(config, out);
    }
  } catch (const std::exception& e) {
    err << "error: " << one_line(e.what()) << "\n";
    return 1;
  }
  return 0;
}

}  // namespace chaid::cli
