#include "chaid/schema.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "chaid/error.hpp"
#include "json_io.hpp"

namespace chaid {

using nlohmann::ordered_json;

const char* to_string(Role role) {
  switch (role) {
    case Role::target:
      return "target";
    case Role::predictor:
      return "predictor";
    case Role::ignored:
      return "ignored";
  }
  return "?";
}

const char* to_string(Kind kind) {
  return kind == Kind::numeric ? "numeric" : "categorical";
}

const char* to_string(BinStrategy strategy) {
  switch (strategy) {
    case BinStrategy::equal_frequency:
      return "equal_frequency";
    case BinStrategy::equal_width:
      return "equal_width";
    case BinStrategy::explicit_boundaries:
      return "explicit_boundaries";
  }
  return "?";
}

Role role_from_string(const std::string& name) {
  if (name == "target") return Role::target;
  if (name == "predictor") return Role::predictor;
  if (name == "ignored") return Role::ignored;
  throw Error("unknown column role '" + name + "'");
}

Kind kind_from_string(const std::string& name) {
  if (name == "categorical") return Kind::categorical;
  if (name == "numeric") return Kind::numeric;
  throw Error("unknown column kind '" + name + "'");
}

BinStrategy bin_strategy_from_string(const std::string& name) {
  if (name == "equal_frequency") return BinStrategy::equal_frequency;
  if (name == "equal_width") return BinStrategy::equal_width;
  if (name == "explicit_boundaries") return BinStrategy::explicit_boundaries;
  throw Error("unknown binning strategy '" + name + "'");
}

namespace {

void validate_binning(const ColumnSpec& column) {
  const auto& b = *column.binning;
  const std::string where = "column '" + column.name + "': ";
  if (b.strategy == BinStrategy::explicit_boundaries) {
    if (b.boundaries.size() < 2) {
      throw Error(where + "explicit boundaries need at least two values");
    }
    if (std::adjacent_find(b.boundaries.begin(), b.boundaries.end(),
                           std::greater_equal<>()) != b.boundaries.end()) {
      throw Error(where + "explicit boundaries are not strictly increasing");
    }
  } else if (b.bin_count < 2) {
    throw Error(where + "bin_count must be at least 2");
  }
  if (!b.edges.empty()) {
    // e0 may equal e1 (an interval holding only the minimum); the rest rise.
    const bool ok = b.edges.size() >= 2 && b.edges[0] <= b.edges[1] &&
                    std::adjacent_find(b.edges.begin() + 1, b.edges.end(),
                                       std::greater_equal<>()) == b.edges.end();
    if (!ok) throw Error(where + "realized edges are not increasing");
  }
}

}  // namespace

void DatasetSchema::validate() const {
  std::set<std::string> names;
  int targets = 0;
  int predictors = 0;
  for (const auto& column : columns) {
    if (column.name.empty()) throw Error("schema: column with empty name");
    if (!names.insert(column.name).second) {
      throw Error("schema: duplicate column '" + column.name + "'");
    }
    if (column.role == Role::target) ++targets;
    if (column.role == Role::predictor) ++predictors;
    if (column.used() && column.kind == Kind::numeric && !column.binning) {
      throw Error("schema: numeric column '" + column.name +
                  "' needs a binning rule");
    }
    if (column.kind == Kind::categorical && column.binning) {
      throw Error("schema: categorical column '" + column.name +
                  "' cannot carry a binning rule");
    }
    if (column.binning) validate_binning(column);
    std::set<std::string> seen(column.categories.begin(),
                               column.categories.end());
    if (seen.size() != column.categories.size()) {
      throw Error("schema: column '" + column.name +
                  "' lists a category twice");
    }
  }
  if (targets != 1) {
    throw Error("schema: expected exactly one target column, found " +
                std::to_string(targets));
  }
  if (predictors < 1) throw Error("schema: no predictor columns");
}

const ColumnSpec& DatasetSchema::target() const {
  for (const auto& column : columns) {
    if (column.role == Role::target) return column;
  }
  throw Error("schema: no target column");
}

std::vector<const ColumnSpec*> DatasetSchema::predictors() const {
  std::vector<const ColumnSpec*> result;
  for (const auto& column : columns) {
    if (column.role == Role::predictor) result.push_back(&column);
  }
  return result;
}

const ColumnSpec* DatasetSchema::find(const std::string& name) const {
  for (const auto& column : columns) {
    if (column.name == name) return &column;
  }
  return nullptr;
}

namespace detail {

ordered_json schema_to_json(const DatasetSchema& schema) {
  ordered_json doc;
  doc["format_version"] = DatasetSchema::kFormatVersion;
  doc["delimiter"] = std::string(1, schema.delimiter);
  ordered_json columns = ordered_json::array();
  for (const auto& column : schema.columns) {
    ordered_json c;
    c["name"] = column.name;
    c["role"] = to_string(column.role);
    c["kind"] = to_string(column.kind);
    if (column.role == Role::predictor) c["scale"] = to_string(column.scale);
    if (column.binning) {
      const auto& b = *column.binning;
      ordered_json bj;
      bj["strategy"] = to_string(b.strategy);
      if (b.strategy == BinStrategy::explicit_boundaries) {
        bj["boundaries"] = b.boundaries;
      } else {
        bj["bin_count"] = b.bin_count;
      }
      if (!b.edges.empty()) bj["edges"] = b.edges;
      c["binning"] = std::move(bj);
    }
    if (!column.categories.empty()) c["categories"] = column.categories;
    columns.push_back(std::move(c));
  }
  doc["columns"] = std::move(columns);
  return doc;
}

DatasetSchema schema_from_json(const ordered_json& doc) {
  try {
    if (!doc.is_object()) throw Error("schema: document is not an object");
    const int version = doc.at("format_version").get<int>();
    if (version != DatasetSchema::kFormatVersion) {
      throw Error("schema: unsupported format_version " +
                  std::to_string(version));
    }
    DatasetSchema schema;
    if (doc.contains("delimiter")) {
      const auto d = doc["delimiter"].get<std::string>();
      if (d.size() != 1) throw Error("schema: delimiter must be one character");
      schema.delimiter = d[0];
    }
    for (const auto& c : doc.at("columns")) {
      ColumnSpec column;
      column.name = c.at("name").get<std::string>();
      column.role = role_from_string(c.at("role").get<std::string>());
      column.kind = kind_from_string(c.value("kind", std::string("categorical")));
      if (c.contains("scale")) {
        column.scale = scale_from_string(c["scale"].get<std::string>());
      }
      if (c.contains("binning")) {
        const auto& bj = c["binning"];
        BinningSpec b;
        b.strategy = bin_strategy_from_string(bj.at("strategy").get<std::string>());
        b.bin_count = bj.value("bin_count", 0);
        if (bj.contains("boundaries")) {
          b.boundaries = bj["boundaries"].get<std::vector<double>>();
        }
        if (bj.contains("edges")) b.edges = bj["edges"].get<std::vector<double>>();
        column.binning = std::move(b);
      }
      if (c.contains("categories")) {
        column.categories = c["categories"].get<std::vector<std::string>>();
      }
      schema.columns.push_back(std::move(column));
    }
    schema.validate();
    return schema;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("schema: malformed document: ") + e.what());
  }
}

}  // namespace detail

std::string schema_to_text(const DatasetSchema& schema) {
  return detail::schema_to_json(schema).dump(2) + "\n";
}

DatasetSchema schema_from_text(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("schema: malformed document: ") + e.what());
  }
  return detail::schema_from_json(doc);
}

DatasetSchema read_schema_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open schema file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return schema_from_text(buffer.str());
}

}  // namespace chaid
