#pragma once

// Column roles, kinds and discretization rules for tabular input.

#include <optional>
#include <string>
#include <vector>

#include "chaid/stats.hpp"

namespace chaid {

enum class Role { target, predictor, ignored };
enum class Kind { categorical, numeric };
enum class BinStrategy { equal_frequency, equal_width, explicit_boundaries };

const char* to_string(Role role);
const char* to_string(Kind kind);
const char* to_string(BinStrategy strategy);
Role role_from_string(const std::string& name);
Kind kind_from_string(const std::string& name);
BinStrategy bin_strategy_from_string(const std::string& name);

// Label given to missing values of float-scale predictors.
inline constexpr const char* kFloatingCategory = "NA";

struct BinningSpec {
  BinStrategy strategy = BinStrategy::equal_frequency;
  int bin_count = 0;               // equal_frequency / equal_width
  std::vector<double> boundaries;  // explicit_boundaries, e0 < e1 < ... < ek
  // Realized edges e0..ek after fitting; interval i (1-based) is
  // (e_{i-1}, e_i], the first one also contains e0.
  std::vector<double> edges;

  bool fitted() const { return edges.size() >= 2; }
  int interval_count() const {
    return fitted() ? static_cast<int>(edges.size()) - 1 : 0;
  }

  friend bool operator==(const BinningSpec&, const BinningSpec&) = default;
};

struct ColumnSpec {
  std::string name;
  Role role = Role::predictor;
  Kind kind = Kind::categorical;
  Scale scale = Scale::free;  // predictors only
  std::optional<BinningSpec> binning;
  // Category universe in merge order. Optional in a user schema (filled from
  // the data at fit time); always present in a model's realized schema.
  std::vector<std::string> categories;

  bool used() const { return role != Role::ignored; }

  friend bool operator==(const ColumnSpec&, const ColumnSpec&) = default;
};

struct DatasetSchema {
  static constexpr int kFormatVersion = 1;

  std::vector<ColumnSpec> columns;
  char delimiter = ',';

  // Throws chaid::Error describing the first violated rule.
  void validate() const;

  const ColumnSpec& target() const;
  std::vector<const ColumnSpec*> predictors() const;
  const ColumnSpec* find(const std::string& name) const;

  friend bool operator==(const DatasetSchema&, const DatasetSchema&) = default;
};

// Versioned JSON documents.
std::string schema_to_text(const DatasetSchema& schema);
DatasetSchema schema_from_text(const std::string& text);
DatasetSchema read_schema_file(const std::string& path);

}  // namespace chaid
