#include "chaid/dataset.hpp"

#include <algorithm>
#include <set>

#include "chaid/error.hpp"

namespace chaid {

void PredictorSpec::validate() const {
  if (categories.empty()) {
    throw Error("predictor '" + name + "': no categories");
  }
  std::set<std::string> seen(categories.begin(), categories.end());
  if (seen.size() != categories.size()) {
    throw Error("predictor '" + name + "': duplicate category");
  }
  const int n = static_cast<int>(categories.size());
  if (scale == Scale::floating) {
    if (floating_category < 0 || floating_category >= n) {
      throw Error("predictor '" + name +
                  "': float scale needs one floating category");
    }
  } else if (floating_category != -1) {
    throw Error("predictor '" + name +
                "': only float scale may designate a floating category");
  }
}

int PredictorSpec::code_of(const std::string& label) const {
  const auto it = std::find(categories.begin(), categories.end(), label);
  return it == categories.end() ? -1
                                : static_cast<int>(it - categories.begin());
}

std::vector<int> CategoryPartition::group_lookup(
    std::size_t category_count) const {
  std::vector<int> lookup(category_count, -1);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (int code : groups[g]) {
      if (code >= 0 && static_cast<std::size_t>(code) < category_count) {
        lookup[code] = static_cast<int>(g);
      }
    }
  }
  return lookup;
}

Dataset Dataset::from_codes(std::vector<PredictorSpec> predictors,
                            TargetSpec target,
                            std::vector<std::vector<int>> columns,
                            std::vector<int> target_codes) {
  Dataset data;
  for (const auto& p : predictors) {
    ColumnSpec column;
    column.name = p.name;
    column.role = Role::predictor;
    column.kind = Kind::categorical;
    column.scale = p.scale;
    column.categories = p.categories;
    data.schema.columns.push_back(std::move(column));
  }
  ColumnSpec t;
  t.name = target.name;
  t.role = Role::target;
  t.kind = Kind::categorical;
  t.categories = target.classes;
  data.schema.columns.push_back(std::move(t));

  data.predictors = std::move(predictors);
  data.target = std::move(target);
  data.columns = std::move(columns);
  data.target_codes = std::move(target_codes);
  data.validate();
  return data;
}

void Dataset::validate() const {
  if (predictors.empty()) throw Error("dataset: no predictors");
  if (target.classes.empty()) throw Error("dataset: target has no classes");
  if (columns.size() != predictors.size()) {
    throw Error("dataset: column count does not match predictor count");
  }
  for (std::size_t p = 0; p < predictors.size(); ++p) {
    predictors[p].validate();
    if (predictors[p].name == target.name) {
      throw Error("dataset: predictor '" + target.name + "' is also the target");
    }
    if (columns[p].size() != size()) {
      throw Error("dataset: column '" + predictors[p].name +
                  "' has the wrong length");
    }
    const int n = static_cast<int>(predictors[p].categories.size());
    for (int code : columns[p]) {
      if (code != kMissing && (code < 0 || code >= n)) {
        throw Error("dataset: column '" + predictors[p].name +
                    "' holds an unknown category code");
      }
    }
  }
  const int classes = static_cast<int>(target.classes.size());
  for (int code : target_codes) {
    if (code < 0 || code >= classes) {
      throw Error("dataset: target holds an unknown class code");
    }
  }
}

Dataset Dataset::permuted(const std::vector<std::size_t>& order) const {
  if (order.size() != size()) throw Error("dataset: bad permutation length");
  Dataset out = *this;
  for (std::size_t p = 0; p < columns.size(); ++p) {
    for (std::size_t i = 0; i < order.size(); ++i) {
      out.columns[p][i] = columns[p][order[i]];
    }
  }
  for (std::size_t i = 0; i < order.size(); ++i) {
    out.target_codes[i] = target_codes[order[i]];
  }
  return out;
}

}  // namespace chaid
