#pragma once

// Encoded training data: every predictor and the target reduced to integer
// category codes.

#include <cstddef>
#include <string>
#include <vector>

#include "chaid/schema.hpp"
#include "chaid/stats.hpp"

namespace chaid {

inline constexpr int kMissing = -1;

struct PredictorSpec {
  std::string name;
  Scale scale = Scale::free;
  // Order is meaningful for monotonic and float scales.
  std::vector<std::string> categories;
  // Index into `categories`; required for float scale, -1 otherwise.
  int floating_category = -1;

  void validate() const;
  int code_of(const std::string& label) const;  // -1 if unknown

  friend bool operator==(const PredictorSpec&, const PredictorSpec&) = default;
};

struct TargetSpec {
  std::string name;
  std::vector<std::string> classes;

  friend bool operator==(const TargetSpec&, const TargetSpec&) = default;
};

// Disjoint groups of original category codes, one per child of a split.
struct CategoryPartition {
  std::vector<std::vector<int>> groups;

  std::size_t size() const { return groups.size(); }
  // group index of each code in [0, category_count), -1 when absent.
  std::vector<int> group_lookup(std::size_t category_count) const;

  friend bool operator==(const CategoryPartition&,
                         const CategoryPartition&) = default;
};

struct Dataset {
  std::vector<PredictorSpec> predictors;
  TargetSpec target;
  std::vector<std::vector<int>> columns;  // one per predictor, kMissing allowed
  std::vector<int> target_codes;
  // Realized schema the codes were produced with. Datasets assembled directly
  // from codes get a synthesized all-categorical schema.
  DatasetSchema schema;

  std::size_t size() const { return target_codes.size(); }

  // Builds a dataset from codes and synthesizes its schema.
  static Dataset from_codes(std::vector<PredictorSpec> predictors,
                            TargetSpec target,
                            std::vector<std::vector<int>> columns,
                            std::vector<int> target_codes);

  void validate() const;

  // Same data with rows reordered: result row i = this row order[i].
  Dataset permuted(const std::vector<std::size_t>& order) const;
};

}  // namespace chaid
