#pragma once

// Tree growth: per-predictor category merging, Bonferroni-adjusted split
// selection and the stopping rules, driven breadth-first from the root.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "chaid/dataset.hpp"
#include "chaid/stats.hpp"
#include "chaid/tree.hpp"

namespace chaid {

struct SplitCandidate {
  std::size_t predictor = 0;
  CategoryPartition partition;
  Scale effective_scale = Scale::free;
  int observed_categories = 0;  // c
  double statistic = 0.0;
  int degrees_of_freedom = 0;
  double raw_p = 1.0;
  BigInt multiplier = 1;
  double adjusted_p = 1.0;
  // Records per child, missing predictor values counted in the largest child.
  std::vector<std::int64_t> child_sizes;
};

// Group counts observed after each merge step, starting with the singletons.
struct MergeTrace {
  std::vector<std::size_t> group_counts;
};

CategoryPartition merge_categories(const Dataset& data,
                                   std::span<const std::size_t> rows,
                                   std::size_t predictor, double alpha_merge,
                                   MergeTrace* trace = nullptr);

// Same procedure on a precomputed category x class count matrix (rows indexed
// by category code). Categories with no records are ignored.
CategoryPartition merge_category_counts(
    const std::vector<std::vector<std::int64_t>>& counts,
    const PredictorSpec& predictor, double alpha_merge,
    MergeTrace* trace = nullptr);

std::optional<SplitCandidate> evaluate_predictor(
    const Dataset& data, std::span<const std::size_t> rows,
    std::size_t predictor, double alpha_merge);

// Smallest adjusted p, then smallest raw p, then earliest predictor.
std::optional<SplitCandidate> best_split(const Dataset& data,
                                         std::span<const std::size_t> rows,
                                         const GrowthParams& params);

struct NodeFacts {
  int depth = 0;
  std::int64_t size = 0;
  bool pure = false;
};

struct StopDecision {
  bool stop = false;
  std::optional<StopReason> reason;
};

StopDecision should_stop(const NodeFacts& node,
                         const std::optional<SplitCandidate>& candidate,
                         const GrowthParams& params);

Tree grow_tree(const Dataset& data, const GrowthParams& params);

}  // namespace chaid
