#pragma once

// Immutable CHAID tree: structure, routing, leaf class distributions,
// model documents and DOT export.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chaid/dataset.hpp"
#include "chaid/schema.hpp"

namespace chaid {

struct GrowthParams {
  double alpha_merge = 0.05;
  double alpha_split = 0.05;
  int max_depth = 3;
  std::int64_t min_parent_size = 10;
  std::int64_t min_child_size = 5;

  void validate() const;

  friend bool operator==(const GrowthParams&, const GrowthParams&) = default;
};

enum class StopReason {
  no_significant_predictor,
  max_depth,
  min_parent,
  would_create_small_child,
  pure_node,
};

const char* to_string(StopReason reason);
StopReason stop_reason_from_string(const std::string& name);

struct Split {
  std::size_t predictor = 0;  // index into Tree::predictors()
  CategoryPartition partition;  // one group per child, in child order
  double statistic = 0.0;
  int degrees_of_freedom = 0;
  double raw_p = 1.0;
  double adjusted_p = 1.0;
  std::string multiplier;  // decimal, may exceed 64 bits

  friend bool operator==(const Split&, const Split&) = default;
};

struct TreeNode {
  int id = 0;
  int depth = 0;
  std::optional<int> parent;
  std::optional<Split> split;
  std::vector<int> children;
  std::vector<std::int64_t> class_counts;  // aligned with target classes
  std::optional<StopReason> stop_reason;   // terminal nodes only

  bool terminal() const { return children.empty(); }
  std::int64_t support() const;

  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

struct ClassDistribution {
  std::vector<std::string> classes;  // schema order
  std::vector<double> probabilities;
  std::int64_t support = 0;

  // Most probable class; ties go to the earlier class.
  std::size_t modal_index() const;
};

// A predictor-name -> category-label view of one record. Empty labels are
// missing values.
using Record = std::map<std::string, std::string>;

enum class NovelCategoryPolicy {
  largest_child,  // route to the child with the largest support, warn
  reject,         // throw "unroutable record"
};

struct RouteResult {
  int leaf = 0;
  std::vector<std::string> warnings;
};

class Tree {
 public:
  // Checks every structural invariant; throws chaid::Error naming the first
  // one violated.
  Tree(std::vector<PredictorSpec> predictors, TargetSpec target,
       DatasetSchema schema, GrowthParams params, std::vector<TreeNode> nodes);

  const std::vector<PredictorSpec>& predictors() const { return predictors_; }
  const TargetSpec& target() const { return target_; }
  const DatasetSchema& schema() const { return schema_; }
  const GrowthParams& params() const { return params_; }
  const std::vector<TreeNode>& nodes() const { return nodes_; }
  const TreeNode& node(int id) const;
  const TreeNode& root() const { return nodes_.front(); }

  std::size_t size() const { return nodes_.size(); }
  std::size_t terminal_count() const;
  int depth() const;
  // Predictor names in breadth-first order of first use.
  std::vector<std::string> split_variables() const;
  std::vector<int> terminal_ids() const;

  RouteResult route(const Record& record,
                    NovelCategoryPolicy policy =
                        NovelCategoryPolicy::largest_child) const;
  // Routes row `row` of an encoded dataset sharing this tree's predictors.
  int route_encoded(const Dataset& data, std::size_t row) const;

  ClassDistribution distribution(int node_id) const;
  ClassDistribution predict_distribution(const Record& record) const;

  friend bool operator==(const Tree&, const Tree&) = default;

 private:
  int largest_child(const TreeNode& node) const;
  void check_invariants() const;

  std::vector<PredictorSpec> predictors_;
  TargetSpec target_;
  DatasetSchema schema_;
  GrowthParams params_;
  std::vector<TreeNode> nodes_;
};

// Model document: versioned JSON text, deterministic byte-for-byte.
inline constexpr int kModelFormatVersion = 1;
std::string serialize(const Tree& tree);
Tree deserialize(const std::string& document);
Tree read_model_file(const std::string& path);
void write_model_file(const Tree& tree, const std::string& path);

// Graphviz digraph, nodes in id order.
std::string export_dot(const Tree& tree);

}  // namespace chaid
