#include "chaid/tree.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "chaid/error.hpp"

namespace chaid {

void GrowthParams::validate() const {
  auto in_unit = [](double a) { return a > 0.0 && a < 1.0; };
  if (!in_unit(alpha_merge)) throw Error("alpha_merge must lie in (0, 1)");
  if (!in_unit(alpha_split)) throw Error("alpha_split must lie in (0, 1)");
  if (max_depth < 1) throw Error("max_depth must be at least 1");
  if (min_child_size < 1) throw Error("min_child_size must be at least 1");
  if (min_parent_size < 2 * min_child_size) {
    throw Error("min_parent_size must be at least twice min_child_size");
  }
}

const char* to_string(StopReason reason) {
  switch (reason) {
    case StopReason::no_significant_predictor:
      return "no_significant_predictor";
    case StopReason::max_depth:
      return "max_depth";
    case StopReason::min_parent:
      return "min_parent";
    case StopReason::would_create_small_child:
      return "would_create_small_child";
    case StopReason::pure_node:
      return "pure_node";
  }
  return "?";
}

StopReason stop_reason_from_string(const std::string& name) {
  for (auto r : {StopReason::no_significant_predictor, StopReason::max_depth,
                 StopReason::min_parent, StopReason::would_create_small_child,
                 StopReason::pure_node}) {
    if (name == to_string(r)) return r;
  }
  throw Error("unknown stop reason '" + name + "'");
}

std::int64_t TreeNode::support() const {
  return std::accumulate(class_counts.begin(), class_counts.end(),
                         std::int64_t{0});
}

std::size_t ClassDistribution::modal_index() const {
  return static_cast<std::size_t>(
      std::max_element(probabilities.begin(), probabilities.end()) -
      probabilities.begin());
}

Tree::Tree(std::vector<PredictorSpec> predictors, TargetSpec target,
           DatasetSchema schema, GrowthParams params,
           std::vector<TreeNode> nodes)
    : predictors_(std::move(predictors)),
      target_(std::move(target)),
      schema_(std::move(schema)),
      params_(params),
      nodes_(std::move(nodes)) {
  check_invariants();
}

void Tree::check_invariants() const {
  auto fail = [](const std::string& why) { throw Error("invalid tree: " + why); };
  auto node_name = [](int id) { return "node " + std::to_string(id); };

  if (predictors_.empty()) fail("no predictors");
  for (const auto& p : predictors_) p.validate();
  if (target_.classes.empty()) fail("target has no classes");
  try {
    params_.validate();
    schema_.validate();
  } catch (const Error& e) {
    fail(e.what());
  }
  if (nodes_.empty()) fail("no nodes");

  const int n = static_cast<int>(nodes_.size());
  std::vector<int> parent_seen(n, 0);
  for (int i = 0; i < n; ++i) {
    const auto& node = nodes_[i];
    if (node.id != i) fail(node_name(i) + " carries id " + std::to_string(node.id));
    if (node.class_counts.size() != target_.classes.size()) {
      fail(node_name(i) + " has " + std::to_string(node.class_counts.size()) +
           " class counts for " + std::to_string(target_.classes.size()) +
           " classes");
    }
    if (std::any_of(node.class_counts.begin(), node.class_counts.end(),
                    [](auto v) { return v < 0; })) {
      fail(node_name(i) + " has a negative class count");
    }

    if (i == 0) {
      if (node.parent) fail("root has a parent");
      if (node.depth != 0) fail("root depth is not 0");
    } else {
      if (!node.parent) fail(node_name(i) + " is a second root");
      const int p = *node.parent;
      if (p < 0 || p >= n) {
        fail(node_name(i) + " references missing parent " + std::to_string(p));
      }
      const auto& siblings = nodes_[p].children;
      if (std::find(siblings.begin(), siblings.end(), i) == siblings.end()) {
        fail(node_name(i) + " is not listed among the children of its parent");
      }
      if (node.depth != nodes_[p].depth + 1) {
        fail(node_name(i) + " has inconsistent depth");
      }
    }

    const bool terminal = node.children.empty();
    if (terminal != !node.split.has_value()) {
      fail(node_name(i) + " must have a split iff it has children");
    }
    if (terminal != node.stop_reason.has_value()) {
      fail(node_name(i) + " must have a stop reason iff it is terminal");
    }
    if (terminal) continue;

    const auto& split = *node.split;
    if (split.predictor >= predictors_.size()) {
      fail(node_name(i) + " splits on an unknown predictor");
    }
    const auto& spec = predictors_[split.predictor];
    if (split.partition.size() != node.children.size()) {
      fail(node_name(i) + " has " + std::to_string(node.children.size()) +
           " children for " + std::to_string(split.partition.size()) +
           " category groups");
    }
    if (node.children.size() < 2) fail(node_name(i) + " has a single child");
    std::set<int> used;
    for (const auto& group : split.partition.groups) {
      if (group.empty()) fail(node_name(i) + " has an empty category group");
      for (int code : group) {
        if (code < 0 || code >= static_cast<int>(spec.categories.size())) {
          fail(node_name(i) + " groups an unknown category");
        }
        if (!used.insert(code).second) {
          fail(node_name(i) + " has overlapping category groups");
        }
      }
    }

    std::vector<std::int64_t> sum(target_.classes.size(), 0);
    for (int child : node.children) {
      if (child <= i || child >= n) {
        fail(node_name(i) + " references missing child " + std::to_string(child));
      }
      if (nodes_[child].parent != i) {
        fail(node_name(child) + " does not point back to parent " +
             std::to_string(i));
      }
      ++parent_seen[child];
      const auto& cc = nodes_[child].class_counts;
      for (std::size_t j = 0; j < sum.size() && j < cc.size(); ++j) {
        sum[j] += cc[j];
      }
    }
    if (sum != node.class_counts) {
      fail(node_name(i) + " class counts differ from the sum over its children");
    }
  }
  for (int i = 1; i < n; ++i) {
    if (parent_seen[i] != 1) fail(node_name(i) + " is not reachable once");
  }
}

const TreeNode& Tree::node(int id) const {
  if (id < 0 || id >= static_cast<int>(nodes_.size())) {
    throw Error("no node " + std::to_string(id));
  }
  return nodes_[id];
}

std::size_t Tree::terminal_count() const {
  return static_cast<std::size_t>(std::count_if(
      nodes_.begin(), nodes_.end(), [](const auto& n) { return n.terminal(); }));
}

int Tree::depth() const {
  int d = 0;
  for (const auto& n : nodes_) d = std::max(d, n.depth);
  return d;
}

std::vector<std::string> Tree::split_variables() const {
  std::vector<std::string> names;
  for (const auto& n : nodes_) {
    if (!n.split) continue;
    const auto& name = predictors_[n.split->predictor].name;
    if (std::find(names.begin(), names.end(), name) == names.end()) {
      names.push_back(name);
    }
  }
  return names;
}

std::vector<int> Tree::terminal_ids() const {
  std::vector<int> ids;
  for (const auto& n : nodes_) {
    if (n.terminal()) ids.push_back(n.id);
  }
  return ids;
}

int Tree::largest_child(const TreeNode& node) const {
  int best = node.children.front();
  for (int child : node.children) {
    if (nodes_[child].support() > nodes_[best].support()) best = child;
  }
  return best;
}

RouteResult Tree::route(const Record& record,
                        NovelCategoryPolicy policy) const {
  RouteResult result;
  const TreeNode* node = &nodes_.front();
  while (!node->terminal()) {
    const auto& split = *node->split;
    const auto& spec = predictors_[split.predictor];
    const auto it = record.find(spec.name);
    if (it == record.end()) {
      throw Error("unroutable record: no value for '" + spec.name + "'");
    }
    std::string label = it->second;
    if (label.empty() && spec.scale == Scale::floating) {
      label = spec.categories[spec.floating_category];
    }

    int next = -1;
    if (label.empty()) {
      next = largest_child(*node);
    } else {
      const int code = spec.code_of(label);
      for (std::size_t g = 0; g < split.partition.size() && code >= 0; ++g) {
        const auto& group = split.partition.groups[g];
        if (std::find(group.begin(), group.end(), code) != group.end()) {
          next = node->children[g];
          break;
        }
      }
      if (next < 0) {
        const std::string what = "category '" + label + "' of '" + spec.name +
                                 "' unseen at node " + std::to_string(node->id);
        if (policy == NovelCategoryPolicy::reject) {
          throw Error("unroutable record: " + what);
        }
        next = largest_child(*node);
        result.warnings.push_back(what + ", routed to largest child " +
                                  std::to_string(next));
      }
    }
    node = &nodes_[next];
  }
  result.leaf = node->id;
  return result;
}

int Tree::route_encoded(const Dataset& data, std::size_t row) const {
  const TreeNode* node = &nodes_.front();
  while (!node->terminal()) {
    const auto& split = *node->split;
    const int code = data.columns.at(split.predictor).at(row);
    int next = -1;
    for (std::size_t g = 0; g < split.partition.size() && code >= 0; ++g) {
      const auto& group = split.partition.groups[g];
      if (std::find(group.begin(), group.end(), code) != group.end()) {
        next = node->children[g];
        break;
      }
    }
    if (next < 0) next = largest_child(*node);
    node = &nodes_[next];
  }
  return node->id;
}

ClassDistribution Tree::distribution(int node_id) const {
  const auto& n = node(node_id);
  ClassDistribution d;
  d.classes = target_.classes;
  d.support = n.support();
  d.probabilities.reserve(n.class_counts.size());
  for (auto count : n.class_counts) {
    d.probabilities.push_back(d.support > 0 ? static_cast<double>(count) /
                                                  static_cast<double>(d.support)
                                            : 0.0);
  }
  return d;
}

ClassDistribution Tree::predict_distribution(const Record& record) const {
  return distribution(route(record).leaf);
}

}  // namespace chaid
