#include <algorithm>
#include <deque>
#include <numeric>

#include "chaid/chaid.hpp"
#include "chaid/error.hpp"

namespace chaid {

namespace {

using CountMatrix = std::vector<std::vector<std::int64_t>>;

struct Group {
  std::vector<int> members;  // sorted category codes
  bool floating = false;     // holds the floating category
  std::vector<std::int64_t> counts;

  // A group holding only the floating category.
  bool floating_only(int floating_code) const {
    return members.size() == 1 && members.front() == floating_code;
  }
};

// p-value of the 2 x J test between two groups; identical single-class
// groups are maximally mergeable.
double pair_p_value(const Group& a, const Group& b) {
  std::vector<std::vector<std::int64_t>> counts{a.counts, b.counts};
  std::vector<int> cols(a.counts.size());
  std::iota(cols.begin(), cols.end(), 0);
  ContingencyTable table({0, 1}, std::move(cols), std::move(counts));
  if (table.rows() < 2 || table.cols() < 2) return 1.0;
  return chi_square_test(table).p_value;
}

std::vector<std::pair<std::size_t, std::size_t>> eligible_pairs(
    const std::vector<Group>& groups, const PredictorSpec& predictor) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  const std::size_t n = groups.size();
  switch (predictor.scale) {
    case Scale::free:
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
      }
      break;
    case Scale::monotonic:
      for (std::size_t i = 0; i + 1 < n; ++i) pairs.emplace_back(i, i + 1);
      break;
    case Scale::floating: {
      // Ordered groups come first; a lone floating group is kept last.
      const int fc = predictor.floating_category;
      const bool lone = groups.back().floating_only(fc);
      const std::size_t ordered = lone ? n - 1 : n;
      for (std::size_t i = 0; i + 1 < ordered; ++i) pairs.emplace_back(i, i + 1);
      if (lone) {
        for (std::size_t i = 0; i < ordered; ++i) pairs.emplace_back(i, n - 1);
      }
      break;
    }
  }
  return pairs;
}

CountMatrix tabulate(const Dataset& data, std::span<const std::size_t> rows,
                     std::size_t predictor, std::int64_t* missing) {
  const auto& column = data.columns[predictor];
  CountMatrix counts(data.predictors[predictor].categories.size(),
                     std::vector<std::int64_t>(data.target.classes.size(), 0));
  std::int64_t skipped = 0;
  for (std::size_t row : rows) {
    const int code = column[row];
    if (code == kMissing) {
      ++skipped;
      continue;
    }
    ++counts[code][data.target_codes[row]];
  }
  if (missing) *missing = skipped;
  return counts;
}

bool has_records(const std::vector<std::int64_t>& row) {
  return std::any_of(row.begin(), row.end(), [](auto v) { return v > 0; });
}

std::optional<SplitCandidate> evaluate_counts(const CountMatrix& counts,
                                              std::int64_t missing,
                                              const PredictorSpec& spec,
                                              std::size_t predictor,
                                              double alpha_merge) {
  int observed = 0;
  bool floating_seen = false;
  for (std::size_t code = 0; code < counts.size(); ++code) {
    if (has_records(counts[code])) {
      ++observed;
      if (static_cast<int>(code) == spec.floating_category) floating_seen = true;
    }
  }
  if (observed < 2) return std::nullopt;

  auto partition = merge_category_counts(counts, spec, alpha_merge);
  const int r = static_cast<int>(partition.size());
  if (r < 2) return std::nullopt;

  std::vector<std::vector<std::int64_t>> grouped;
  for (const auto& group : partition.groups) {
    std::vector<std::int64_t> row(counts.front().size(), 0);
    for (int code : group) {
      for (std::size_t j = 0; j < row.size(); ++j) row[j] += counts[code][j];
    }
    grouped.push_back(std::move(row));
  }
  std::vector<int> row_labels(r);
  std::iota(row_labels.begin(), row_labels.end(), 0);
  std::vector<int> col_labels(counts.front().size());
  std::iota(col_labels.begin(), col_labels.end(), 0);
  const ContingencyTable table(row_labels, col_labels, grouped);
  if (table.rows() < 2 || table.cols() < 2) return std::nullopt;

  const auto test = chi_square_test(table);

  SplitCandidate candidate;
  candidate.predictor = predictor;
  candidate.partition = std::move(partition);
  candidate.effective_scale =
      spec.scale == Scale::floating && !floating_seen ? Scale::monotonic
                                                      : spec.scale;
  candidate.observed_categories = observed;
  candidate.statistic = test.statistic;
  candidate.degrees_of_freedom = test.degrees_of_freedom;
  candidate.raw_p = test.p_value;
  candidate.multiplier =
      bonferroni_multiplier({candidate.effective_scale, observed, r});
  candidate.adjusted_p = adjust_p_value(candidate.multiplier, test.p_value);

  candidate.child_sizes.reserve(r);
  for (const auto& row : grouped) {
    candidate.child_sizes.push_back(
        std::accumulate(row.begin(), row.end(), std::int64_t{0}));
  }
  const auto largest = std::max_element(candidate.child_sizes.begin(),
                                        candidate.child_sizes.end());
  *largest += missing;
  return candidate;
}

// Strictly better under (adjusted_p, raw_p); equal candidates keep the
// earlier predictor.
bool better(const SplitCandidate& a, const SplitCandidate& b) {
  if (a.adjusted_p != b.adjusted_p) return a.adjusted_p < b.adjusted_p;
  return a.raw_p < b.raw_p;
}

}  // namespace

CategoryPartition merge_category_counts(const CountMatrix& counts,
                                        const PredictorSpec& predictor,
                                        double alpha_merge, MergeTrace* trace) {
  std::vector<Group> groups;
  std::optional<Group> lone_floating;
  for (std::size_t code = 0; code < counts.size(); ++code) {
    if (!has_records(counts[code])) continue;
    Group g;
    g.members = {static_cast<int>(code)};
    g.floating = static_cast<int>(code) == predictor.floating_category;
    g.counts = counts[code];
    if (g.floating && predictor.scale == Scale::floating) {
      lone_floating = std::move(g);
    } else {
      groups.push_back(std::move(g));
    }
  }
  if (groups.empty() && !lone_floating) throw Error("empty node");
  if (lone_floating) groups.push_back(std::move(*lone_floating));

  if (trace) trace->group_counts.assign(1, groups.size());

  while (groups.size() > 2) {
    const auto pairs = eligible_pairs(groups, predictor);
    double best_p = -1.0;
    std::pair<std::size_t, std::size_t> best{0, 0};
    for (const auto& [i, j] : pairs) {
      const double p = pair_p_value(groups[i], groups[j]);
      if (p > best_p) {
        best_p = p;
        best = {i, j};
      }
    }
    if (pairs.empty() || best_p <= alpha_merge) break;

    auto& into = groups[best.first];
    auto& from = groups[best.second];
    into.members.insert(into.members.end(), from.members.begin(),
                        from.members.end());
    std::sort(into.members.begin(), into.members.end());
    into.floating = into.floating || from.floating;
    for (std::size_t j = 0; j < into.counts.size(); ++j) {
      into.counts[j] += from.counts[j];
    }
    groups.erase(groups.begin() + static_cast<std::ptrdiff_t>(best.second));
    if (trace) trace->group_counts.push_back(groups.size());
  }

  CategoryPartition partition;
  for (auto& g : groups) partition.groups.push_back(std::move(g.members));
  return partition;
}

CategoryPartition merge_categories(const Dataset& data,
                                   std::span<const std::size_t> rows,
                                   std::size_t predictor, double alpha_merge,
                                   MergeTrace* trace) {
  if (rows.empty()) throw Error("empty node");
  if (predictor >= data.predictors.size()) {
    throw Error("predictor index out of range");
  }
  const auto counts = tabulate(data, rows, predictor, nullptr);
  return merge_category_counts(counts, data.predictors[predictor], alpha_merge,
                               trace);
}

std::optional<SplitCandidate> evaluate_predictor(
    const Dataset& data, std::span<const std::size_t> rows,
    std::size_t predictor, double alpha_merge) {
  if (rows.empty()) throw Error("empty node");
  if (predictor >= data.predictors.size()) {
    throw Error("predictor index out of range");
  }
  std::int64_t missing = 0;
  const auto counts = tabulate(data, rows, predictor, &missing);
  return evaluate_counts(counts, missing, data.predictors[predictor], predictor,
                         alpha_merge);
}

std::optional<SplitCandidate> best_split(const Dataset& data,
                                         std::span<const std::size_t> rows,
                                         const GrowthParams& params) {
  if (rows.empty()) throw Error("empty node");
  std::optional<SplitCandidate> best;
  for (std::size_t p = 0; p < data.predictors.size(); ++p) {
    auto candidate = evaluate_predictor(data, rows, p, params.alpha_merge);
    if (!candidate) continue;
    if (!best || better(*candidate, *best)) best = std::move(candidate);
  }
  if (best && best->adjusted_p <= params.alpha_split) return best;
  return std::nullopt;
}

StopDecision should_stop(const NodeFacts& node,
                         const std::optional<SplitCandidate>& candidate,
                         const GrowthParams& params) {
  auto stop = [](StopReason reason) { return StopDecision{true, reason}; };
  if (node.pure) return stop(StopReason::pure_node);
  if (!candidate) return stop(StopReason::no_significant_predictor);
  if (node.depth >= params.max_depth) return stop(StopReason::max_depth);
  if (node.size < params.min_parent_size) return stop(StopReason::min_parent);
  for (auto size : candidate->child_sizes) {
    if (size < params.min_child_size) {
      return stop(StopReason::would_create_small_child);
    }
  }
  return {};
}

Tree grow_tree(const Dataset& data, const GrowthParams& params) {
  params.validate();
  data.validate();
  if (data.size() == 0) throw Error("empty dataset");

  struct Pending {
    int id;
    std::vector<std::size_t> rows;
  };

  std::vector<TreeNode> nodes;
  std::deque<Pending> queue;

  TreeNode root;
  root.id = 0;
  nodes.push_back(root);
  std::vector<std::size_t> all(data.size());
  std::iota(all.begin(), all.end(), 0);
  queue.push_back({0, std::move(all)});

  const std::size_t class_count = data.target.classes.size();
  while (!queue.empty()) {
    Pending pending = std::move(queue.front());
    queue.pop_front();
    const int id = pending.id;
    const auto& rows = pending.rows;

    std::vector<std::int64_t> class_counts(class_count, 0);
    for (std::size_t row : rows) ++class_counts[data.target_codes[row]];
    const auto classes_present =
        std::count_if(class_counts.begin(), class_counts.end(),
                      [](auto v) { return v > 0; });

    NodeFacts facts{nodes[id].depth, static_cast<std::int64_t>(rows.size()),
                    classes_present <= 1};
    std::optional<SplitCandidate> candidate;
    if (!facts.pure) candidate = best_split(data, rows, params);
    const auto decision = should_stop(facts, candidate, params);

    nodes[id].class_counts = std::move(class_counts);
    if (decision.stop) {
      nodes[id].stop_reason = decision.reason;
      continue;
    }

    Split split;
    split.predictor = candidate->predictor;
    split.partition = candidate->partition;
    split.statistic = candidate->statistic;
    split.degrees_of_freedom = candidate->degrees_of_freedom;
    split.raw_p = candidate->raw_p;
    split.adjusted_p = candidate->adjusted_p;
    split.multiplier = candidate->multiplier.str();

    const auto& column = data.columns[split.predictor];
    const auto lookup = split.partition.group_lookup(
        data.predictors[split.predictor].categories.size());
    const auto largest = static_cast<std::size_t>(
        std::max_element(candidate->child_sizes.begin(),
                         candidate->child_sizes.end()) -
        candidate->child_sizes.begin());

    std::vector<std::vector<std::size_t>> child_rows(split.partition.size());
    for (std::size_t row : rows) {
      const int code = column[row];
      const std::size_t g =
          code == kMissing ? largest : static_cast<std::size_t>(lookup[code]);
      child_rows[g].push_back(row);
    }

    for (auto& members : child_rows) {
      TreeNode child;
      child.id = static_cast<int>(nodes.size());
      child.depth = nodes[id].depth + 1;
      child.parent = id;
      nodes[id].children.push_back(child.id);
      queue.push_back({child.id, std::move(members)});
      nodes.push_back(std::move(child));
    }
    nodes[id].split = std::move(split);
  }

  return Tree(data.predictors, data.target, data.schema, params,
              std::move(nodes));
}

}  // namespace chaid
