#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <sstream>

#include "chaid/csv.hpp"

namespace chaid::testing {

namespace {

int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

Scale random_scale(std::mt19937_64& rng) {
  switch (uniform_int(rng, 0, 2)) {
    case 0:
      return Scale::monotonic;
    case 1:
      return Scale::free;
    default:
      return Scale::floating;
  }
}

PredictorSpec make_predictor(const std::string& name, Scale scale, int categories) {
  PredictorSpec spec;
  spec.name = name;
  spec.scale = scale;
  for (int i = 0; i < categories; ++i) spec.categories.push_back("c" + std::to_string(i));
  if (scale == Scale::floating) {
    spec.floating_category = static_cast<int>(spec.categories.size());
    spec.categories.push_back(kFloatingCategory);
  }
  return spec;
}

TargetSpec make_target(int classes) {
  TargetSpec target{"y", {}};
  for (int i = 0; i < classes; ++i) target.classes.push_back("k" + std::to_string(i));
  return target;
}

// Observed codes exclude the floating category.
int ordinary_categories(const PredictorSpec& spec) {
  const int n = static_cast<int>(spec.categories.size());
  return spec.floating_category >= 0 ? n - 1 : n;
}

}  // namespace

Dataset predictive_dataset(std::uint64_t seed, std::size_t rows,
                           std::size_t* predictive) {
  std::mt19937_64 rng(seed);
  const int k = uniform_int(rng, 2, 5);
  const int classes = uniform_int(rng, 2, std::min(3, k));
  std::vector<int> mapping(k);
  for (int i = 0; i < k; ++i) mapping[i] = i < classes ? i : uniform_int(rng, 0, classes - 1);
  std::shuffle(mapping.begin(), mapping.end(), rng);

  const std::size_t where = static_cast<std::size_t>(uniform_int(rng, 0, 3));
  std::vector<PredictorSpec> predictors;
  for (std::size_t p = 0; p < 4; ++p) {
    const int cats = p == where ? k : uniform_int(rng, 2, 6);
    predictors.push_back(make_predictor("x" + std::to_string(p), random_scale(rng), cats));
  }

  std::vector<std::vector<int>> columns(4, std::vector<int>(rows));
  std::vector<int> target(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t p = 0; p < 4; ++p) {
      columns[p][r] = uniform_int(rng, 0, ordinary_categories(predictors[p]) - 1);
    }
    target[r] = mapping[columns[where][r]];
  }
  if (predictive) *predictive = where;
  return Dataset::from_codes(std::move(predictors), make_target(classes),
                             std::move(columns), std::move(target));
}

Dataset noise_dataset(std::uint64_t seed, std::size_t rows) {
  std::mt19937_64 rng(seed);
  const int classes = uniform_int(rng, 2, 3);
  std::vector<PredictorSpec> predictors;
  for (int p = 0; p < 4; ++p) {
    predictors.push_back(
        make_predictor("x" + std::to_string(p), random_scale(rng), uniform_int(rng, 2, 6)));
  }
  std::vector<std::vector<int>> columns(4, std::vector<int>(rows));
  std::vector<int> target(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t p = 0; p < 4; ++p) {
      columns[p][r] = uniform_int(rng, 0, ordinary_categories(predictors[p]) - 1);
    }
    target[r] = uniform_int(rng, 0, classes - 1);
  }
  return Dataset::from_codes(std::move(predictors), make_target(classes),
                             std::move(columns), std::move(target));
}

Dataset balanced_factorial_dataset(int copies) {
  std::vector<PredictorSpec> predictors{make_predictor("a", Scale::free, 3),
                                        make_predictor("b", Scale::monotonic, 4),
                                        make_predictor("c", Scale::floating, 2)};
  std::vector<std::vector<int>> columns(3);
  std::vector<int> target;
  for (int copy = 0; copy < copies; ++copy) {
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 4; ++b) {
        for (int c = 0; c < 2; ++c) {
          for (int y = 0; y < 2; ++y) {
            columns[0].push_back(a);
            columns[1].push_back(b);
            columns[2].push_back(c);
            target.push_back(y);
          }
        }
      }
    }
  }
  return Dataset::from_codes(std::move(predictors), make_target(2),
                             std::move(columns), std::move(target));
}

Tree random_tree(std::mt19937_64& rng) {
  std::vector<PredictorSpec> predictors;
  const int predictor_count = uniform_int(rng, 1, 4);
  for (int p = 0; p < predictor_count; ++p) {
    predictors.push_back(
        make_predictor("v" + std::to_string(p), random_scale(rng), uniform_int(rng, 2, 6)));
  }
  const TargetSpec target = make_target(uniform_int(rng, 2, 4));
  const std::size_t classes = target.classes.size();

  GrowthParams params;
  params.alpha_merge = std::uniform_real_distribution<double>(0.001, 0.2)(rng);
  params.alpha_split = std::uniform_real_distribution<double>(0.001, 0.2)(rng);
  params.max_depth = uniform_int(rng, 1, 6);
  params.min_child_size = uniform_int(rng, 1, 10);
  params.min_parent_size = 2 * params.min_child_size + uniform_int(rng, 0, 20);

  std::vector<TreeNode> nodes(1);
  std::deque<int> queue{0};
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  while (!queue.empty()) {
    const int id = queue.front();
    queue.pop_front();
    nodes[id].id = id;
    if (nodes[id].depth < 4 && unit(rng) < 0.55) {
      Split split;
      split.predictor = static_cast<std::size_t>(uniform_int(rng, 0, predictor_count - 1));
      const auto& spec = predictors[split.predictor];
      std::vector<int> codes(spec.categories.size());
      std::iota(codes.begin(), codes.end(), 0);
      std::shuffle(codes.begin(), codes.end(), rng);
      const int available = static_cast<int>(codes.size());
      const int groups = uniform_int(rng, 2, std::min(4, available));
      const int used = uniform_int(rng, groups, available);
      split.partition.groups.resize(groups);
      for (int i = 0; i < used; ++i) {
        split.partition.groups[i < groups ? i : uniform_int(rng, 0, groups - 1)]
            .push_back(codes[i]);
      }
      for (auto& g : split.partition.groups) std::sort(g.begin(), g.end());
      split.statistic = unit(rng) * 500.0;
      split.degrees_of_freedom = uniform_int(rng, 1, 12);
      split.raw_p = unit(rng) * 1e-3;
      split.adjusted_p = std::min(1.0, split.raw_p * 7.0);
      split.multiplier = std::to_string(uniform_int(rng, 1, 100000));
      for (int g = 0; g < groups; ++g) {
        TreeNode child;
        child.id = static_cast<int>(nodes.size());
        child.depth = nodes[id].depth + 1;
        child.parent = id;
        nodes[id].children.push_back(child.id);
        queue.push_back(child.id);
        nodes.push_back(std::move(child));
      }
      nodes[id].split = std::move(split);
    } else {
      nodes[id].class_counts.resize(classes);
      for (auto& c : nodes[id].class_counts) c = uniform_int(rng, 0, 40);
      nodes[id].stop_reason = static_cast<StopReason>(uniform_int(rng, 0, 4));
    }
  }
  for (auto it = nodes.rbegin(); it != nodes.rend(); ++it) {
    if (it->children.empty()) continue;
    it->class_counts.assign(classes, 0);
    for (int child : it->children) {
      for (std::size_t j = 0; j < classes; ++j) {
        it->class_counts[j] += nodes[child].class_counts[j];
      }
    }
  }

  auto schema = Dataset::from_codes(predictors, target,
                                    std::vector<std::vector<int>>(predictors.size()), {})
                    .schema;
  return Tree(std::move(predictors), target, std::move(schema), params, std::move(nodes));
}

DatasetSchema listing_schema() {
  auto numeric = [](std::string name, Scale scale, BinStrategy strategy, int bins) {
    ColumnSpec c;
    c.name = std::move(name);
    c.role = Role::predictor;
    c.kind = Kind::numeric;
    c.scale = scale;
    BinningSpec b;
    b.strategy = strategy;
    b.bin_count = bins;
    c.binning = b;
    return c;
  };
  auto categorical = [](std::string name) {
    ColumnSpec c;
    c.name = std::move(name);
    c.role = Role::predictor;
    c.kind = Kind::categorical;
    c.scale = Scale::free;
    return c;
  };
  DatasetSchema schema;
  ColumnSpec id;
  id.name = "id";
  id.role = Role::ignored;
  id.kind = Kind::numeric;
  schema.columns.push_back(id);
  schema.columns.push_back(numeric("harga", Scale::free, BinStrategy::equal_frequency, 12));
  schema.columns.push_back(categorical("tipe"));
  schema.columns.push_back(categorical("asuransi"));
  schema.columns.push_back(numeric("dilihat", Scale::free, BinStrategy::equal_frequency, 12));
  schema.columns.push_back(categorical("kota"));
  schema.columns.push_back(numeric("kecepatan", Scale::monotonic, BinStrategy::equal_frequency, 5));
  schema.columns.push_back(numeric("akurasi", Scale::monotonic, BinStrategy::equal_width, 5));
  schema.columns.push_back(numeric("pelayanan", Scale::floating, BinStrategy::equal_frequency, 4));
  ColumnSpec sold;
  sold.name = "terjual";
  sold.role = Role::target;
  sold.kind = Kind::numeric;
  sold.binning = BinningSpec{BinStrategy::equal_frequency, 4, {}, {}};
  schema.columns.push_back(sold);
  return schema;
}

std::string listing_csv(std::uint64_t seed, std::size_t rows) {
  std::mt19937_64 rng(seed);
  const std::vector<std::string> types{"Sneakers", "Boot", "High Heels", "Wedges",
                                       "Flat Shoes", "Sandals & Flip Flop"};
  const std::vector<std::string> cities{"Jakarta", "Bandung", "Surabaya", "Medan",
                                        "Semarang", "Malang", "Bogor", "Depok"};
  std::lognormal_distribution<double> views(5.0, 1.0);
  std::lognormal_distribution<double> price(11.8, 0.6);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, 1.0);

  std::ostringstream out;
  out << format_csv_row({"id", "harga", "tipe", "asuransi", "dilihat", "kota",
                         "kecepatan", "akurasi", "pelayanan", "terjual"})
      << "\n";
  for (std::size_t r = 0; r < rows; ++r) {
    const double v = std::round(views(rng));
    const double p = std::round(price(rng) / 1000.0) * 1000.0;
    const auto& type = types[static_cast<std::size_t>(unit(rng) * types.size())];
    const auto& city = cities[static_cast<std::size_t>(unit(rng) * cities.size())];
    const double speed = std::round((3.0 + 2.0 * unit(rng)) * 10.0) / 10.0;
    const double accuracy = std::round((3.0 + 2.0 * unit(rng)) * 10.0) / 10.0;
    const bool service_missing = unit(rng) < 0.05;
    const double service = std::round((3.0 + 2.0 * unit(rng)) * 10.0) / 10.0;
    const double sold = std::max(
        0.0, std::round(v * 0.08 * (p < 150000 ? 1.5 : 0.7) + 3.0 * noise(rng)));
    out << format_csv_row({std::to_string(r), std::to_string(static_cast<long>(p)), type,
                           unit(rng) < 0.3 ? "ya" : "tidak",
                           std::to_string(static_cast<long>(v)), city,
                           std::to_string(speed).substr(0, 3),
                           std::to_string(accuracy).substr(0, 3),
                           service_missing ? "" : std::to_string(service).substr(0, 3),
                           std::to_string(static_cast<long>(sold))})
        << "\n";
  }
  return out.str();
}

namespace {

std::vector<std::string> numbered(int n) {
  std::vector<std::string> labels;
  for (int i = 1; i <= n; ++i) labels.push_back(std::to_string(i));
  return labels;
}

std::vector<int> codes(const PredictorSpec& spec, const std::vector<std::string>& labels) {
  std::vector<int> out;
  for (const auto& l : labels) out.push_back(spec.code_of(l));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> interval_range(int first, int last) {
  std::vector<std::string> labels;
  for (int i = first; i <= last; ++i) labels.push_back(std::to_string(i));
  return labels;
}

}  // namespace

Tree sales_fixture() {
  PredictorSpec dilihat{"dilihat", Scale::free, numbered(12), -1};
  PredictorSpec harga{"harga", Scale::free, numbered(14), -1};
  PredictorSpec tipe{"tipe",
                     Scale::free,
                     {"High Heels", "Other", "Office Footwear", "Sneakers", "Boot",
                      "Sandals & Flip Flop", "Flat Shoes", "Wedges", "Stilettos", "Vintage",
                      "Painted Shoes", "Baby Shoe"},
                     -1};
  TargetSpec terjual{"terjual", {"1-143", "155-287", "431-573", "860-1002"}};

  // Views and price intervals rebinned from raw values; the boundaries are
  // illustrative only.
  DatasetSchema schema;
  auto explicit_numeric = [](std::string name, std::vector<double> edges) {
    ColumnSpec c;
    c.name = std::move(name);
    c.role = Role::predictor;
    c.kind = Kind::numeric;
    c.scale = Scale::free;
    BinningSpec b;
    b.strategy = BinStrategy::explicit_boundaries;
    b.boundaries = edges;
    b.edges = edges;
    c.binning = b;
    c.categories = numbered(static_cast<int>(edges.size()) - 1);
    return c;
  };
  std::vector<double> view_edges, price_edges;
  for (int i = 0; i <= 12; ++i) view_edges.push_back(100.0 * i);
  for (int i = 0; i <= 14; ++i) price_edges.push_back(100000.0 * i);
  schema.columns.push_back(explicit_numeric("harga", price_edges));
  ColumnSpec tipe_col;
  tipe_col.name = "tipe";
  tipe_col.role = Role::predictor;
  tipe_col.kind = Kind::categorical;
  tipe_col.scale = Scale::free;
  tipe_col.categories = tipe.categories;
  schema.columns.push_back(tipe_col);
  schema.columns.push_back(explicit_numeric("dilihat", view_edges));
  ColumnSpec target_col;
  target_col.name = "terjual";
  target_col.role = Role::target;
  target_col.kind = Kind::categorical;
  target_col.categories = terjual.classes;
  schema.columns.push_back(target_col);

  auto split = [](std::size_t predictor, std::vector<std::vector<int>> groups, double stat,
                  int df, double p, const char* multiplier) {
    Split s;
    s.predictor = predictor;
    s.partition.groups = std::move(groups);
    s.statistic = stat;
    s.degrees_of_freedom = df;
    s.raw_p = p;
    s.multiplier = multiplier;
    s.adjusted_p = std::min(1.0, std::stod(multiplier) * p);
    return s;
  };
  auto leaf = [](int id, int depth, int parent, std::vector<std::int64_t> counts,
                 StopReason reason) {
    TreeNode n;
    n.id = id;
    n.depth = depth;
    n.parent = parent;
    n.class_counts = std::move(counts);
    n.stop_reason = reason;
    return n;
  };
  auto internal = [](int id, int depth, std::optional<int> parent, Split s,
                     std::vector<int> children) {
    TreeNode n;
    n.id = id;
    n.depth = depth;
    n.parent = parent;
    n.split = std::move(s);
    n.children = std::move(children);
    return n;
  };

  // Predictor order: dilihat, harga, tipe.
  std::vector<TreeNode> nodes(11);
  nodes[0] = internal(0, 0, std::nullopt,
                      split(0,
                            {codes(dilihat, {"1", "9", "10", "12"}), codes(dilihat, {"3"}),
                             codes(dilihat, {"2"}),
                             codes(dilihat, {"4", "5", "6", "7", "8"})},
                            412.7, 9, 2.1e-83, "145750"),
                      {1, 2, 3, 4});
  nodes[1] = internal(1, 1, 0,
                      split(1, {codes(harga, interval_range(2, 14)), codes(harga, {"1"})},
                            88.4, 3, 5.3e-19, "8191"),
                      {5, 6});
  nodes[2] = leaf(2, 1, 0, {120, 35, 12, 4}, StopReason::no_significant_predictor);
  nodes[3] = internal(3, 1, 0,
                      split(1, {codes(harga, interval_range(2, 9)), codes(harga, {"1"})},
                            31.9, 2, 1.2e-7, "255"),
                      {7, 8});
  nodes[4] = leaf(4, 1, 0, {64, 41, 19, 11}, StopReason::no_significant_predictor);
  nodes[5] = leaf(5, 2, 1, {310, 22, 6, 2}, StopReason::no_significant_predictor);
  nodes[6] = internal(6, 2, 1,
                      split(2,
                            {codes(tipe, {"High Heels", "Other", "Office Footwear", "Sneakers"}),
                             codes(tipe, {"Boot", "Sandals & Flip Flop", "Flat Shoes", "Wedges",
                                          "Stilettos", "Vintage", "Painted Shoes",
                                          "Baby Shoe"})},
                            24.6, 3, 1.9e-5, "2047"),
                      {9, 10});
  nodes[7] = leaf(7, 2, 3, {205, 18, 2, 1}, StopReason::no_significant_predictor);
  nodes[8] = leaf(8, 2, 3, {388, 5, 0, 0}, StopReason::no_significant_predictor);
  nodes[9] = leaf(9, 3, 6, {982, 13, 3, 2}, StopReason::max_depth);
  nodes[10] = leaf(10, 3, 6, {451, 9, 1, 0}, StopReason::max_depth);

  for (int id : {6, 3, 1, 0}) {
    nodes[id].class_counts.assign(4, 0);
    for (int child : nodes[id].children) {
      for (std::size_t j = 0; j < 4; ++j) {
        nodes[id].class_counts[j] += nodes[child].class_counts[j];
      }
    }
  }

  return Tree({dilihat, harga, tipe}, terjual, schema, GrowthParams{}, std::move(nodes));
}

const std::map<int, int>& sales_fixture_terminals() {
  static const std::map<int, int> terminals{{1, 5}, {2, 9}, {3, 10}, {4, 2},
                                            {5, 7}, {6, 8}, {7, 4}};
  return terminals;
}

}  // namespace chaid::testing
