#include "chaid/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "chaid/error.hpp"

namespace chaid {

const char* to_string(Scale scale) {
  switch (scale) {
    case Scale::monotonic:
      return "monotonic";
    case Scale::free:
      return "free";
    case Scale::floating:
      return "float";
  }
  return "?";
}

Scale scale_from_string(const std::string& name) {
  if (name == "monotonic") return Scale::monotonic;
  if (name == "free") return Scale::free;
  if (name == "float") return Scale::floating;
  throw Error("unknown scale '" + name + "' (expected monotonic, free or float)");
}

ContingencyTable::ContingencyTable(
    std::vector<int> row_labels, std::vector<int> col_labels,
    std::vector<std::vector<std::int64_t>> counts) {
  if (counts.size() != row_labels.size()) {
    throw Error("contingency table: row label count does not match counts");
  }
  for (const auto& row : counts) {
    if (row.size() != col_labels.size()) {
      throw Error("contingency table: column label count does not match counts");
    }
    for (auto v : row) {
      if (v < 0) throw Error("contingency table: negative count");
    }
  }

  std::vector<bool> keep_col(col_labels.size(), false);
  for (const auto& row : counts) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (row[j] > 0) keep_col[j] = true;
    }
  }
  for (std::size_t j = 0; j < col_labels.size(); ++j) {
    if (keep_col[j]) col_labels_.push_back(col_labels[j]);
  }
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const auto& row = counts[i];
    if (std::all_of(row.begin(), row.end(), [](auto v) { return v == 0; })) {
      continue;
    }
    std::vector<std::int64_t> kept;
    kept.reserve(col_labels_.size());
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (keep_col[j]) kept.push_back(row[j]);
    }
    row_labels_.push_back(row_labels[i]);
    counts_.push_back(std::move(kept));
  }
}

std::int64_t ContingencyTable::total() const {
  std::int64_t sum = 0;
  for (const auto& row : counts_) {
    sum = std::accumulate(row.begin(), row.end(), sum);
  }
  return sum;
}

std::vector<std::int64_t> ContingencyTable::row_totals() const {
  std::vector<std::int64_t> totals;
  totals.reserve(rows());
  for (const auto& row : counts_) {
    totals.push_back(std::accumulate(row.begin(), row.end(), std::int64_t{0}));
  }
  return totals;
}

std::vector<std::int64_t> ContingencyTable::col_totals() const {
  std::vector<std::int64_t> totals(cols(), 0);
  for (const auto& row : counts_) {
    for (std::size_t j = 0; j < row.size(); ++j) totals[j] += row[j];
  }
  return totals;
}

std::vector<std::vector<double>> ContingencyTable::expected() const {
  const auto rt = row_totals();
  const auto ct = col_totals();
  const double n = static_cast<double>(total());
  std::vector<std::vector<double>> e(rows(), std::vector<double>(cols(), 0.0));
  for (std::size_t i = 0; i < rows(); ++i) {
    for (std::size_t j = 0; j < cols(); ++j) {
      e[i][j] = static_cast<double>(rt[i]) * static_cast<double>(ct[j]) / n;
    }
  }
  return e;
}

ContingencyTable build_contingency(std::span<const int> predictor,
                                   std::span<const int> target,
                                   std::span<const std::size_t> rows,
                                   std::span<const int> group_of,
                                   int group_count, int class_count) {
  if (rows.empty()) throw Error("empty node");
  std::vector<std::vector<std::int64_t>> counts(
      group_count, std::vector<std::int64_t>(class_count, 0));
  for (std::size_t row : rows) {
    const int code = predictor[row];
    if (code < 0) continue;
    const int group =
        static_cast<std::size_t>(code) < group_of.size() ? group_of[code] : -1;
    if (group < 0 || group >= group_count) {
      throw Error("value outside partition");
    }
    const int cls = target[row];
    if (cls < 0 || cls >= class_count) {
      throw Error("target value outside class list");
    }
    ++counts[group][cls];
  }
  std::vector<int> row_labels(group_count);
  std::iota(row_labels.begin(), row_labels.end(), 0);
  std::vector<int> col_labels(class_count);
  std::iota(col_labels.begin(), col_labels.end(), 0);
  return ContingencyTable(std::move(row_labels), std::move(col_labels),
                          std::move(counts));
}

ChiSquareResult pearson_chi_square(const ContingencyTable& table) {
  if (table.rows() < 2 || table.cols() < 2 || table.total() <= 0) {
    throw Error("degenerate table");
  }
  const auto e = table.expected();
  double statistic = 0.0;
  for (std::size_t i = 0; i < table.rows(); ++i) {
    for (std::size_t j = 0; j < table.cols(); ++j) {
      const double d = static_cast<double>(table.at(i, j)) - e[i][j];
      statistic += d * d / e[i][j];
    }
  }
  ChiSquareResult result;
  result.statistic = statistic;
  result.degrees_of_freedom =
      static_cast<int>((table.rows() - 1) * (table.cols() - 1));
  return result;
}

namespace {

constexpr int kMaxIterations = 100000;
constexpr double kEpsilon = std::numeric_limits<double>::epsilon();

// Lower series: P(a,x) = e^{-x} x^a / Gamma(a+1) * sum x^n / (a+1)...(a+n).
double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  double ap = a;
  for (int n = 0; n < kMaxIterations; ++n) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * kEpsilon) break;
  }
  return sum * std::exp(a * std::log(x) - x - std::lgamma(a));
}

// Modified Lentz evaluation of the continued fraction for Q(a,x).
double gamma_q_continued_fraction(double a, double x) {
  constexpr double tiny = std::numeric_limits<double>::min() / kEpsilon;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEpsilon) break;
  }
  return std::exp(a * std::log(x) - x - std::lgamma(a)) * h;
}

}  // namespace

double regularized_gamma_q(double a, double x) {
  if (!(a > 0.0) || !(x >= 0.0)) throw Error("invalid test input");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  double q;
  if (x < a + 1.0) {
    q = 1.0 - gamma_p_series(a, x);
  } else {
    q = gamma_q_continued_fraction(a, x);
  }
  return std::clamp(q, 0.0, 1.0);
}

double chi_square_p_value(double statistic, int degrees_of_freedom) {
  if (!(statistic >= 0.0) || degrees_of_freedom < 1) {
    throw Error("invalid test input");
  }
  return regularized_gamma_q(0.5 * degrees_of_freedom, 0.5 * statistic);
}

ChiSquareResult chi_square_test(const ContingencyTable& table) {
  auto result = pearson_chi_square(table);
  result.p_value =
      chi_square_p_value(result.statistic, result.degrees_of_freedom);
  return result;
}

BigInt binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  BigInt result = 1;
  for (int i = 1; i <= k; ++i) {
    result *= n - k + i;
    result /= i;
  }
  return result;
}

namespace {

BigInt factorial(int n) {
  BigInt f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// sum_{i=0}^{r-1} (-1)^i (r-i)^c / (i! (r-i)!), scaled by r! so every term
// is an integer: sum (-1)^i C(r,i) (r-i)^c, then divided back exactly.
BigInt free_scale_count(int c, int r) {
  BigInt scaled = 0;
  for (int i = 0; i < r; ++i) {
    BigInt term = binomial(r, i) * boost::multiprecision::pow(BigInt(r - i),
                                                              static_cast<unsigned>(c));
    if (i % 2 == 0) {
      scaled += term;
    } else {
      scaled -= term;
    }
  }
  return scaled / factorial(r);
}

}  // namespace

BigInt bonferroni_multiplier(const BonferroniQuery& query) {
  const int c = query.c;
  const int r = query.r;
  if (r < 1 || c < 1 || r > c) throw Error("invalid merge arity");
  switch (query.scale) {
    case Scale::monotonic:
      return binomial(c - 1, r - 1);
    case Scale::free:
      return free_scale_count(c, r);
    case Scale::floating:
      if (c < 2 || r < 2) throw Error("float scale underdetermined");
      return binomial(c - 2, r - 2) + BigInt(r) * binomial(c - 2, r - 1);
  }
  throw Error("invalid merge arity");
}

double adjust_p_value(const BigInt& multiplier, double raw_p) {
  if (raw_p <= 0.0) return 0.0;
  const double m = multiplier.convert_to<double>();
  return std::min(1.0, m * raw_p);
}

}  // namespace chaid
