#pragma once

// Statistical kernels used by tree growth: contingency tables, the Pearson
// chi-squared test of independence and the Bonferroni multipliers that
// correct a merged predictor's p-value for the number of groupings it could
// have produced.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace chaid {

using BigInt = boost::multiprecision::cpp_int;

// How the categories of a predictor may be merged.
//  monotonic: ordinal, only adjacent categories merge.
//  free:      nominal, any two categories merge.
//  floating:  ordinal plus one floating category (usually "missing") that
//             may join any group.
enum class Scale { monotonic, free, floating };

const char* to_string(Scale scale);
Scale scale_from_string(const std::string& name);

// Predictor categories x target classes. Rows and columns are identified by
// the integer codes they had before empty lines were dropped.
class ContingencyTable {
 public:
  ContingencyTable() = default;

  // Drops all-zero rows and columns. Throws on negative or ragged input.
  ContingencyTable(std::vector<int> row_labels, std::vector<int> col_labels,
                   std::vector<std::vector<std::int64_t>> counts);

  std::size_t rows() const { return row_labels_.size(); }
  std::size_t cols() const { return col_labels_.size(); }
  const std::vector<int>& row_labels() const { return row_labels_; }
  const std::vector<int>& col_labels() const { return col_labels_; }
  std::int64_t at(std::size_t r, std::size_t c) const { return counts_[r][c]; }
  const std::vector<std::vector<std::int64_t>>& counts() const {
    return counts_;
  }

  std::int64_t total() const;
  std::vector<std::int64_t> row_totals() const;
  std::vector<std::int64_t> col_totals() const;

  // Expected counts under independence: row_total * col_total / total.
  std::vector<std::vector<double>> expected() const;

 private:
  std::vector<int> row_labels_;
  std::vector<int> col_labels_;
  std::vector<std::vector<std::int64_t>> counts_;
};

// Tabulates `target` against `predictor` over `rows`.
//
// `predictor` and `target` are whole-dataset code columns; `group_of` maps a
// predictor code to its merged group (-1 = not in the partition). Rows whose
// predictor code is negative (missing) are skipped. The returned table labels
// rows by group index and columns by target code.
ContingencyTable build_contingency(std::span<const int> predictor,
                                   std::span<const int> target,
                                   std::span<const std::size_t> rows,
                                   std::span<const int> group_of,
                                   int group_count, int class_count);

struct ChiSquareResult {
  double statistic = 0.0;
  int degrees_of_freedom = 0;
  double p_value = 1.0;
};

// Statistic and df only; p_value is left at 1.
ChiSquareResult pearson_chi_square(const ContingencyTable& table);

// Upper tail of the chi-squared distribution, Q(df/2, statistic/2).
double chi_square_p_value(double statistic, int degrees_of_freedom);

// pearson_chi_square followed by chi_square_p_value.
ChiSquareResult chi_square_test(const ContingencyTable& table);

// Regularized upper incomplete gamma function Q(a, x), a > 0, x >= 0.
double regularized_gamma_q(double a, double x);

struct BonferroniQuery {
  Scale scale = Scale::free;
  int c = 1;  // categories before merging
  int r = 1;  // groups after merging
};

// Number of ways c categories can be merged into r groups under `scale`.
//   monotonic: C(c-1, r-1)
//   free:      sum_{i=0}^{r-1} (-1)^i (r-i)^c / (i! (r-i)!)   (Stirling S(c,r))
//   floating:  C(c-2, r-2) + r C(c-2, r-1)
BigInt bonferroni_multiplier(const BonferroniQuery& query);

BigInt binomial(int n, int k);

// min(1, multiplier * raw_p) with the multiplier converted last.
double adjust_p_value(const BigInt& multiplier, double raw_p);

}  // namespace chaid
