#pragma once

// Independent reference computations for the test suites. Nothing here calls
// into the library's statistical code.

#include <cstdint>
#include <vector>

#include "chaid/stats.hpp"

namespace chaid::testing {

// Counts the groupings of c categories into r groups by explicit
// enumeration (c <= 10).
//   monotonic: cuts of an ordered run into r contiguous pieces
//   free:      set partitions into r blocks (restricted growth strings)
//   floating:  contiguous pieces of c-1 ordered categories, with the floating
//              category either alone or attached to one piece
std::uint64_t partition_count_oracle(Scale scale, int c, int r);

// Upper tail of chi-squared(df) by adaptive Gauss-Kronrod quadrature of the
// density after substituting x = u^2.
double chi_square_tail_by_quadrature(double statistic, int df);

// Pearson statistic recomputed from first principles with long double.
double pearson_statistic_reference(
    const std::vector<std::vector<std::int64_t>>& counts);

// 2x2 closed form N (ad - bc)^2 / (r1 r2 c1 c2).
double two_by_two_statistic(std::int64_t a, std::int64_t b, std::int64_t c,
                            std::int64_t d);

// Stirling numbers of the second kind by the triangle recurrence.
BigInt stirling2_recurrence(int n, int k);
// Binomial coefficient by Pascal's triangle.
BigInt pascal_binomial(int n, int k);

}  // namespace chaid::testing
