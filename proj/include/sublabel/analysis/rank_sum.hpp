#pragma once

#include <cstddef>
#include <span>

namespace sublabel::analysis {

enum class RankSumMethod {
  Auto,    // exact when n_a + n_b <= 20 and there are no ties, else Normal
  Exact,   // permutation distribution of the (mid)rank sum
  Normal,  // normal approximation, see rank_sum_test
};

struct RankSumTest {
  double delta_median = 0.0;  // median(a) - median(b)
  double p_value = 1.0;       // two-sided
  double u = 0.0;             // Mann-Whitney U of group a
  bool exact = false;
  std::size_t n_a = 0;
  std::size_t n_b = 0;
};

double median(std::span<const double> values);

/// Two-sided Wilcoxon rank-sum / Mann-Whitney U test.
///
/// The exact p-value is P(|U - E[U]| >= |u - E[U]|) under the permutation
/// distribution of midranks. The approximation uses the tie-corrected
/// variance, a 0.5 continuity correction and the Edgeworth kurtosis term
/// of U's null distribution. Throws ValidationError on an empty group.
RankSumTest rank_sum_test(std::span<const double> a, std::span<const double> b,
                          RankSumMethod method = RankSumMethod::Auto);

}  // namespace sublabel::analysis
