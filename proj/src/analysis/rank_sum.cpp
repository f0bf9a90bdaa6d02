#include "sublabel/analysis/rank_sum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "sublabel/error.hpp"

namespace sublabel::analysis {

namespace {

constexpr std::size_t kExactLimit = 20;

struct Ranked {
  std::vector<long> doubled;  // 2 * midrank, integral
  double tie_term = 0.0;      // sum(t^3 - t) over tie groups
  bool ties = false;
};

Ranked doubled_midranks(std::span<const double> pooled) {
  const std::size_t n = pooled.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return pooled[i] < pooled[j]; });
  Ranked r;
  r.doubled.assign(n, 0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && pooled[order[j + 1]] == pooled[order[i]]) ++j;
    // Ranks i+1 .. j+1 share the midrank (i + j + 2) / 2.
    const long twice = static_cast<long>(i + j + 2);
    for (std::size_t t = i; t <= j; ++t) r.doubled[order[t]] = twice;
    const double t = static_cast<double>(j - i + 1);
    if (j > i) {
      r.ties = true;
      r.tie_term += t * t * t - t;
    }
    i = j + 1;
  }
  return r;
}

// P(|S - mean| >= |observed - mean|) where S is the doubled rank sum of a
// random n_a-subset.
double exact_p(const std::vector<long>& doubled, std::size_t n_a, long observed) {
  const long max_sum = std::accumulate(doubled.begin(), doubled.end(), 0L);
  // ways[j][s]: number of j-subsets with doubled rank sum s.
  std::vector<std::vector<double>> ways(n_a + 1, std::vector<double>(max_sum + 1, 0.0));
  ways[0][0] = 1.0;
  for (long r : doubled)
    for (std::size_t j = n_a; j >= 1; --j)
      for (long s = max_sum; s >= r; --s) ways[j][s] += ways[j - 1][s - r];

  const long n = static_cast<long>(doubled.size());
  // E[doubled rank sum] = n_a * (n + 1); comparisons stay in integers.
  const long mean2 = static_cast<long>(n_a) * (n + 1);
  const long dev = std::labs(observed - mean2);
  double total = 0.0;
  double tail = 0.0;
  for (long s = 0; s <= max_sum; ++s) {
    total += ways[n_a][s];
    if (std::labs(s - mean2) >= dev) tail += ways[n_a][s];
  }
  return std::min(1.0, tail / total);
}

double normal_p(double u, std::size_t n_a, std::size_t n_b, double tie_term) {
  const double na = static_cast<double>(n_a);
  const double nb = static_cast<double>(n_b);
  const double n = na + nb;
  const double mean = na * nb / 2.0;
  double variance = na * nb / 12.0 * (n + 1.0);
  if (n > 1.0) variance -= na * nb / 12.0 * tie_term / (n * (n - 1.0));
  if (!(variance > 0.0)) return 1.0;
  const double dev = std::abs(u - mean) - 0.5;
  if (dev <= 0.0) return 1.0;
  const double z = dev / std::sqrt(variance);
  const double excess_kurtosis =
      -6.0 * (na * na + nb * nb + na * nb + na + nb) / (5.0 * na * nb * (n + 1.0));
  const double density = std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
  const double upper = 0.5 * std::erfc(z / std::sqrt(2.0)) +
                       density * (z * z * z - 3.0 * z) * excess_kurtosis / 24.0;
  return std::clamp(2.0 * upper, 0.0, 1.0);
}

}  // namespace

double median(std::span<const double> values) {
  if (values.empty()) throw ValidationError("median of an empty sample");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 ? v[mid] : (v[mid - 1] + v[mid]) / 2.0;
}

RankSumTest rank_sum_test(std::span<const double> a, std::span<const double> b,
                          RankSumMethod method) {
  if (a.empty() || b.empty()) throw ValidationError("rank-sum test needs two non-empty groups");

  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  const Ranked ranked = doubled_midranks(pooled);

  RankSumTest out;
  out.n_a = a.size();
  out.n_b = b.size();
  out.delta_median = median(a) - median(b);

  long doubled_sum = 0;
  for (std::size_t i = 0; i < a.size(); ++i) doubled_sum += ranked.doubled[i];
  const double na = static_cast<double>(a.size());
  out.u = static_cast<double>(doubled_sum) / 2.0 - na * (na + 1.0) / 2.0;

  const bool exact =
      method == RankSumMethod::Exact ||
      (method == RankSumMethod::Auto && pooled.size() <= kExactLimit && !ranked.ties);
  out.exact = exact;
  out.p_value = exact ? exact_p(ranked.doubled, a.size(), doubled_sum)
                      : normal_p(out.u, a.size(), b.size(), ranked.tie_term);
  return out;
}

}  // namespace sublabel::analysis
