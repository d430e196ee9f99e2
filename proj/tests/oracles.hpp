// Brute-force reference implementations, kept deliberately independent of
// the library's code paths: direct summation, no caches, no incremental
// updates. Tests compare library output against these.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

namespace oracle {

inline std::vector<std::complex<double>> naive_dft(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t t = 0; t < n; ++t) {
      const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) *
                           static_cast<double>(t) / static_cast<double>(n);
      acc += x[t] * std::complex<double>(std::cos(angle), std::sin(angle));
    }
    out[k] = acc;
  }
  return out;
}

inline double mean(std::span<const double> x) {
  double s = 0.0;
  for (const double v : x) s += v;
  return s / static_cast<double>(x.size());
}

inline double sample_variance(std::span<const double> x) {
  const double m = mean(x);
  double s = 0.0;
  for (const double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size() - 1);
}

inline double mean_square(std::span<const double> x) {
  double s = 0.0;
  for (const double v : x) s += v * v;
  return s / static_cast<double>(x.size());
}

inline double wrap_pi(double a) {
  while (a > std::numbers::pi) a -= 2.0 * std::numbers::pi;
  while (a <= -std::numbers::pi) a += 2.0 * std::numbers::pi;
  return a;
}

inline double entropy_of_codes(std::span<const int> codes) {
  std::map<int, std::size_t> counts;
  for (const int c : codes) ++counts[c];
  double h = 0.0;
  for (const auto& [code, count] : counts) {
    const double p = static_cast<double>(count) / static_cast<double>(codes.size());
    h -= p * std::log2(p);
  }
  return h;
}

inline double joint_entropy_of_codes(std::span<const int> x, std::span<const int> y) {
  std::map<std::pair<int, int>, std::size_t> counts;
  for (std::size_t i = 0; i < x.size(); ++i) ++counts[{x[i], y[i]}];
  double h = 0.0;
  for (const auto& [pair, count] : counts) {
    const double p = static_cast<double>(count) / static_cast<double>(x.size());
    h -= p * std::log2(p);
  }
  return h;
}

inline double info_gain_of_codes(std::span<const int> x, std::span<const int> y) {
  const double gain =
      entropy_of_codes(x) + entropy_of_codes(y) - joint_entropy_of_codes(x, y);
  return std::max(gain, 0.0);
}

inline double su_of_codes(std::span<const int> x, std::span<const int> y) {
  const double denom = entropy_of_codes(x) + entropy_of_codes(y);
  if (denom == 0.0) return 0.0;
  const double su = 2.0 * info_gain_of_codes(x, y) / denom;
  return std::clamp(su, 0.0, 1.0);
}

// Eq.-style merit from explicit correlation means.
inline double merit_from_means(std::size_t k, double mean_cf, double mean_ff) {
  const double kd = static_cast<double>(k);
  const double denom = std::sqrt(kd + kd * (kd - 1.0) * mean_ff);
  if (denom == 0.0) return 0.0;
  return kd * mean_cf / denom;
}

inline double merit_of_subset(const std::vector<std::size_t>& subset,
                              const std::vector<double>& su_class,
                              const std::vector<std::vector<double>>& su_ff) {
  if (subset.empty()) return 0.0;
  double cf = 0.0;
  for (const std::size_t f : subset) cf += su_class[f];
  cf /= static_cast<double>(subset.size());
  double ff = 0.0;
  if (subset.size() > 1) {
    std::size_t pairs = 0;
    for (std::size_t a = 0; a < subset.size(); ++a) {
      for (std::size_t b = a + 1; b < subset.size(); ++b) {
        ff += su_ff[subset[a]][subset[b]];
        ++pairs;
      }
    }
    ff /= static_cast<double>(pairs);
  }
  return merit_from_means(subset.size(), cf, ff);
}

// Supervised binary-split discretization accepted by the minimum description
// length rule, recomputed from scratch at every range.
inline void mdl_split_range(const std::vector<std::pair<double, int>>& rows, std::size_t lo,
                            std::size_t hi, std::vector<double>& boundaries) {
  const std::size_t n = hi - lo;
  if (n < 2) return;
  auto range_entropy = [&](std::size_t a, std::size_t b) {
    std::map<int, std::size_t> counts;
    for (std::size_t i = a; i < b; ++i) ++counts[rows[i].second];
    double h = 0.0;
    for (const auto& [code, count] : counts) {
      const double p = static_cast<double>(count) / static_cast<double>(b - a);
      h -= p * std::log2(p);
    }
    return h;
  };
  auto classes_in = [&](std::size_t a, std::size_t b) {
    std::map<int, std::size_t> counts;
    for (std::size_t i = a; i < b; ++i) ++counts[rows[i].second];
    return counts.size();
  };

  double best = -1.0;
  std::size_t best_i = 0;
  for (std::size_t i = lo + 1; i < hi; ++i) {
    if (rows[i].first == rows[i - 1].first) continue;
    const double left = static_cast<double>(i - lo);
    const double right = static_cast<double>(hi - i);
    const double weighted = (left * range_entropy(lo, i) + right * range_entropy(i, hi)) /
                            static_cast<double>(n);
    if (best < 0.0 || weighted < best) {
      best = weighted;
      best_i = i;
    }
  }
  if (best < 0.0) return;

  const double h = range_entropy(lo, hi);
  const double gain = h - best;
  const double k = static_cast<double>(classes_in(lo, hi));
  const double k1 = static_cast<double>(classes_in(lo, best_i));
  const double k2 = static_cast<double>(classes_in(best_i, hi));
  const double h1 = range_entropy(lo, best_i);
  const double h2 = range_entropy(best_i, hi);
  const double delta = std::log2(std::pow(3.0, k) - 2.0) - (k * h - k1 * h1 - k2 * h2);
  const double threshold =
      (std::log2(static_cast<double>(n) - 1.0) + delta) / static_cast<double>(n);
  if (gain <= threshold) return;

  boundaries.push_back((rows[best_i - 1].first + rows[best_i].first) / 2.0);
  mdl_split_range(rows, lo, best_i, boundaries);
  mdl_split_range(rows, best_i, hi, boundaries);
}

inline std::vector<double> mdl_boundaries(std::span<const double> column,
                                          std::span<const int> labels) {
  std::vector<std::pair<double, int>> rows(column.size());
  for (std::size_t i = 0; i < column.size(); ++i) rows[i] = {column[i], labels[i]};
  std::sort(rows.begin(), rows.end());
  std::vector<double> boundaries;
  mdl_split_range(rows, 0, rows.size(), boundaries);
  std::sort(boundaries.begin(), boundaries.end());
  return boundaries;
}

// Full-pass neighbor-weighting feature scores: every row in order, k nearest
// hits and misses by Euclidean distance over range-normalized features, ties
// broken by (distance^2, row index).
inline std::vector<double> relieff_weights(const std::vector<std::vector<double>>& x,
                                           const std::vector<int>& y, int k) {
  const std::size_t n = x.size();
  const std::size_t d = x[0].size();
  std::vector<std::vector<double>> norm(n, std::vector<double>(d, 0.0));
  for (std::size_t f = 0; f < d; ++f) {
    double lo = x[0][f];
    double hi = x[0][f];
    for (std::size_t i = 1; i < n; ++i) {
      lo = std::min(lo, x[i][f]);
      hi = std::max(hi, x[i][f]);
    }
    const double range = hi - lo;
    if (range > 0.0) {
      for (std::size_t i = 0; i < n; ++i) norm[i][f] = (x[i][f] - lo) / range;
    }
  }

  std::vector<double> weights(d, 0.0);
  const double scale = static_cast<double>(n) * static_cast<double>(k);
  for (std::size_t i = 0; i < n; ++i) {
    for (const int cls : {0, 1}) {
      std::vector<std::pair<double, std::size_t>> candidates;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i || y[j] != cls) continue;
        double d2 = 0.0;
        for (std::size_t f = 0; f < d; ++f) {
          const double diff = norm[i][f] - norm[j][f];
          d2 += diff * diff;
        }
        candidates.push_back({d2, j});
      }
      std::sort(candidates.begin(), candidates.end());
      const double sign = cls == y[i] ? -1.0 : 1.0;
      for (int t = 0; t < k && t < static_cast<int>(candidates.size()); ++t) {
        const std::size_t j = candidates[static_cast<std::size_t>(t)].second;
        for (std::size_t f = 0; f < d; ++f) {
          weights[f] += sign * std::abs(norm[i][f] - norm[j][f]) / scale;
        }
      }
    }
  }
  return weights;
}

// Two-sided permutation p-value for a difference of group means.
inline double permutation_p(const std::vector<double>& group_a,
                            const std::vector<double>& group_b, int shuffles,
                            std::uint64_t seed) {
  std::vector<double> pooled = group_a;
  pooled.insert(pooled.end(), group_b.begin(), group_b.end());
  const std::size_t na = group_a.size();
  auto stat = [&](const std::vector<double>& values) {
    double ma = 0.0;
    double mb = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      (i < na ? ma : mb) += values[i];
    }
    ma /= static_cast<double>(na);
    mb /= static_cast<double>(values.size() - na);
    return std::abs(ma - mb);
  };
  const double observed = stat(pooled);

  std::uint64_t state = seed;
  auto next = [&]() {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };

  int at_least = 0;
  std::vector<double> shuffled = pooled;
  for (int s = 0; s < shuffles; ++s) {
    for (std::size_t i = shuffled.size() - 1; i > 0; --i) {
      const std::size_t j = next() % (i + 1);
      std::swap(shuffled[i], shuffled[j]);
    }
    if (stat(shuffled) >= observed - 1e-15) ++at_least;
  }
  return static_cast<double>(at_least + 1) / static_cast<double>(shuffles + 1);
}

}  // namespace oracle
