#include "eegdep/discretize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "eegdep/errors.hpp"

namespace eegdep {

namespace {

double entropy_bits(const std::vector<std::size_t>& counts, std::size_t total) {
  double h = 0.0;
  for (std::size_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return h;
}

std::size_t distinct_classes(const std::vector<std::size_t>& counts) {
  std::size_t k = 0;
  for (std::size_t c : counts) {
    if (c > 0) ++k;
  }
  return k;
}

}  // namespace

std::vector<double> mdl_discretize(std::span<const double> column, std::span<const int> labels) {
  if (column.size() != labels.size()) {
    throw Error(ErrorCode::LengthMismatch, "column and label lengths differ");
  }
  const std::size_t n = column.size();
  if (n < 2) return {};

  // Compact label codes so per-range class counts are plain arrays.
  std::unordered_map<int, std::size_t> code_of;
  std::vector<std::size_t> code(n);
  for (std::size_t i = 0; i < n; ++i) {
    code[i] = code_of.emplace(labels[i], code_of.size()).first->second;
  }
  const std::size_t n_classes = code_of.size();

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (column[a] != column[b]) return column[a] < column[b];
    return code[a] < code[b];
  });
  std::vector<double> sorted_values(n);
  std::vector<std::size_t> sorted_code(n);
  for (std::size_t i = 0; i < n; ++i) {
    sorted_values[i] = column[order[i]];
    sorted_code[i] = code[order[i]];
  }

  std::vector<double> boundaries;
  std::vector<std::pair<std::size_t, std::size_t>> stack{{0, n}};
  while (!stack.empty()) {
    const auto [lo, hi] = stack.back();
    stack.pop_back();
    const std::size_t len = hi - lo;
    if (len < 2) continue;

    std::vector<std::size_t> total_counts(n_classes, 0);
    for (std::size_t i = lo; i < hi; ++i) ++total_counts[sorted_code[i]];
    const double h_all = entropy_bits(total_counts, len);

    // Scan candidate cuts between adjacent distinct values, tracking the
    // minimum weighted child entropy; first minimum wins for determinism.
    std::vector<std::size_t> left_counts(n_classes, 0);
    std::vector<std::size_t> best_left;
    double best_weighted = std::numeric_limits<double>::infinity();
    std::size_t best_split = 0;
    for (std::size_t i = lo + 1; i < hi; ++i) {
      ++left_counts[sorted_code[i - 1]];
      if (sorted_values[i] == sorted_values[i - 1]) continue;
      const std::size_t n1 = i - lo;
      const std::size_t n2 = hi - i;
      std::vector<std::size_t> right_counts(n_classes);
      for (std::size_t c = 0; c < n_classes; ++c) {
        right_counts[c] = total_counts[c] - left_counts[c];
      }
      const double weighted =
          (static_cast<double>(n1) * entropy_bits(left_counts, n1) +
           static_cast<double>(n2) * entropy_bits(right_counts, n2)) /
          static_cast<double>(len);
      if (weighted < best_weighted) {
        best_weighted = weighted;
        best_split = i;
        best_left = left_counts;
      }
    }
    if (best_split == 0) continue;  // all values equal

    std::vector<std::size_t> right_counts(n_classes);
    for (std::size_t c = 0; c < n_classes; ++c) {
      right_counts[c] = total_counts[c] - best_left[c];
    }
    const double h1 = entropy_bits(best_left, best_split - lo);
    const double h2 = entropy_bits(right_counts, hi - best_split);
    const double gain = h_all - best_weighted;

    const auto k = static_cast<double>(distinct_classes(total_counts));
    const auto k1 = static_cast<double>(distinct_classes(best_left));
    const auto k2 = static_cast<double>(distinct_classes(right_counts));
    const double delta = std::log2(std::pow(3.0, k) - 2.0) -
                         (k * h_all - k1 * h1 - k2 * h2);
    const double threshold =
        (std::log2(static_cast<double>(len) - 1.0) + delta) / static_cast<double>(len);

    if (gain > threshold) {
      boundaries.push_back(0.5 * (sorted_values[best_split - 1] + sorted_values[best_split]));
      stack.push_back({lo, best_split});
      stack.push_back({best_split, hi});
    }
  }

  std::sort(boundaries.begin(), boundaries.end());
  return boundaries;
}

std::vector<int> apply_bins(std::span<const double> column, std::span<const double> boundaries) {
  std::vector<int> bins(column.size());
  for (std::size_t i = 0; i < column.size(); ++i) {
    const auto it = std::lower_bound(boundaries.begin(), boundaries.end(), column[i]);
    bins[i] = static_cast<int>(it - boundaries.begin());
  }
  return bins;
}

}  // namespace eegdep
