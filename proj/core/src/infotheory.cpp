#include "eegdep/infotheory.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "eegdep/errors.hpp"

namespace eegdep {

namespace {

double entropy_of_counts_log2(const std::map<int, std::size_t>& counts, std::size_t total) {
  double h = 0.0;
  for (const auto& [value, count] : counts) {
    if (count == 0) continue;
    const double p = static_cast<double>(count) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return h;
}

void check_lengths(std::span<const int> x, std::span<const int> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::LengthMismatch, "column lengths differ: " + std::to_string(x.size()) +
                                               " vs " + std::to_string(y.size()));
  }
  if (x.empty()) {
    throw Error(ErrorCode::LengthMismatch, "empty columns");
  }
}

}  // namespace

double entropy(std::span<const double> p) {
  double total = 0.0;
  for (double v : p) {
    if (v < 0.0 || !std::isfinite(v)) {
      throw Error(ErrorCode::InvalidDistribution, "negative or non-finite probability");
    }
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw Error(ErrorCode::InvalidDistribution,
                "probabilities sum to " + std::to_string(total));
  }
  double h = 0.0;
  for (double v : p) {
    if (v > 0.0) h -= v * std::log2(v);
  }
  return h;
}

double cond_entropy(const Eigen::MatrixXd& joint) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < joint.rows(); ++i) {
    for (Eigen::Index j = 0; j < joint.cols(); ++j) {
      const double v = joint(i, j);
      if (v < 0.0 || !std::isfinite(v)) {
        throw Error(ErrorCode::InvalidDistribution, "negative or non-finite joint probability");
      }
      total += v;
    }
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw Error(ErrorCode::InvalidDistribution,
                "joint probabilities sum to " + std::to_string(total));
  }
  double h = 0.0;
  for (Eigen::Index i = 0; i < joint.rows(); ++i) {
    const double px = joint.row(i).sum();
    if (px <= 0.0) continue;
    for (Eigen::Index j = 0; j < joint.cols(); ++j) {
      const double v = joint(i, j);
      if (v > 0.0) h -= v * std::log2(v / px);
    }
  }
  return h;
}

double entropy_of_column(std::span<const int> x) {
  if (x.empty()) throw Error(ErrorCode::LengthMismatch, "empty column");
  std::map<int, std::size_t> counts;
  for (int v : x) ++counts[v];
  return entropy_of_counts_log2(counts, x.size());
}

double joint_entropy(std::span<const int> x, std::span<const int> y) {
  check_lengths(x, y);
  // Canonical argument order keeps the summation order, and therefore the
  // floating-point result, identical under argument swap.
  if (std::lexicographical_compare(y.begin(), y.end(), x.begin(), x.end())) {
    return joint_entropy(y, x);
  }
  std::map<std::pair<int, int>, std::size_t> counts;
  for (std::size_t i = 0; i < x.size(); ++i) ++counts[{x[i], y[i]}];
  double h = 0.0;
  for (const auto& [key, count] : counts) {
    const double p = static_cast<double>(count) / static_cast<double>(x.size());
    h -= p * std::log2(p);
  }
  return h;
}

double info_gain(std::span<const int> x, std::span<const int> y) {
  const double g = entropy_of_column(x) + entropy_of_column(y) - joint_entropy(x, y);
  return std::max(g, 0.0);
}

double symmetrical_uncertainty(std::span<const int> x, std::span<const int> y) {
  const double hx = entropy_of_column(x);
  const double hy = entropy_of_column(y);
  const double denom = hx + hy;
  if (denom == 0.0) return 0.0;
  const double su = 2.0 * (hx + hy - joint_entropy(x, y)) / denom;
  return std::clamp(su, 0.0, 1.0);
}

}  // namespace eegdep
