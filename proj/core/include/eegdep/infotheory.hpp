#pragma once

#include <Eigen/Core>
#include <span>

namespace eegdep {

// Shannon entropy in bits of an explicit distribution (sums to 1 within 1e-9).
double entropy(std::span<const double> p);

// H(Y|X) in bits from a joint table p(x, y), rows indexed by x.
double cond_entropy(const Eigen::MatrixXd& joint);

// Entropies of integer-coded sample columns, in bits.
double entropy_of_column(std::span<const int> x);
double joint_entropy(std::span<const int> x, std::span<const int> y);

// H(X) + H(Y) - H(X, Y); symmetric and non-negative.
double info_gain(std::span<const int> x, std::span<const int> y);

// 2 * gain / (H(X) + H(Y)), in [0, 1]; defined as 0 when both entropies
// vanish. Exactly symmetric in its arguments.
double symmetrical_uncertainty(std::span<const int> x, std::span<const int> y);

}  // namespace eegdep
