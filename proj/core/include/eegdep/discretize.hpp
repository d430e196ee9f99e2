#pragma once

#include <span>
#include <vector>

namespace eegdep {

// Supervised discretization by recursive entropy-minimizing binary splits,
// each accepted only if it passes the minimum-description-length criterion.
// Boundaries are midpoints between adjacent distinct values, sorted
// ascending; an empty list means the column is uninformative (one bin).
std::vector<double> mdl_discretize(std::span<const double> column, std::span<const int> labels);

// Bin index per value: bin = number of boundaries strictly below the value,
// so a value equal to a boundary falls in the bin to its left.
std::vector<int> apply_bins(std::span<const double> column, std::span<const double> boundaries);

}  // namespace eegdep
