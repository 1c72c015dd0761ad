#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "pcause/rational.hpp"

namespace pcause {

/// Sparse row of a linear system: (column, coefficient) pairs.
using SparseRow = std::vector<std::pair<std::size_t, Rat>>;

/// Solves A x = b exactly by Gaussian elimination, pivoting on the first nonzero entry.
/// Throws std::domain_error when A is singular.
std::vector<Rat> solve_linear(const std::vector<SparseRow>& a, std::vector<Rat> b);

/// Solves x = P x + b where P is substochastic with spectral radius < 1
/// (every state leaks to an implicit absorbing sink). Rows index into x.
std::vector<Rat> solve_fixpoint(const std::vector<SparseRow>& p, std::vector<Rat> b);

}  // namespace pcause
