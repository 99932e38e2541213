#pragma once

#include <optional>
#include <vector>

#include "qbnf/rational.hpp"

namespace qbnf::detail {

using RatVector = std::vector<Rational>;
using RatMatrix = std::vector<RatVector>;  // row-major

/// A basis of {v : A v = 0} via reduced row echelon form.
std::vector<RatVector> null_space(const RatMatrix& a, std::size_t cols);

/// Unique solution of A v = b for A with full column rank. Returns nullopt if
/// the system is inconsistent or A is rank deficient.
std::optional<RatVector> solve_unique(RatMatrix a, RatVector b);

RatMatrix transpose(const RatMatrix& a, std::size_t cols);

}  // namespace qbnf::detail
