#include "exact_linear.hpp"

namespace qbnf::detail {

namespace {

// In-place RREF of the augmented rows; returns pivot columns among the first
// `cols` columns.
std::vector<std::size_t> rref(RatMatrix& m, std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < m.size(); ++col) {
    std::size_t sel = row;
    while (sel < m.size() && m[sel][col] == 0) ++sel;
    if (sel == m.size()) continue;
    std::swap(m[row], m[sel]);
    const Rational inv = Rational(1) / m[row][col];
    for (auto& v : m[row]) v *= inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || m[r][col] == 0) continue;
      const Rational f = m[r][col];
      for (std::size_t c = col; c < m[r].size(); ++c) m[r][c] -= f * m[row][c];
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace

RatMatrix transpose(const RatMatrix& a, std::size_t cols) {
  RatMatrix t(cols, RatVector(a.size()));
  for (std::size_t r = 0; r < a.size(); ++r) {
    for (std::size_t c = 0; c < cols; ++c) t[c][r] = a[r][c];
  }
  return t;
}

std::vector<RatVector> null_space(const RatMatrix& a, std::size_t cols) {
  RatMatrix m = a;
  const auto pivots = rref(m, cols);
  std::vector<bool> is_pivot(cols, false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<RatVector> basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    RatVector v(cols, Rational(0));
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m[r][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<RatVector> solve_unique(RatMatrix a, RatVector b) {
  if (a.empty()) return std::nullopt;
  const std::size_t cols = a[0].size();
  for (std::size_t r = 0; r < a.size(); ++r) a[r].push_back(b[r]);
  const auto pivots = rref(a, cols);
  if (pivots.size() != cols) return std::nullopt;
  for (std::size_t r = cols; r < a.size(); ++r) {
    if (a[r][cols] != 0) return std::nullopt;
  }
  RatVector x(cols);
  for (std::size_t r = 0; r < cols; ++r) x[pivots[r]] = a[r][cols];
  return x;
}

}  // namespace qbnf::detail
