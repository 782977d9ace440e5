#include <cmath>
#include <limits>

#include "curb/error.hpp"
#include "curb/metrics.hpp"

namespace curb {

namespace {

// Shortest augmenting path Hungarian method with potentials, rows <= cols.
std::vector<int> hungarian(const std::vector<double>& cost, std::size_t rows, std::size_t cols) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(rows + 1, 0.0), v(cols + 1, 0.0);
  std::vector<std::size_t> p(cols + 1, 0), way(cols + 1, 0);
  for (std::size_t i = 1; i <= rows; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(cols + 1, inf);
    std::vector<char> used(cols + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= cols; ++j) {
        if (used[j]) continue;
        const double cur = cost[(i0 - 1) * cols + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= cols; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> assignment(rows, -1);
  for (std::size_t j = 1; j <= cols; ++j) {
    if (p[j] != 0) assignment[p[j] - 1] = static_cast<int>(j - 1);
  }
  return assignment;
}

}  // namespace

std::vector<int> solve_assignment(const std::vector<double>& cost, std::size_t rows,
                                  std::size_t cols) {
  if (cost.size() != rows * cols) {
    throw Error(ErrorCode::DimensionMismatch, "cost matrix size does not match rows x cols");
  }
  if (rows == 0 || cols == 0) return std::vector<int>(rows, -1);

  // Forbidden pairs get a cost larger than any complete feasible assignment so
  // they are only used when unavoidable, then dropped.
  double max_finite = 0.0;
  for (double c : cost) {
    if (std::isfinite(c)) max_finite = std::max(max_finite, std::abs(c));
  }
  const double big = (max_finite + 1.0) * static_cast<double>(std::max(rows, cols) + 1);
  const bool transpose = rows > cols;
  const std::size_t r = transpose ? cols : rows;
  const std::size_t c = transpose ? rows : cols;
  std::vector<double> m(r * c);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const double value = std::isfinite(cost[i * cols + j]) ? cost[i * cols + j] : big;
      if (transpose) {
        m[j * c + i] = value;
      } else {
        m[i * c + j] = value;
      }
    }
  }
  const std::vector<int> solved = hungarian(m, r, c);
  std::vector<int> result(rows, -1);
  for (std::size_t i = 0; i < r; ++i) {
    if (solved[i] < 0) continue;
    const std::size_t row = transpose ? static_cast<std::size_t>(solved[i]) : i;
    const std::size_t col = transpose ? i : static_cast<std::size_t>(solved[i]);
    if (std::isfinite(cost[row * cols + col])) result[row] = static_cast<int>(col);
  }
  return result;
}

}  // namespace curb
