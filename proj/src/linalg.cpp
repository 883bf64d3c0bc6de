#include "spg/linalg.hpp"

#include <stdexcept>

namespace spg {

std::optional<std::vector<Rational>> solve_linear(RationalMatrix a, std::vector<Rational> b) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.size() != n) throw std::invalid_argument("solve_linear: dimension mismatch");

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = n;
    std::size_t best = 0;
    for (std::size_t r = col; r < n; ++r) {
      if (sgn(a(r, col)) == 0) continue;
      const auto size = bit_size(a(r, col));
      if (pivot == n || size < best) {
        pivot = r;
        best = size;
      }
    }
    if (pivot == n) return std::nullopt;
    if (pivot != col) {
      for (std::size_t c = col; c < n; ++c) std::swap(a(col, c), a(pivot, c));
      std::swap(b[col], b[pivot]);
    }
    const Rational inv = 1 / a(col, col);
    for (std::size_t c = col; c < n; ++c) a(col, c) *= inv;
    b[col] *= inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || sgn(a(r, col)) == 0) continue;
      const Rational factor = a(r, col);
      for (std::size_t c = col; c < n; ++c) a(r, c) -= factor * a(col, c);
      b[r] -= factor * b[col];
    }
  }
  return b;
}

}  // namespace spg

namespace spg {

namespace {

/// Tableau with one column per variable (originals then artificials) and
/// the right-hand side last.
struct Tableau {
  std::size_t rows, vars;
  RationalMatrix t;
  std::vector<std::size_t> basis;

  const Rational& rhs(std::size_t r) const { return t(r, vars); }

  void pivot(std::size_t row, std::size_t col) {
    const Rational p = t(row, col);
    for (std::size_t j = 0; j <= vars; ++j) t(row, j) /= p;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == row || sgn(t(r, col)) == 0) continue;
      const Rational f = t(r, col);
      for (std::size_t j = 0; j <= vars; ++j) {
        if (sgn(t(row, j)) != 0) t(r, j) -= f * t(row, j);
      }
    }
    basis[row] = col;
  }

  /// Minimises cost over columns [0, allowed); false when unbounded.
  bool run(const std::vector<Rational>& cost, std::size_t allowed) {
    // Reduced costs, kept up to date through the pivots.
    std::vector<Rational> reduced(cost);
    for (std::size_t r = 0; r < rows; ++r) {
      const Rational& cb = cost[basis[r]];
      if (sgn(cb) == 0) continue;
      for (std::size_t j = 0; j < vars; ++j) {
        if (sgn(t(r, j)) != 0) reduced[j] -= cb * t(r, j);
      }
    }
    while (true) {
      std::size_t enter = allowed;
      for (std::size_t j = 0; j < allowed; ++j) {
        if (sgn(reduced[j]) < 0) {
          enter = j;
          break;
        }
      }
      if (enter == allowed) return true;
      std::size_t leave = rows;
      Rational best;
      for (std::size_t r = 0; r < rows; ++r) {
        if (sgn(t(r, enter)) <= 0) continue;
        Rational ratio = rhs(r) / t(r, enter);
        if (leave == rows || ratio < best || (ratio == best && basis[r] < basis[leave])) {
          leave = r;
          best = std::move(ratio);
        }
      }
      if (leave == rows) return false;
      pivot(leave, enter);
      const Rational f = reduced[enter];
      for (std::size_t j = 0; j < vars; ++j) {
        if (sgn(t(leave, j)) != 0) reduced[j] -= f * t(leave, j);
      }
    }
  }
};

}  // namespace

LinearProgramResult linear_minimum(const RationalMatrix& a, const std::vector<Rational>& b,
                                   const std::vector<Rational>& c) {
  const std::size_t m = a.rows(), n = a.cols();
  if (b.size() != m || c.size() != n) throw std::invalid_argument("linear_minimum: dimension mismatch");
  Tableau tab{m, n + m, RationalMatrix(m, n + m + 1), std::vector<std::size_t>(m)};
  for (std::size_t r = 0; r < m; ++r) {
    const bool flip = sgn(b[r]) < 0;
    for (std::size_t j = 0; j < n; ++j) tab.t(r, j) = flip ? Rational(-a(r, j)) : a(r, j);
    tab.t(r, n + r) = 1;
    tab.t(r, n + m) = flip ? Rational(-b[r]) : b[r];
    tab.basis[r] = n + r;
  }
  std::vector<Rational> phase1(n + m, 0);
  for (std::size_t r = 0; r < m; ++r) phase1[n + r] = 1;
  tab.run(phase1, n + m);
  LinearProgramResult out;
  for (std::size_t r = 0; r < m; ++r) {
    if (tab.basis[r] >= n && sgn(tab.rhs(r)) != 0) return out;
  }
  // Drive the remaining (zero) artificials out where a real column can
  // take their place; rows with none are redundant.
  for (std::size_t r = 0; r < m; ++r) {
    if (tab.basis[r] < n) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (sgn(tab.t(r, j)) != 0) {
        tab.pivot(r, j);
        break;
      }
    }
  }
  std::vector<Rational> phase2(n + m, 0);
  for (std::size_t j = 0; j < n; ++j) phase2[j] = c[j];
  if (!tab.run(phase2, n)) {
    out.status = LinearProgramResult::Status::Unbounded;
    return out;
  }
  out.status = LinearProgramResult::Status::Optimal;
  out.x.assign(n, 0);
  for (std::size_t r = 0; r < m; ++r) {
    if (tab.basis[r] < n) out.x[tab.basis[r]] = tab.rhs(r);
  }
  out.value = 0;
  for (std::size_t j = 0; j < n; ++j) out.value += c[j] * out.x[j];
  return out;
}

}  // namespace spg
