#pragma once

#include "spg/rational.hpp"

#include <optional>
#include <vector>

namespace spg {

/// Dense row-major matrix of exact rationals. Desk-scale only.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

/// Solves A x = b for square A by fraction-exact Gaussian elimination.
/// Among the non-zero candidates in a column the pivot with the smallest
/// numerator+denominator bit size is taken. Returns nullopt when A is
/// singular.
std::optional<std::vector<Rational>> solve_linear(RationalMatrix a, std::vector<Rational> b);

}  // namespace spg

namespace spg {

struct LinearProgramResult {
  enum class Status { Optimal, Infeasible, Unbounded };
  Status status = Status::Infeasible;
  Rational value;
  std::vector<Rational> x;
};

/// min c.x subject to A x = b, x >= 0. Two-phase simplex over exact
/// rationals with Bland's rule, so it terminates on degenerate problems.
LinearProgramResult linear_minimum(const RationalMatrix& a, const std::vector<Rational>& b,
                                   const std::vector<Rational>& c);

}  // namespace spg
