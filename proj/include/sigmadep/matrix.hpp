#pragma once

#include <vector>

#include "sigmadep/field.hpp"

namespace sigmadep {

// Dense row-major matrix over the tower field.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  explicit Matrix(const std::vector<std::vector<FieldElement>>& rows);

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }
  FieldElement& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const FieldElement& at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  const std::vector<FieldElement>& data() const { return data_; }

  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Matrix operator-(const Matrix& a, const Matrix& b);
  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<FieldElement> data_;
};

Matrix transpose(const Matrix& m);
Matrix kron(const Matrix& a, const Matrix& b);
FieldElement det(const Matrix& m);
// Throws division_by_zero for a singular matrix.
Matrix inverse(const Matrix& m);
Matrix apply_endo(const Matrix& m, const TowerSpec& tower, Endo which, unsigned power = 1);

// Column-stacking vectorization: vec(m)[c * rows + r] = m(r, c).
std::vector<FieldElement> vec(const Matrix& m);
Matrix unvec(const std::vector<FieldElement>& v, std::size_t rows);

// det(m) == 0, decided at random points first and symbolically only when
// every sample vanishes.
bool is_singular(const Matrix& m);

// a * b == c * d, compared by cross-multiplying entry denominators.
bool products_equal(const Matrix& a, const Matrix& b, const Matrix& c, const Matrix& d);

// Basis of {x : m x = 0} over the field.
std::vector<std::vector<FieldElement>> nullspace(Matrix m);

using QMatrix = std::vector<std::vector<BigRational>>;
// Entrywise evaluation; throws pole_at_point.
QMatrix evaluate(const Matrix& m, const Point& point);

}  // namespace sigmadep
