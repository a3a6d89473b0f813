#include "sigmadep/matrix.hpp"

#include <random>
#include <utility>

#include "sigmadep/errors.hpp"

namespace sigmadep {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw EngineError(ErrorCode::dimension_mismatch, what);
}

// Cheap size measure for pivot choice: prefer constants, then small degrees.
std::size_t weight(const FieldElement& f) {
  std::set<int> vars;
  f.collect_vars(vars);
  std::size_t w = 0;
  for (int v : vars) w += f.num().degree_in(v) + f.den().degree_in(v) + 1;
  return w;
}

}  // namespace

Matrix::Matrix(const std::vector<std::vector<FieldElement>>& rows)
    : rows_(rows.size()), cols_(rows.empty() ? 0 : rows[0].size()) {
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    require(row.size() == cols_, "ragged matrix rows");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = FieldElement(1L);
  return m;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  require(a.cols_ == b.rows_, "matrix product dimensions");
  Matrix out(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const FieldElement& x = a.at(i, k);
      if (x.is_zero()) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) {
        if (!b.at(k, j).is_zero()) out.at(i, j) += x * b.at(k, j);
      }
    }
  }
  return out;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  require(a.rows_ == b.rows_ && a.cols_ == b.cols_, "matrix difference dimensions");
  Matrix out = a;
  for (std::size_t i = 0; i < out.data_.size(); ++i) out.data_[i] -= b.data_[i];
  return out;
}

Matrix transpose(const Matrix& m) {
  Matrix out(m.cols(), m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) out.at(c, r) = m.at(r, c);
  }
  return out;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (a.at(i, j).is_zero()) continue;
      for (std::size_t k = 0; k < b.rows(); ++k) {
        for (std::size_t l = 0; l < b.cols(); ++l) {
          out.at(i * b.rows() + k, j * b.cols() + l) = a.at(i, j) * b.at(k, l);
        }
      }
    }
  }
  return out;
}

FieldElement det(const Matrix& m) {
  require(m.square(), "determinant of a non-square matrix");
  Matrix a = m;
  const std::size_t n = a.rows();
  FieldElement acc(1L);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = n;
    for (std::size_t r = c; r < n; ++r) {
      if (!a.at(r, c).is_zero() && (piv == n || weight(a.at(r, c)) < weight(a.at(piv, c)))) piv = r;
    }
    if (piv == n) return FieldElement();
    if (piv != c) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a.at(piv, k), a.at(c, k));
      acc = -acc;
    }
    const FieldElement p = a.at(c, c);
    acc *= p;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (a.at(r, c).is_zero()) continue;
      const FieldElement f = a.at(r, c) / p;
      for (std::size_t k = c; k < n; ++k) a.at(r, k) -= f * a.at(c, k);
    }
  }
  return acc;
}

Matrix inverse(const Matrix& m) {
  require(m.square(), "inverse of a non-square matrix");
  const std::size_t n = m.rows();
  Matrix a = m;
  Matrix inv = Matrix::identity(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = n;
    for (std::size_t r = c; r < n; ++r) {
      if (!a.at(r, c).is_zero() && (piv == n || weight(a.at(r, c)) < weight(a.at(piv, c)))) piv = r;
    }
    if (piv == n) throw EngineError(ErrorCode::division_by_zero, "matrix is singular");
    for (std::size_t k = 0; k < n; ++k) {
      std::swap(a.at(piv, k), a.at(c, k));
      std::swap(inv.at(piv, k), inv.at(c, k));
    }
    const FieldElement p = a.at(c, c).inverse();
    for (std::size_t k = 0; k < n; ++k) {
      a.at(c, k) *= p;
      inv.at(c, k) *= p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a.at(r, c).is_zero()) continue;
      const FieldElement f = a.at(r, c);
      for (std::size_t k = 0; k < n; ++k) {
        if (!a.at(c, k).is_zero()) a.at(r, k) -= f * a.at(c, k);
        if (!inv.at(c, k).is_zero()) inv.at(r, k) -= f * inv.at(c, k);
      }
    }
  }
  return inv;
}

Matrix apply_endo(const Matrix& m, const TowerSpec& tower, Endo which, unsigned power) {
  Matrix out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) out.at(r, c) = apply_endo(m.at(r, c), tower, which, power);
  }
  return out;
}

std::vector<FieldElement> vec(const Matrix& m) {
  std::vector<FieldElement> out;
  out.reserve(m.rows() * m.cols());
  for (std::size_t c = 0; c < m.cols(); ++c) {
    for (std::size_t r = 0; r < m.rows(); ++r) out.push_back(m.at(r, c));
  }
  return out;
}

Matrix unvec(const std::vector<FieldElement>& v, std::size_t rows) {
  require(rows > 0 && v.size() % rows == 0, "vector length is not a multiple of the row count");
  Matrix out(rows, v.size() / rows);
  for (std::size_t i = 0; i < v.size(); ++i) out.at(i % rows, i / rows) = v[i];
  return out;
}

std::vector<std::vector<FieldElement>> nullspace(Matrix m) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  std::vector<std::size_t> pivot_col;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t piv = rows;
    for (std::size_t r = rank; r < rows; ++r) {
      if (!m.at(r, c).is_zero() && (piv == rows || weight(m.at(r, c)) < weight(m.at(piv, c)))) piv = r;
    }
    if (piv == rows) continue;
    for (std::size_t k = 0; k < cols; ++k) std::swap(m.at(piv, k), m.at(rank, k));
    const FieldElement p = m.at(rank, c).inverse();
    for (std::size_t k = c; k < cols; ++k) {
      if (!m.at(rank, k).is_zero()) m.at(rank, k) *= p;
    }
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank || m.at(r, c).is_zero()) continue;
      const FieldElement f = m.at(r, c);
      for (std::size_t k = c; k < cols; ++k) {
        if (!m.at(rank, k).is_zero()) m.at(r, k) -= f * m.at(rank, k);
      }
    }
    pivot_col.push_back(c);
    ++rank;
  }
  std::vector<bool> is_pivot(cols, false);
  for (std::size_t c : pivot_col) is_pivot[c] = true;
  std::vector<std::vector<FieldElement>> basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<FieldElement> v(cols);
    v[free] = FieldElement(1L);
    for (std::size_t i = 0; i < rank; ++i) v[pivot_col[i]] = -m.at(i, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

namespace {

BigRational det_q(QMatrix a) {
  const std::size_t n = a.size();
  BigRational acc = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && sgn(a[p][c]) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(a[p], a[c]);
      acc = -acc;
    }
    acc *= a[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      if (sgn(a[r][c]) == 0) continue;
      const BigRational f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return acc;
}

// Row i of a*b as numerator over a shared denominator, without gcds.
std::pair<Poly, Poly> product_entry(const Matrix& a, const Matrix& b, std::size_t i, std::size_t j) {
  Poly num;
  Poly den(1L);
  for (std::size_t k = 0; k < a.cols(); ++k) {
    const FieldElement& x = a.at(i, k);
    const FieldElement& y = b.at(k, j);
    if (x.is_zero() || y.is_zero()) continue;
    const Poly tn = x.num() * y.num();
    const Poly td = x.den() * y.den();
    if (td == den) {
      num += tn;
    } else {
      num = num * td + tn * den;
      den *= td;
    }
  }
  return {num, den};
}

}  // namespace

bool is_singular(const Matrix& m) {
  require(m.square(), "determinant of a non-square matrix");
  std::set<int> vars;
  for (const FieldElement& f : m.data()) f.collect_vars(vars);
  std::mt19937_64 rng(0xde7ULL);
  std::uniform_int_distribution<long> num(-1000003, 1000003);
  std::uniform_int_distribution<long> den(1, 997);
  for (int attempt = 0; attempt < 4; ++attempt) {
    Point p;
    for (int v : vars) {
      BigRational r(num(rng), den(rng));
      r.canonicalize();
      p[v] = r;
    }
    try {
      if (sgn(det_q(evaluate(m, p))) != 0) return false;
    } catch (const EngineError& e) {
      if (e.code() != ErrorCode::pole_at_point) throw;
    }
  }
  return det(m).is_zero();
}

bool products_equal(const Matrix& a, const Matrix& b, const Matrix& c, const Matrix& d) {
  require(a.cols() == b.rows() && c.cols() == d.rows(), "matrix product dimensions");
  require(a.rows() == c.rows() && b.cols() == d.cols(), "matrix comparison dimensions");
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      const auto [n1, d1] = product_entry(a, b, i, j);
      const auto [n2, d2] = product_entry(c, d, i, j);
      if (!(n1 * d2 == n2 * d1)) return false;
    }
  }
  return true;
}

QMatrix evaluate(const Matrix& m, const Point& point) {
  QMatrix out(m.rows(), std::vector<BigRational>(m.cols()));
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) out[r][c] = evaluate(m.at(r, c), point);
  }
  return out;
}

}  // namespace sigmadep
