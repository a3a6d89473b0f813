#include "sigmadep/isomonodromy.hpp"

#include <algorithm>
#include <optional>
#include <map>
#include <random>
#include <set>

#include "sigmadep/errors.hpp"
#include "sigmadep/univariate.hpp"

namespace sigmadep {

namespace {

Poly shift_z(const Poly& p, int z, long h) {
  if (h == 0) return p;
  return substitute(p, z, Poly::variable(z) + h);
}

// z-dependent part of the lcm of all entry denominators.
Poly denominator_in_z(const Matrix& m, int z) {
  Poly l(1L);
  for (const FieldElement& f : m.data()) {
    if (f.den().contains(z)) l = lcm(l, f.den());
  }
  return l.contains(z) ? normalize_unit(primitive_part(l, z)) : Poly(1L);
}

Poly full_denominator(const Matrix& m) {
  Poly l(1L);
  for (const FieldElement& f : m.data()) {
    if (!f.den().is_one()) l = lcm(l, f.den());
  }
  return l;
}

void require_unit_shift(const Matrix& m, const TowerSpec& tower) {
  const int z = tower.top();
  const Action& ph = tower.action(Endo::phi, z);
  if (ph.kind != ActionKind::shift || !ph.c.is_one()) {
    throw EngineError(ErrorCode::unsupported_tower,
                      "the rational solver needs phi(z) = z + 1; use verification for other towers");
  }
  std::set<int> vars;
  for (const FieldElement& f : m.data()) f.collect_vars(vars);
  vars.erase(z);
  for (int v : vars) {
    if (tower.action(Endo::phi, v).kind != ActionKind::identity) {
      throw EngineError(ErrorCode::unsupported_tower,
                        "parameter " + tower.var(v).name + " is moved by phi");
    }
  }
}

std::vector<FieldElement> combine(const std::vector<std::vector<FieldElement>>& basis,
                                  const std::vector<long>& coeffs) {
  std::vector<FieldElement> out(basis[0].size());
  for (std::size_t j = 0; j < basis.size(); ++j) {
    if (coeffs[j] == 0) continue;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += basis[j][i] * FieldElement(coeffs[j]);
  }
  return out;
}

// Ranks and pivot choices are computed modulo a prime at a random point.
// Both can only drop under reduction and specialization, so a nonzero
// minor found here is nonzero generically.
constexpr long long kPrime = 2147483647;
using ModPoint = std::map<int, long long>;
using ModMatrix = std::vector<std::vector<long long>>;

long long pow_mod(long long a, long long e) {
  long long r = 1;
  a %= kPrime;
  while (e > 0) {
    if (e & 1) r = r * a % kPrime;
    a = a * a % kPrime;
    e >>= 1;
  }
  return r;
}

long long residue(const BigInt& x) {
  BigInt r;
  mpz_fdiv_r_ui(r.get_mpz_t(), x.get_mpz_t(), static_cast<unsigned long>(kPrime));
  return r.get_si();
}

long long eval_mod(const Poly& f, const ModPoint& pt) {
  if (f.is_constant()) {
    const long long d = residue(f.constant().get_den());
    if (d == 0) throw EngineError(ErrorCode::invalid_argument, "denominator vanishes modulo the rank prime");
    return residue(f.constant().get_num()) * pow_mod(d, kPrime - 2) % kPrime;
  }
  const long long x = pt.at(f.main_var());
  long long acc = 0;
  for (auto it = f.coeffs().rbegin(); it != f.coeffs().rend(); ++it) acc = (acc * x + eval_mod(*it, pt)) % kPrime;
  return acc;
}

struct RankProfile {
  std::vector<std::size_t> rows;  // in elimination order
  std::vector<std::size_t> cols;  // pivot column of each picked row
};

// Gaussian elimination with row swaps. With rows and columns put in the
// returned order every leading principal minor is nonzero.
RankProfile rank_profile(ModMatrix a) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows == 0 ? 0 : a[0].size();
  std::vector<std::size_t> origin(rows);
  for (std::size_t i = 0; i < rows; ++i) origin[i] = i;
  RankProfile out;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t p = rank;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[rank]);
    std::swap(origin[p], origin[rank]);
    const long long inv = pow_mod(a[rank][c], kPrime - 2);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      if (a[r][c] == 0) continue;
      const long long f = a[r][c] * inv % kPrime;
      for (std::size_t k = c; k < cols; ++k) a[r][k] = ((a[r][k] - f * a[rank][k]) % kPrime + kPrime) % kPrime;
    }
    out.rows.push_back(origin[rank]);
    out.cols.push_back(c);
    ++rank;
  }
  return out;
}

// Fraction-free Gauss-Jordan on a polynomial matrix whose leading principal
// minors are nonzero. On return the left r x r block is det * I.
void bareiss_jordan(std::vector<std::vector<Poly>>& a, std::size_t r) {
  Poly prev(1L);
  const std::size_t cols = a.empty() ? 0 : a[0].size();
  for (std::size_t k = 0; k < r; ++k) {
    const Poly piv = a[k][k];
    if (piv.is_zero()) throw EngineError(ErrorCode::invalid_argument, "vanishing pivot");
    for (std::size_t i = 0; i < r; ++i) {
      if (i == k) continue;
      const Poly f = a[i][k];
      for (std::size_t j = 0; j < cols; ++j) {
        if (j == k) continue;
        Poly v = piv * a[i][j];
        if (!f.is_zero() && !a[k][j].is_zero()) v -= f * a[k][j];
        a[i][j] = prev.is_one() ? v : div_exact(v, prev);
      }
      a[i][k] = Poly();
    }
    for (std::size_t i = 0; i < k; ++i) a[i][i] = piv;
    prev = piv;
  }
}

// In-place reduced row echelon form over Q; returns the pivot columns.
std::vector<std::size_t> rref(std::vector<std::vector<BigRational>>& a) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows == 0 ? 0 : a[0].size();
  std::vector<std::size_t> pivots;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t p = rank;
    while (p < rows && sgn(a[p][c]) == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[rank]);
    const BigRational inv = 1 / a[rank][c];
    for (std::size_t k = c; k < cols; ++k) a[rank][k] *= inv;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank || sgn(a[r][c]) == 0) continue;
      const BigRational f = a[r][c];
      for (std::size_t k = c; k < cols; ++k) a[r][k] -= f * a[rank][k];
    }
    pivots.push_back(c);
    ++rank;
  }
  return pivots;
}

// Rational function p/q with deg p < n/2 and deg q <= n/2 through the first
// n sample values, via Euclid on the interpolating polynomial.
std::optional<std::pair<UPoly, UPoly>> reconstruct(const std::vector<BigRational>& xs,
                                                   const std::vector<BigRational>& ys, std::size_t n) {
  // Newton divided differences.
  std::vector<BigRational> dd(ys.begin(), ys.begin() + static_cast<long>(n));
  for (std::size_t j = 1; j < n; ++j) {
    for (std::size_t i = n - 1; i >= j; --i) dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - j]);
  }
  UPoly f{dd[n - 1]};
  UPoly m{BigRational(1)};
  for (std::size_t i = n - 1; i-- > 0;) {
    f = upoly::mul(f, UPoly{-xs[i], BigRational(1)});
    if (f.empty()) f.resize(1);
    f[0] += dd[i];
  }
  for (std::size_t i = 0; i < n; ++i) m = upoly::mul(m, UPoly{-xs[i], BigRational(1)});
  upoly::trim(f);
  if (f.empty()) return std::make_pair(UPoly{}, UPoly{BigRational(1)});
  UPoly r0 = m, r1 = f, t0{}, t1{BigRational(1)};
  upoly::trim(r1);
  while (!r1.empty() && 2 * (r1.size() - 1) >= n) {
    auto [q, r] = upoly::divmod(r0, r1);
    UPoly t2 = upoly::mul(q, t1);
    t2.resize(std::max(t2.size(), t0.size()));
    for (std::size_t i = 0; i < t0.size(); ++i) t2[i] = t0[i] - t2[i];
    for (std::size_t i = t0.size(); i < t2.size(); ++i) t2[i] = -t2[i];
    upoly::trim(t2);
    r0 = std::move(r1);
    r1 = std::move(r);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (t1.empty() || 2 * (t1.size() - 1) > n) return std::nullopt;
  for (std::size_t i = 0; i < n; ++i) {
    if (sgn(upoly::eval(t1, xs[i])) == 0) return std::nullopt;
  }
  return std::make_pair(r1, t1);
}

Poly to_poly(const UPoly& u, int v) {
  std::vector<Poly> cs(u.begin(), u.end());
  return Poly::from_coeffs(v, std::move(cs));
}

// Linear conditions on the coefficients of p for U(z) p(z+1) = U(z+1) M(z) p(z),
// i.e. x = p/U solving phi(x) = M x. Columns are built once per degree and
// reused across degree bounds.
// gcd of the numerators over lcm of the denominators of all coefficients.
void rational_content(const Poly& p, BigInt& num, BigInt& den) {
  if (!p.is_constant()) {
    for (const Poly& c : p.coeffs()) rational_content(c, num, den);
    return;
  }
  if (sgn(p.constant()) == 0) return;
  mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), p.constant().get_num_mpz_t());
  mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), p.constant().get_den_mpz_t());
}

// Divides out the polynomial gcd of the entries, then their rational
// content, so that basis vectors come out with small integer coefficients.
void make_primitive(std::vector<Poly>& v) {
  Poly g;
  for (const Poly& x : v) {
    if (!x.is_zero()) g = g.is_zero() ? x : gcd(g, x);
  }
  if (g.is_zero()) return;
  BigInt num = 0, den = 1;
  for (Poly& x : v) {
    if (x.is_zero()) continue;
    x = div_exact(x, g);
    rational_content(x, num, den);
  }
  BigRational scale(den, num);
  scale.canonicalize();
  for (Poly& x : v) {
    if (!x.is_zero()) x = x.scaled(scale);
  }
}

class ShiftSolver {
 public:
  ShiftSolver(const Matrix& M, Poly U, int z) : M_(M), U_(std::move(U)), z_(z), n_(M.rows()) {
    const Poly L = full_denominator(M);
    LM_.resize(n_ * n_);
    for (std::size_t r = 0; r < n_; ++r) {
      for (std::size_t c = 0; c < n_; ++c) {
        const FieldElement& f = M.at(r, c);
        LM_[r * n_ + c] = f.num() * div_exact(L, f.den());
      }
    }
    LU_ = L * U_;
    U1_ = shift_z(U_, z_, 1);
    std::set<int> vars;
    for (const FieldElement& f : M.data()) f.collect_vars(vars);
    U_.collect_vars(vars);
    vars.erase(z_);
    params_.assign(vars.begin(), vars.end());
  }

  const std::vector<int>& params() const { return params_; }

  // Nullity with the parameters specialized; never below the generic nullity.
  std::size_t specialized_nullity(long cap, const ModPoint& point) {
    auto a = specialized_mod(cap, point);
    const std::size_t cols = n_ * static_cast<std::size_t>(cap + 1);
    return cols - rank_profile(std::move(a)).rows.size();
  }

  // Without validation a single-parameter basis is only checked at a few
  // extra sample values; callers must then verify what they build from it.
  std::vector<std::vector<FieldElement>> solve(long cap, const ModPoint& point, bool validate = true) {
    extend(cap);
    const auto width = static_cast<std::size_t>(cap + 1);
    const std::size_t cols = n_ * width;
    const RankProfile prof = rank_profile(specialized_mod(cap, point));
    const std::size_t r = prof.rows.size();
    if (params_.size() == 1) {
      if (auto vs = interpolate(cap, prof, validate)) return to_solutions(*vs, width);
    }
    // Pivot columns first, then the free ones.
    std::vector<std::size_t> order = prof.cols;
    std::vector<bool> is_pivot(cols, false);
    for (std::size_t c : prof.cols) is_pivot[c] = true;
    for (std::size_t c = 0; c < cols; ++c) {
      if (!is_pivot[c]) order.push_back(c);
    }
    std::vector<std::size_t> pos(cols);
    for (std::size_t i = 0; i < cols; ++i) pos[order[i]] = i;
    std::map<std::size_t, std::size_t> where;
    for (std::size_t i = 0; i < r; ++i) where[prof.rows[i]] = i;
    std::vector<std::vector<Poly>> a(r, std::vector<Poly>(cols));
    for_each_entry(width, [&](std::size_t row, std::size_t col, const Poly& p) {
      auto it = where.find(row);
      if (it != where.end()) a[it->second][pos[col]] = p;
    });
    std::vector<std::vector<Poly>> vs;
    bool ok = true;
    try {
      bareiss_jordan(a, r);
    } catch (const EngineError&) {
      ok = false;
    }
    for (std::size_t f = r; ok && f < cols; ++f) {
      std::vector<Poly> v(cols);
      v[order[f]] = r == 0 ? Poly(1L) : a[0][0];
      for (std::size_t i = 0; i < r; ++i) v[order[i]] = -a[i][f];
      make_primitive(v);
      // An unlucky specialization can only undercount the rank; then the
      // reduced system admits vectors that miss the dropped rows.
      if (!satisfies_all(v, width)) ok = false;
      vs.push_back(std::move(v));
    }
    if (!ok) return to_solutions(nullspace(symbolic(cap, all_rows(cap))), width);
    return to_solutions(vs, width);
  }

  // One parameter: reduced echelon forms at integer parameter values,
  // rational reconstruction of each entry, then an exact check against the
  // full system. Returns nullopt when the sample budget runs out.
  std::optional<std::vector<std::vector<Poly>>> interpolate(long cap, const RankProfile& prof,
                                                            bool validate) {
    const std::vector<std::size_t>& pivots = prof.cols;
    const auto width = static_cast<std::size_t>(cap + 1);
    const std::size_t cols = n_ * width;
    const int v = params_[0];
    std::vector<bool> is_pivot(cols, false);
    for (std::size_t c : pivots) is_pivot[c] = true;
    std::vector<std::size_t> free;
    for (std::size_t c = 0; c < cols; ++c) {
      if (!is_pivot[c]) free.push_back(c);
    }
    const std::size_t r = pivots.size();
    std::vector<BigRational> xs;
    // values[f][i]: entry of pivot row i in free column f.
    std::vector<std::vector<std::vector<BigRational>>> values(free.size(),
                                                              std::vector<std::vector<BigRational>>(r));
    constexpr std::size_t kExtra = 3;
    long next = 1000;
    for (std::size_t n = 8; n <= 512; n *= 2) {
      while (xs.size() < n + kExtra) {
        const BigRational x(next++);
        auto a = specialized(cap, Point{{v, x}}, &prof.rows);
        if (rref(a) != pivots) continue;
        xs.push_back(x);
        for (std::size_t f = 0; f < free.size(); ++f) {
          for (std::size_t i = 0; i < r; ++i) values[f][i].push_back(a[i][free[f]]);
        }
      }
      std::vector<std::vector<Poly>> out;
      bool ok = true;
      for (std::size_t f = 0; ok && f < free.size(); ++f) {
        std::vector<std::pair<UPoly, UPoly>> fr;
        UPoly den{BigRational(1)};
        for (std::size_t i = 0; ok && i < r; ++i) {
          auto pq = reconstruct(xs, values[f][i], n);
          if (!pq) {
            ok = false;
            break;
          }
          for (std::size_t k = n; k < n + kExtra; ++k) {
            if (upoly::eval(pq->first, xs[k]) != values[f][i][k] * upoly::eval(pq->second, xs[k])) ok = false;
          }
          den = upoly::divmod(upoly::mul(den, pq->second), upoly::gcd(den, pq->second)).first;
          fr.push_back(std::move(*pq));
        }
        if (!ok) break;
        std::vector<Poly> vec(cols);
        vec[free[f]] = to_poly(den, v);
        for (std::size_t i = 0; i < r; ++i) {
          if (fr[i].first.empty()) continue;
          const UPoly scale = upoly::divmod(den, fr[i].second).first;
          vec[pivots[i]] = -to_poly(upoly::mul(fr[i].first, scale), v);
        }
        make_primitive(vec);
        if (validate && !satisfies_all(vec, width)) ok = false;
        out.push_back(std::move(vec));
      }
      if (ok) return out;
    }
    return std::nullopt;
  }

  bool is_solution(const std::vector<FieldElement>& x) const {
    for (std::size_t r = 0; r < n_; ++r) {
      FieldElement acc;
      for (std::size_t c = 0; c < n_; ++c) {
        if (!M_.at(r, c).is_zero() && !x[c].is_zero()) acc += M_.at(r, c) * x[c];
      }
      // phi is z -> z + 1 on these entries.
      const FieldElement lhs = x[r].is_zero()
                                   ? FieldElement()
                                   : FieldElement::fraction(shift_z(x[r].num(), z_, 1),
                                                            shift_z(x[r].den(), z_, 1));
      if (!(lhs == acc)) return false;
    }
    return true;
  }

 private:
  // Coefficient list in z of each residual component, keyed by row
  // j * n + r (degree j, component r).
  using Column = std::map<std::size_t, Poly>;

  void extend(long cap) {
    const Poly Z = Poly::variable(z_);
    while (static_cast<long>(zpow_.size()) <= cap) {
      const std::size_t m = zpow_.size();
      zpow_.push_back(m == 0 ? Poly(1L) : zpow_.back() * Z);
      z1pow_.push_back(m == 0 ? Poly(1L) : z1pow_.back() * (Z + 1));
      for (std::size_t e = 0; e < n_; ++e) {
        Column col;
        for (std::size_t r = 0; r < n_; ++r) {
          Poly term = LM_[r * n_ + e].is_zero() ? Poly() : U1_ * LM_[r * n_ + e] * zpow_[m];
          const Poly res = r == e ? LU_ * z1pow_[m] - term : -term;
          const std::vector<Poly> cs = res.coeffs_in(z_);
          for (std::size_t j = 0; j < cs.size(); ++j) {
            if (!cs[j].is_zero()) col[j * n_ + r] = cs[j];
          }
        }
        columns_[{e, m}] = std::move(col);
      }
    }
  }

  template <class Fn>
  void for_each_entry(std::size_t width, Fn fn) const {
    for (std::size_t e = 0; e < n_; ++e) {
      for (std::size_t m = 0; m < width; ++m) {
        for (const auto& [row, p] : columns_.at({e, m})) fn(row, e * width + m, p);
      }
    }
  }

  bool satisfies_all(const std::vector<Poly>& v, std::size_t width) const {
    std::map<std::size_t, Poly> acc;
    for_each_entry(width, [&](std::size_t row, std::size_t col, const Poly& p) {
      if (!v[col].is_zero()) acc[row] += p * v[col];
    });
    for (const auto& [row, p] : acc) {
      if (!p.is_zero()) return false;
    }
    return true;
  }

  std::size_t row_count(long cap) {
    std::size_t rows = 0;
    for (long m = 0; m <= cap; ++m) {
      for (std::size_t e = 0; e < n_; ++e) {
        const Column& col = columns_.at({e, static_cast<std::size_t>(m)});
        if (!col.empty()) rows = std::max(rows, col.rbegin()->first + 1);
      }
    }
    return rows;
  }

  std::vector<std::size_t> all_rows(long cap) {
    std::vector<std::size_t> rows(row_count(cap));
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
    return rows;
  }

  ModMatrix specialized_mod(long cap, const ModPoint& point) {
    extend(cap);
    const auto width = static_cast<std::size_t>(cap + 1);
    ModMatrix a(row_count(cap), std::vector<long long>(n_ * width, 0));
    for_each_entry(width, [&](std::size_t row, std::size_t col, const Poly& p) { a[row][col] = eval_mod(p, point); });
    return a;
  }

  // Parameters evaluated at a point; all rows, or the listed ones in order.
  std::vector<std::vector<BigRational>> specialized(long cap, const Point& point,
                                                    const std::vector<std::size_t>* rows = nullptr) {
    extend(cap);
    const auto width = static_cast<std::size_t>(cap + 1);
    std::map<std::size_t, std::size_t> where;
    if (rows != nullptr) {
      for (std::size_t i = 0; i < rows->size(); ++i) where[(*rows)[i]] = i;
    }
    const std::size_t count = rows == nullptr ? row_count(cap) : rows->size();
    std::vector<std::vector<BigRational>> a(count, std::vector<BigRational>(n_ * width, BigRational(0)));
    for_each_entry(width, [&](std::size_t row, std::size_t col, const Poly& p) {
      if (rows == nullptr) {
        a[row][col] = evaluate(p, point);
        return;
      }
      auto it = where.find(row);
      if (it != where.end()) a[it->second][col] = evaluate(p, point);
    });
    return a;
  }

  Matrix symbolic(long cap, const std::vector<std::size_t>& rows) {
    const auto width = static_cast<std::size_t>(cap + 1);
    std::map<std::size_t, std::size_t> where;
    for (std::size_t i = 0; i < rows.size(); ++i) where[rows[i]] = i;
    Matrix s(rows.size(), n_ * width);
    for (std::size_t e = 0; e < n_; ++e) {
      for (std::size_t m = 0; m < width; ++m) {
        for (const auto& [row, p] : columns_.at({e, m})) {
          auto it = where.find(row);
          if (it != where.end()) s.at(it->second, e * width + m) = FieldElement(p);
        }
      }
    }
    return s;
  }

  std::vector<std::vector<FieldElement>> to_solutions(const std::vector<std::vector<Poly>>& vs,
                                                      std::size_t width) const {
    std::vector<std::vector<FieldElement>> fs;
    for (const auto& v : vs) {
      std::vector<FieldElement> f(v.size());
      for (std::size_t i = 0; i < v.size(); ++i) f[i] = FieldElement(v[i]);
      fs.push_back(std::move(f));
    }
    return to_solutions(fs, width);
  }

  std::vector<std::vector<FieldElement>> to_solutions(
      const std::vector<std::vector<FieldElement>>& vs, std::size_t width) const {
    const FieldElement Uf(U_);
    std::vector<std::vector<FieldElement>> out;
    for (const auto& v : vs) {
      std::vector<FieldElement> x(n_);
      for (std::size_t e = 0; e < n_; ++e) {
        for (std::size_t m = 0; m < width; ++m) {
          const FieldElement& c = v[e * width + m];
          if (!c.is_zero()) x[e] += c * FieldElement(zpow_[m]);
        }
        x[e] /= Uf;
      }
      out.push_back(std::move(x));
    }
    return out;
  }

  const Matrix& M_;
  Poly U_;
  int z_;
  std::size_t n_;
  std::vector<Poly> LM_;
  Poly LU_;
  Poly U1_;
  std::vector<int> params_;
  std::vector<Poly> zpow_;
  std::vector<Poly> z1pow_;
  std::map<std::pair<std::size_t, std::size_t>, Column> columns_;
};

// Deterministic random residues for the parameters.
class ParamPoints {
 public:
  explicit ParamPoints(std::vector<int> vars) : vars_(std::move(vars)) {}
  ModPoint next() {
    std::uniform_int_distribution<long long> pick(1, kPrime - 1);
    ModPoint p;
    for (int v : vars_) p[v] = pick(rng_);
    return p;
  }

 private:
  std::vector<int> vars_;
  std::mt19937_64 rng_{0xa11ceULL};
};

Matrix inverse_of(const TwistedSystem& tw) { return tw.M_inv.rows() == 0 ? inverse(tw.M) : tw.M_inv; }

}  // namespace

LinearSystem make_system(Matrix A, TowerSpec tower) {
  if (!A.square() || A.rows() == 0) {
    throw EngineError(ErrorCode::dimension_mismatch, "system matrix must be square and nonempty");
  }
  if (det(A).is_zero()) throw EngineError(ErrorCode::invalid_argument, "system matrix is singular");
  return {std::move(A), std::move(tower)};
}

bool verify_isomonodromic(const LinearSystem& sys, const GaugeWitness& w) {
  if (w.B.rows() != sys.n() || w.B.cols() != sys.n()) {
    throw EngineError(ErrorCode::dimension_mismatch, "B must have the size of A");
  }
  if (is_singular(w.B)) throw EngineError(ErrorCode::singular_b, "B is singular");
  // phi(B) A == sigma(A) B avoids inverting A.
  return products_equal(apply_endo(w.B, sys.tower, Endo::phi), sys.A,
                        apply_endo(sys.A, sys.tower, Endo::sigma), w.B);
}

TwistedSystem to_twisted_system(const LinearSystem& sys) {
  const Matrix sa = apply_endo(sys.A, sys.tower, Endo::sigma);
  return {kron(transpose(inverse(sys.A)), sa), kron(transpose(sys.A), inverse(sa))};
}

std::vector<long> dispersion(const Poly& u, const Poly& v, int z) {
  if (!u.contains(z) || !v.contains(z)) return {};
  std::set<int> params;
  u.collect_vars(params);
  v.collect_vars(params);
  params.erase(z);
  const Poly lu = u.coeffs_in(z).back();
  const Poly lv = v.coeffs_in(z).back();
  // Candidates from a generic specialization; each is then confirmed
  // exactly, so an unlucky point can only cost time.
  std::mt19937_64 rng(0xd15eULL);
  std::uniform_int_distribution<long> small(-9, 9);
  std::uniform_int_distribution<long> num(-1000, 1000);
  std::uniform_int_distribution<long> den(1, 97);
  const int j = z + 1;
  for (int attempt = 0; attempt < 32; ++attempt) {
    // Small integers keep the root bound, and so the scan, short.
    std::map<int, BigRational> point;
    for (int p : params) {
      BigRational r(attempt < 8 ? small(rng) : num(rng), attempt < 8 ? 1 : den(rng));
      r.canonicalize();
      point[p] = r;
    }
    if (sgn(evaluate(lu, point)) == 0 || sgn(evaluate(lv, point)) == 0) continue;
    const Poly us = evaluate_partial(u, point);
    const Poly vs = evaluate_partial(v, point);
    std::vector<long> candidates;
    if (auto c = upoly::shift_candidates(to_upoly(us, z), to_upoly(vs, z), 1'000'000)) {
      candidates = std::move(*c);
    } else {
      const Poly res = resultant(us, substitute(vs, z, Poly::variable(z) + Poly::variable(j)), z);
      for (const BigInt& r : upoly::integer_roots(to_upoly(res, j))) {
        if (sgn(r) >= 0 && r.fits_slong_p()) candidates.push_back(r.get_si());
      }
    }
    std::vector<long> out;
    for (long h : candidates) {
      if (gcd(u, shift_z(v, z, h)).contains(z)) out.push_back(h);
    }
    return out;
  }
  throw EngineError(ErrorCode::all_samples_hit_poles, "no generic specialization for dispersion");
}

Poly universal_denominator(const TwistedSystem& tw, int z) {
  Poly a = shift_z(denominator_in_z(tw.M, z), z, -1);
  Poly b = denominator_in_z(inverse_of(tw), z);
  Poly U(1L);
  std::vector<long> hs = dispersion(a, b, z);
  std::sort(hs.rbegin(), hs.rend());
  for (long h : hs) {
    const Poly d = gcd(a, shift_z(b, z, h));
    if (!d.contains(z)) continue;
    a = div_exact(a, d);
    b = div_exact(b, shift_z(d, z, -h));
    for (long i = 0; i <= h; ++i) U *= shift_z(d, z, -i);
  }
  return U;
}

std::vector<std::vector<FieldElement>> rational_solutions(const TwistedSystem& tw,
                                                          const TowerSpec& tower, long degree_cap) {
  if (degree_cap < 0) throw EngineError(ErrorCode::invalid_argument, "degree cap must be >= 0");
  require_unit_shift(tw.M, tower);
  const int z = tower.top();
  ShiftSolver solver(tw.M, universal_denominator(tw, z), z);
  ParamPoints points(solver.params());
  const ModPoint p = points.next();
  if (solver.specialized_nullity(degree_cap, p) == 0) return {};
  return solver.solve(degree_cap, p);
}

IsomonodromyResult is_isomonodromic(const LinearSystem& sys, long degree_cap, std::uint64_t seed) {
  if (degree_cap < 0) throw EngineError(ErrorCode::invalid_argument, "degree cap must be >= 0");
  const TwistedSystem tw = to_twisted_system(sys);
  require_unit_shift(tw.M, sys.tower);
  const int z = sys.tower.top();
  ShiftSolver solver(tw.M, universal_denominator(tw, z), z);
  ParamPoints points(solver.params());
  const ModPoint p = points.next();
  IsomonodromyResult result;
  result.degree_cap = degree_cap;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> pick(-5, 5);
  std::size_t last_dim = 0;
  for (long cap = 0; cap <= degree_cap; ++cap) {
    // Equal dimension means the same space as at the previous bound.
    const std::size_t nullity = solver.specialized_nullity(cap, p);
    if (nullity == 0 || nullity == last_dim) continue;
    // Unvalidated first: every witness is verified exactly below, and a
    // failure triggers the validated solve.
    for (bool validate : {false, true}) {
      const auto basis = solver.solve(cap, p, validate);
      if (basis.empty() || basis.size() == last_dim) break;
      bool rejected = false;
      for (int attempt = 0; attempt < 24 && !rejected; ++attempt) {
        std::vector<long> coeffs(basis.size(), 1);
        if (attempt > 0) {
          for (long& c : coeffs) c = pick(rng);
        }
        GaugeWitness w{unvec(combine(basis, coeffs), sys.n())};
        if (is_singular(w.B)) continue;
        if (!verify_isomonodromic(sys, w)) {
          if (validate) throw EngineError(ErrorCode::invalid_argument, "solver produced a non-solution");
          rejected = true;
          continue;
        }
        result.witness = std::move(w);
        result.degree_used = cap;
        result.solution_dim = basis.size();
        return result;
      }
      if (!rejected) {
        last_dim = basis.size();
        break;
      }
    }
  }
  return result;
}

LinearSystem companion(const std::vector<FieldElement>& coeffs, const TowerSpec& tower,
                       CompanionConvention convention) {
  const std::size_t m = coeffs.size();
  if (m == 0) throw EngineError(ErrorCode::invalid_argument, "companion needs at least one coefficient");
  if (coeffs[0].is_zero()) {
    throw EngineError(ErrorCode::zero_trailing_coefficient, "trailing coefficient c_0 is zero");
  }
  Matrix A(m, m);
  for (std::size_t i = 0; i + 1 < m; ++i) A.at(i, i + 1) = FieldElement(1L);
  for (std::size_t c = 0; c < m; ++c) A.at(m - 1, c) = -coeffs[c];
  if (convention == CompanionConvention::transposed) A = transpose(A);
  return make_system(std::move(A), tower);
}

}  // namespace sigmadep
