#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <vector>

namespace sigmadep {

using BigInt = mpz_class;
using BigRational = mpq_class;

// Multivariate polynomial over Q in recursive dense form.
//
// Variables are identified by integer indices; a larger index is a higher
// tower level. A non-constant Poly has a main variable and a dense vector of
// coefficients indexed by degree, each coefficient involving only variables
// of strictly smaller index. Canonical form: no trailing zero coefficients
// and degree >= 1 in the main variable, so structural equality is equality.
class Poly {
 public:
  static constexpr int kConst = std::numeric_limits<int>::min();

  Poly() = default;
  Poly(const BigRational& c) : c_(c) {}  // NOLINT(google-explicit-constructor)
  Poly(long c) : c_(c) {}                // NOLINT(google-explicit-constructor)

  static Poly variable(int v);
  // sum_i coeffs[i] * v^i; coefficients may contain any variables.
  static Poly from_coeffs(int v, std::vector<Poly> coeffs);

  bool is_zero() const { return var_ == kConst && sgn(c_) == 0; }
  bool is_constant() const { return var_ == kConst; }
  bool is_one() const { return var_ == kConst && c_ == 1; }
  const BigRational& constant() const { return c_; }
  int main_var() const { return var_; }
  std::size_t degree() const { return var_ == kConst ? 0 : coeffs_.size() - 1; }
  const std::vector<Poly>& coeffs() const { return coeffs_; }
  const Poly& lc() const { return var_ == kConst ? *this : coeffs_.back(); }

  // Degree in an arbitrary variable; 0 when absent (also for zero).
  std::size_t degree_in(int v) const;
  // Coefficients with respect to an arbitrary variable v.
  std::vector<Poly> coeffs_in(int v) const;
  bool contains(int v) const;
  void collect_vars(std::set<int>& out) const;
  // Rational coefficient of the lexicographically leading monomial.
  const BigRational& base_lc() const;

  Poly operator-() const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Poly& o);
  Poly scaled(const BigRational& k) const;
  Poly pow(unsigned e) const;

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend bool operator==(const Poly& a, const Poly& b);

  // Total order used for deterministic output.
  friend int compare(const Poly& a, const Poly& b);

  // Polynomial in main variable v with coefficients already below v.
  static Poly raw(int v, std::vector<Poly> coeffs);

 private:
  void canonicalize();

  int var_ = kConst;
  BigRational c_;
  std::vector<Poly> coeffs_;
};

// Exact quotient a/b, or nullopt when b does not divide a.
std::optional<Poly> exact_div(const Poly& a, const Poly& b);
// Exact quotient; throws when b does not divide a (internal invariant).
Poly div_exact(const Poly& a, const Poly& b);

// Pseudo-remainder of a by b with respect to variable v.
Poly prem(const Poly& a, const Poly& b, int v);
// Content with respect to v: gcd of the coefficients in v.
Poly content(const Poly& p, int v);
Poly primitive_part(const Poly& p, int v);
// Normalized gcd (lex-leading rational coefficient 1; gcd(0,0) = 0).
Poly gcd(const Poly& a, const Poly& b);
Poly lcm(const Poly& a, const Poly& b);
// Scale so that the lex-leading rational coefficient is 1.
Poly normalize_unit(const Poly& p);
Poly resultant(const Poly& a, const Poly& b, int v);
Poly derivative(const Poly& p, int v);

// Simultaneous substitution of variables by polynomial images; variables not
// in the map are kept.
Poly substitute(const Poly& p, const std::map<int, Poly>& images);
Poly substitute(const Poly& p, int v, const Poly& image);
// Partial evaluation at rational values; remaining variables kept.
Poly evaluate_partial(const Poly& p, const std::map<int, BigRational>& point);
// Full evaluation; every occurring variable must be assigned.
BigRational evaluate(const Poly& p, const std::map<int, BigRational>& point);

// Univariate helpers over Q: coefficients are constants.
using UPoly = std::vector<BigRational>;  // index = degree
UPoly to_upoly(const Poly& p, int v);
Poly from_upoly(const UPoly& u, int v);

}  // namespace sigmadep
