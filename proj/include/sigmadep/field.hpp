#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sigmadep/poly.hpp"

namespace sigmadep {

// Element of Q(v_0, ..., v_m): a reduced fraction of polynomials.
// Canonical form: gcd(num, den) = 1 and the lexicographically leading
// rational coefficient of den is 1 (for a denominator free of parameters
// this is "monic in the top variable"). Equal values have equal fields.
class FieldElement {
 public:
  FieldElement() : den_(1L) {}
  FieldElement(const BigRational& c) : num_(c), den_(1L) {}  // NOLINT
  FieldElement(long c) : num_(c), den_(1L) {}                // NOLINT
  FieldElement(Poly p) : num_(std::move(p)), den_(1L) {}     // NOLINT

  // Reduces num/den; throws zero_denominator when den == 0.
  static FieldElement fraction(Poly num, Poly den);
  static FieldElement variable(int v) { return FieldElement(Poly::variable(v)); }

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_.is_one() && den_.is_one(); }
  bool is_polynomial() const { return den_.is_one(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  bool contains(int v) const { return num_.contains(v) || den_.contains(v); }
  void collect_vars(std::set<int>& out) const {
    num_.collect_vars(out);
    den_.collect_vars(out);
  }

  FieldElement operator-() const;
  FieldElement inverse() const;
  FieldElement pow(long e) const;

  friend FieldElement operator+(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator-(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator*(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator/(const FieldElement& a, const FieldElement& b);
  FieldElement& operator+=(const FieldElement& o) { return *this = *this + o; }
  FieldElement& operator-=(const FieldElement& o) { return *this = *this - o; }
  FieldElement& operator*=(const FieldElement& o) { return *this = *this * o; }
  FieldElement& operator/=(const FieldElement& o) { return *this = *this / o; }
  friend bool operator==(const FieldElement& a, const FieldElement& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

 private:
  struct Reduced {};
  FieldElement(Poly num, Poly den, Reduced) : num_(std::move(num)), den_(std::move(den)) {}

  Poly num_;
  Poly den_;
};

// Deterministic total order (numerator first).
int compare(const FieldElement& a, const FieldElement& b);

enum class Endo { phi, sigma };

enum class ActionKind { identity, shift, scale };

// The image of one variable under one endomorphism: v, v + c or c*v, where c
// involves only variables below v.
struct Action {
  ActionKind kind = ActionKind::identity;
  FieldElement c;
};

struct VarDecl {
  std::string name;
  Action phi;
  Action sigma;
};

// Declared tower Q(v_0)(v_1)...(v_m); variable i has index i and the last
// declared variable is the equation variable z. Construction validates that
// each action only refers to lower variables and that phi and sigma commute
// on every generator.
class TowerSpec {
 public:
  TowerSpec() = default;
  explicit TowerSpec(std::vector<VarDecl> vars);

  std::size_t size() const { return vars_.size(); }
  int top() const { return static_cast<int>(vars_.size()) - 1; }
  const VarDecl& var(int i) const { return vars_.at(static_cast<std::size_t>(i)); }
  const std::vector<VarDecl>& vars() const { return vars_; }
  std::optional<int> index_of(const std::string& name) const;
  const Action& action(Endo e, int v) const;
  // Image of the generator v as a field element.
  FieldElement image(Endo e, int v) const;
  // True when the endomorphism maps every generator to a polynomial.
  bool polynomial_images(Endo e) const;

 private:
  std::vector<VarDecl> vars_;
};

// Applies phi or sigma `power` times by simultaneous substitution.
FieldElement apply_endo(const FieldElement& f, const TowerSpec& tower, Endo which,
                        unsigned power = 1);

using Point = std::map<int, BigRational>;

// Exact value at a point; throws pole_at_point when the denominator vanishes.
BigRational evaluate(const FieldElement& f, const Point& point);
// Image of a point under the endomorphism: evaluates each generator's image.
Point map_point(const Point& point, const TowerSpec& tower, Endo which, unsigned power = 1);

}  // namespace sigmadep
