#include "sigmadep/field.hpp"

#include <utility>

#include "sigmadep/errors.hpp"

namespace sigmadep {

FieldElement FieldElement::fraction(Poly num, Poly den) {
  if (den.is_zero()) throw EngineError(ErrorCode::zero_denominator, "zero denominator");
  if (num.is_zero()) return FieldElement();
  if (!den.is_constant()) {
    Poly g = gcd(num, den);
    if (!g.is_one()) {
      num = div_exact(num, g);
      den = div_exact(den, g);
    }
  }
  BigRational lc = den.base_lc();
  if (lc != 1) {
    BigRational inv = 1 / lc;
    num = num.scaled(inv);
    den = den.scaled(inv);
  }
  return FieldElement(std::move(num), std::move(den), Reduced{});
}

FieldElement FieldElement::operator-() const { return FieldElement(-num_, den_, Reduced{}); }

FieldElement FieldElement::inverse() const {
  if (is_zero()) throw EngineError(ErrorCode::division_by_zero, "inverse of zero");
  BigRational lc = num_.base_lc();
  BigRational inv = 1 / lc;
  return FieldElement(den_.scaled(inv), num_.scaled(inv), Reduced{});
}

FieldElement FieldElement::pow(long e) const {
  if (e < 0) return inverse().pow(-e);
  const auto u = static_cast<unsigned>(e);
  return FieldElement(num_.pow(u), den_.pow(u), Reduced{});
}

FieldElement operator+(const FieldElement& a, const FieldElement& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.den_ == b.den_) return FieldElement::fraction(a.num_ + b.num_, a.den_);
  if (a.den_.is_constant() && b.den_.is_constant()) {
    return FieldElement::fraction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  Poly g = gcd(a.den_, b.den_);
  Poly ad = div_exact(a.den_, g);
  Poly bd = div_exact(b.den_, g);
  Poly num = a.num_ * bd + b.num_ * ad;
  if (g.is_one()) {
    // Coprime denominators: the sum is already reduced.
    if (num.is_zero()) return FieldElement();
    Poly den = a.den_ * b.den_;
    BigRational lc = den.base_lc();
    BigRational inv = 1 / lc;
    return FieldElement(num.scaled(inv), den.scaled(inv), FieldElement::Reduced{});
  }
  return FieldElement::fraction(std::move(num), ad * b.den_);
}

FieldElement operator-(const FieldElement& a, const FieldElement& b) { return a + (-b); }

FieldElement operator*(const FieldElement& a, const FieldElement& b) {
  if (a.is_zero() || b.is_zero()) return FieldElement();
  if (a.is_polynomial() && b.is_polynomial()) return FieldElement(a.num_ * b.num_);
  Poly g1 = gcd(a.num_, b.den_);
  Poly g2 = gcd(b.num_, a.den_);
  Poly num = div_exact(a.num_, g1) * div_exact(b.num_, g2);
  Poly den = div_exact(a.den_, g2) * div_exact(b.den_, g1);
  BigRational lc = den.base_lc();
  if (lc != 1) {
    BigRational inv = 1 / lc;
    num = num.scaled(inv);
    den = den.scaled(inv);
  }
  return FieldElement(std::move(num), std::move(den), FieldElement::Reduced{});
}

FieldElement operator/(const FieldElement& a, const FieldElement& b) {
  if (b.is_zero()) throw EngineError(ErrorCode::division_by_zero, "division by zero");
  return a * b.inverse();
}

int compare(const FieldElement& a, const FieldElement& b) {
  int c = compare(a.num(), b.num());
  return c != 0 ? c : compare(a.den(), b.den());
}

namespace {

FieldElement image_of(const Action& act, int v) {
  const FieldElement x = FieldElement::variable(v);
  switch (act.kind) {
    case ActionKind::identity:
      return x;
    case ActionKind::shift:
      return x + act.c;
    case ActionKind::scale:
      return act.c * x;
  }
  return x;
}

bool action_uses_only_lower(const Action& act, int v) {
  std::set<int> used;
  act.c.collect_vars(used);
  return used.empty() || *used.rbegin() < v;
}

// Horner substitution with field-element images.
FieldElement substitute_field(const Poly& p, const std::map<int, FieldElement>& images) {
  if (p.is_constant()) return FieldElement(p.constant());
  std::vector<FieldElement> cs;
  cs.reserve(p.coeffs().size());
  for (const auto& c : p.coeffs()) cs.push_back(substitute_field(c, images));
  auto it = images.find(p.main_var());
  const FieldElement x = it == images.end() ? FieldElement::variable(p.main_var()) : it->second;
  FieldElement r;
  for (auto c = cs.rbegin(); c != cs.rend(); ++c) r = r * x + *c;
  return r;
}

}  // namespace

TowerSpec::TowerSpec(std::vector<VarDecl> vars) : vars_(std::move(vars)) {
  if (vars_.empty()) throw EngineError(ErrorCode::invalid_tower, "tower declares no variables");
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (vars_[i].name == vars_[j].name) {
        throw EngineError(ErrorCode::invalid_tower, "variable declared twice: " + vars_[i].name);
      }
    }
    const int v = static_cast<int>(i);
    for (const Action* act : {&vars_[i].phi, &vars_[i].sigma}) {
      if (act->kind == ActionKind::identity) continue;
      if (!action_uses_only_lower(*act, v)) {
        throw EngineError(ErrorCode::invalid_tower,
                          "action on " + vars_[i].name + " refers to a variable at or above it");
      }
      if (act->kind == ActionKind::scale && act->c.is_zero()) {
        throw EngineError(ErrorCode::invalid_tower, "scale action by zero on " + vars_[i].name);
      }
      if (act->kind == ActionKind::shift && act->c.is_zero()) {
        throw EngineError(ErrorCode::invalid_tower, "shift by zero on " + vars_[i].name);
      }
    }
  }
  for (int v = 0; v <= top(); ++v) {
    const FieldElement x = FieldElement::variable(v);
    FieldElement ps = apply_endo(apply_endo(x, *this, Endo::sigma), *this, Endo::phi);
    FieldElement sp = apply_endo(apply_endo(x, *this, Endo::phi), *this, Endo::sigma);
    if (!(ps == sp)) {
      throw EngineError(ErrorCode::invalid_tower,
                        "phi and sigma do not commute on " + vars_[static_cast<std::size_t>(v)].name);
    }
  }
}

std::optional<int> TowerSpec::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (vars_[i].name == name) return static_cast<int>(i);
  }
  return std::nullopt;
}

const Action& TowerSpec::action(Endo e, int v) const {
  const VarDecl& d = var(v);
  return e == Endo::phi ? d.phi : d.sigma;
}

FieldElement TowerSpec::image(Endo e, int v) const { return image_of(action(e, v), v); }

bool TowerSpec::polynomial_images(Endo e) const {
  for (int v = 0; v <= top(); ++v) {
    const Action& act = action(e, v);
    if (act.kind != ActionKind::identity && !act.c.is_polynomial()) return false;
  }
  return true;
}

FieldElement apply_endo(const FieldElement& f, const TowerSpec& tower, Endo which, unsigned power) {
  if (f.is_constant() || power == 0) return f;
  FieldElement cur = f;
  if (tower.polynomial_images(which)) {
    std::map<int, Poly> images;
    for (int v = 0; v <= tower.top(); ++v) {
      if (tower.action(which, v).kind == ActionKind::identity) continue;
      images.emplace(v, tower.image(which, v).num());
    }
    if (images.empty()) return f;
    for (unsigned i = 0; i < power; ++i) {
      Poly n = substitute(cur.num(), images);
      Poly d = cur.den().is_constant() ? cur.den() : substitute(cur.den(), images);
      cur = FieldElement::fraction(std::move(n), std::move(d));
    }
    return cur;
  }
  std::map<int, FieldElement> images;
  for (int v = 0; v <= tower.top(); ++v) {
    if (tower.action(which, v).kind == ActionKind::identity) continue;
    images.emplace(v, tower.image(which, v));
  }
  for (unsigned i = 0; i < power; ++i) {
    cur = substitute_field(cur.num(), images) / substitute_field(cur.den(), images);
  }
  return cur;
}

BigRational evaluate(const FieldElement& f, const Point& point) {
  BigRational d = evaluate(f.den(), point);
  if (sgn(d) == 0) throw EngineError(ErrorCode::pole_at_point, "pole at evaluation point");
  return evaluate(f.num(), point) / d;
}

Point map_point(const Point& point, const TowerSpec& tower, Endo which, unsigned power) {
  Point cur = point;
  for (unsigned i = 0; i < power; ++i) {
    Point next = cur;
    for (int v = 0; v <= tower.top(); ++v) {
      if (tower.action(which, v).kind == ActionKind::identity) continue;
      next[v] = evaluate(tower.image(which, v), cur);
    }
    cur = std::move(next);
  }
  return cur;
}

}  // namespace sigmadep
