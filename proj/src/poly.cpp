#include "sigmadep/poly.hpp"

#include <algorithm>
#include <utility>

#include "sigmadep/errors.hpp"
#include "sigmadep/univariate.hpp"

namespace sigmadep {

Poly Poly::variable(int v) {
  Poly p;
  p.var_ = v;
  p.coeffs_ = {Poly(0L), Poly(1L)};
  return p;
}

Poly Poly::raw(int v, std::vector<Poly> coeffs) {
  Poly p;
  p.var_ = v;
  p.coeffs_ = std::move(coeffs);
  p.canonicalize();
  return p;
}

Poly Poly::from_coeffs(int v, std::vector<Poly> coeffs) {
  bool below = std::all_of(coeffs.begin(), coeffs.end(),
                           [v](const Poly& c) { return c.var_ < v; });
  if (below) return raw(v, std::move(coeffs));
  Poly x = variable(v);
  Poly r;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    r *= x;
    r += *it;
  }
  return r;
}

void Poly::canonicalize() {
  if (var_ == kConst) return;
  while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
  if (coeffs_.size() <= 1) {
    Poly c = coeffs_.empty() ? Poly() : std::move(coeffs_[0]);
    *this = std::move(c);
  }
}

std::size_t Poly::degree_in(int v) const {
  if (var_ == kConst || var_ < v) return 0;
  if (var_ == v) return coeffs_.size() - 1;
  std::size_t d = 0;
  for (const auto& c : coeffs_) d = std::max(d, c.degree_in(v));
  return d;
}

std::vector<Poly> Poly::coeffs_in(int v) const {
  if (var_ == v) return coeffs_;
  if (var_ == kConst || var_ < v) return {*this};
  std::vector<std::vector<Poly>> parts;
  parts.reserve(coeffs_.size());
  std::size_t width = 0;
  for (const auto& c : coeffs_) {
    parts.push_back(c.coeffs_in(v));
    width = std::max(width, parts.back().size());
  }
  std::vector<Poly> out;
  out.reserve(width);
  for (std::size_t j = 0; j < width; ++j) {
    std::vector<Poly> row(coeffs_.size());
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      if (j < parts[i].size()) row[i] = parts[i][j];
    }
    out.push_back(raw(var_, std::move(row)));
  }
  return out;
}

bool Poly::contains(int v) const {
  if (var_ == v) return true;
  if (var_ == kConst || var_ < v) return false;
  return std::any_of(coeffs_.begin(), coeffs_.end(),
                     [v](const Poly& c) { return c.contains(v); });
}

void Poly::collect_vars(std::set<int>& out) const {
  if (var_ == kConst) return;
  out.insert(var_);
  for (const auto& c : coeffs_) c.collect_vars(out);
}

const BigRational& Poly::base_lc() const {
  const Poly* p = this;
  while (p->var_ != kConst) p = &p->coeffs_.back();
  return p->c_;
}

Poly Poly::operator-() const {
  if (var_ == kConst) return Poly(BigRational(-c_));
  Poly r;
  r.var_ = var_;
  r.coeffs_.reserve(coeffs_.size());
  for (const auto& c : coeffs_) r.coeffs_.push_back(-c);
  return r;
}

Poly& Poly::operator+=(const Poly& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) {
    *this = o;
    return *this;
  }
  if (var_ == o.var_) {
    if (var_ == kConst) {
      c_ += o.c_;
      return *this;
    }
    if (coeffs_.size() < o.coeffs_.size()) coeffs_.resize(o.coeffs_.size());
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    canonicalize();
  } else if (var_ > o.var_) {
    coeffs_[0] += o;
  } else {
    Poly t = o;
    t.coeffs_[0] += *this;
    *this = std::move(t);
  }
  return *this;
}

Poly& Poly::operator-=(const Poly& o) { return *this += -o; }

Poly& Poly::operator*=(const Poly& o) {
  *this = *this * o;
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return Poly();
  if (a.var_ == Poly::kConst && b.var_ == Poly::kConst) return Poly(BigRational(a.c_ * b.c_));
  if (b.var_ == Poly::kConst) return a.scaled(b.c_);
  if (a.var_ == Poly::kConst) return b.scaled(a.c_);
  if (a.var_ == b.var_) {
    std::vector<Poly> out(a.coeffs_.size() + b.coeffs_.size() - 1);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
      if (a.coeffs_[i].is_zero()) continue;
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
        if (b.coeffs_[j].is_zero()) continue;
        out[i + j] += a.coeffs_[i] * b.coeffs_[j];
      }
    }
    return Poly::raw(a.var_, std::move(out));
  }
  const Poly& hi = a.var_ > b.var_ ? a : b;
  const Poly& lo = a.var_ > b.var_ ? b : a;
  Poly r;
  r.var_ = hi.var_;
  r.coeffs_.reserve(hi.coeffs_.size());
  for (const auto& c : hi.coeffs_) r.coeffs_.push_back(c * lo);
  return r;
}

Poly Poly::scaled(const BigRational& k) const {
  if (sgn(k) == 0) return Poly();
  if (var_ == kConst) return Poly(BigRational(c_ * k));
  Poly r;
  r.var_ = var_;
  r.coeffs_.reserve(coeffs_.size());
  for (const auto& c : coeffs_) r.coeffs_.push_back(c.scaled(k));
  return r;
}

Poly Poly::pow(unsigned e) const {
  Poly result(1L);
  Poly base = *this;
  while (e > 0) {
    if (e & 1U) result *= base;
    e >>= 1U;
    if (e > 0) base *= base;
  }
  return result;
}

bool operator==(const Poly& a, const Poly& b) {
  if (a.var_ != b.var_) return false;
  if (a.var_ == Poly::kConst) return a.c_ == b.c_;
  return a.coeffs_ == b.coeffs_;
}

int compare(const Poly& a, const Poly& b) {
  if (a.var_ != b.var_) return a.var_ < b.var_ ? -1 : 1;
  if (a.var_ == Poly::kConst) return cmp(a.c_, b.c_) < 0 ? -1 : (cmp(a.c_, b.c_) > 0 ? 1 : 0);
  if (a.coeffs_.size() != b.coeffs_.size()) return a.coeffs_.size() < b.coeffs_.size() ? -1 : 1;
  for (std::size_t i = a.coeffs_.size(); i-- > 0;) {
    int c = compare(a.coeffs_[i], b.coeffs_[i]);
    if (c != 0) return c;
  }
  return 0;
}

std::optional<Poly> exact_div(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw EngineError(ErrorCode::division_by_zero, "polynomial division by zero");
  if (a.is_zero()) return Poly();
  if (b.is_constant()) return a.scaled(BigRational(1 / b.constant()));
  const int v = b.main_var();
  if (a.main_var() < v) return std::nullopt;
  if (a.main_var() > v) {
    std::vector<Poly> q;
    q.reserve(a.coeffs().size());
    for (const auto& c : a.coeffs()) {
      auto qc = exact_div(c, b);
      if (!qc) return std::nullopt;
      q.push_back(std::move(*qc));
    }
    return Poly::raw(a.main_var(), std::move(q));
  }
  const std::size_t da = a.degree();
  const std::size_t db = b.degree();
  if (da < db) return std::nullopt;
  std::vector<Poly> r = a.coeffs();
  const auto& bc = b.coeffs();
  std::vector<Poly> q(da - db + 1);
  for (std::size_t k = da - db + 1; k-- > 0;) {
    const Poly& top = r[db + k];
    if (top.is_zero()) continue;
    auto qc = exact_div(top, bc.back());
    if (!qc) return std::nullopt;
    for (std::size_t j = 0; j <= db; ++j) r[j + k] -= *qc * bc[j];
    q[k] = std::move(*qc);
  }
  for (std::size_t j = 0; j < db; ++j) {
    if (!r[j].is_zero()) return std::nullopt;
  }
  return Poly::raw(v, std::move(q));
}

Poly div_exact(const Poly& a, const Poly& b) {
  auto q = exact_div(a, b);
  if (!q) throw EngineError(ErrorCode::invalid_argument, "inexact polynomial division");
  return std::move(*q);
}

Poly prem(const Poly& a, const Poly& b, int v) {
  std::vector<Poly> r = a.coeffs_in(v);
  const std::vector<Poly> bc = b.coeffs_in(v);
  if (bc.size() == 1 && bc[0].is_zero()) {
    throw EngineError(ErrorCode::division_by_zero, "pseudo-remainder by zero");
  }
  if (r.size() < bc.size()) return a;
  const std::size_t db = bc.size() - 1;
  const Poly& lcb = bc.back();
  for (std::size_t k = r.size() - bc.size() + 1; k-- > 0;) {
    Poly top = r[db + k];
    for (auto& c : r) c *= lcb;
    if (!top.is_zero()) {
      for (std::size_t j = 0; j <= db; ++j) r[j + k] -= top * bc[j];
    }
  }
  r.resize(db);
  return Poly::from_coeffs(v, std::move(r));
}

Poly normalize_unit(const Poly& p) {
  if (p.is_zero()) return p;
  const BigRational& lc = p.base_lc();
  if (lc == 1) return p;
  return p.scaled(BigRational(1 / lc));
}

Poly content(const Poly& p, int v) {
  if (!p.contains(v)) return normalize_unit(p);
  std::vector<Poly> cs = p.coeffs_in(v);
  // Constants first: a nonzero constant coefficient makes the content 1.
  for (const auto& c : cs) {
    if (c.is_constant() && !c.is_zero()) return Poly(1L);
  }
  Poly g;
  for (const auto& c : cs) {
    if (c.is_zero()) continue;
    g = gcd(g, c);
    if (g.is_constant() && !g.is_zero()) return Poly(1L);
  }
  return g;
}

Poly primitive_part(const Poly& p, int v) {
  if (p.is_zero()) return p;
  return div_exact(p, content(p, v));
}

namespace {

bool all_constant_coeffs(const Poly& p) {
  return std::all_of(p.coeffs().begin(), p.coeffs().end(),
                     [](const Poly& c) { return c.is_constant(); });
}

Poly euclid_gcd_q(const Poly& a, const Poly& b, int v) {
  return normalize_unit(from_upoly(upoly::gcd(to_upoly(a, v), to_upoly(b, v)), v));
}

// Degree in v of gcd(A, B) at a specialization of the lower variables that
// keeps both leading coefficients; an upper bound for the true degree.
std::optional<std::size_t> specialized_gcd_degree(const Poly& A, const Poly& B, int v) {
  std::set<int> vars;
  A.collect_vars(vars);
  B.collect_vars(vars);
  vars.erase(v);
  std::map<int, BigRational> point;
  long k = 0;
  for (int w : vars) {
    BigRational x(7919 + 104729 * k, 31 + 2 * k);
    x.canonicalize();
    point[w] = x;
    ++k;
  }
  for (int attempt = 0; attempt < 3; ++attempt) {
    const Poly a = evaluate_partial(A, point);
    const Poly b = evaluate_partial(B, point);
    if (a.degree_in(v) == A.degree() && b.degree_in(v) == B.degree()) {
      return upoly::gcd(to_upoly(a, v), to_upoly(b, v)).size() - 1;
    }
    for (auto& [w, x] : point) x += 1;
  }
  return std::nullopt;
}

}  // namespace

Poly gcd(const Poly& a, const Poly& b) {
  if (a.is_zero()) return normalize_unit(b);
  if (b.is_zero()) return normalize_unit(a);
  if (a.is_constant() || b.is_constant()) return Poly(1L);
  if (a == b) return normalize_unit(a);
  const int v = std::max(a.main_var(), b.main_var());
  if (a.main_var() < v) return gcd(a, content(b, v));
  if (b.main_var() < v) return gcd(content(a, v), b);
  if (all_constant_coeffs(a) && all_constant_coeffs(b)) return euclid_gcd_q(a, b, v);

  Poly ca = content(a, v);
  Poly cb = content(b, v);
  Poly c = gcd(ca, cb);
  Poly A = div_exact(a, ca);
  Poly B = div_exact(b, cb);
  if (A.degree() < B.degree()) std::swap(A, B);
  // Cheap exits: a coprime specialization, or B itself dividing A.
  if (const auto d = specialized_gcd_degree(A, B, v)) {
    if (*d == 0) return normalize_unit(c);
    if (*d == B.degree() && exact_div(A, B)) return normalize_unit(c * B);
  }
  // Subresultant polynomial remainder sequence.
  Poly g(1L);
  Poly h(1L);
  while (true) {
    const std::size_t delta = A.degree() - B.degree();
    Poly r = prem(A, B, v);
    if (r.is_zero()) break;
    if (!r.contains(v)) {
      B = Poly(1L);
      break;
    }
    A = std::move(B);
    B = div_exact(r, g * h.pow(static_cast<unsigned>(delta)));
    g = A.lc();
    if (delta == 1) {
      h = g;
    } else if (delta > 1) {
      h = div_exact(g.pow(static_cast<unsigned>(delta)), h.pow(static_cast<unsigned>(delta - 1)));
    }
  }
  if (B.contains(v)) B = primitive_part(B, v);
  return normalize_unit(c * B);
}

Poly lcm(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return Poly();
  return normalize_unit(a * div_exact(b, gcd(a, b)));
}

Poly resultant(const Poly& a, const Poly& b, int v) {
  if (a.is_zero() || b.is_zero()) return Poly();
  std::size_t da = a.degree_in(v);
  std::size_t db = b.degree_in(v);
  if (da == 0) return a.pow(static_cast<unsigned>(db));
  if (db == 0) return b.pow(static_cast<unsigned>(da));
  Poly A = a;
  Poly B = b;
  long s = 1;
  if (da < db) {
    std::swap(A, B);
    std::swap(da, db);
    if ((da % 2 == 1) && (db % 2 == 1)) s = -1;
  }
  Poly ca = content(A, v);
  Poly cb = content(B, v);
  A = div_exact(A, ca);
  B = div_exact(B, cb);
  Poly t = ca.pow(static_cast<unsigned>(db)) * cb.pow(static_cast<unsigned>(da));
  Poly g(1L);
  Poly h(1L);
  while (true) {
    const std::size_t dA = A.degree_in(v);
    const std::size_t dB = B.degree_in(v);
    const std::size_t delta = dA - dB;
    if ((dA % 2 == 1) && (dB % 2 == 1)) s = -s;
    Poly r = prem(A, B, v);
    if (r.is_zero()) return Poly();
    A = std::move(B);
    B = div_exact(r, g * h.pow(static_cast<unsigned>(delta)));
    g = A.coeffs_in(v).back();
    if (delta == 1) {
      h = g;
    } else if (delta > 1) {
      h = div_exact(g.pow(static_cast<unsigned>(delta)), h.pow(static_cast<unsigned>(delta - 1)));
    }
    if (!B.contains(v)) {
      const std::size_t dA2 = A.degree_in(v);
      Poly hh = div_exact(B.pow(static_cast<unsigned>(dA2)), h.pow(static_cast<unsigned>(dA2 - 1)));
      return (t * hh).scaled(BigRational(s));
    }
  }
}

Poly derivative(const Poly& p, int v) {
  if (!p.contains(v)) return Poly();
  if (p.main_var() == v) {
    std::vector<Poly> out;
    const auto& cs = p.coeffs();
    for (std::size_t i = 1; i < cs.size(); ++i) out.push_back(cs[i].scaled(BigRational(static_cast<long>(i))));
    return Poly::raw(v, std::move(out));
  }
  std::vector<Poly> out;
  for (const auto& c : p.coeffs()) out.push_back(derivative(c, v));
  return Poly::raw(p.main_var(), std::move(out));
}

Poly substitute(const Poly& p, const std::map<int, Poly>& images) {
  if (p.is_constant()) return p;
  std::vector<Poly> cs;
  cs.reserve(p.coeffs().size());
  for (const auto& c : p.coeffs()) cs.push_back(substitute(c, images));
  auto it = images.find(p.main_var());
  if (it == images.end()) return Poly::from_coeffs(p.main_var(), std::move(cs));
  Poly r;
  for (auto c = cs.rbegin(); c != cs.rend(); ++c) {
    r *= it->second;
    r += *c;
  }
  return r;
}

Poly substitute(const Poly& p, int v, const Poly& image) {
  return substitute(p, std::map<int, Poly>{{v, image}});
}

Poly evaluate_partial(const Poly& p, const std::map<int, BigRational>& point) {
  std::map<int, Poly> images;
  for (const auto& [v, x] : point) images.emplace(v, Poly(x));
  return substitute(p, images);
}

BigRational evaluate(const Poly& p, const std::map<int, BigRational>& point) {
  if (p.is_constant()) return p.constant();
  auto it = point.find(p.main_var());
  if (it == point.end()) {
    throw EngineError(ErrorCode::invalid_argument, "evaluation point does not assign every variable");
  }
  BigRational r = 0;
  const auto& cs = p.coeffs();
  for (auto c = cs.rbegin(); c != cs.rend(); ++c) {
    r *= it->second;
    r += evaluate(*c, point);
  }
  return r;
}

UPoly to_upoly(const Poly& p, int v) {
  if (p.is_zero()) return {};
  UPoly out;
  for (const auto& c : p.coeffs_in(v)) {
    if (!c.is_constant()) {
      throw EngineError(ErrorCode::invalid_argument, "polynomial is not univariate");
    }
    out.push_back(c.constant());
  }
  return out;
}

Poly from_upoly(const UPoly& u, int v) {
  std::vector<Poly> cs;
  cs.reserve(u.size());
  for (const auto& c : u) cs.emplace_back(c);
  return Poly::raw(v, std::move(cs));
}

}  // namespace sigmadep
