#include "sigmadep/orbit.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "sigmadep/errors.hpp"
#include "sigmadep/univariate.hpp"

namespace sigmadep {

namespace {

[[noreturn]] void unsupported_roots(const std::string& why) {
  throw EngineError(ErrorCode::unsupported_root_structure, why);
}

std::optional<long> as_integer(const FieldElement& f) {
  if (!f.is_constant()) return std::nullopt;
  const BigRational& c = f.num().constant();
  if (c.get_den() != 1) return std::nullopt;
  if (!c.get_num().fits_slong_p()) {
    throw EngineError(ErrorCode::limit_exceeded, "lattice coordinate does not fit in a machine integer");
  }
  return c.get_num().get_si();
}

// g(z - c)^mult with g monic over Q and c an affine-rational polynomial in
// the parameters.
struct RootFactor {
  UPoly g;
  Poly c;
  int mult = 1;
};

// Splits a polynomial monic in z into factors g(z - c). Each parameter is
// peeled off in turn: the top homogeneous part in (z, v) gives the slopes
// alpha, and the content of f(z + alpha*v) with respect to v collects the
// factors with that slope.
std::vector<RootFactor> split(const Poly& f, int z) {
  std::set<int> params;
  f.collect_vars(params);
  params.erase(z);
  std::vector<RootFactor> out;
  if (params.empty()) {
    for (auto& [g, m] : upoly::factor(to_upoly(f, z))) out.push_back({g, Poly(), m});
    return out;
  }
  const int v = *params.rbegin();
  const std::vector<Poly> fc = f.coeffs_in(z);
  const std::size_t n = fc.size() - 1;
  UPoly top(n + 1, BigRational(0));
  for (std::size_t i = 0; i <= n; ++i) {
    if (fc[i].is_zero()) continue;
    const std::vector<Poly> vc = fc[i].coeffs_in(v);
    const std::size_t dv = vc.size() - 1;
    if (dv > n - i) unsupported_roots("roots are not affine in the parameters");
    if (dv == n - i) {
      if (!vc.back().is_constant()) unsupported_roots("roots are not affine in the parameters");
      top[i] = vc.back().constant();
    }
  }
  const Poly Z = Poly::variable(z);
  const Poly V = Poly::variable(v);
  for (const auto& [g, m] : upoly::factor(top)) {
    if (g.size() != 2) unsupported_roots("parameter slope is not rational");
    const BigRational alpha = -g[0];
    const Poly moved = substitute(f, z, Z + V.scaled(alpha));
    Poly cont;
    for (const Poly& c : moved.coeffs_in(v)) cont = gcd(cont, c);
    const Poly lcz = cont.coeffs_in(z).back();
    if (!lcz.is_constant()) unsupported_roots("roots are not affine in the parameters");
    cont = cont.scaled(1 / lcz.constant());
    if (cont.degree_in(z) != static_cast<std::size_t>(m)) {
      unsupported_roots("roots are not affine in the parameters");
    }
    for (RootFactor rf : split(cont, z)) {
      rf.c += V.scaled(alpha);
      out.push_back(std::move(rf));
    }
  }
  return out;
}

// Exact generic point for the variables of the given elements, avoiding
// their poles. Deterministic.
class PointStream {
 public:
  explicit PointStream(std::set<int> vars) : vars_(std::move(vars)) {}

  Point next() {
    std::uniform_int_distribution<long> num(-1000, 1000);
    std::uniform_int_distribution<long> den(1, 97);
    Point p;
    for (int v : vars_) {
      BigRational r(num(rng_), den(rng_));
      r.canonicalize();
      p[v] = r;
    }
    return p;
  }

 private:
  std::set<int> vars_;
  std::mt19937_64 rng_{0x5eedULL};
};

}  // namespace

Lattice equation_lattice(const TowerSpec& tower) {
  Lattice lat;
  lat.z = tower.top();
  const Action& ph = tower.action(Endo::phi, lat.z);
  const Action& sg = tower.action(Endo::sigma, lat.z);
  if (ph.kind == ActionKind::scale || sg.kind == ActionKind::scale) {
    throw EngineError(ErrorCode::unsupported_tower,
                      "the decision procedure needs shift actions on the equation variable");
  }
  if (ph.kind == ActionKind::shift) lat.phi_shift = ph.c;
  if (sg.kind == ActionKind::shift) lat.sigma_shift = sg.c;
  if (lat.sigma_shift.is_zero()) {
    throw EngineError(ErrorCode::rational_shift_ratio, "sigma does not move the equation variable");
  }
  if (!lat.phi_shift.is_zero() && (lat.sigma_shift / lat.phi_shift).is_constant()) {
    throw EngineError(ErrorCode::rational_shift_ratio, "sigma and phi shifts have a rational ratio");
  }
  return lat;
}

std::optional<std::pair<long, long>> lattice_coordinates(const FieldElement& s, const Lattice& lat) {
  if (s.is_zero()) return std::pair<long, long>{0, 0};
  if (lat.phi_shift.is_zero()) {
    auto k = as_integer(s / lat.sigma_shift);
    if (!k) return std::nullopt;
    return std::pair<long, long>{*k, 0};
  }
  const FieldElement r = s / lat.phi_shift;
  if (r.is_constant()) {
    auto d = as_integer(r);
    if (!d) return std::nullopt;
    return std::pair<long, long>{0, *d};
  }
  // r = k*rho + d with rho non-constant: two generic points determine k.
  const FieldElement rho = lat.sigma_shift / lat.phi_shift;
  std::set<int> vars;
  r.collect_vars(vars);
  rho.collect_vars(vars);
  PointStream points(vars);
  for (int attempt = 0; attempt < 64; ++attempt) {
    BigRational r1, r2, p1, p2;
    try {
      const Point a = points.next();
      const Point b = points.next();
      r1 = evaluate(r, a);
      r2 = evaluate(r, b);
      p1 = evaluate(rho, a);
      p2 = evaluate(rho, b);
    } catch (const EngineError& e) {
      if (e.code() != ErrorCode::pole_at_point) throw;
      continue;
    }
    if (p1 == p2) continue;
    BigRational kq = (r1 - r2) / (p1 - p2);
    if (kq.get_den() != 1) return std::nullopt;
    if (!kq.get_num().fits_slong_p()) return std::nullopt;
    const long k = kq.get_num().get_si();
    auto d = as_integer(r - rho * FieldElement(k));
    if (!d) return std::nullopt;
    return std::pair<long, long>{k, *d};
  }
  throw EngineError(ErrorCode::all_samples_hit_poles, "no usable sample point for lattice coordinates");
}

FieldElement shift_poly(const Poly& p, int z, const FieldElement& s) {
  const Poly Z = Poly::variable(z);
  if (s.is_polynomial()) return FieldElement(substitute(p, z, Z - s.num()));
  const FieldElement arg = FieldElement(Z) - s;
  const std::vector<Poly> cs = p.coeffs_in(z);
  FieldElement acc;
  for (auto it = cs.rbegin(); it != cs.rend(); ++it) acc = acc * arg + FieldElement(*it);
  return acc;
}

std::optional<std::pair<long, long>> shift_equivalent(const Poly& p, const Poly& q,
                                                      const Lattice& lat) {
  const std::vector<Poly> pc = p.coeffs_in(lat.z);
  const std::vector<Poly> qc = q.coeffs_in(lat.z);
  if (pc.size() != qc.size() || pc.size() < 2) return std::nullopt;
  const long m = static_cast<long>(pc.size()) - 1;
  const FieldElement s = FieldElement(pc[m - 1] - qc[m - 1]) / FieldElement(m);
  auto coords = lattice_coordinates(s, lat);
  if (!coords) return std::nullopt;
  if (!(shift_poly(p, lat.z, s) == FieldElement(q))) return std::nullopt;
  return coords;
}

long OrbitDecomposition::exponent(std::size_t i, long k, long d) const {
  const auto& terms = classes.at(i).terms;
  auto it = terms.find({k, d});
  return it == terms.end() ? 0 : it->second;
}

OrbitDecomposition decompose(const FieldElement& a, const TowerSpec& tower) {
  if (a.is_zero()) throw EngineError(ErrorCode::invalid_argument, "coefficient a must be nonzero");
  OrbitDecomposition out;
  out.lattice = equation_lattice(tower);
  const int z = out.lattice.z;
  const Poly Z = Poly::variable(z);

  std::vector<std::pair<Poly, long>> items;
  FieldElement lambda(1L);
  auto take = [&](const Poly& P, long sign) {
    if (!P.contains(z)) {
      lambda *= FieldElement(P).pow(sign);
      return;
    }
    const Poly cont = content(P, z);
    const Poly pp = div_exact(P, cont);
    const Poly lcz = pp.coeffs_in(z).back();
    if (!lcz.is_constant()) unsupported_roots("leading coefficient in z depends on parameters");
    lambda *= FieldElement(cont.scaled(lcz.constant())).pow(sign);
    for (const RootFactor& rf : split(pp.scaled(1 / lcz.constant()), z)) {
      items.emplace_back(substitute(from_upoly(rf.g, z), z, Z - rf.c), sign * rf.mult);
    }
  };
  take(a.num(), 1);
  take(a.den(), -1);
  out.lambda = lambda;

  std::sort(items.begin(), items.end(),
            [](const auto& x, const auto& y) { return compare(x.first, y.first) < 0; });
  for (const auto& [p, s] : items) {
    bool placed = false;
    for (ShiftClass& cls : out.classes) {
      auto off = shift_equivalent(cls.representative, p, out.lattice);
      if (!off) continue;
      cls.terms[*off] += s;
      placed = true;
      break;
    }
    if (!placed) out.classes.push_back({p, {{{0, 0}, s}}});
  }

  for (ShiftClass& cls : out.classes) {
    const Offset base = cls.terms.begin()->first;
    if (base != Offset{0, 0}) {
      const FieldElement shift = out.lattice.sigma_shift * FieldElement(base.first) +
                                 out.lattice.phi_shift * FieldElement(base.second);
      cls.representative = shift_poly(cls.representative, z, shift).num();
      std::map<Offset, long> moved;
      for (const auto& [off, s] : cls.terms) {
        moved[{off.first - base.first, off.second - base.second}] = s;
      }
      cls.terms = std::move(moved);
    }
  }
  std::sort(out.classes.begin(), out.classes.end(), [](const ShiftClass& x, const ShiftClass& y) {
    return compare(x.representative, y.representative) < 0;
  });

  long max_k = 0;
  long max_d = 0;
  long min_d = 0;
  for (const ShiftClass& cls : out.classes) {
    for (const auto& [off, s] : cls.terms) {
      max_k = std::max(max_k, off.first);
      max_d = std::max(max_d, off.second);
      min_d = std::min(min_d, off.second);
    }
  }
  out.t = max_k + 1;
  out.N = std::max({0L, max_d, -min_d - 1});
  return out;
}

FieldElement recompose(const OrbitDecomposition& d) {
  FieldElement acc = d.lambda;
  for (const ShiftClass& cls : d.classes) {
    for (const auto& [off, s] : cls.terms) {
      const FieldElement shift = d.lattice.sigma_shift * FieldElement(off.first) +
                                 d.lattice.phi_shift * FieldElement(off.second);
      acc *= shift_poly(cls.representative, d.lattice.z, shift).pow(s);
    }
  }
  return acc;
}

}  // namespace sigmadep
