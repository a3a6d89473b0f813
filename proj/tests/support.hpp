#pragma once

#include <random>
#include <string>
#include <vector>

#include "sigmadep/field.hpp"
#include "sigmadep/parser.hpp"

namespace sigmadep::testing {

// t: transcendental lattice parameter; z: phi = z + 1, sigma = z + t.
inline TowerSpec shift_tower() { return parse_tower({"t", "z: phi=z+1, sigma=z+t"}); }

// Plain Q(z) with phi = sigma = z + 1 (theta-free; only for arithmetic tests).
inline TowerSpec z_tower() { return parse_tower({"z: phi=z+1, sigma=z+1"}); }

// q-hypergeometric tower: phi(x) = q x, sigma(a) = q a.
inline TowerSpec q_tower() { return parse_tower({"q", "a: phi=a, sigma=q*a", "x: phi=q*x, sigma=x"}); }

// Canonical p/q (the two-argument mpq_class constructor does not reduce).
inline BigRational Q(long p, long q = 1) {
  BigRational r(p, q);
  r.canonicalize();
  return r;
}

inline FieldElement F(const std::string& s, const TowerSpec& tower) {
  return parse_expression(s, tower);
}

inline Poly random_poly(std::mt19937_64& rng, const std::vector<int>& vars, int max_deg,
                        int coeff_bound = 4) {
  std::uniform_int_distribution<int> coeff(-coeff_bound, coeff_bound);
  std::uniform_int_distribution<int> deg(0, max_deg);
  Poly acc(static_cast<long>(coeff(rng)));
  const int terms = 1 + deg(rng);
  for (int k = 0; k < terms; ++k) {
    Poly mono(static_cast<long>(coeff(rng)));
    for (int v : vars) mono *= Poly::variable(v).pow(static_cast<unsigned>(deg(rng)));
    acc += mono;
  }
  return acc;
}

inline FieldElement random_element(std::mt19937_64& rng, const std::vector<int>& vars,
                                   int max_deg = 2) {
  Poly den;
  do {
    den = random_poly(rng, vars, max_deg);
  } while (den.is_zero());
  return FieldElement::fraction(random_poly(rng, vars, max_deg), den);
}

}  // namespace sigmadep::testing
