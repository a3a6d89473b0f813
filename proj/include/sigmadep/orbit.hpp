#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "sigmadep/field.hpp"

namespace sigmadep {

// Shift lattice acting on the equation variable z: phi(z) = z + phi_shift,
// sigma(z) = z + sigma_shift. The lattice point (k, d) is
// k * sigma_shift + d * phi_shift.
struct Lattice {
  int z = 0;
  FieldElement phi_shift;
  FieldElement sigma_shift;
};

// Reads the lattice off a tower whose top variable is shifted by both
// endomorphisms. Throws unsupported_tower for dilations and
// rational_shift_ratio when sigma_shift / phi_shift is rational (or
// sigma_shift is zero).
Lattice equation_lattice(const TowerSpec& tower);

// Integers (k, d) with s = k * sigma_shift + d * phi_shift, if any.
std::optional<std::pair<long, long>> lattice_coordinates(const FieldElement& s, const Lattice& lat);

// p(z - s) for a shift s free of z.
FieldElement shift_poly(const Poly& p, int z, const FieldElement& s);

// (k, d) with q(z) = p(z - k*sigma_shift - d*phi_shift), if such a lattice
// shift exists. p and q must be monic in z.
std::optional<std::pair<long, long>> shift_equivalent(const Poly& p, const Poly& q,
                                                      const Lattice& lat);

using Offset = std::pair<long, long>;  // (k, d)

struct ShiftClass {
  Poly representative;               // monic in z
  std::map<Offset, long> terms;      // (k, d) -> nonzero exponent s
};

// a = lambda * prod_i prod_(k,d) rep_i(z - k*sigma_shift - d*phi_shift)^s.
struct OrbitDecomposition {
  Lattice lattice;
  FieldElement lambda;
  std::vector<ShiftClass> classes;
  long t = 1;  // 1 + max k (at least 1)
  long N = 0;  // every d lies in [-N-1, N]

  std::size_t R() const { return classes.size(); }
  long exponent(std::size_t i, long k, long d) const;
};

// Canonical decomposition: per class the lexicographically smallest (k, d)
// present is moved to (0, 0); classes are ordered by representative.
// Throws unsupported_root_structure when a factor's roots are not of the
// form (algebraic number) + (rational-affine combination of parameters).
OrbitDecomposition decompose(const FieldElement& a, const TowerSpec& tower);

FieldElement recompose(const OrbitDecomposition& d);

}  // namespace sigmadep
