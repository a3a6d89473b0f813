#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sigmadep/field.hpp"
#include "sigmadep/matrix.hpp"

namespace sigmadep {

// phi(Y) = A Y with A invertible over the tower field.
struct LinearSystem {
  Matrix A;
  TowerSpec tower;

  std::size_t n() const { return A.rows(); }
};

// Checks squareness and det(A) != 0.
LinearSystem make_system(Matrix A, TowerSpec tower);

struct GaugeWitness {
  Matrix B;
};

// phi(x) = M x with M = (A^{-1})^T kron sigma(A); x = vec(B) solves it
// exactly when phi(B) = sigma(A) B A^{-1}.
struct TwistedSystem {
  Matrix M;
  Matrix M_inv;  // A^T kron sigma(A)^{-1}; computed from M when left empty
};

// phi(B) == sigma(A) B A^{-1}. Throws singular_b when det(B) = 0 and
// dimension_mismatch for a wrongly sized B.
bool verify_isomonodromic(const LinearSystem& sys, const GaugeWitness& w);

TwistedSystem to_twisted_system(const LinearSystem& sys);

// { j >= 0 : u(z) and v(z + j) have a common factor }, ascending.
std::vector<long> dispersion(const Poly& u, const Poly& v, int z);

// Polynomial U such that every rational solution of phi(x) = M x has the
// form p/U with p polynomial (phi: z -> z + 1).
Poly universal_denominator(const TwistedSystem& tw, int z);

// Basis over the parameter field of the rational solutions p/U of
// phi(x) = M x with deg_z p <= degree_cap. Needs phi(z) = z + 1 and every
// other variable of M fixed by phi; throws unsupported_tower otherwise.
std::vector<std::vector<FieldElement>> rational_solutions(const TwistedSystem& tw,
                                                          const TowerSpec& tower, long degree_cap);

struct IsomonodromyResult {
  std::optional<GaugeWitness> witness;
  long degree_cap = 0;
  long degree_used = -1;       // numerator degree bound of the returned B
  std::size_t solution_dim = 0;  // dimension of the solution space at that bound
};

// Searches degree bounds 0..degree_cap for an invertible B built from
// random combinations of rational solutions (seeded). Every returned
// witness has passed verify_isomonodromic.
IsomonodromyResult is_isomonodromic(const LinearSystem& sys, long degree_cap = 20,
                                    std::uint64_t seed = 0);

enum class CompanionConvention { standard, transposed };

// phi^m(y) + c_{m-1} phi^{m-1}(y) + ... + c_0 y = 0 for coefficients
// (c_0, ..., c_{m-1}). The standard form has ones on the superdiagonal and
// last row (-c_0, ..., -c_{m-1}); the transposed form is its transpose.
// Throws zero_trailing_coefficient when c_0 = 0.
LinearSystem companion(const std::vector<FieldElement>& coeffs, const TowerSpec& tower,
                       CompanionConvention convention = CompanionConvention::standard);

}  // namespace sigmadep
