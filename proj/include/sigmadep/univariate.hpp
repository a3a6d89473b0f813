#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "sigmadep/poly.hpp"

// Dense univariate polynomials over Q (UPoly, index = degree). Used for the
// parameter-free pieces of orbit factorization and for integer root finding
// in dispersion computations.
namespace sigmadep::upoly {

void trim(UPoly& p);
UPoly mul(const UPoly& a, const UPoly& b);
// Quotient and remainder; b must be nonzero.
std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b);
UPoly gcd(UPoly a, UPoly b);  // monic
UPoly monic(const UPoly& p);
UPoly derivative(const UPoly& p);
BigRational eval(const UPoly& p, const BigRational& x);
// p(x + c)
UPoly taylor_shift(const UPoly& p, const BigRational& c);

// Integer-coefficient primitive multiple with positive leading coefficient.
std::vector<BigInt> primitive_integer(const UPoly& p);

// Distinct rational roots, ascending.
std::vector<BigRational> rational_roots(const UPoly& p);
// Distinct integer roots, ascending.
std::vector<BigInt> integer_roots(const UPoly& p);

// Superset of { j >= 0 : gcd(u(x), v(x + j)) != 1 } for nonconstant u, v,
// from a root bound and a coprimality test modulo a word-size prime.
// Returns nullopt when the bound exceeds limit.
std::optional<std::vector<long>> shift_candidates(const UPoly& u, const UPoly& v, long limit);

// Yun square-free decomposition of a nonzero polynomial: monic factors with
// multiplicities, product equals monic(p).
std::vector<std::pair<UPoly, int>> squarefree(const UPoly& p);

// Complete factorization of a nonzero polynomial into monic irreducibles
// over Q with multiplicities, sorted deterministically. Linear factors come
// from the rational root test; higher-degree factors from Kronecker's
// method, which throws limit_exceeded when its search space is too large.
std::vector<std::pair<UPoly, int>> factor(const UPoly& p);

// Positive divisors of |n| in ascending order (n != 0).
std::vector<BigInt> divisors(const BigInt& n);

}  // namespace sigmadep::upoly
