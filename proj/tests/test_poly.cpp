#include <algorithm>
#include <random>

#include "doctest.h"
#include "sigmadep/errors.hpp"
#include "sigmadep/poly.hpp"
#include "sigmadep/univariate.hpp"
#include "support.hpp"

using namespace sigmadep;
using sigmadep::testing::random_poly;

namespace {

const Poly t = Poly::variable(0);
const Poly z = Poly::variable(1);

// Sylvester-matrix determinant over Q; independent of the subresultant code.
BigRational sylvester_resultant(const UPoly& a, const UPoly& b) {
  const std::size_t m = a.size() - 1;
  const std::size_t n = b.size() - 1;
  const std::size_t size = m + n;
  std::vector<std::vector<BigRational>> mat(size, std::vector<BigRational>(size, 0));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t i = 0; i <= m; ++i) mat[r][r + i] = a[m - i];
  }
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t i = 0; i <= n; ++i) mat[n + r][r + i] = b[n - i];
  }
  BigRational det = 1;
  for (std::size_t c = 0; c < size; ++c) {
    std::size_t piv = c;
    while (piv < size && sgn(mat[piv][c]) == 0) ++piv;
    if (piv == size) return 0;
    if (piv != c) {
      std::swap(mat[piv], mat[c]);
      det = -det;
    }
    det *= mat[c][c];
    for (std::size_t r = c + 1; r < size; ++r) {
      BigRational f = mat[r][c] / mat[c][c];
      for (std::size_t k = c; k < size; ++k) mat[r][k] -= f * mat[c][k];
    }
  }
  return det;
}

}  // namespace

TEST_CASE("gcd examples") {
  CHECK(gcd(z * z - 1, z - 1) == z - 1);
  CHECK(gcd(z - t, z - t - 1).is_one());
  CHECK(gcd(z * z - t * t, z - t) == z - t);
  CHECK(gcd(Poly(), z + t) == z + t);
  CHECK(gcd((z - 1).scaled(3), (z - 1).scaled(-7)) == z - 1);
}

TEST_CASE("gcd of random products recovers the common factor") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    Poly f = random_poly(rng, {0, 1}, 2);
    Poly g = random_poly(rng, {0, 1}, 2);
    Poly h = random_poly(rng, {0, 1}, 2);
    if (f.is_zero() || g.is_zero() || h.is_zero()) continue;
    Poly d = gcd(f * h, g * h);
    CHECK(exact_div(d, normalize_unit(h)).has_value());
    CHECK(exact_div(f * h, d).has_value());
    CHECK(exact_div(g * h, d).has_value());
    CHECK(d.base_lc() == 1);
  }
}

TEST_CASE("exact division and pseudo-remainder") {
  Poly a = (z - t) * (z + t + 2);
  CHECK(div_exact(a, z - t) == z + t + 2);
  CHECK_FALSE(exact_div(a, z - t - 1).has_value());
  CHECK_THROWS_AS(exact_div(a, Poly()), EngineError);
  // lc(b)^(deg a - deg b + 1) * a = q*b + prem
  Poly b = t * z + 1;
  Poly r = prem(z * z * z + t, b, 1);
  CHECK(r.degree_in(1) == 0);
  Poly lhs = (t.pow(3) * (z * z * z + t)) - r;
  CHECK(exact_div(lhs, b).has_value());
}

TEST_CASE("resultant agrees with the Sylvester determinant at sample points") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    Poly a = random_poly(rng, {0, 1}, 3);
    Poly b = random_poly(rng, {0, 1}, 3);
    if (a.degree_in(1) == 0 || b.degree_in(1) == 0) continue;
    Poly res = resultant(a, b, 1);
    for (long tv : {-2L, 3L, 5L}) {
      Poly as = evaluate_partial(a, {{0, BigRational(tv)}});
      Poly bs = evaluate_partial(b, {{0, BigRational(tv)}});
      // Specialization commutes with the resultant only when degrees survive.
      if (as.degree_in(1) != a.degree_in(1) || bs.degree_in(1) != b.degree_in(1)) continue;
      BigRational expect = sylvester_resultant(to_upoly(as, 1), to_upoly(bs, 1));
      CHECK(evaluate(res, {{0, BigRational(tv)}}) == expect);
    }
  }
}

TEST_CASE("resultant detects common roots") {
  CHECK(resultant(z * z - 1, z - 1, 1).is_zero());
  CHECK(resultant(z - 3, z - 5, 1) == Poly(-2L));
  CHECK(resultant(z - t, z, 1) == t);
}

TEST_CASE("derivative and substitution") {
  Poly p = z * z * t + z;
  CHECK(derivative(p, 1) == z * t.scaled(2) + 1);
  CHECK(derivative(p, 0) == z * z);
  CHECK(substitute(p, 1, z + 1) == (z + 1) * (z + 1) * t + z + 1);
  CHECK(evaluate(p, {{0, BigRational(2)}, {1, BigRational(3)}}) == 21);
}

TEST_CASE("univariate rational and integer roots") {
  UPoly p = to_upoly((z - 3) * (z.scaled(2) + 1) * (z * z + 1), 1);
  auto rr = upoly::rational_roots(p);
  REQUIRE(rr.size() == 2);
  CHECK(rr[0] == BigRational(-1, 2));
  CHECK(rr[1] == 3);
  auto ir = upoly::integer_roots(p);
  REQUIRE(ir.size() == 1);
  CHECK(ir[0] == 3);
  CHECK(upoly::integer_roots(to_upoly(z * (z - 7) * (z + 2), 1)) ==
        std::vector<BigInt>{BigInt(-2), BigInt(0), BigInt(7)});
}

TEST_CASE("univariate factorization") {
  auto fac = upoly::factor(to_upoly((z * z + 1) * (z * z + 2) * (z - 1) * (z - 1), 1));
  REQUIRE(fac.size() == 3);
  int linear = 0;
  int quadratic = 0;
  for (const auto& [g, m] : fac) {
    if (g.size() == 2) {
      ++linear;
      CHECK(m == 2);
    }
    if (g.size() == 3) ++quadratic;
  }
  CHECK(linear == 1);
  CHECK(quadratic == 2);
  // x^4 + 1 is irreducible over Q although it has no rational roots and
  // factors modulo every prime.
  auto irr = upoly::factor(to_upoly(z.pow(4) + 1, 1));
  REQUIRE(irr.size() == 1);
  CHECK(irr[0].first.size() == 5);
  auto sf = upoly::squarefree(to_upoly((z - 1).pow(3) * (z + 2), 1));
  REQUIRE(sf.size() == 2);
  CHECK(sf[0].second == 1);
  CHECK(sf[1].second == 3);
}

namespace {

// Textbook Euclid over Q, monic result.
UPoly euclid(UPoly a, UPoly b) {
  upoly::trim(a);
  upoly::trim(b);
  while (!b.empty()) {
    UPoly r = upoly::divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return upoly::monic(a);
}

}  // namespace

TEST_CASE("modular univariate gcd agrees with Euclid") {
  std::mt19937_64 rng(97);
  std::uniform_int_distribution<long> big(-1000000, 1000000);
  for (int trial = 0; trial < 60; ++trial) {
    const Poly g = random_poly(rng, {1}, 3, 50);
    Poly a = random_poly(rng, {1}, 4, 50) * g;
    Poly b = random_poly(rng, {1}, 4, 50) * g;
    a = a.scaled(BigRational(big(rng) | 1, 7));
    const UPoly ua = to_upoly(a, 1);
    const UPoly ub = to_upoly(b, 1);
    CHECK(upoly::gcd(ua, ub) == euclid(ua, ub));
  }
  // Repeated factors and a unit gcd.
  const UPoly p = to_upoly((z - 1).pow(3) * (z * z + 5), 1);
  CHECK(upoly::gcd(p, upoly::derivative(p)) == to_upoly((z - 1).pow(2), 1));
  CHECK(upoly::gcd(to_upoly(z * z + 1, 1), to_upoly(z - 2, 1)) == UPoly{BigRational(1)});
}

TEST_CASE("integer roots far from the origin") {
  const BigInt r("123456789012345");
  const Poly root(BigRational(r, 1));
  auto ir = upoly::integer_roots(to_upoly((z - root) * (z + 3) * (z * z - 2), 1));
  CHECK(ir == std::vector<BigInt>{BigInt(-3), r});
}

TEST_CASE("shift candidates contain every common shift") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> root(-30, 30);
  for (int trial = 0; trial < 40; ++trial) {
    Poly u(1L);
    Poly v(1L);
    for (int i = 0; i < 3; ++i) {
      u *= z - root(rng);
      v *= z - root(rng);
    }
    u *= z * z + root(rng) * root(rng) + 1;
    const UPoly uu = to_upoly(u, 1);
    const UPoly vv = to_upoly(v, 1);
    auto cands = upoly::shift_candidates(uu, vv, 1'000'000);
    REQUIRE(cands.has_value());
    for (long j = 0; j <= 200; ++j) {
      const bool common = upoly::gcd(uu, upoly::taylor_shift(vv, BigRational(j))).size() > 1;
      if (common) CHECK(std::find(cands->begin(), cands->end(), j) != cands->end());
    }
  }
  CHECK_FALSE(upoly::shift_candidates(to_upoly(z - Poly(BigRational(10000000)), 1), to_upoly(z, 1), 1000)
                  .has_value());
}
