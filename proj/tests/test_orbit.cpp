#include <random>

#include "doctest.h"
#include "sigmadep/dependence.hpp"
#include "sigmadep/errors.hpp"
#include "sigmadep/orbit.hpp"
#include "sigmadep/parser.hpp"
#include "support.hpp"

using namespace sigmadep;
using sigmadep::testing::F;
using sigmadep::testing::shift_tower;

namespace {

const Poly z = Poly::variable(1);
const Poly th = Poly::variable(0);

Lattice lattice() { return equation_lattice(shift_tower()); }

}  // namespace

TEST_CASE("decompose examples") {
  const TowerSpec tw = shift_tower();
  {
    OrbitDecomposition d = decompose(F("z", tw), tw);
    CHECK(d.lambda.is_one());
    REQUIRE(d.R() == 1);
    CHECK(d.classes[0].representative == z);
    CHECK(d.classes[0].terms == std::map<Offset, long>{{{0, 0}, 1}});
    CHECK(d.t == 1);
    CHECK(d.N == 0);
  }
  {
    OrbitDecomposition d = decompose(F("z/(z-1)", tw), tw);
    CHECK(d.lambda.is_one());
    REQUIRE(d.R() == 1);
    CHECK(d.classes[0].representative == z);
    CHECK(d.classes[0].terms == std::map<Offset, long>{{{0, 0}, 1}, {{0, 1}, -1}});
    CHECK(d.N == 1);
  }
  {
    OrbitDecomposition d = decompose(F("3", tw), tw);
    CHECK(d.lambda == FieldElement(3L));
    CHECK(d.R() == 0);
    CHECK(d.t == 1);
    CHECK(d.N == 0);
  }
  {
    OrbitDecomposition d = decompose(F("z*(z-t)^2", tw), tw);
    REQUIRE(d.R() == 1);
    CHECK(d.classes[0].representative == z);
    CHECK(d.classes[0].terms == std::map<Offset, long>{{{0, 0}, 1}, {{1, 0}, 2}});
    CHECK(d.t == 2);
  }
}

TEST_CASE("decompose keeps lambda and separates orbits") {
  const TowerSpec tw = shift_tower();
  OrbitDecomposition d = decompose(F("-6*t*(z-1/2)/(z+2*t+3)/(2*z^2+2)", tw), tw);
  CHECK(d.lambda == F("-3*t", tw));
  // z - 1/2 and z + 2t + 3 lie in different orbits (1/2 is not an integer).
  CHECK(d.R() == 3);
  CHECK(recompose(d) == F("-6*t*(z-1/2)/(z+2*t+3)/(2*z^2+2)", tw));
}

TEST_CASE("decompose rejects roots that are not affine in the parameter") {
  const TowerSpec tw = shift_tower();
  for (const char* bad : {"z^2 - t", "z - t^2", "t*z + 1", "1/(z^2 - t^2 - 1)"}) {
    try {
      (void)decompose(F(bad, tw), tw);
      FAIL("accepted " << bad);
    } catch (const EngineError& e) {
      CHECK(e.code() == ErrorCode::unsupported_root_structure);
    }
  }
  // Affine roots with a rational slope are fine, as are irreducible
  // quadratics whose conjugate roots share their parameter part.
  CHECK_NOTHROW(decompose(F("(2*z - t)*((z - t)^2 + 1)", tw), tw));
}

TEST_CASE("decompose rejects towers it cannot handle") {
  const TowerSpec qt = sigmadep::testing::q_tower();
  CHECK_THROWS_AS(decompose(F("x", qt), qt), EngineError);
  const TowerSpec rational = parse_tower({"z: phi=z+1, sigma=z+2"});
  try {
    (void)decompose(F("z", rational), rational);
    FAIL("rational ratio accepted");
  } catch (const EngineError& e) {
    CHECK(e.code() == ErrorCode::rational_shift_ratio);
  }
  CHECK_THROWS_AS(decompose(F("0", shift_tower()), shift_tower()), EngineError);
}

TEST_CASE("decompose with a trivial phi action on z") {
  const TowerSpec tw = parse_tower({"alpha: phi=alpha+1", "z0", "z: phi=z, sigma=z+z0"});
  OrbitDecomposition d = decompose(F("z*(z - z0)/(z - 2*z0)", tw), tw);
  REQUIRE(d.R() == 1);
  CHECK(d.classes[0].terms == std::map<Offset, long>{{{0, 0}, 1}, {{1, 0}, 1}, {{2, 0}, -1}});
  CHECK(d.t == 3);
  CHECK(d.N == 0);
}

TEST_CASE("shift_equivalent examples") {
  const Lattice lat = lattice();
  auto r = shift_equivalent(z, z - th - 2, lat);
  REQUIRE(r.has_value());
  CHECK(*r == std::pair<long, long>{1, 2});
  r = shift_equivalent(z * z + 1, (z - 1) * (z - 1) + 1, lat);
  REQUIRE(r.has_value());
  CHECK(*r == std::pair<long, long>{0, 1});
  CHECK_FALSE(shift_equivalent(z, z - th.scaled(BigRational(1, 2)), lat).has_value());
  CHECK_FALSE(shift_equivalent(z * z + 1, z * z + 2, lat).has_value());
  CHECK_FALSE(shift_equivalent(z, z * z, lat).has_value());
}

TEST_CASE("shift_equivalent is an equivalence relation on a factor pool") {
  const Lattice lat = lattice();
  std::vector<Poly> base{z, z * z + 1, z * z - th * z + 3};
  std::vector<Poly> pool;
  std::vector<std::pair<std::size_t, Offset>> truth;
  for (std::size_t b = 0; b < base.size(); ++b) {
    for (long k : {0L, 1L, -2L}) {
      for (long d : {0L, 3L, -1L}) {
        pool.push_back(shift_poly(base[b], 1, FieldElement(th.scaled(k) + d)).num());
        truth.push_back({b, {k, d}});
      }
    }
  }
  for (std::size_t i = 0; i < pool.size(); ++i) {
    auto self = shift_equivalent(pool[i], pool[i], lat);
    REQUIRE(self.has_value());
    CHECK(*self == Offset{0, 0});
    for (std::size_t j = 0; j < pool.size(); ++j) {
      auto ij = shift_equivalent(pool[i], pool[j], lat);
      auto ji = shift_equivalent(pool[j], pool[i], lat);
      const bool same = truth[i].first == truth[j].first;
      CHECK(ij.has_value() == same);
      CHECK(ji.has_value() == same);
      if (!same) continue;
      CHECK(ij->first == -ji->first);
      CHECK(ij->second == -ji->second);
      CHECK(ij->first == truth[j].second.first - truth[i].second.first);
      CHECK(ij->second == truth[j].second.second - truth[i].second.second);
      for (std::size_t l = 0; l < pool.size(); l += 4) {
        if (truth[l].first != truth[i].first) continue;
        auto jl = shift_equivalent(pool[j], pool[l], lat);
        auto il = shift_equivalent(pool[i], pool[l], lat);
        REQUIRE(jl.has_value());
        REQUIRE(il.has_value());
        CHECK(il->first == ij->first + jl->first);
        CHECK(il->second == ij->second + jl->second);
      }
    }
  }
}

TEST_CASE("recompose examples") {
  const TowerSpec tw = shift_tower();
  OrbitDecomposition d;
  d.lattice = lattice();
  d.lambda = FieldElement(1L);
  d.classes.push_back({z, {{{0, 0}, 1}, {{0, 1}, -1}}});
  CHECK(recompose(d) == F("z/(z-1)", tw));
  OrbitDecomposition c;
  c.lattice = lattice();
  c.lambda = FieldElement(5L);
  CHECK(recompose(c) == FieldElement(5L));
  CHECK(recompose(decompose(F("z/(z-1)", tw), tw)) == F("z/(z-1)", tw));
}

TEST_CASE("round trip on random lattice-shifted products") {
  const TowerSpec tw = shift_tower();
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<long> exp(-3, 3);
  std::uniform_int_distribution<long> off(-2, 2);
  std::uniform_int_distribution<long> lam(-9, 9);
  std::uniform_int_distribution<int> nroots(0, 2);
  // Roots are r + k*t + d with r drawn from a few classes, some of which
  // are shifts of one another.
  const std::vector<BigRational> rs{0, BigRational(1, 3), BigRational(-5, 2)};
  for (int trial = 0; trial < 120; ++trial) {
    long l = 0;
    while (l == 0) l = lam(rng);
    FieldElement a(l);
    for (int j = 0; j < 5; ++j) {
      const BigRational r = rs[static_cast<std::size_t>(nroots(rng))];
      Poly factor = z - th.scaled(off(rng)) - Poly(r + off(rng));
      if (trial % 3 == 0 && j == 0) factor = factor * factor + 1;
      a *= FieldElement(factor).pow(exp(rng));
    }
    OrbitDecomposition d = decompose(a, tw);
    CHECK(recompose(d) == a);
    for (const ShiftClass& cls : d.classes) {
      CHECK(cls.terms.begin()->first == Offset{0, 0});
      for (const auto& [o, s] : cls.terms) {
        CHECK(s != 0);
        CHECK(o.first >= 0);
        CHECK(o.first < d.t);
        CHECK(o.second >= -d.N - 1);
        CHECK(o.second <= d.N);
      }
    }
    for (std::size_t i = 0; i < d.R(); ++i) {
      for (std::size_t j = i + 1; j < d.R(); ++j) {
        CHECK_FALSE(
            shift_equivalent(d.classes[i].representative, d.classes[j].representative, d.lattice));
      }
    }
    // phi only moves d, so the a_{i,k} table is unchanged.
    OrbitDecomposition moved = decompose(apply_endo(a, tw, Endo::phi), tw);
    CHECK(moved.R() == d.R());
    CHECK(moved.t == d.t);
    CHECK(compute_aik(moved).values == compute_aik(d).values);
  }
}
