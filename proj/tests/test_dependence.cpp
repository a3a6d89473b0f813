#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "sigmadep/dependence.hpp"
#include "sigmadep/errors.hpp"
#include "sigmadep/parser.hpp"
#include "support.hpp"

using namespace sigmadep;
using sigmadep::testing::F;
using sigmadep::testing::LatticeInstance;
using sigmadep::testing::shift_tower;

namespace {

IntMatrix matrix(std::vector<std::vector<long>> rows, std::size_t cols) {
  IntMatrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < cols; ++c) m.at(r, c) = rows[r][c];
  }
  return m;
}

// Rank over Q by plain fraction elimination.
std::size_t rational_rank(const IntMatrix& m) {
  std::vector<std::vector<BigRational>> a(m.rows, std::vector<BigRational>(m.cols));
  for (std::size_t r = 0; r < m.rows; ++r) {
    for (std::size_t c = 0; c < m.cols; ++c) a[r][c] = m.at(r, c);
  }
  std::size_t rank = 0;
  for (std::size_t c = 0; c < m.cols && rank < m.rows; ++c) {
    std::size_t p = rank;
    while (p < m.rows && sgn(a[p][c]) == 0) ++p;
    if (p == m.rows) continue;
    std::swap(a[p], a[rank]);
    for (std::size_t r = 0; r < m.rows; ++r) {
      if (r == rank || sgn(a[r][c]) == 0) continue;
      BigRational f = a[r][c] / a[rank][c];
      for (std::size_t k = c; k < m.cols; ++k) a[r][k] -= f * a[rank][k];
    }
    ++rank;
  }
  return rank;
}

bool annihilates(const IntMatrix& m, const IntVector& v) {
  for (std::size_t r = 0; r < m.rows; ++r) {
    BigInt acc = 0;
    for (std::size_t c = 0; c < m.cols; ++c) acc += m.at(r, c) * v[c];
    if (sgn(acc) != 0) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("compute_aik examples") {
  const TowerSpec tw = shift_tower();
  AikTable a = compute_aik(decompose(F("z", tw), tw));
  CHECK(a.classes == 1);
  CHECK(a.at(0, 0) == 1);
  CHECK(compute_aik(decompose(F("z/(z-1)", tw), tw)).at(0, 0) == 0);
  CHECK(compute_aik(decompose(F("7", tw), tw)).classes == 0);
  AikTable b = compute_aik(decompose(F("z*(z-t)^2/(z-t-1)", tw), tw));
  CHECK(b.t == 2);
  CHECK(b.at(0, 0) == 1);
  CHECK(b.at(0, 1) == 1);
}

TEST_CASE("build_dependence_matrix examples") {
  AikTable one{1, 1, {1}};
  IntMatrix m = build_dependence_matrix(one, 1, true);
  CHECK(m.rows == 1);
  CHECK(m.cols == 1);
  CHECK(m.at(0, 0) == 1);

  AikTable zero{1, 2, {0, 0}};
  IntMatrix n = build_dependence_matrix(zero, 2, false);
  CHECK(n.rows == 4);
  CHECK(n.cols == 2);
  for (std::size_t r = 0; r < 3; ++r) CHECK((n.at(r, 0) == 0 && n.at(r, 1) == 0));
  CHECK((n.at(3, 0) == 1 && n.at(3, 1) == 1));

  IntMatrix e = build_dependence_matrix(AikTable{0, 1, {}}, 1, true);
  CHECK(e.rows == 0);
  CHECK(e.cols == 1);

  // Band layout: row k holds a_{i, r+k} in column r.
  AikTable band{1, 2, {3, 5}};
  IntMatrix b = build_dependence_matrix(band, 2, true);
  CHECK(b.rows == 3);
  CHECK((b.at(0, 0) == 0 && b.at(0, 1) == 3));
  CHECK((b.at(1, 0) == 3 && b.at(1, 1) == 5));
  CHECK((b.at(2, 0) == 5 && b.at(2, 1) == 0));
}

TEST_CASE("integer_kernel examples") {
  CHECK(integer_kernel(matrix({{1}}, 1)).empty());
  auto k = integer_kernel(matrix({{0, 0}, {1, 1}}, 2));
  REQUIRE(k.size() == 1);
  CHECK(k[0] == IntVector{1, -1});
  auto all = integer_kernel(IntMatrix(0, 1));
  REQUIRE(all.size() == 1);
  CHECK(all[0] == IntVector{1});
}

TEST_CASE("integer_kernel yields a saturated lattice basis") {
  // 2x - 4y = 0 has integer kernel generated by (2, 1), not (4, 2).
  auto k = integer_kernel(matrix({{2, -4}}, 2));
  REQUIRE(k.size() == 1);
  CHECK(k[0] == IntVector{2, 1});

  std::mt19937_64 rng(23);
  std::uniform_int_distribution<long> entry(-3, 3);
  std::uniform_int_distribution<std::size_t> dim(1, 4);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t rows = dim(rng) - 1;
    const std::size_t cols = dim(rng);
    IntMatrix m(rows, cols);
    for (auto& x : m.data) x = trial % 4 == 0 ? entry(rng) * 2 : entry(rng);
    auto basis = integer_kernel(m);
    CHECK(basis.size() == cols - rational_rank(m));
    for (const IntVector& v : basis) {
      CHECK(annihilates(m, v));
      BigInt g = 0;
      for (const BigInt& x : v) g = gcd(g, x);
      CHECK(g == 1);
    }
  }
}

TEST_CASE("is_root_of_unity examples") {
  const TowerSpec tw = shift_tower();
  CHECK(is_root_of_unity(FieldElement(1L), 1) == 1);
  CHECK(is_root_of_unity(FieldElement(-1L), 1) == 2);
  CHECK_FALSE(is_root_of_unity(FieldElement(2L), 1).has_value());
  CHECK_FALSE(is_root_of_unity(F("t", tw), 1).has_value());
  try {
    (void)is_root_of_unity(F("z", tw), 1);
    FAIL("expected non-constant-lambda");
  } catch (const EngineError& e) {
    CHECK(e.code() == ErrorCode::non_constant_lambda);
  }
}

TEST_CASE("decide examples") {
  const TowerSpec tw = shift_tower();
  {
    Verdict v = decide(F("z", tw), tw);
    REQUIRE_FALSE(v.dependent());
    REQUIRE(v.witnesses().size() == 1);
    CHECK(v.witnesses()[0].k == 0);
    CHECK(v.witnesses()[0].value == 1);
    CHECK(v.kernel.empty());
  }
  {
    Verdict v = decide(F("z/(z-1)", tw), tw);
    REQUIRE(v.dependent());
    CHECK(v.certificate().word.exponents == std::vector<long>{1});
    CHECK(v.certificate().u == 1);
    CHECK(v.certificate().b == F("z-1", tw));
  }
  {
    Verdict v = decide(F("2", tw), tw);
    REQUIRE(v.dependent());
    CHECK(v.certificate().word.exponents == std::vector<long>{1, -1});
    CHECK(v.certificate().b.is_one());
  }
  {
    Verdict v = decide(F("-1", tw), tw);
    REQUIRE(v.dependent());
    CHECK(v.certificate().word.exponents == std::vector<long>{2});
    CHECK(v.certificate().u == 2);
    CHECK(v.certificate().b.is_one());
  }
  {
    const TowerSpec power = parse_tower({"alpha: phi=alpha+1", "z0", "z: phi=z, sigma=z+z0"});
    Verdict v = decide(F("z", power), power);
    CHECK_FALSE(v.dependent());
  }
}

TEST_CASE("decide with a parameter in lambda") {
  const TowerSpec tw = shift_tower();
  Verdict v = decide(F("t*(z+t)/(z+t-3)", tw), tw);
  REQUIRE(v.dependent());
  CHECK(v.certificate().word.exponents == std::vector<long>{1, -1});
  CHECK(verify_certificate(F("t*(z+t)/(z+t-3)", tw), v.certificate(), tw));
}

TEST_CASE("decide validates parameters") {
  const TowerSpec moving = parse_tower({"s: phi=s+1", "t", "z: phi=z+1, sigma=z+t"});
  CHECK_THROWS_AS(decide(F("s*z", moving), moving), EngineError);
  CHECK_NOTHROW(decide(F("z", moving), moving));
}

TEST_CASE("synthesize_b examples") {
  const TowerSpec tw = shift_tower();
  {
    auto [b, l] = synthesize_b(decompose(F("z/(z-1)", tw), tw), {{1}});
    CHECK(b == F("z-1", tw));
    CHECK(l == std::map<LKey, long>{{{0, 1, 0}, 1}});
  }
  {
    auto [b, l] = synthesize_b(decompose(F("2", tw), tw), {{1, -1}});
    CHECK(b.is_one());
    CHECK(l.empty());
  }
  {
    auto [b, l] = synthesize_b(decompose(F("z*(z-1)^(-2)*(z-2)", tw), tw), {{1}});
    CHECK(l == std::map<LKey, long>{{{0, 1, 0}, 1}, {{0, 2, 0}, -1}});
    CHECK(b == F("(z-1)/(z-2)", tw));
  }
  try {
    (void)synthesize_b(decompose(F("z", tw), tw), {{1}});
    FAIL("expected inconsistent-word");
  } catch (const EngineError& e) {
    CHECK(e.code() == ErrorCode::inconsistent_word);
  }
}

TEST_CASE("verify_certificate examples") {
  const TowerSpec tw = shift_tower();
  CHECK(verify_certificate(F("z/(z-1)", tw), {{{1}}, F("z-1", tw), {}, 1}, tw));
  for (const char* b : {"1", "z", "z-1", "1/z", "(z+t)/(z-2)"}) {
    CHECK_FALSE(verify_certificate(F("z", tw), {{{1}}, F(b, tw), {}, 1}, tw));
  }
  CHECK(verify_certificate(F("1", tw), {{{1}}, F("1", tw), {}, 1}, tw));
  CHECK_FALSE(verify_certificate(F("1", tw), {{{0}}, F("1", tw), {}, 1}, tw));
}

TEST_CASE("multiplier rule for lambda = -1") {
  const TowerSpec tw = shift_tower();
  const FieldElement a = F("-(z+t)/(z+t-2)", tw);
  OrbitDecomposition d = decompose(a, tw);
  // n_0 = 1 solves the band but not lambda^1 = 1; u = 2 fixes both.
  auto [b1, l1] = synthesize_b(d, {{1}});
  CHECK_FALSE(verify_certificate(a, {{{1}}, b1, l1, 1}, tw));
  auto [b2, l2] = synthesize_b(d, {{2}});
  CHECK(verify_certificate(a, {{{2}}, b2, l2, 2}, tw));
  for (const auto& [key, l] : l1) CHECK(l2.at(key) == 2 * l);
  CHECK(b2 == b1.pow(2));
  Verdict v = decide(a, tw);
  REQUIRE(v.dependent());
  CHECK(v.certificate().u == 2);
}

TEST_CASE("verdict is invariant under phi and under sign") {
  const TowerSpec tw = shift_tower();
  std::mt19937_64 rng(29);
  std::uniform_int_distribution<long> s(-2, 2);
  for (int trial = 0; trial < 80; ++trial) {
    LatticeInstance inst;
    for (long k = 0; k < 3; ++k) {
      for (long d = -1; d <= 1; ++d) inst.exps[{k, d}] = trial % 2 ? s(rng) : 0;
    }
    inst.exps[{0, 0}] = s(rng);
    inst.exps[{0, 1}] = -inst.exps[{0, 0}];
    const FieldElement a = inst.build();
    Verdict v = decide(a, tw);
    CHECK(decide(apply_endo(a, tw, Endo::phi), tw).dependent() == v.dependent());
    CHECK(compute_aik(decompose(-a, tw)).values == v.aik.values);
    CHECK(decide(-a, tw).dependent() == v.dependent());
  }
}

TEST_CASE("decide agrees with the brute-force oracle and the kernel") {
  // Sample of products of z - k t - d, k in 0..2, d in 0..1, s in -2..2.
  const TowerSpec tw = shift_tower();
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<long> s(-2, 2);
  std::uniform_int_distribution<int> zero(0, 2);
  const long lambdas[] = {1, -1, 2, 3};
  int dependent = 0;
  for (int trial = 0; trial < 600; ++trial) {
    LatticeInstance inst;
    inst.lambda = lambdas[trial % 4];
    for (long k = 0; k < 3; ++k) {
      for (long d = 0; d <= 1; ++d) inst.exps[{k, d}] = zero(rng) == 0 ? s(rng) : 0;
    }
    // Force a share of instances into the dependent region.
    if (trial % 3 == 0) {
      for (long k = 0; k < 3; ++k) inst.exps[{k, 1}] = -inst.exps[{k, 0}];
    }
    const FieldElement a = inst.build();
    Verdict v = decide(a, tw);
    auto oracle = sigmadep::testing::brute_force_certificate(inst, tw);
    CHECK(v.dependent() == oracle.has_value());
    CHECK(v.dependent() == !v.kernel.empty());
    if (v.dependent()) {
      ++dependent;
      CHECK(verify_certificate(a, v.certificate(), tw));
    }
  }
  CHECK(dependent > 100);
}
