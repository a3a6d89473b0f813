#include <random>

#include "doctest.h"
#include "sigmadep/errors.hpp"
#include "sigmadep/parser.hpp"
#include "support.hpp"

using namespace sigmadep;
using sigmadep::testing::F;

TEST_CASE("parse_expression examples") {
  const TowerSpec tw = sigmadep::testing::shift_tower();
  FieldElement f = F("z/(z-1)", tw);
  CHECK(f.num() == Poly::variable(1));
  CHECK(f.den() == Poly::variable(1) - 1);

  const TowerSpec qt = sigmadep::testing::q_tower();
  FieldElement c = F("(2*a*x-2)/(a^2*x-1)", qt);
  const Poly a = Poly::variable(1);
  const Poly x = Poly::variable(2);
  CHECK(c == FieldElement::fraction(a * x * 2 - 2, a * a * x - 1));

  try {
    F("z/(w-1)", tw);
    FAIL("expected unknown variable");
  } catch (const ParseError& e) {
    CHECK(e.code() == ErrorCode::unknown_variable);
    CHECK(e.expected() == "w");
    CHECK(e.position() == 3);
  }
}

TEST_CASE("precedence: power binds tighter than unary minus") {
  const TowerSpec tw = sigmadep::testing::shift_tower();
  CHECK(F("-z^2", tw) == -(F("z", tw) * F("z", tw)));
  CHECK(F("2^-1*z", tw) == F("z/2", tw));
  CHECK(F("z^(-2)", tw) == F("1/(z*z)", tw));
  CHECK(F("1 - 2 - 3", tw) == FieldElement(-4L));
  CHECK(F("12/4/3", tw) == FieldElement(1L));
}

TEST_CASE("syntax errors carry position and expectation") {
  const TowerSpec tw = sigmadep::testing::shift_tower();
  try {
    F("(z + 1", tw);
    FAIL("expected syntax error");
  } catch (const ParseError& e) {
    CHECK(e.code() == ErrorCode::syntax_error);
    CHECK(e.position() == 6);
    CHECK(e.expected() == "')'");
  }
  CHECK_THROWS_AS(F("z +", tw), ParseError);
  CHECK_THROWS_AS(F("z ^ t", tw), ParseError);
  try {
    F("1/(z-z)", tw);
    FAIL("expected zero denominator");
  } catch (const ParseError& e) {
    CHECK(e.code() == ErrorCode::zero_denominator);
  }
}

TEST_CASE("print/parse round trip") {
  const TowerSpec tw = sigmadep::testing::shift_tower();
  std::mt19937_64 rng(17);
  for (int i = 0; i < 200; ++i) {
    FieldElement f = sigmadep::testing::random_element(rng, {0, 1});
    CHECK(F(to_string(f, tw), tw) == f);
  }
  CHECK(to_string(F("z/(z-1)", tw), tw) == "z/(z - 1)");
  CHECK(to_string(F("(2*z+1)/(z^2+z)", tw), tw) == "(2*z + 1)/(z^2 + z)");
  CHECK(to_string(F("-t/2 + z*t", tw), tw) == "z*t - 1/2*t");
}

TEST_CASE("matrix and list syntax") {
  const TowerSpec tw = sigmadep::testing::shift_tower();
  auto m = parse_matrix("[[z, 1], [0, (z+t)/2]]", tw);
  REQUIRE(m.size() == 2);
  CHECK(m[1][1] == F("(z+t)/2", tw));
  CHECK_THROWS_AS(parse_matrix("[[z, 1], [0]]", tw), EngineError);
  CHECK(parse_list("1, z", tw).size() == 2);
}

TEST_CASE("tower declarations") {
  TowerSpec tw = parse_tower({"t", "z: phi=z+1, sigma=z+t"});
  CHECK(tw.var(1).phi.kind == ActionKind::shift);
  CHECK(tw.var(1).sigma.c == F("t", tw));
  CHECK(format_var_decl(tw, 1) == "z: phi=z + 1, sigma=z + t");
  CHECK(format_var_decl(tw, 0) == "t");
  TowerSpec qt = sigmadep::testing::q_tower();
  CHECK(qt.var(2).phi.kind == ActionKind::scale);
  CHECK(parse_tower({format_var_decl(qt, 0), format_var_decl(qt, 1), format_var_decl(qt, 2)})
            .var(1)
            .sigma.c == F("q", qt));
}
