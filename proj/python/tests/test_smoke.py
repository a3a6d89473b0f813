import json
from fractions import Fraction
from math import factorial

import pytest

import sigmadep as sd


@pytest.fixture
def tw():
    return sd.shift_tower()


def test_gamma_is_independent(tw):
    v = sd.decide(tw.parse("z"))
    assert not v["dependent"]
    assert v["witnesses"] == [(1, 0, 1)]


def test_telescoping_certificate(tw):
    a = tw.parse("z/(z-1)")
    v = sd.decide(a)
    assert v["dependent"]
    assert v["word"] == [1]
    assert str(v["b"]) == "z - 1"
    assert sd.verify_certificate(a, v["word"], v["b"])
    assert sd.check_certificate_numeric(a, v["word"], v["b"], trials=20, seed=3)
    assert not sd.verify_certificate(tw.parse("z"), [1], tw.parse("1"))


def test_element_arithmetic(tw):
    z = tw.parse("z")
    assert z.phi() == tw.parse("z + 1")
    assert z.sigma(2) == tw.parse("z + 2*t")
    assert (z / (z - tw.parse("1"))).evaluate({"z": "3"}) == Fraction(3, 2)
    assert sd.Element(str(z**3 / (z + tw.parse("t"))), tw) == z**3 / (z + tw.parse("t"))


def test_errors_carry_codes(tw):
    with pytest.raises(sd.EngineError) as e:
        tw.parse("z/(w-1)")
    assert e.value.args[0] == "unknown-variable"
    with pytest.raises(sd.EngineError) as e:
        sd.decide(tw.parse("z^2 - t"))
    assert e.value.args[0] == "unsupported-root-structure"


def test_isomonodromy(tw):
    assert sd.verify_isomonodromic("[[2, 1], [0, 3]]", "[[2, 1], [0, 3]]", tw)
    assert not sd.verify_isomonodromic("[[z]]", "[[1]]", tw)
    assert sd.is_isomonodromic("[[z]]", tw, degree_cap=5) is None
    B = sd.is_isomonodromic("[[2, z+3], [0, 3]]", tw, degree_cap=3)
    assert B is not None
    assert sd.verify_isomonodromic("[[2, z+3], [0, 3]]", B, tw)


def test_q_companion():
    qt = sd.Tower(["q", "a: phi=a, sigma=q*a", "x: phi=q*x, sigma=x"])
    A = sd.companion(["(x-1)/(a^2*x-1)", "-(2*a*x-2)/(a^2*x-1)"], qt)
    B = ("[[1/(a^2*x-1), -2*a/((a+1)*(a^2*x-1))],"
         " [2*a*(x-1)/((a+1)*(a^2*x-1)*(a^2*q*x-1)), (3*a-1+(a^3-3*a^2)*x)/((a+1)*(a^2*x-1)*(a^2*q*x-1))]]")
    assert sd.verify_isomonodromic(A, B, qt)


def test_factorial_frame(tw):
    f = sd.fundamental_matrix("[[z]]", tw, 1, 12)
    assert [y[0][0] for y in f["values"]] == [factorial(i) for i in range(12)]
    f = sd.fundamental_matrix("[[z/(z-1)]]", tw, 1, 4, auto_advance=True)
    assert f["i0"] == 2 and f["skipped"] == {1}


def test_run_cli_matches_tool():
    code, out = sd.run_cli(["--json", "analyze", "z/(z-1)"])
    report = json.loads(out)
    assert code == 0
    assert report["schema_version"] == sd.SCHEMA_VERSION
    assert report["result"]["certificate"]["b"] == "z - 1"
    code, out = sd.run_cli(["--json", "analyze"], stdin="z")
    assert code == 1
