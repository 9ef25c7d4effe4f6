import copy
from fractions import Fraction

import pytest

from artifact.doublealg import (AlgebraContext, axiom_checks, build_DeltaA, build_DeltaB, build_mA, build_mB,
                                build_R_b, build_SB, pairing_seed, Rinv_seed, solve_Rinv, verify_axioms)
from artifact.exact import Frac, symbol
from artifact.pgcalc import PG, compose, expand, pg_equal, product, validate_pg_class
from artifact.symseries import EpsSeries, V

AXIOMS = list(axiom_checks(AlgebraContext(0)))


@pytest.fixture(scope="module")
def report1(ctx1):
    return verify_axioms(ctx1)


@pytest.mark.parametrize("name", AXIOMS)
def test_axioms_order_one(report1, name):
    assert report1.results[name], report1.details[name]


def test_axioms_order_zero(ctx0):
    assert verify_axioms(ctx0).ok


def test_ribbon_squared_order_two(ctx2):
    assert verify_axioms(ctx2, names={"ribbon squared", "u = AB S(u)"}).ok


def test_corrupted_R_is_named(ctx1):
    bad = copy.copy(ctx1)
    R = ctx1._R
    bad._R = R.with_P(R.P + EpsSeries([Frac.const(0), V("a", "i")]))
    report = verify_axioms(bad, names={"R inverse", "associativity"})
    assert report.failures() == ["R inverse"]
    assert report.to_json()["failures"]["R inverse"]


def test_R_order_zero_is_gaussian():
    R = build_R_b("i", "j", 0)
    assert R.P == EpsSeries.one(0)
    assert R.L == {("a_j", "b_i"): 1}
    assert R.Q == {("y_i", "x_j"): Frac.const(1)}


def test_R_faddeev_coefficient():
    R = build_R_b("i", "j", 1)
    yx = V("y", "i") * V("x", "j")
    assert R.P.coeffs[1] == yx * yx * Fraction(-1, 4)
    assert validate_pg_class(R, "PG")


def test_R_inverse_order_zero():
    assert pg_equal(solve_Rinv("i", "j", 0), Rinv_seed("i", "j"))


def test_pairing_flavor(ctx1):
    pi = ctx1.half.pi
    assert validate_pg_class(pi, "PG±")
    assert not validate_pg_class(pi, "PG+")
    assert pg_equal(pi.truncate(0), pairing_seed("j", "k"))


def test_pairing_duality_coefficient(ctx2):
    # the generating function is Σ π(a^k x^l, y^m b^n) α^k ξ^l η^m β^n / (k! l! m! n!)
    # and π(a x², y² b) = [2]_q! 1! = 1 + q
    E = expand(ctx2.half.pi, 6)
    key = {"alpha_j": 1, "xi_j": 2, "eta_k": 2, "beta_k": 1}
    got = [sum((c for exps, c in p.terms() if exps == key), Fraction(0)) for p in E]
    one_plus_q = [Fraction(2), Fraction(1), Fraction(1, 2)]
    assert got == [c / 4 for c in one_plus_q]
    off = {"alpha_j": 1, "xi_j": 2, "eta_k": 1, "beta_k": 1}
    assert all(exps != off for p in E for exps, _ in p.terms())


def test_coproduct_B_order_one(ctx1):
    f = build_DeltaB("i", "j", "k", 1, ctx1.half.pi)
    Bk = symbol("B", "k")
    expected = PG(("i",), ("j", "k"), {("beta_i", "b_j"): 1, ("beta_i", "b_k"): 1},
                  {("y_j", "eta_i"): Bk, ("y_k", "eta_i"): 1},
                  EpsSeries([Frac.const(1), Bk * V("eta", "i") ** 2 * V("y", "j") * V("y", "k") / 2]))
    assert pg_equal(f, expected)


def test_antipode_B_order_one(ctx1):
    f = build_SB("i", "j", 1, ctx1.half.Rinv, ctx1.half.pi)
    Binv = 1 / symbol("B", "j")
    b, e, y = V("beta", "i"), V("eta", "i"), V("y", "j")
    expected = PG(("i",), ("j",), {("beta_i", "b_j"): -1}, {("y_j", "eta_i"): -Binv},
                  EpsSeries([Frac.const(1), -(Binv * b * e * y + Binv ** 2 * e ** 2 * y ** 2 / 2)]))
    assert pg_equal(f, expected)


def test_coproduct_A_order_zero():
    f = build_DeltaA("i", "j", "k", 0)
    expected = PG(("i",), ("j", "k"), {("a_j", "alpha_i"): 1, ("a_k", "alpha_i"): 1},
                  {("xi_i", "x_j"): 1, ("xi_i", "x_k"): 1})
    assert pg_equal(f, expected)


def test_half_structure_flavors(ctx1):
    h = ctx1.half
    for f in (h.DeltaA, h.DeltaB, h.SA, h.SB, h.SAbar, h.SBbar, build_mA(1, 2, 3, 1), build_mB(1, 2, 3, 1)):
        assert validate_pg_class(f, "PG+")
    for f in (ctx1.R("i", "j"), ctx1.C("i"), ctx1.v("i"), ctx1.vbar("i")):
        assert validate_pg_class(f, "PG")


def test_xy_commutation(ctx1):
    x = PG((), ("1",), {}, {}, EpsSeries([V("x", "1"), Frac.const(0)]))
    y = PG((), ("2",), {}, {}, EpsSeries([V("y", "2"), Frac.const(0)]))
    out = compose(product(x, y), ctx1.m("1", "2", "k"))
    yx, a, T = V("y", "k") * V("x", "k"), V("a", "k"), symbol("T", "k")
    # q y x + 1 − AB with q = e^ε and AB = T e^{−2εa}
    assert out.P.coeffs[0] == yx + 1 - T
    assert out.P.coeffs[1] == yx + 2 * T * a


def test_casimir_leading_terms(ctx1):
    w = ctx1.w("i")
    yx, a, T = V("y", "i") * V("x", "i"), V("a", "i"), symbol("T", "i")
    assert w.P.coeffs[0] == yx + (a + Fraction(1, 2)) * (1 - T)
    # at T = 1 the ε term is y a x + a(a+1)
    assert w.P.coeffs[1].evaluate({"T_i": 1}) == V("y", "i") * a * V("x", "i") + a * (a + 1)


def test_spinner_closed_form(ctx1):
    C = ctx1.C("i")
    half = symbol("T", "i", 1)
    assert C.P.coeffs[0] == half
    assert C.P.coeffs[1] == -half * V("a", "i")
