from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from artifact.exact import Frac
from artifact.invariant import (InvariantError, alexander_scalar, analyze, evaluate_Z, extract_center,
                                from_laurent, genus_report, knot_value, laurent_T, laurent_text, localize_t,
                                reconstruct, rho11_expected, w_coefficients, whitehead_report, whitehead_value)
from artifact.pgcalc import compose, globalize_t, pg_equal, product, relabel
from artifact.tangles import Program, Statement, braid_permutation, braid_to_program, load_knots


def T(e):
    return from_laurent({Fraction(e): 1})


TREFOIL = braid_to_program((1, 1, 1))


def test_unknot(ctx1):
    cv = extract_center(knot_value(braid_to_program(()), ctx1), ctx1)
    assert cv.alexander == Frac.const(1)
    assert cv.rho == {}


def test_trefoil_order_zero(ctx0):
    Z = knot_value(TREFOIL, ctx0)
    assert Z.Q == {} and Z.L == {}
    assert Z.P.coeffs[0] == 1 / (T(1) - 1 + T(-1))


def test_figure_eight_order_zero(ctx0):
    Z = knot_value(braid_to_program((1, -2, 1, -2)), ctx0)
    assert Z.P.coeffs[0] == 1 / (3 - T(1) - T(-1))


def test_trefoil_rho1(ctx1):
    cv = extract_center(knot_value(TREFOIL, ctx1), ctx1)
    assert cv.alexander == T(1) - 1 + T(-1)
    assert cv.rho_kj(1, 1) == -2 - 2 * T(-1)
    assert cv.rho_kj(1, 1) == rho11_expected(cv.alexander)
    assert cv.rho_kj(1, 2).is_zero()
    assert cv.rho_kj(1, 0) == T(2) - 2 * T(1) + 2 - 2 * T(-1) + T(-2)


def test_mirror_trefoil_rho10_flips_sign(ctx1):
    a = extract_center(knot_value(TREFOIL, ctx1), ctx1)
    b = extract_center(knot_value(braid_to_program((-1, -1, -1)), ctx1), ctx1)
    assert a.alexander == b.alexander
    assert b.rho_kj(1, 0) == -a.rho_kj(1, 0)


def test_value_is_central(ctx1):
    Z = relabel(knot_value(TREFOIL, ctx1), {"0": "z"})
    f = product(Z, globalize_t(relabel(ctx1._R, {"i": "a", "j": "b"})))
    m = globalize_t(ctx1._m)
    left = compose(f, relabel(m, {"i": "z", "j": "a", "k": "k"}))
    right = compose(f, relabel(m, {"i": "a", "j": "z", "k": "k"}))
    assert pg_equal(left, right)


def test_hopf_operations_on_value(ctx1):
    Z = localize_t(knot_value(TREFOIL, ctx1), "0")
    prog = Program([Statement("Delta", ("0",), ("a", "b")), Statement("Eps", ("b",))])
    assert pg_equal(evaluate_Z(prog, ctx1, global_t=False, start=Z), relabel(Z, {"0": "a"}))
    # a central group-like value of a knot is fixed by the antipode
    assert pg_equal(evaluate_Z(Program([Statement("S", ("0",))]), ctx1, global_t=False, start=Z), Z)


def test_reconstruction(ctx2):
    Z = knot_value(TREFOIL, ctx2)
    cv = extract_center(Z, ctx2)
    assert pg_equal(reconstruct(cv, ctx2), Z)


def test_w_coefficients_reject_gaussian(ctx1):
    Z = evaluate_Z("X[1,2]", ctx1)
    with pytest.raises(InvariantError):
        w_coefficients(Z, ctx1)


def test_whitehead_double_of_unknot(ctx1):
    cv = extract_center(whitehead_value(braid_to_program(()), ctx1), ctx1)
    assert cv.alexander == Frac.const(1)
    assert cv.rho == {}
    assert whitehead_report(cv, 0).ok


def test_genus_bound(ctx1):
    cv = extract_center(knot_value(TREFOIL, ctx1), ctx1)
    rep = genus_report(cv, 1)
    assert rep.ok and rep.degree == 2 and rep.half_degree == 1
    assert not genus_report(cv, 0).ok


def test_laurent_helpers():
    assert laurent_text({Fraction(3): 1, Fraction(2): 1, Fraction(1): 4, Fraction(0): 9}) == "T^3+T^2+4T+9"
    assert laurent_text({Fraction(1): -1, Fraction(0): 3}) == "-T+3"
    assert laurent_text({Fraction(1, 2): Fraction(1, 2)}) == "(1/2)T^1/2"
    assert laurent_text({}) == "0"
    d = alexander_scalar([1, -1, 1])
    assert laurent_T(d) == {-1: 1, 0: -1, 1: 1}
    with pytest.raises(InvariantError):
        laurent_T(Frac.var("x_1"))


def test_analyze_json(ctx1):
    res = analyze("3_1", TREFOIL, ctx1, alexander_ref=[1, -1, 1])
    assert all(res.checks.values())
    js = res.to_json()
    assert js["alexander"] == {"-1": "1", "0": "-1", "1": "1"}
    assert js["rho"]["1,1"] == {"-1": "-2", "0": "-2"}
    assert js["normalized"] == {"delta_plus": "T-1", "rho1_plus": "T", "rho2_plus": ""}


def test_curated_knots_order_one(ctx1):
    for rec in load_knots().values():
        if rec.crossings <= 6:
            res = analyze(rec.name, rec.to_program(), ctx1, alexander_ref=rec.alexander)
            assert all(res.checks.values()), (rec.name, res.checks)


def _closes_to_knot(word, n):
    perm = braid_permutation(word, n)
    i, seen = 0, 0
    while True:
        i, seen = perm[i], seen + 1
        if i == 0:
            return seen == n


@given(st.lists(st.sampled_from([1, -1, 2, -2]), min_size=1, max_size=6), st.integers(0, 5))
@settings(max_examples=12, deadline=None)
def test_markov_invariance(ctx1, word, shift):
    n = 3
    if not _closes_to_knot(word, n):
        return
    base = knot_value(braid_to_program(word, n), ctx1)
    k = shift % len(word)
    conj = word[k:] + word[:k]
    assert pg_equal(knot_value(braid_to_program(conj, n), ctx1), base)
    for s in (3, -3):
        assert pg_equal(knot_value(braid_to_program(word + [s], n + 1), ctx1), base)
