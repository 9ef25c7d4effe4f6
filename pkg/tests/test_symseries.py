from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from artifact.exact import Frac, T
from artifact.symseries import (BodyVar, EpsSeries, V, check_hbar_balanced, drop_hbar, exp_series,
                                faddeev_log_coeffs, grading, monomial_key, q_series, restore_hbar, ser_inv,
                                ser_mul, term_gradings)

CLASSES = ("y", "t", "a", "x", "eta", "tau", "alpha", "xi")


def monomials():
    return st.dictionaries(st.sampled_from([f"{c}_{l}" for c in CLASSES for l in "12"]),
                           st.integers(1, 3), max_size=3)


def polys():
    term = st.tuples(monomials(), st.integers(-3, 3), st.integers(-1, 1))
    return st.lists(term, max_size=3).map(
        lambda ts: sum((Frac.monomial(m, c) * T(e) for m, c, e in ts), Frac.const(0)))


def series(kappa=2):
    return st.lists(polys(), min_size=kappa + 1, max_size=kappa + 1).map(EpsSeries)


def test_body_var_names_and_duals():
    v = BodyVar("η", 3)
    assert v.name == "eta_3" and v.greek
    assert v.dual() == BodyVar("y", "3")
    assert str(BodyVar("xi", "k")) == "ξ[k]"
    with pytest.raises(ValueError):
        BodyVar("q", 1)


def test_monomial_order_follows_strand_then_class():
    k1 = monomial_key({"x_1": 1, "y_1": 1})
    assert [c for (_, c), _ in k1[1]] == [0, 4]
    assert monomial_key({"y_2": 2}) < monomial_key({"y_1": 1, "x_1": 1, "a_1": 1})


def test_series_arithmetic_truncates():
    y = V("y", 1)
    e = EpsSeries([Frac.const(0), y, Frac.const(0)])
    sq = e * e
    assert sq.coeffs[2] == y * y
    cube = sq * e
    assert cube.is_zero()


def test_exp_series():
    x = V("x", 1)
    e = exp_series(EpsSeries([Frac.const(0), x, Frac.const(0)]))
    assert list(e.coeffs) == [Frac.const(1), x, x * x * Fraction(1, 2)]
    with pytest.raises(ValueError):
        exp_series(EpsSeries([Frac.const(1)]))


def test_q_series_and_inverse():
    q = q_series(4)
    assert q == [1, 1, Fraction(1, 2), Fraction(1, 6), Fraction(1, 24)]
    assert ser_mul(q, ser_inv(q, 5), 5) == [1, 0, 0, 0, 0]


def test_faddeev_second_coefficient():
    # series of (1-q)^n / (n(1-q^n)) at q = e^ε, frozen from a CAS expansion
    c = faddeev_log_coeffs(2)
    assert c[2] == [0, Fraction(-1, 4), 0]
    assert c[3] == [0, 0, Fraction(1, 9)]


def test_hbar_of_xy_exponent():
    (term,) = restore_hbar(EpsSeries([V("y", "i") * V("x", "j")]))
    assert term.hbar == 1


def test_constant_has_no_hbar():
    (term,) = restore_hbar(EpsSeries.one(0))
    assert term.hbar == 0 and term.mono == ()


def test_eps_weights():
    assert grading({"y_1": 2, "x_1": 2}, 1) == (0, 3)
    assert grading({"a_1": 1}, 0) == (2, 0)


@given(monomials(), monomials(), st.integers(0, 2), st.integers(0, 2))
def test_grading_is_additive(m1, m2, e1, e2):
    prod = dict(m1)
    for k, e in m2.items():
        prod[k] = prod.get(k, 0) + e
    g1, g2 = grading(m1, e1), grading(m2, e2)
    assert grading(prod, e1 + e2) == (g1[0] + g2[0], g1[1] + g2[1])


@given(series(), series(), series())
@settings(max_examples=30, deadline=None)
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert (a - a).is_zero()


@given(series())
@settings(max_examples=40, deadline=None)
def test_restore_then_drop_is_identity(s):
    terms = restore_hbar(s)
    check_hbar_balanced(terms)
    assert drop_hbar(terms, s.kappa) == s


@given(polys(), polys())
@settings(max_examples=40, deadline=None)
def test_term_gradings_of_products(p, q):
    if p.is_zero() or q.is_zero():
        return
    wts = {g for g in term_gradings(p)}
    wts2 = {g for g in term_gradings(q)}
    sums = {(a[0] + b[0], a[1] + b[1]) for a in wts for b in wts2}
    assert set(term_gradings(p * q)) <= sums
