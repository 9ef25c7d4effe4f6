import pytest
from hypothesis import given, settings, strategies as st

from artifact.exact import symbol
from artifact.invariant import evaluate_Z
from artifact.pgcalc import product
from artifact.seifert import v2_from_alexander
from artifact.symseries import V
from artifact.tangles import (ProgramError, braid_permutation, braid_to_program, load_knots, parse_program,
                              render_program, seifert_band, whitehead_program, writhe_and_rotation)

TREFOIL = "X[1,2] X[3,4] X[5,6] m[1,4>a] m[2,3>b] m[a,5>i] m[b,6>j] m[i,j>0]"
BANDS = "v[1] Xbar[2,3] vbar[4] m[1,3>1] m[2,4>2]"


def test_parse_trefoil():
    p = parse_program(TREFOIL)
    assert [s.op for s in p.statements] == ["X"] * 3 + ["m"] * 5
    assert p.live_labels() == ["0"]
    assert p.statements[3].args == ("1", "4") and p.statements[3].out == ("a",)


def test_parse_single_strand():
    p = parse_program("One[i]")
    assert p.live_labels() == ["i"]


@pytest.mark.parametrize("text, message", [
    ("m[1,1>2]", "itself"),
    ("X[1,2] X[1,3]", "reused"),
    ("One[i] m[i,j>k]", "unknown label"),
    ("X[1]", "takes 2 labels"),
    ("Foo[1]", "unknown statement"),
    ("X[1,2] m[1,2>0] garbage", "offset 16"),
])
def test_parse_errors(text, message):
    with pytest.raises(ProgramError, match=message):
        parse_program(text)


def test_merge_may_reuse_a_consumed_label():
    assert parse_program("X[1,2] m[1,2>1]").live_labels() == ["1"]


def test_writhe_and_rotation():
    assert writhe_and_rotation(TREFOIL)[0] == 3
    assert writhe_and_rotation("C[i] Cbar[i2] m[i,i2>k]") == (0, {"k": 0})
    assert writhe_and_rotation(BANDS)[0] == 0
    assert writhe_and_rotation("v[0]") == (-1, {"0": 1})
    assert writhe_and_rotation("One[i] Delta[i>a,b] S[a]") == (0, {"a": 0, "b": 0})


def test_braid_programs():
    assert render_program(braid_to_program(())) == "One[0]"
    p = braid_to_program((1, 1, 1))
    assert writhe_and_rotation(p) == (3, {"0": -1})
    assert writhe_and_rotation(braid_to_program((1, -2, 1, -2)))[0] == 0
    with pytest.raises(ProgramError):
        braid_to_program((1, 1))
    with pytest.raises(ProgramError):
        braid_to_program((0,))


def test_braid_permutation():
    assert braid_permutation((1,), 2) == [1, 0]
    assert braid_permutation((1, 2), 3) == [2, 0, 1]


words = st.lists(st.sampled_from([1, -1, 2, -2, 3, -3]), max_size=8)


@given(words)
@settings(max_examples=60, deadline=None)
def test_round_trip(word):
    try:
        p = braid_to_program(word)
    except ProgramError:
        return
    text = render_program(p)
    assert parse_program(text) == p
    assert render_program(parse_program(text)) == text


def test_whitehead_and_band_programs_are_well_formed():
    w = whitehead_program("0", "0")
    assert [s.op for s in w.statements[:2]] == ["Delta", "S"]
    b = seifert_band("i", "j", "k")
    assert sum(s.op == "Delta" for s in b.statements) == 2


def test_knot_data():
    knots = load_knots()
    assert {"0_1", "3_1", "4_1", "8_17", "11n34", "11n42", "10_1"} <= set(knots)
    for rec in knots.values():
        cs = rec.alexander
        assert list(cs) == list(reversed(cs)), rec.name
        assert sum(cs) == 1, rec.name
        assert rec.genus is not None and 2 * rec.genus >= len(cs) - 1
        if rec.v2 is not None:
            assert v2_from_alexander(cs) == rec.v2, rec.name
        rec.to_program()


def _band_value(ctx):
    start = product(ctx.identity("i"), ctx.identity("j"))
    return evaluate_Z(seifert_band("i", "j", "k"), ctx, global_t=False, start=start)


def test_band_order_zero(ctx1):
    Z = _band_value(ctx1)
    Ai, Aj, Tk = symbol("A", "i"), symbol("A", "j"), symbol("T", "k")
    assert Z.L == {}
    assert Z.P.coeffs[0] == Tk
    expected = {
        ("xi_i", "eta_i"): (Tk - 1) * Ai * (Aj - 1),
        ("xi_j", "eta_j"): (Tk - 1) * Aj * (Ai - 1),
        ("xi_i", "eta_j"): (Tk - 1) * (Ai + Aj - Ai * Aj),
        ("xi_j", "eta_i"): -(Tk - 1) * Ai * Aj,
        ("xi_i", "x_k"): Ai * (1 - 1 / Aj),
        ("xi_j", "x_k"): 1 - Ai,
        ("y_k", "eta_i"): 1 - Aj,
        ("y_k", "eta_j"): Aj * (1 - 1 / Ai),
    }
    assert set(Z.Q) == set(expected)
    for key, val in expected.items():
        assert Z.Q[key] == val, key


def test_band_first_order_at_alpha_zero(ctx1):
    Z = _band_value(ctx1)
    sub = {"A_i": 1, "A_j": 1, "alpha_i": 0, "alpha_j": 0}
    P = Z.P.coeffs[1].evaluate(sub) / Z.P.coeffs[0].evaluate(sub)
    Tk = symbol("T", "k")
    xi, xj, ei, ej = V("xi", "i"), V("xi", "j"), V("eta", "i"), V("eta", "j")
    x, y, a = V("x", "k"), V("y", "k"), V("a", "k")
    E = xi * ej - xj * ei
    # the x_k group mirrors the y_k group under ξ ↔ η, i ↔ j
    expected = (y * x * E - 2 * a * (1 + Tk * E)
                + x * (xi ** 2 * ej + xj * (xj * ei - 2) + 2 * xi * (1 - xj * ej))
                + y * (xj * ei ** 2 + ej * (2 + xi * ej) - 2 * ei * (1 + xi * ej))
                + (Tk - 1) * (-2 * xi * ej + 2 * xi * ei + 2 * xj * ej + xi ** 2 * ei * ej + xi * xj * ej ** 2)
                + (3 - 4 * Tk + Tk ** 2) * (xi * xj * ei * ej + (xi ** 2 * ej ** 2 - xj ** 2 * ei ** 2) / 4))
    assert P == expected
