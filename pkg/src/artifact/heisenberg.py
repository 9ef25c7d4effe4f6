"""The Heisenberg algebra backend and the baby invariant Z̃.

Generators p, x with [p, x] = 1 in the order p < x. Inside the engine p and
its dual π are stored as the y/η pair and x, ξ keep their own names, so the
generic contraction machinery applies unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exact import T, Frac, vname
from .pgcalc import PG, CompositionError, compose, product
from .symseries import EpsSeries

# engine class used for each Heisenberg variable
HEIS_CLASS = {"p": "y", "pi": "eta", "x": "x", "xi": "xi"}


@dataclass(frozen=True)
class HeisVar:
    cls: str
    label: str

    @property
    def name(self) -> str:
        return vname(HEIS_CLASS[self.cls], self.label)

    def __str__(self):
        return f"{'π' if self.cls == 'pi' else self.cls}[{self.label}]"


def hv(cls: str, label) -> str:
    return HeisVar(cls, str(label)).name


def heis_mul(i, j, k) -> PG:
    """e^{(π_i+π_j)p_k + (ξ_i+ξ_j)x_k − ξ_iπ_j}."""
    if str(i) == str(j):
        raise CompositionError("cannot merge a strand with itself")
    Q = {
        (hv("p", k), hv("pi", i)): 1,
        (hv("p", k), hv("pi", j)): 1,
        (hv("xi", i), hv("x", k)): 1,
        (hv("xi", j), hv("x", k)): 1,
        (hv("xi", i), hv("pi", j)): -1,
    }
    return PG((i, j), (k,), {}, Q)


def heis_R(i, j, sign: int = 1) -> PG:
    """e^{(T^{±1}−1)(p_i−p_j)x_j}."""
    if str(i) == str(j):
        raise CompositionError("a crossing needs two distinct strands")
    c = T(sign) - 1
    return PG((), (i, j), {}, {(hv("p", i), hv("x", j)): c, (hv("p", j), hv("x", j)): -c})


def heis_unit(i) -> PG:
    return PG((), (i,), {}, {})


def heis_merge(f: PG, i, j, k) -> PG:
    """f // m^{ij}_k using the easy-merge shortcut when it applies.

    With the exponent written as G = u·x_i + v·p_j + (rest) and no x_i p_j
    cross term, the merge is e^{G − uv} with i, j renamed to k. Falls back to
    the general composition otherwise.
    """
    i, j, k = str(i), str(j), str(k)
    xi_, pj = hv("x", i), hv("p", j)
    if (pj, xi_) in f.Q or f.P.kappa > 0 or not f.P.coeffs[0].body_free() or f.L:
        return compose(f, heis_mul(i, j, k))
    if k != i and k != j and k in f.cod:
        raise CompositionError(f"label {k} already present")
    u = {r: c for (r, s), c in f.Q.items() if s == xi_}
    v = {s: c for (r, s), c in f.Q.items() if r == pj}
    Q = {}
    for key, c in f.Q.items():
        Q[key] = c
    for r, cu in u.items():
        for s, cv in v.items():
            key = (r, s)
            Q[key] = Q[key] - cu * cv if key in Q else -(cu * cv)
    ren = {i: k, j: k}

    def rn(n: str) -> str:
        cls, lab = n.split("_", 1)
        return vname(cls, ren.get(lab, lab))

    out = {}
    for (r, s), c in Q.items():
        key = (rn(r), rn(s))
        out[key] = out[key] + c if key in out else c
    cod = tuple(dict.fromkeys(k if l in (i, j) else l for l in f.cod))
    return PG(f.dom, cod, {}, out, f.P)


def heis_evaluate(program, *, fast: bool = True) -> PG:
    """Z̃ of a program built from crossings, unit strands and merges.

    Rotation generators carry no information here and are read as unit
    strands; kinks are expanded to a crossing closed on itself.
    """
    from .tangles import parse_program

    if isinstance(program, str):
        program = parse_program(program)
    Z = PG((), (), {}, {}, EpsSeries.one(0))
    fresh = 0
    for st in program.statements:
        if st.op in ("X", "Xbar"):
            Z = product(Z, heis_R(st.args[0], st.args[1], 1 if st.op == "X" else -1))
        elif st.op in ("One", "C", "Cbar"):
            Z = product(Z, heis_unit(st.args[0]))
        elif st.op in ("v", "vbar"):
            a, b = f"#k{fresh}", f"#k{fresh + 1}"
            fresh += 2
            Z = product(Z, heis_R(a, b, -1 if st.op == "v" else 1))
            Z = heis_merge(Z, a, b, st.args[0]) if fast else compose(Z, heis_mul(a, b, st.args[0]))
        elif st.op == "m":
            i, j = st.args
            k = st.out[0]
            Z = heis_merge(Z, i, j, k) if fast else compose(Z, heis_mul(i, j, k))
        else:
            raise ValueError(f"statement {st.op} is not available in the Heisenberg backend")
    return Z


def heis_scalar(Z: PG) -> Frac:
    """The Scalar value of a one-strand result (its Gaussian part must vanish)."""
    if Z.Q or Z.L:
        raise ValueError("value still has a Gaussian part")
    return Z.P.coeffs[0]


def heis_normalized(program) -> Frac:
    """T^writhe · Z̃ for a one-strand program."""
    from .tangles import parse_program, writhe_and_rotation

    if isinstance(program, str):
        program = parse_program(program)
    w, _ = writhe_and_rotation(program)
    return heis_scalar(heis_evaluate(program)) * T(w)
