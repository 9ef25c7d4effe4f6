"""Perturbed Gaussian morphisms and their composition by contraction.

An element is ``exp(L + Q) * P``:

* ``L`` couples the X side {β, τ, a} to the Y side {b, t, α} with rational
  coefficients (the group-like block),
* ``Q`` couples the R side {y, ξ} to the S side {η, x} with Scalar
  coefficients (the xy block),
* ``P`` is an ε-series of BodyPolys.

The group-like symbols are B = e^{-b}, T = e^{-t} and 𝒜 = e^{α}; their square
roots are the flint variables ``B_k``, ``T_k``, ``A_k``.

Composition renames the contracted labels to fresh internal ones, forms the
product and contracts in three stages: (b,β) and (t,τ), then (a,α), then the
joint (y,η),(ξ,x) block.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .exact import GLOBAL, GREEK, LATIN, T, Frac, ScalarError, ctx_for, is_symbol, split_name, vname
from .symseries import EpsSeries, grading

X_SIDE = ("beta", "tau", "a")
Y_SIDE = ("b", "t", "alpha")
R_SIDE = ("y", "xi")
S_SIDE = ("eta", "x")
SYMBOL_OF = {"b": "B", "t": "T", "alpha": "A"}
SIGN_OF = {"b": -1, "t": -1, "alpha": 1}  # symbol = exp(sign * var)
LATIN_SYMBOLS = ("T", "B")
GREEK_SYMBOLS = ("A",)


class CompositionError(ValueError):
    pass


class SingularContraction(ArithmeticError):
    pass


_fresh = itertools.count()


def fresh_label() -> str:
    return f"#{next(_fresh)}"


def _strip(d: dict) -> dict:
    out = {}
    for k, v in d.items():
        if isinstance(v, Frac):
            if not v.is_zero():
                out[k] = v
        elif v:
            out[k] = v
    return out


@dataclass
class PG:
    dom: tuple[str, ...]
    cod: tuple[str, ...]
    L: dict = field(default_factory=dict)
    Q: dict = field(default_factory=dict)
    P: EpsSeries = None
    flavor: str | None = None

    def __post_init__(self):
        self.dom = tuple(str(x) for x in self.dom)
        self.cod = tuple(str(x) for x in self.cod)
        if len(set(self.dom)) != len(self.dom) or len(set(self.cod)) != len(self.cod):
            raise CompositionError("repeated label")
        L, Q = {}, {}
        for (u, v), c in self.L.items():
            if split_name(u)[0] in Y_SIDE:
                u, v = v, u
            L[(u, v)] = L.get((u, v), 0) + Fraction(c)
        for (r, s), c in self.Q.items():
            if split_name(r)[0] in S_SIDE:
                r, s = s, r
            c = c if isinstance(c, Frac) else Frac.const(c)
            Q[(r, s)] = Q[(r, s)] + c if (r, s) in Q else c
        self.L = _strip(L)
        self.Q = _strip(Q)
        if self.P is None:
            self.P = EpsSeries.one(0)

    @property
    def kappa(self) -> int:
        return self.P.kappa

    def __floordiv__(self, other: "PG") -> "PG":
        return compose(self, other)

    def __mul__(self, other: "PG") -> "PG":
        return product(self, other)

    def with_P(self, P: EpsSeries) -> "PG":
        return PG(self.dom, self.cod, dict(self.L), dict(self.Q), P, self.flavor)

    def truncate(self, kappa: int) -> "PG":
        return self.with_P(self.P.truncate(kappa))

    def exponent(self) -> Frac:
        """L + Q as a polynomial."""
        acc = Frac.const(0)
        for (u, v), c in self.L.items():
            acc = acc + Frac.var(u) * Frac.var(v) * c
        for (r, s), c in self.Q.items():
            acc = acc + Frac.var(r) * Frac.var(s) * c
        return acc

    def __repr__(self):
        return f"PG({self.dom}->{self.cod}, L={ {k: str(v) for k, v in self.L.items()} }, Q={ {k: str(v) for k, v in self.Q.items()} }, P={self.P})"


def identity(labels: Iterable, kappa: int = 0, classes: str = "D") -> PG:
    """exp(Σ ζ z) on each label: the identity morphism."""
    L, Q = {}, {}
    for l in labels:
        l = str(l)
        if classes == "D":
            L[(vname("tau", l), vname("t", l))] = 1
            L[(vname("a", l), vname("alpha", l))] = 1
        if classes == "B":
            L[(vname("beta", l), vname("b", l))] = 1
            L[(vname("a", l), vname("alpha", l))] = 1
        Q[(vname("y", l), vname("eta", l))] = 1
        Q[(vname("xi", l), vname("x", l))] = 1
    labels = tuple(str(l) for l in labels)
    return PG(labels, labels, L, Q, EpsSeries.one(kappa))


def unit(kappa: int = 0) -> PG:
    return PG((), (), {}, {}, EpsSeries.one(kappa))


def scalar_pg(s: Frac, kappa: int = 0) -> PG:
    return PG((), (), {}, {}, EpsSeries.const(s, kappa))


# -- label bookkeeping -------------------------------------------------------

def _label_of(name: str) -> str:
    return split_name(name)[1]


def _is_latin_name(name: str) -> bool:
    kind = split_name(name)[0]
    return kind in LATIN or kind in LATIN_SYMBOLS


def _is_greek_name(name: str) -> bool:
    kind = split_name(name)[0]
    return kind in GREEK or kind in GREEK_SYMBOLS


def _rename_map(names: Iterable[str], mapping: Mapping[str, str], side: str) -> dict[str, str]:
    test = _is_latin_name if side == "latin" else _is_greek_name
    out = {}
    for n in names:
        kind, label = split_name(n)
        if label in mapping and test(n):
            out[n] = vname(kind, mapping[label])
    return out


def _rename_frac(p: Frac, ren: Mapping[str, str]) -> Frac:
    names = p.ctx.names()
    if not any(n in ren for n in names):
        return p
    new_names = [ren.get(n, n) for n in names]
    tgt = ctx_for(new_names)
    gens = tgt.gens()
    idx = {n: i for i, n in enumerate(tgt.names())}
    imgs = [gens[idx[n]] for n in new_names]
    return Frac(p.num.compose(*imgs, ctx=tgt), p.den.compose(*imgs, ctx=tgt), reduce=False)


def _all_names(f: PG) -> set[str]:
    names = set()
    for (u, v) in f.L:
        names.update((u, v))
    for (r, s), c in f.Q.items():
        names.update((r, s))
        names.update(c.names())
    for c in f.P.coeffs:
        names.update(c.names())
    return names


def rename_side(f: PG, mapping: Mapping[str, str], side: str) -> PG:
    """Rename labels on the Latin (codomain) or Greek (domain) side only."""
    mapping = {str(k): str(v) for k, v in mapping.items()}
    ren = _rename_map(_all_names(f), mapping, side)
    L = {(ren.get(u, u), ren.get(v, v)): c for (u, v), c in f.L.items()}
    Q = {(ren.get(r, r), ren.get(s, s)): _rename_frac(c, ren) for (r, s), c in f.Q.items()}
    P = f.P.map(lambda p: _rename_frac(p, ren))
    if side == "latin":
        dom, cod = f.dom, tuple(mapping.get(l, l) for l in f.cod)
    else:
        dom, cod = tuple(mapping.get(l, l) for l in f.dom), f.cod
    return PG(dom, cod, L, Q, P, f.flavor)


def relabel(f: PG, mapping: Mapping) -> PG:
    """Rename labels on both sides."""
    return rename_side(rename_side(f, mapping, "latin"), mapping, "greek")


# -- product and composition ----------------------------------------------------

def product(f: PG, g: PG) -> PG:
    """Disjoint union (commutative product) of two elements."""
    if set(f.dom) & set(g.dom) or set(f.cod) & set(g.cod):
        raise CompositionError(f"label clash in product: {set(f.dom) & set(g.dom) | set(f.cod) & set(g.cod)}")
    kf, kg = f.kappa, g.kappa
    if kf != kg:
        raise CompositionError("mismatched truncation orders")
    L = dict(f.L)
    for k, c in g.L.items():
        L[k] = L.get(k, 0) + c
    Q = dict(f.Q)
    for k, c in g.Q.items():
        Q[k] = Q[k] + c if k in Q else c
    return PG(f.dom + g.dom, f.cod + g.cod, L, Q, f.P * g.P)


def compose(f: PG, g: PG) -> PG:
    """f // g: contract the codomain of f against the domain of g."""
    K = [l for l in f.cod if l in g.dom]
    f_pass = [l for l in f.cod if l not in K]
    g_pass = [l for l in g.dom if l not in K]
    if set(f_pass) & set(g.cod):
        raise CompositionError(f"codomain clash on {set(f_pass) & set(g.cod)}")
    if set(f.dom) & set(g_pass):
        raise CompositionError(f"domain clash on {set(f.dom) & set(g_pass)}")
    if f.kappa != g.kappa:
        raise CompositionError("mismatched truncation orders")
    ren = {k: fresh_label() for k in K}
    f2 = rename_side(f, ren, "latin")
    g2 = rename_side(g, ren, "greek")
    E = PG(f.dom + tuple(g_pass), tuple(f_pass) + g.cod, {}, {}, EpsSeries.one(f.kappa))
    L = dict(f2.L)
    for k, c in g2.L.items():
        L[k] = L.get(k, 0) + c
    Q = dict(f2.Q)
    for k, c in g2.Q.items():
        Q[k] = Q[k] + c if k in Q else c
    labels = [ren[k] for k in K]
    L, Q, P = contract_all(L, Q, (f2.P, g2.P), labels)
    E = PG(E.dom, E.cod, L, Q, P)
    return E


def compose_many(*fs: PG) -> PG:
    out = fs[0]
    for g in fs[1:]:
        out = compose(out, g)
    return out


# -- linear forms ------------------------------------------------------------------

def _lin(d: Mapping[str, object]) -> Frac:
    acc = Frac.const(0)
    for n, c in d.items():
        acc = acc + Frac.var(n) * c
    return acc


def _grouplike_image(sym_label_kind: str, form: Mapping[str, Fraction], sign: int) -> dict[str, int]:
    """Image of the square-root variable of exp(sign*var) under var ↦ var + form.

    Returns the extra factor exp(sign*form/2) as a Laurent monomial in
    square-root symbol variables.
    """
    out = {}
    for v, c in form.items():
        cls, label = split_name(v)
        if cls not in SYMBOL_OF:
            raise ScalarError(f"group-like shift by non-group-like variable {v}")
        e = Fraction(sign * SIGN_OF[cls]) * c
        if e.denominator != 1:
            raise ScalarError("group-like shift needs a quarter power")
        if e:
            n = vname(SYMBOL_OF[cls], label)
            out[n] = out.get(n, 0) + int(e)
    return out


def _series_by_degree(p: Frac, var: str) -> dict[int, Frac]:
    """Split p = Σ var^n c_n."""
    if var not in p.names():
        return {0: p}
    names = p.ctx.names()
    i = names.index(var)
    parts: dict[int, dict] = {}
    for exps, c in p.num.to_dict().items():
        n = exps[i]
        e = list(exps)
        e[i] = 0
        parts.setdefault(n, {})[tuple(e)] = c
    ctx = p.ctx
    out = {}
    for n, d in parts.items():
        out[n] = Frac(ctx.from_dict(d), p.den)
    return out


def _apply_D_power(c: Frac, n: int, var: str, sym: str | None, sign: int, extra: Frac, Qd: Frac | None) -> Frac:
    """(∂ + extra + Qd)^n c, where ∂ = ∂_var + sign·(sym-log-derivative)."""
    for _ in range(n):
        d = c.derivative(var)
        if sym is not None:
            ld = c.log_derivative(sym)
            if not ld.is_zero():
                d = d + ld * sign
        m = extra if Qd is None else extra + Qd
        c = d + m * c
    return c


def _horner_contract(p: Frac, greek: str, latin: str, sym: str | None, sign: int,
                     extra: Frac, Qd: Frac | None) -> Frac:
    """Σ_n D^n(c_n) for p = Σ greek^n c_n, using Horner's scheme."""
    parts = _series_by_degree(p, greek)
    top = max(parts)
    acc = parts.get(top, Frac.const(0))
    for n in range(top - 1, -1, -1):
        acc = _apply_D_power(acc, 1, latin, sym, sign, extra, Qd)
        if n in parts:
            acc = acc + parts[n]
    return acc


def _Q_derivative(Q: Mapping, sym: str, sign: int) -> Frac | None:
    acc = None
    for (r, s), c in Q.items():
        if sym in c.names():
            d = c.log_derivative(sym) * sign
            term = Frac.var(r) * Frac.var(s) * d
            acc = term if acc is None else acc + term
    return acc


def _expand_P(Ps: Sequence[EpsSeries]) -> EpsSeries:
    out = Ps[0]
    for p in Ps[1:]:
        out = out * p
    return out


def contract_all(L: dict, Q: dict, Ps: Sequence[EpsSeries], labels: Sequence[str]):
    """Contract every pair of the given (fresh) labels; returns (L, Q, P)."""
    P = _expand_P(Ps)
    if not labels:
        return L, Q, P
    L, Q, P = _contract_grouplike_bt(L, Q, P, labels)
    L, Q, P = _contract_a(L, Q, P, labels)
    L, Q, P = _contract_xy(L, Q, P, labels)
    return L, Q, P


def _contract_grouplike_bt(L, Q, P, labels):
    for k in labels:
        for latin_cls in ("b", "t"):
            greek_cls = LATIN[latin_cls]
            lat, gre = vname(latin_cls, k), vname(greek_cls, k)
            sym = vname(SYMBOL_OF[latin_cls], k)
            sign = SIGN_OF[latin_cls]
            U, Vf, L0 = {}, {}, {}
            for (u, v), c in L.items():
                if v == lat and u == gre:
                    raise SingularContraction("self-paired group-like variable")
                if v == lat:
                    U[u] = U.get(u, 0) + c
                elif u == gre:
                    Vf[v] = Vf.get(v, 0) + c
                else:
                    L0[(u, v)] = c
            present = bool(U or Vf) or any(
                lat in p.names() or gre in p.names() or sym in p.names() for p in P.coeffs
            ) or any(sym in c.names() for c in Q.values())
            if not present:
                continue
            for u, cu in U.items():
                for v, cv in Vf.items():
                    L0[(u, v)] = L0.get((u, v), 0) + cu * cv
            extra = _lin(U)
            Qd = _Q_derivative(Q, sym, sign)
            newP = []
            for p in P.coeffs:
                p = _horner_contract(p, gre, lat, sym, sign, extra, Qd)
                newP.append(p)
            # evaluate at lat = V, sym = exp(sign*V/2)
            img = _grouplike_image(sym, Vf, sign)
            Vlin = _lin(Vf)
            newP = [_subs_latin_value(p, lat, Vlin, sym, img) for p in newP]
            Q = {key: _subs_latin_value(c, None, None, sym, img) for key, c in Q.items()}
            L = _strip(L0)
            Q = _strip(Q)
            P = EpsSeries(newP)
    return L, Q, P


def _subs_latin_value(p: Frac, lat: str | None, value: Frac | None, sym: str, img: Mapping[str, int]) -> Frac:
    if lat is not None and lat in p.names():
        p = p.subs_poly({lat: value})
    if sym in p.names():
        p = p.subs_monomial({sym: img})
    return p


def _mat_inverse_fraction(M: list[list[Fraction]]) -> tuple[list[list[Fraction]], Fraction]:
    n = len(M)
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c] != 0), None)
        if piv is None:
            raise SingularContraction("singular group-like block")
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        det *= A[c][c]
        inv = 1 / A[c][c]
        A[c] = [x * inv for x in A[c]]
        for r in range(n):
            if r != c and A[r][c] != 0:
                f = A[r][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return [row[n:] for row in A], det


def _contract_a(L, Q, P, labels):
    ks = [k for k in labels]
    r_names = [vname("alpha", k) for k in ks]
    s_names = [vname("a", k) for k in ks]
    rset, sset = set(r_names), set(s_names)
    n = len(ks)
    W = [[Fraction(0)] * n for _ in range(n)]
    g = [dict() for _ in range(n)]  # coefficient of s_j: Y-side vars
    f = [dict() for _ in range(n)]  # coefficient of r_i: X-side vars
    L0 = {}
    for (u, v), c in L.items():
        if u in sset and v in rset:
            W[r_names.index(v)][s_names.index(u)] += c
        elif u in sset:
            j = s_names.index(u)
            g[j][v] = g[j].get(v, 0) + c
        elif v in rset:
            i = r_names.index(v)
            f[i][u] = f[i].get(u, 0) + c
        else:
            L0[(u, v)] = c
    one_minus = [[Fraction(int(i == j)) - W[i][j] for j in range(n)] for i in range(n)]
    Wt, det1mW = _mat_inverse_fraction(one_minus)
    # gW̃ (r shift, Y-side forms) and W̃ f (s shift, X-side forms)
    gW = [dict() for _ in range(n)]
    Wf = [dict() for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if Wt[j][i]:
                for v, c in g[j].items():
                    gW[i][v] = gW[i].get(v, 0) + c * Wt[j][i]
            if Wt[i][j]:
                for u, c in f[j].items():
                    Wf[i][u] = Wf[i].get(u, 0) + c * Wt[i][j]
    for i in range(n):
        for u, cu in f[i].items():
            for v, cv in gW[i].items():
                L0[(u, v)] = L0.get((u, v), 0) + cu * cv
    # substitution α_i -> α_i + gW_i, a_i -> Σ_j W̃_ij (a_j) + Wf_i
    sub_poly = {}
    sub_mono = {}
    for i, k in enumerate(ks):
        if gW[i]:
            sub_poly[r_names[i]] = Frac.var(r_names[i]) + _lin(gW[i])
            img = _grouplike_image(None, gW[i], SIGN_OF["alpha"])
            img[vname("A", k)] = img.get(vname("A", k), 0) + 1
            sub_mono[vname("A", k)] = img
        if any(Wt[i][j] != int(i == j) for j in range(n)) or Wf[i]:
            sub_poly[s_names[i]] = _lin({s_names[j]: Wt[i][j] for j in range(n) if Wt[i][j]}) + _lin(Wf[i])

    def subst(p: Frac) -> Frac:
        if sub_mono:
            p = p.subs_monomial(sub_mono)
        if sub_poly:
            p = p.subs_poly(sub_poly)
        return p

    Q = {key: subst(c) for key, c in Q.items()}
    newP = [subst(p) for p in P.coeffs]
    detWt = 1 / det1mW
    for k in ks:
        rn, sn, sym = vname("alpha", k), vname("a", k), vname("A", k)
        Qd = _Q_derivative(Q, sym, 1)
        newP = [_horner_contract(p, sn, rn, sym, 1, Frac.const(0), Qd) for p in newP]
        newP = [p.evaluate({rn: 0}).subs_monomial({sym: {}}) if (rn in p.names() or sym in p.names()) else p
                for p in newP]
        Q = {key: (c.subs_monomial({sym: {}}) if sym in c.names() else c) for key, c in Q.items()}
    if detWt != 1:
        newP = [p * detWt for p in newP]
    return _strip(L0), _strip(Q), EpsSeries(newP)


# -- the xy block -------------------------------------------------------------------

def det_and_inverse(M: list[list[Frac]]) -> tuple[Frac, list[list[Frac]]]:
    """Determinant and inverse over Scalars (Gauss-Jordan with exact pivots)."""
    n = len(M)
    A = [list(row) + [Frac.const(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    det = Frac.const(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if not A[r][c].is_zero()), None)
        if piv is None:
            raise SingularContraction("det(1-W) vanishes")
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        p = A[c][c]
        det = det * p
        inv = p.inverse()
        A[c] = [x * inv if not x.is_zero() else x for x in A[c]]
        for r in range(n):
            if r != c and not A[r][c].is_zero():
                fct = A[r][c]
                A[r] = [x - fct * y if not y.is_zero() else x for x, y in zip(A[r], A[c])]
    return det, [row[n:] for row in A]


def wick(p: Frac, Wt: Sequence[Sequence[Frac]], u: Sequence[str], v: Sequence[str]) -> Frac:
    """exp(Σ_ij W̃_ij ∂_{u_j} ∂_{v_i}) p."""
    used = p.names()
    if not any(x in used for x in u) or not any(x in used for x in v):
        return p
    n = len(u)
    pairs = [(i, j) for i in range(n) for j in range(n) if not Wt[i][j].is_zero()]
    acc = p
    term = p
    k = 0
    while True:
        k += 1
        nxt = Frac.const(0)
        tn = term.names()
        for i, j in pairs:
            if u[j] not in tn or v[i] not in tn:
                continue
            d = term.derivative(u[j])
            if d.is_zero():
                continue
            d = d.derivative(v[i])
            if d.is_zero():
                continue
            nxt = nxt + d * Wt[i][j]
        if nxt.is_zero():
            break
        term = nxt * Fraction(1, k)
        acc = acc + term
    return acc


def _gauss_setup(g, f, W, pairs):
    n = len(pairs)
    one_minus = [[Frac.const(int(i == j)) - W[i][j] for j in range(n)] for i in range(n)]
    det, Wt = det_and_inverse(one_minus) if n else (Frac.const(1), [])
    detWt = det.inverse()
    gW = [dict() for _ in range(n)]
    Wf = [dict() for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if not Wt[j][i].is_zero():
                for r, c in g[j].items():
                    gW[i][r] = gW[i][r] + c * Wt[j][i] if r in gW[i] else c * Wt[j][i]
            if not Wt[i][j].is_zero():
                for s, c in f[j].items():
                    Wf[i][s] = Wf[i][s] + c * Wt[i][j] if s in Wf[i] else c * Wt[i][j]
    shift: dict = {}
    for i in range(n):
        for s, cs in f[i].items():
            for r, cr in gW[i].items():
                key = (r, s)
                shift[key] = shift[key] + cr * cs if key in shift else cr * cs
    u = [r for r, _ in pairs]
    v = [s for _, s in pairs]
    images = {}
    for i in range(n):
        images[u[i]] = _lin(gW[i])
        images[v[i]] = _lin(Wf[i])
    return detWt, _strip(shift), Wt, u, v, images


def _gauss_apply(P: Frac, Wt, u, v, images) -> Frac:
    p = wick(P, Wt, u, v)
    im = {k: val for k, val in images.items() if k in p.names()}
    if im:
        p = p.subs_poly(im)
    return p


def contract_gaussian(P: Frac, g: Sequence[Mapping[str, Frac]], f: Sequence[Mapping[str, Frac]],
                      W: Sequence[Sequence[Frac]], pairs: Sequence[tuple[str, str]]):
    """⟨P e^{g·s + r·f + r W s}⟩ over the given (r, s) pairs.

    g[j] is the coefficient of s_j and f[i] that of r_i, both as linear forms
    {variable: Scalar}; W[i][j] is the coefficient of r_i s_j.
    Returns (det W̃, {(r', s'): coeff} exponent shift g W̃ f, P').
    """
    detWt, shift, Wt, u, v, images = _gauss_setup(g, f, W, pairs)
    return detWt, shift, _gauss_apply(P, Wt, u, v, images)


def _subs_all(p: Frac, images: Mapping[str, Frac]) -> Frac:
    return p.subs_poly(images)


def _contract_xy(L, Q, P, labels):
    pairs = []
    for k in labels:
        pairs.append((vname("y", k), vname("eta", k)))
        pairs.append((vname("xi", k), vname("x", k)))
    r_idx = {r: i for i, (r, _) in enumerate(pairs)}
    s_idx = {s: i for i, (_, s) in enumerate(pairs)}
    n = len(pairs)
    W = [[Frac.const(0)] * n for _ in range(n)]
    g = [dict() for _ in range(n)]
    f = [dict() for _ in range(n)]
    Q0 = {}
    for (r, s), c in Q.items():
        if r in r_idx and s in s_idx:
            W[r_idx[r]][s_idx[s]] = c
        elif s in s_idx:
            g[s_idx[s]][r] = c
        elif r in r_idx:
            f[r_idx[r]][s] = c
        else:
            Q0[(r, s)] = c
    # drop pairs that do not occur at all
    used = set()
    for p in P.coeffs:
        used |= p.names()
    live = [i for i in range(n)
            if pairs[i][0] in used or pairs[i][1] in used or g[i] or f[i]
            or any(not W[i][j].is_zero() or not W[j][i].is_zero() for j in range(n))]
    pairs = [pairs[i] for i in live]
    W = [[W[i][j] for j in live] for i in live]
    g = [g[i] for i in live]
    f = [f[i] for i in live]
    detWt, shift, Wt, u, v, images = _gauss_setup(g, f, W, pairs)
    newP = []
    for p in P.coeffs:
        q = _gauss_apply(p, Wt, u, v, images)
        newP.append(q * detWt if not detWt.is_one() else q)
    for key, c in shift.items():
        Q0[key] = Q0[key] + c if key in Q0 else c
    # unpaired variables of contracted labels must be gone
    return L, _strip(Q0), EpsSeries(newP)


# -- equality, oracle, validation -----------------------------------------------------

def pg_equal(f: PG, g: PG) -> bool:
    if set(f.dom) != set(g.dom) or set(f.cod) != set(g.cod) or f.kappa != g.kappa:
        return False
    if _strip(dict(f.L)) != _strip(dict(g.L)):
        return False
    keys = set(f.Q) | set(g.Q)
    for k in keys:
        a = f.Q.get(k, Frac.const(0))
        b = g.Q.get(k, Frac.const(0))
        if not a == b:
            return False
    return f.P == g.P


def pg_diff(f: PG, g: PG) -> list[str]:
    """Human readable list of the parts in which f and g differ."""
    out = []
    if set(f.dom) != set(g.dom) or set(f.cod) != set(g.cod):
        out.append(f"labels {f.dom}->{f.cod} vs {g.dom}->{g.cod}")
        return out
    if _strip(dict(f.L)) != _strip(dict(g.L)):
        out.append(f"L: {f.L} vs {g.L}")
    for k in set(f.Q) | set(g.Q):
        a = f.Q.get(k, Frac.const(0))
        b = g.Q.get(k, Frac.const(0))
        if not a == b:
            out.append(f"Q{k}: {a} vs {b}")
    for i, (a, b) in enumerate(zip(f.P.coeffs, g.P.coeffs)):
        if not a == b:
            out.append(f"P{i}: {a - b}")
    return out


def contract_monomial(expr: Frac, pairs: Sequence[tuple[str, str]]) -> Frac:
    """Brute-force ⟨expr⟩: keep balanced powers of each pair, weight k!."""
    names = expr.ctx.names()
    idx = {n: i for i, n in enumerate(names)}
    out: dict[tuple, object] = {}
    pi = [(idx.get(a), idx.get(b)) for a, b in pairs]
    for exps, c in expr.num.to_dict().items():
        e = list(exps)
        w = 1
        ok = True
        for ia, ib in pi:
            ea = e[ia] if ia is not None else 0
            eb = e[ib] if ib is not None else 0
            if ea != eb:
                ok = False
                break
            if ea:
                w *= math.factorial(ea)
                e[ia] = 0
                e[ib] = 0
        if not ok:
            continue
        key = tuple(e)
        out[key] = out.get(key, 0) + c * w
    num = expr.ctx.from_dict({k: v for k, v in out.items() if v != 0}) if out else expr.ctx.constant(0)
    return Frac(num, expr.den)


@dataclass
class ValidationReport:
    flavor: str
    ok: bool
    violation: str | None = None

    def __bool__(self):
        return self.ok


def _laurent_ok(c: Frac) -> bool:
    return len(c.den.to_dict()) == 1


def validate_pg_class(f: PG, flavor: str = "PG") -> ValidationReport:
    """Check the defining conditions of PG, PG± or PG⁺ (ħ restored from wh)."""
    flavor = {"PG+": "PG+", "PG±": "PG±", "PGpm": "PG±", "PG": "PG", "PG⁺": "PG+"}[flavor]

    def bad(msg):
        return ValidationReport(flavor, False, msg)

    def side_ok(name: str) -> str | None:
        kind, label = split_name(name)
        if label == GLOBAL:
            return None
        if kind in LATIN or kind in LATIN_SYMBOLS:
            if label not in f.cod:
                return f"{name} is Latin but {label!r} is not a codomain label"
        elif label not in f.dom:
            return f"{name} is Greek but {label!r} is not a domain label"
        return None

    def hbar_ok(wh: int, where: str) -> str | None:
        if flavor in ("PG", "PG+") and wh < 0:
            return f"{where} needs ħ^{wh}"
        return None

    for (u, v), c in f.L.items():
        for n in (u, v):
            if (m := side_ok(n)):
                return bad(m)
        wt, wh = grading({u: 1, v: 1})
        if wt != 2:
            return bad(f"G1 term {u}*{v} has wt {wt}")
        if (m := hbar_ok(wh, f"G1 term {u}*{v}")):
            return bad(m)
    for (r, s), c in f.Q.items():
        for n in {r, s} | c.names():
            if (m := side_ok(n)):
                return bad(m)
        wt, wh = grading({r: 1, s: 1})
        if wt != 2:
            return bad(f"G2 term {r}*{s} has wt {wt}")
        if (m := hbar_ok(wh, f"G2 term {r}*{s}")):
            return bad(m)
        if flavor != "PG" and not _laurent_ok(c):
            return bad(f"G2 coefficient of {r}*{s} is not Laurent")
    for k, p in enumerate(f.P.coeffs):
        for n in p.names():
            if (m := side_ok(n)):
                return bad(m)
        if flavor != "PG" and not _laurent_ok(p):
            return bad(f"P_{k} has a non-monomial denominator")
        for exps, _ in p.terms():
            wt, wh = grading(exps, k)
            if wt > 0:
                return bad(f"P_{k} monomial {exps} has wt {wt}")
            if (m := hbar_ok(wh, f"P_{k} monomial {exps}")):
                return bad(m)
    return ValidationReport(flavor, True)


def fuse(f: PG, mapping: Mapping) -> PG:
    """Rename labels on both sides, letting several labels land on one.

    Only valid when the merged labels carry disjoint variable classes, as for
    the 𝔹 and 𝔸 halves of a 𝔻 strand.
    """
    mapping = {str(k): str(v) for k, v in mapping.items()}
    names = _all_names(f)
    ren = {}
    for n in names:
        kind, label = split_name(n)
        if label in mapping:
            ren[n] = vname(kind, mapping[label])
    image = [ren.get(n, n) for n in names]
    if len(set(image)) != len(image):
        raise CompositionError("fused labels share a variable class")
    L = {(ren.get(u, u), ren.get(v, v)): c for (u, v), c in f.L.items()}
    Q = {(ren.get(r, r), ren.get(s, s)): _rename_frac(c, ren) for (r, s), c in f.Q.items()}
    P = f.P.map(lambda p: _rename_frac(p, ren))
    dom = tuple(dict.fromkeys(mapping.get(l, l) for l in f.dom))
    cod = tuple(dict.fromkeys(mapping.get(l, l) for l in f.cod))
    return PG(dom, cod, L, Q, P, f.flavor)


def globalize_t(f: PG) -> PG:
    """Send every t_l, T_l to the global t, T and drop τ couplings.

    Valid for programs built only from generators and merges: there every
    strand ends on the one surviving component, whose t is central.
    """
    names = _all_names(f)
    ren = {}
    for n in names:
        kind, label = split_name(n)
        if kind in ("t", "T") and label != GLOBAL:
            ren[n] = vname(kind, GLOBAL)
    L = {}
    for (u, v), c in f.L.items():
        if split_name(u)[0] == "tau":
            continue
        key = (ren.get(u, u), ren.get(v, v))
        L[key] = L.get(key, 0) + c
    Q = {(r, s): _rename_frac(c, ren) for (r, s), c in f.Q.items()}
    P = f.P.map(lambda p: _rename_frac(p, ren))
    rest = set().union(*(c.names() for c in Q.values()), *(p.names() for p in P.coeffs))
    if any(split_name(n)[0] == "tau" for n in rest):
        raise CompositionError("τ variables outside the group-like block")
    return PG(f.dom, f.cod, L, Q, P, f.flavor)


# -- brute-force oracle -----------------------------------------------------------------

def truncate_degree(p: Frac, n: int) -> Frac:
    """Drop monomials of total body degree above n."""
    names = p.ctx.names()
    body = [i for i, v in enumerate(names) if not is_symbol(v)]
    d = p.num.to_dict()
    keep = {e: c for e, c in d.items() if sum(e[i] for i in body) <= n}
    if len(keep) == len(d):
        return p
    num = p.ctx.from_dict(keep) if keep else p.ctx.constant(0)
    return Frac(num, p.den, reduce=False)


def _split_by(p: Frac, names: Sequence[str]) -> dict[tuple[int, ...], Frac]:
    """Group the monomials of p by their exponents in ``names``."""
    own = p.ctx.names()
    idx = [own.index(n) if n in own else None for n in names]
    groups: dict[tuple, dict] = {}
    for e, c in p.num.to_dict().items():
        key = tuple(e[i] if i is not None else 0 for i in idx)
        rest = list(e)
        for i in idx:
            if i is not None:
                rest[i] = 0
        groups.setdefault(key, {})[tuple(rest)] = c
    return {k: Frac(p.ctx.from_dict(v), p.den, reduce=False) for k, v in groups.items()}


def _exp_truncated(G: Frac, n: int) -> Frac:
    """exp(G) up to total degree n for a quadratic G."""
    out, term = Frac.const(1), Frac.const(1)
    for k in range(1, n // 2 + 1):
        term = truncate_degree(term * G, n) * Fraction(1, k)
        out = out + term
    return out


def expand(f: PG, n: int) -> list[Frac]:
    """The ε-coefficients of exp(L + Q)·P, truncated at total degree n."""
    E = _exp_truncated(f.exponent(), n)
    return [truncate_degree(E * p, n) for p in f.P.coeffs]


def brute_compose(f: PG, g: PG, n: int, m: int | None = None) -> list[Frac]:
    """⟨f·g⟩ by expanding f to degree n, g to degree m and pairing monomials."""
    K = [l for l in f.cod if l in g.dom]
    pairs = [(vname(gr, lab), vname(lat, lab)) for lab in K for lat, gr in LATIN.items()]
    Ef, Eg = expand(f, n), expand(g, n if m is None else m)
    lat = [b for _, b in pairs]
    gr = [a for a, _ in pairs]
    # pairing monomials directly is the same as contract_monomial of the
    # product, without materializing the product
    Sf = [_split_by(p, lat) for p in Ef]
    Sg = [_split_by(p, gr) for p in Eg]
    out = []
    for k in range(f.kappa + 1):
        acc = Frac.const(0)
        for i in range(k + 1):
            for key, rf in Sf[i].items():
                rg = Sg[k - i].get(key)
                if rg is not None:
                    acc = acc + rf * rg * math.prod(math.factorial(e) for e in key)
        out.append(acc)
    return out


# -- random instances ----------------------------------------------------------------

_LATIN_PAIRS = (("y", "x"), ("a", "t"), ("a", "b"))  # (R or X side, S or Y side)


def random_oracle_pair(rng, kappa: int = 1, coeff_range: int = 3) -> tuple[PG, PG]:
    """A composable pair f: ∅ → {1, 2}, g: {1} → {3} for the brute-force oracle.

    Only one side carries a quadratic form on the contracted strand, so the
    monomial expansion terminates and the comparison is exact.
    """
    def c():
        return Fraction(rng.randint(-coeff_range, coeff_range), rng.randint(1, 2))

    def scalar():
        v = c()
        return v * T(rng.randint(-1, 1)) if rng.random() < 0.5 else Frac.const(v)

    def poly(vars_, deg):
        acc = Frac.const(0)
        for _ in range(rng.randint(0, 3)):
            mono = {}
            for _ in range(rng.randint(0, deg)):
                v = rng.choice(vars_)
                mono[v] = mono.get(v, 0) + 1
            acc = acc + Frac.monomial(mono, c())
        return acc

    loops_in_f = rng.random() < 0.5
    fL, fQ, gL, gQ = {}, {}, {}, {}
    # f: Latin on 1 and 2
    for lab_u, lab_v in (("1", "2"), ("2", "1"), ("2", "2")) + ((("1", "1"),) if loops_in_f else ()):
        if rng.random() < 0.6:
            fQ[(vname("y", lab_u), vname("x", lab_v))] = scalar()
        if rng.random() < 0.4:
            fL[(vname("a", lab_u), vname("t", lab_v))] = Fraction(rng.randint(-2, 2))
    # g: Greek on 1 against Latin on 3
    gQ[(vname("y", "3"), vname("eta", "1"))] = scalar()
    gQ[(vname("xi", "1"), vname("x", "3"))] = scalar()
    gL[(vname("tau", "1"), vname("t", "3"))] = Fraction(1)
    gL[(vname("a", "3"), vname("alpha", "1"))] = Fraction(rng.randint(-2, 2))
    if not loops_in_f:
        gQ[(vname("xi", "1"), vname("eta", "1"))] = scalar()
        gL[(vname("tau", "1"), vname("alpha", "1"))] = Fraction(rng.randint(-2, 2))
    fvars = [vname(k, l) for k in ("y", "a", "x", "t") for l in ("1", "2")]
    gvars = [vname(k, "1") for k in ("eta", "alpha", "xi", "tau")] + [vname(k, "3") for k in ("y", "x")]
    fP = EpsSeries([Frac.const(1)] + [poly(fvars, 2) for _ in range(kappa)])
    gP = EpsSeries([Frac.const(1)] + [poly(gvars, 2) for _ in range(kappa)])
    return PG((), ("1", "2"), fL, _strip(fQ), fP), PG(("1",), ("3",), gL, _strip(gQ), gP)


def oracle_check(f: PG, g: PG, degree: int = 6) -> bool:
    """compose(f, g) agrees with the brute-force contraction up to total degree."""
    engine = expand(compose(f, g), degree)
    # Each exponent term on the side without a contracted quadratic form
    # carries at most one contracted variable per output variable, so the
    # contracted degree is at most degree + 2 (the perturbation degree).
    loops_in_f = any(_label_of(u) == _label_of(v) == l for l in f.cod if l in g.dom for (u, v) in f.Q)
    loops_in_f = loops_in_f or any(_label_of(u) == _label_of(v) and _label_of(u) in g.dom for (u, v) in f.L)
    wide, narrow = 2 * degree + 2, degree + 2
    brute = brute_compose(f, g, wide if not loops_in_f else narrow, narrow if not loops_in_f else wide)
    return all(truncate_degree(a, degree) == truncate_degree(b, degree) for a, b in zip(engine, brute))
