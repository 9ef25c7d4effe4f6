"""The double 𝔻 = 𝔹 ⊗ 𝔸 as perturbed Gaussian generating functions.

Internally 𝔹 is written with b (B = e^{-b}) and 𝔸 with a, x; the finished
𝔻 structure maps are moved to the central basis t = b − εa once, after
which b never appears. All constructions truncate at ε^κ with ħ = 1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from .exact import Frac, symbol, vname
from .pgcalc import PG, CompositionError, compose, fuse, pg_diff, pg_equal, product, relabel
from .symseries import EpsSeries, exp_series, faddeev_log_coeffs

_tmp = itertools.count()


def tmp(prefix: str = "u") -> str:
    return f"{prefix}#{next(_tmp)}"


def v_(cls: str, label) -> Frac:
    return Frac.var(vname(cls, label))


def sym(kind: str, label, power: int = 1) -> Frac:
    """kind_label ** power (integer power of the full symbol)."""
    return symbol(kind, str(label), 2 * power)


def series_from(coeffs, kappa: int) -> EpsSeries:
    cs = list(coeffs)[: kappa + 1]
    cs += [Frac.const(0)] * (kappa + 1 - len(cs))
    return EpsSeries(cs)


def exp_eps(terms: dict[int, Frac], kappa: int) -> EpsSeries:
    """exp(Σ_{n≥1} terms[n] εⁿ) truncated at κ."""
    x = series_from([Frac.const(0)] + [terms.get(n, Frac.const(0)) for n in range(1, kappa + 1)], kappa)
    return exp_series(x)


class AxiomFailure(AssertionError):
    def __init__(self, name: str, detail: str = ""):
        super().__init__(f"{name}: {detail}" if detail else name)
        self.name = name


# -- closed forms ------------------------------------------------------------------

def build_mB(i, j, k, kappa: int) -> PG:
    """(β_i+β_j)b_k + (η_i + e^{−εβ_i}η_j)y_k."""
    i, j, k = str(i), str(j), str(k)
    L = {(vname("beta", i), vname("b", k)): 1, (vname("beta", j), vname("b", k)): 1}
    Q = {(vname("y", k), vname("eta", i)): 1, (vname("y", k), vname("eta", j)): 1}
    base = v_("eta", j) * v_("y", k)
    terms = {n: base * (-v_("beta", i)) ** n * Fraction(1, factorial(n)) for n in range(1, kappa + 1)}
    return PG((i, j), (k,), L, Q, exp_eps(terms, kappa), "PG+")


def build_mA(i, j, k, kappa: int) -> PG:
    """(α_i+α_j)a_k + (𝒜_j⁻¹ξ_i + ξ_j)x_k."""
    i, j, k = str(i), str(j), str(k)
    L = {(vname("a", k), vname("alpha", i)): 1, (vname("a", k), vname("alpha", j)): 1}
    Q = {(vname("xi", i), vname("x", k)): sym("A", j, -1), (vname("xi", j), vname("x", k)): 1}
    return PG((i, j), (k,), L, Q, EpsSeries.one(kappa), "PG+")


def faddeev_P(z: Frac, kappa: int) -> EpsSeries:
    """e_q^z / e^z as an ε-series."""
    c = faddeev_log_coeffs(kappa)
    terms = {}
    for n, cs in c.items():
        for k, cf in enumerate(cs):
            if cf and k >= 1:
                terms[k] = terms.get(k, Frac.const(0)) + z ** n * cf
    return exp_eps(terms, kappa)


def build_R_b(i, j, kappa: int) -> PG:
    """e^{b_i a_j} e_q^{y_i x_j} in the b-basis; i carries 𝔹, j carries 𝔸."""
    i, j = str(i), str(j)
    L = {(vname("a", j), vname("b", i)): 1}
    Q = {(vname("y", i), vname("x", j)): 1}
    return PG((), (i, j), L, Q, faddeev_P(v_("y", i) * v_("x", j), kappa), "PG")


# -- order-by-order solving --------------------------------------------------------------

def eps_coeff(f: PG, n: int) -> PG:
    """The ε^n coefficient of f as a κ=0 element with the same Gaussian."""
    return PG(f.dom, f.cod, dict(f.L), dict(f.Q), EpsSeries([f.P.coeffs[n]]))


def add_order(f: PG, n: int, p: Frac) -> PG:
    cs = list(f.P.coeffs)
    cs[n] = cs[n] + p
    return f.with_P(EpsSeries(cs))


def same_gaussian(f: PG, g: PG) -> bool:
    return f.L == g.L and set(f.Q) == set(g.Q) and all(f.Q[k] == g.Q[k] for k in f.Q)


def solve_by_orders(seed: PG, kappa: int, residual, correct, name: str) -> PG:
    """Generic recursion: residual(f) must equal target; correct(E) returns the fix.

    ``residual(f)`` returns (value, target) at f's order; both must share a
    Gaussian, and their difference at the lowest failing order n is handed to
    ``correct`` as a κ=0 element whose P is that difference.
    """
    f = seed.with_P(EpsSeries([seed.P.coeffs[0]] + [Frac.const(0)] * kappa))
    val, tgt = residual(f.truncate(0))
    if not same_gaussian(val, tgt) or not val.P.coeffs[0] == tgt.P.coeffs[0]:
        raise AxiomFailure(name, "seed equation fails at ε=0: " + "; ".join(pg_diff(val, tgt)))
    for n in range(1, kappa + 1):
        val, tgt = residual(f.truncate(n))
        if not same_gaussian(val, tgt):
            raise AxiomFailure(name, f"Gaussian drift at order {n}")
        E = val.P.coeffs[n] - tgt.P.coeffs[n]
        for m in range(n):
            if not val.P.coeffs[m] == tgt.P.coeffs[m]:
                raise AxiomFailure(name, f"lower order {m} broke at step {n}")
        if E.is_zero():
            continue
        fix = correct(PG(val.dom, val.cod, dict(val.L), dict(val.Q), EpsSeries([E])))
        f = add_order(f, n, fix)
    return f


def gaussian_quotient(f: PG, G: PG) -> Frac:
    """P₀ of f after checking that f has the Gaussian of G."""
    if not same_gaussian(f, G):
        raise AxiomFailure("correction", "unexpected Gaussian: " + "; ".join(pg_diff(f.with_P(G.P), G)))
    return f.P.coeffs[0]


def unit_on(labels, kappa: int) -> PG:
    return PG((), tuple(str(l) for l in labels), {}, {}, EpsSeries.one(kappa))


def _merge_BA(f: PG, b1, b2, a1, a2, bk, ak, kappa: int) -> PG:
    f = compose(f, build_mB(b1, b2, bk, kappa))
    return compose(f, build_mA(a1, a2, ak, kappa))


def Rinv_seed(i, j, kappa: int = 0) -> PG:
    i, j = str(i), str(j)
    L = {(vname("a", j), vname("b", i)): -1}
    Q = {(vname("y", i), vname("x", j)): -sym("B", i, -1)}
    return PG((), (i, j), L, Q, EpsSeries.one(kappa), "PG")


def solve_Rinv(i, j, kappa: int) -> PG:
    """R⁻¹ with 𝔹 at i and 𝔸 at j, from R·R⁻¹ = 1."""
    i, j = str(i), str(j)
    seed = Rinv_seed(i, j)

    def residual(f):
        k = f.kappa
        b, a, b2, a2 = tmp("b"), tmp("a"), tmp("b"), tmp("a")
        val = product(build_R_b(b, a, k), relabel(f, {i: b2, j: a2}))
        val = _merge_BA(val, b, b2, a, a2, i, j, k)
        return val, unit_on((i, j), k)

    def correct(E):
        b, a, b2, a2 = tmp("b"), tmp("a"), tmp("b"), tmp("a")
        val = product(relabel(seed, {i: b, j: a}), relabel(E, {i: b2, j: a2}))
        val = _merge_BA(val, b, b2, a, a2, i, j, 0)
        return -gaussian_quotient(val, seed)

    return solve_by_orders(seed, kappa, residual, correct, "R inverse")


def pairing_seed(j, k, kappa: int = 0) -> PG:
    """α_jβ_k + ξ_jη_k: 𝔸 at j, 𝔹 at k."""
    j, k = str(j), str(k)
    L = {(vname("beta", k), vname("alpha", j)): 1}
    Q = {(vname("xi", j), vname("eta", k)): 1}
    return PG((j, k), (), L, Q, EpsSeries.one(kappa), "PG±")


def id_B(src, dst, kappa: int) -> PG:
    src, dst = str(src), str(dst)
    L = {(vname("beta", src), vname("b", dst)): 1}
    Q = {(vname("y", dst), vname("eta", src)): 1}
    return PG((src,), (dst,), L, Q, EpsSeries.one(kappa))


def id_A(src, dst, kappa: int) -> PG:
    src, dst = str(src), str(dst)
    L = {(vname("a", dst), vname("alpha", src)): 1}
    Q = {(vname("xi", src), vname("x", dst)): 1}
    return PG((src,), (dst,), L, Q, EpsSeries.one(kappa))


def solve_pairing(j, k, kappa: int) -> PG:
    """π^{jk} from R_{ij} // π^{jk} = id_{k→i} on 𝔹."""
    j, k = str(j), str(k)
    seed = pairing_seed(j, k)

    def residual(f):
        n = f.kappa
        i, s = tmp("i"), tmp("s")
        val = compose(build_R_b(i, s, n), relabel(f, {j: s}))
        return val, id_B(k, i, n)

    def correct(E):
        s = tmp("s")
        (i,) = E.cod
        val = compose(E, pairing_seed(s, i))
        return -gaussian_quotient(relabel(val, {s: j}), seed)

    return solve_by_orders(seed, kappa, residual, correct, "pairing")


def build_DeltaA(i, j, k, kappa: int, pi_jk=None) -> PG:
    """Δ_𝔸^i_{jk} = R_{1k}R_{2j} // m_𝔹^{12}_3 // π^{i3}."""
    i, j, k = str(i), str(j), str(k)
    b1, b2, b3 = tmp("b"), tmp("b"), tmp("b")
    pi = relabel(pi_jk or solve_pairing("j", "k", kappa), {"j": i, "k": b3})
    f = product(build_R_b(b1, k, kappa), build_R_b(b2, j, kappa))
    f = compose(f, build_mB(b1, b2, b3, kappa))
    return compose(f, pi)


def build_DeltaB(i, j, k, kappa: int, pi_jk=None) -> PG:
    """Δ_𝔹^i_{jk} = R_{j1}R_{k2} // m_𝔸^{12}_3 // π^{3i}."""
    i, j, k = str(i), str(j), str(k)
    a1, a2, a3 = tmp("a"), tmp("a"), tmp("a")
    pi = relabel(pi_jk or solve_pairing("j", "k", kappa), {"j": a3, "k": i})
    f = product(build_R_b(j, a1, kappa), build_R_b(k, a2, kappa))
    f = compose(f, build_mA(a1, a2, a3, kappa))
    return compose(f, pi)


def build_SB(i, j, kappa: int, rinv=None, pi_jk=None) -> PG:
    """S_𝔹^i_j = R⁻¹_{j1} // π^{1i}."""
    i, j = str(i), str(j)
    a = tmp("a")
    r = relabel(rinv or solve_Rinv("i", "j", kappa), {"i": j, "j": a})
    return compose(r, relabel(pi_jk or solve_pairing("j", "k", kappa), {"j": a, "k": i}))


def build_SA(i, j, kappa: int, rinv=None, pi_jk=None) -> PG:
    """S_𝔸^i_j = R⁻¹_{1j} // π^{i1}."""
    i, j = str(i), str(j)
    b = tmp("b")
    r = relabel(rinv or solve_Rinv("i", "j", kappa), {"i": b, "j": j})
    return compose(r, relabel(pi_jk or solve_pairing("j", "k", kappa), {"j": i, "k": b}))


def invert_map(f: PG, seed: PG, ident, name: str) -> PG:
    """Compositional inverse of a one-label map f: i → j, from f // f̄ = id.

    ``seed`` is the exact ε=0 inverse (also i → j); ``ident(src, dst, κ)``
    builds the identity on the relevant classes.
    """
    (i,), (j,) = f.dom, f.cod
    kappa = f.kappa
    seed0 = seed.truncate(0)

    def residual(g):
        n = g.kappa
        m = tmp("m")
        val = compose(relabel(f.truncate(n), {j: m}), relabel(g, {i: m}))
        return val, ident(i, j, n)

    def correct(E):
        m = tmp("m")
        val = compose(relabel(seed0, {j: m}), relabel(E, {i: m}))
        return -gaussian_quotient(val, seed0)

    return solve_by_orders(seed, kappa, residual, correct, name)


@dataclass
class HalfAlgebras:
    """The 𝔸 and 𝔹 structure maps at a fixed order, with canonical labels."""
    kappa: int
    pi: PG = None  # π^{jk}
    Rinv: PG = None  # R⁻¹ with 𝔹 at i, 𝔸 at j
    DeltaA: PG = None  # Δ^i_{jk}
    DeltaB: PG = None
    SA: PG = None  # S^i_j
    SB: PG = None
    SAbar: PG = None
    SBbar: PG = None

    @classmethod
    def build(cls, kappa: int) -> "HalfAlgebras":
        h = cls(kappa)
        h.pi = solve_pairing("j", "k", kappa)
        h.Rinv = solve_Rinv("i", "j", kappa)
        h.DeltaA = build_DeltaA("i", "j", "k", kappa, h.pi)
        h.DeltaB = build_DeltaB("i", "j", "k", kappa, h.pi)
        h.SA = build_SA("i", "j", kappa, h.Rinv, h.pi)
        h.SB = build_SB("i", "j", kappa, h.Rinv, h.pi)
        one = EpsSeries.one(kappa)
        h.SAbar = invert_map(h.SA, h.SA.truncate(0).with_P(one), id_A, "inverse antipode of A")
        h.SBbar = invert_map(h.SB, h.SB.truncate(0).with_P(one), id_B, "inverse antipode of B")
        return h

    def pair(self, a, b) -> PG:
        return relabel(self.pi, {"j": a, "k": b})

    def R(self, b, a) -> PG:
        return build_R_b(b, a, self.kappa)

    def Rbar(self, b, a) -> PG:
        return relabel(self.Rinv, {"i": b, "j": a})

    def mA(self, i, j, k) -> PG:
        return build_mA(i, j, k, self.kappa)

    def mB(self, i, j, k) -> PG:
        return build_mB(i, j, k, self.kappa)

    def dA(self, i, j, k) -> PG:
        return relabel(self.DeltaA, {"i": i, "j": j, "k": k})

    def dB(self, i, j, k) -> PG:
        return relabel(self.DeltaB, {"i": i, "j": j, "k": k})

    def dA2(self, i, j, k, l) -> PG:
        m = tmp("d")
        return compose(self.dA(i, j, m), self.dA(m, k, l))

    def dB2(self, i, j, k, l) -> PG:
        m = tmp("d")
        return compose(self.dB(i, j, m), self.dB(m, k, l))

    def sA(self, i, j, inverse=False) -> PG:
        return relabel(self.SAbar if inverse else self.SA, {"i": i, "j": j})

    def sB(self, i, j, inverse=False) -> PG:
        return relabel(self.SBbar if inverse else self.SB, {"i": i, "j": j})


def build_mD_b(h: HalfAlgebras, i="i", j="j", k="k") -> PG:
    """𝔻 multiplication in the b-basis: the 𝔸 part of i is moved past the 𝔹 part of j.

    a·b = Σ π(S̄a′, b′) π(a‴, b‴) b″ a″, primes from the two-fold coproducts.
    """
    n = h.kappa
    iB, iA, jB, jA = tmp("iB"), tmp("iA"), tmp("jB"), tmp("jA")
    a1, a2, a3, b1, b2, b3, a1s = (tmp(s) for s in ("a1", "a2", "a3", "b1", "b2", "b3", "a1s"))
    ib_out, ja_out = tmp("x"), tmp("y")
    f = product(h.dA2(iA, a1, a2, a3), h.dB2(jB, b1, b2, b3))
    f = product(f, product(id_B(iB, ib_out, n), id_A(jA, ja_out, n)))
    f = compose(f, h.sA(a1, a1s, inverse=True))
    f = compose(f, h.pair(a1s, b1))
    f = compose(f, h.pair(a3, b3))
    f = compose(f, h.mB(ib_out, b2, k))
    f = compose(f, h.mA(a2, ja_out, k + "#A"))
    return fuse(f, {iB: i, iA: i, jB: j, jA: j, k + "#A": k})


# -- the double in the central basis --------------------------------------------------

def phi_b_to_t(src, dst, kappa: int) -> PG:
    """b-basis strand to t-basis strand: b = t + εa."""
    src, dst = str(src), str(dst)
    L = {(vname("beta", src), vname("t", dst)): 1, (vname("a", dst), vname("alpha", src)): 1}
    Q = {(vname("y", dst), vname("eta", src)): 1, (vname("xi", src), vname("x", dst)): 1}
    P = exp_eps({1: v_("beta", src) * v_("a", dst)}, kappa)
    return PG((src,), (dst,), L, Q, P)


def phi_t_to_b(src, dst, kappa: int) -> PG:
    """t-basis strand to b-basis strand: t = b − εa."""
    src, dst = str(src), str(dst)
    L = {(vname("tau", src), vname("b", dst)): 1, (vname("a", dst), vname("alpha", src)): 1}
    Q = {(vname("y", dst), vname("eta", src)): 1, (vname("xi", src), vname("x", dst)): 1}
    P = exp_eps({1: -v_("tau", src) * v_("a", dst)}, kappa)
    return PG((src,), (dst,), L, Q, P)


def to_t_basis(f: PG) -> PG:
    """Conjugate a b-basis 𝔻 element or map by the basis change on every label."""
    n = f.kappa
    ren_in = {l: tmp("tin") for l in f.dom}
    ren_out = {l: tmp("tout") for l in f.cod}
    g = relabel(f, {**ren_in, **ren_out}) if (ren_in or ren_out) else f
    if f.dom:
        pre = None
        for l in f.dom:
            piece = phi_t_to_b(l, ren_in[l], n)
            pre = piece if pre is None else product(pre, piece)
        g = compose(pre, g)
    for l in f.cod:
        g = compose(g, phi_b_to_t(ren_out[l], l, n))
    return g


def id_D(src, dst, kappa: int) -> PG:
    src, dst = str(src), str(dst)
    L = {(vname("tau", src), vname("t", dst)): 1, (vname("a", dst), vname("alpha", src)): 1}
    Q = {(vname("y", dst), vname("eta", src)): 1, (vname("xi", src), vname("x", dst)): 1}
    return PG((src,), (dst,), L, Q, EpsSeries.one(kappa))


def _monomial_T_half(label, half: int) -> Frac:
    return symbol("T", str(label), half)


class AlgebraContext:
    """All 𝔻 structure at truncation order κ, in the t-basis, with canonical labels.

    Elements are stored once and instantiated on other labels by relabelling.
    """

    def __init__(self, kappa: int, spinner_sign: int = 1):
        self.kappa = kappa
        self.half = HalfAlgebras.build(kappa)
        h = self.half
        self.spinner_sign = spinner_sign
        self._m = to_t_basis(build_mD_b(h, "i", "j", "k"))
        self._R = to_t_basis(build_R_b("i", "j", kappa))
        self._Rbar = to_t_basis(h.Rbar("i", "j"))
        self._Delta = to_t_basis(self._delta_b())
        self._S = to_t_basis(self._antipode_b(inverse=False))
        self._Sbar = to_t_basis(self._antipode_b(inverse=True))
        self._C = self._spinner(1)
        self._Cbar = self._spinner(-1)
        self._vbar = self._ribbon_inverse()
        self._v = self.invert_element(self._vbar, "ribbon element", self._ribbon_seed())
        self._u = self._drinfeld_u(False)
        self._Su = self._drinfeld_u(True)
        self._w = self._casimir()

    # -- construction ----------------------------------------------------------
    def _delta_b(self) -> PG:
        h = self.half
        i1, i2, j1, j2, k1, k2 = (tmp(s) for s in ("i1", "i2", "j1", "j2", "k1", "k2"))
        f = product(h.dB(i1, j1, k1), h.dA(i2, j2, k2))
        return fuse(f, {i1: "i", i2: "i", j1: "j", j2: "j", k1: "k", k2: "k"})

    def _antipode_b(self, inverse: bool) -> PG:
        h = self.half
        i1, i2, j1, j2 = (tmp(s) for s in ("i1", "i2", "j1", "j2"))
        f = product(h.sB(i1, j1, inverse=inverse), h.sA(i2, j2, inverse=not inverse))
        m = build_mD_b(h, j2, j1, "j")
        f = compose(f, m)
        return fuse(f, {i1: "i", i2: "i"})

    def _spinner(self, sign: int) -> PG:
        """(AB)^{±s/2} = T^{±s/2} e^{∓sεa} with s the spinner sign."""
        s = sign * self.spinner_sign
        P = exp_eps({1: v_("a", "i") * (-s)}, self.kappa).scale(_monomial_T_half("i", s))
        return PG((), ("i",), {}, {}, P, "PG")

    def _ribbon_inverse(self) -> PG:
        """v⁻¹ = R₁₃ C̄₂ // m^{123}."""
        f = product(self.R("1", "3"), self.Cbar("2"))
        return self.merge_many(f, ["1", "2", "3"], "i")

    def _ribbon_seed(self) -> PG:
        """R̄₁₃ C₂ // m^{123}: the exact inverse of v⁻¹ at ε=0."""
        f = product(self.Rbar("1", "3"), self.C("2"))
        return self.merge_many(f, ["1", "2", "3"], "i").truncate(0)

    def _drinfeld_u(self, antipode_of: bool) -> PG:
        """u = R₁₂ // S₂ // m^{21};  S(u) = R₁₂ // S₂ // m^{12}."""
        f = compose(self.R("1", "2"), self.S("2", "3"))
        order = ["1", "3"] if antipode_of else ["3", "1"]
        return self.merge_many(f, order, "i")

    def _casimir(self) -> PG:
        """w = yA⁻¹x + (qA⁻¹ + AT − ½(1+T)(q+1))/(q−1) with q = e^ε, A = e^{−εa}."""
        n = self.kappa
        y, a, x = v_("y", "i"), v_("a", "i"), v_("x", "i")
        Ti = symbol("T", "i", 2)
        N = n + 2  # (q−1) = ε(1 + ε/2 + ...) costs one order
        fac = [Fraction(1, factorial(m)) for m in range(N + 1)]
        # numerator series in ε: qA⁻¹ + AT − ½(1+T)(q+1)
        num = []
        for m in range(N + 1):
            qAinv = sum((fac[r] * fac[m - r] * a ** (m - r) for r in range(m + 1)), Frac.const(0))
            AT = Ti * fac[m] * (-a) ** m
            q1 = Frac.const(fac[m] + (1 if m == 0 else 0))
            num.append(qAinv + AT - (1 + Ti) * q1 * Fraction(1, 2))
        if not num[0].is_zero():
            raise AxiomFailure("casimir", "numerator does not vanish at ε=0")
        # divide by (q−1)/ε = Σ ε^m/(m+1)!
        den = [Fraction(1, factorial(m + 1)) for m in range(N + 1)]
        from .symseries import ser_inv
        inv = ser_inv(den, N + 1)
        shifted = num[1:]
        const = []
        for m in range(n + 1):
            acc = Frac.const(0)
            for r in range(m + 1):
                if inv[m - r]:
                    acc = acc + shifted[r] * inv[m - r]
            const.append(acc)
        # yA⁻¹x with A⁻¹ = e^{εa} in the ordered basis y < a < x
        coeffs = [const[m] + y * a ** m * x * fac[m] for m in range(n + 1)]
        return PG((), ("i",), {}, {}, EpsSeries(coeffs), "PG")

    # -- instantiation -------------------------------------------------------------
    def m(self, i, j, k) -> PG:
        return relabel(self._m, {"i": i, "j": j, "k": k})

    def R(self, i, j) -> PG:
        return relabel(self._R, {"i": i, "j": j})

    def Rbar(self, i, j) -> PG:
        return relabel(self._Rbar, {"i": i, "j": j})

    def Delta(self, i, j, k) -> PG:
        return relabel(self._Delta, {"i": i, "j": j, "k": k})

    def S(self, i, j) -> PG:
        return relabel(self._S, {"i": i, "j": j})

    def Sbar(self, i, j) -> PG:
        return relabel(self._Sbar, {"i": i, "j": j})

    def eps(self, i) -> PG:
        return PG((str(i),), (), {}, {}, EpsSeries.one(self.kappa), "PG+")

    def one(self, i) -> PG:
        return PG((), (str(i),), {}, {}, EpsSeries.one(self.kappa), "PG")

    def identity(self, i, j=None) -> PG:
        return id_D(i, i if j is None else j, self.kappa)

    def C(self, i) -> PG:
        return relabel(self._C, {"i": i})

    def Cbar(self, i) -> PG:
        return relabel(self._Cbar, {"i": i})

    def v(self, i) -> PG:
        return relabel(self._v, {"i": i})

    def vbar(self, i) -> PG:
        return relabel(self._vbar, {"i": i})

    def u(self, i) -> PG:
        return relabel(self._u, {"i": i})

    def Su(self, i) -> PG:
        return relabel(self._Su, {"i": i})

    def w(self, i) -> PG:
        return relabel(self._w, {"i": i})

    # -- helpers ---------------------------------------------------------------------
    def merge_many(self, f: PG, order, out) -> PG:
        """f // m^{order}_out, multiplying left to right."""
        order = [str(l) for l in order]
        acc = order[0]
        for n, lab in enumerate(order[1:], 1):
            new = str(out) if n == len(order) - 1 else tmp("mm")
            f = compose(f, self.m(acc, lab, new))
            acc = new
        if len(order) == 1 and acc != str(out):
            f = relabel(f, {acc: out})
        return f

    def multiply(self, f: PG, g: PG, out="i") -> PG:
        """Product f·g of two one-strand elements."""
        (a,), (b,) = f.cod, g.cod
        a2, b2 = tmp("p"), tmp("p")
        return compose(product(relabel(f, {a: a2}), relabel(g, {b: b2})), self.m(a2, b2, out))

    def invert_element(self, f: PG, name: str, seed_inv: PG | None = None) -> PG:
        """Multiplicative inverse of a one-strand element, order by order.

        ``seed_inv`` is the exact inverse at ε=0; by default the ε=0 part must
        be a scalar and is inverted directly.
        """
        (i,) = f.cod
        if seed_inv is None:
            seed_inv = _invert_eps0(f.truncate(0))
        seed_inv = relabel(seed_inv, {seed_inv.cod[0]: i})

        def residual(g):
            n = g.kappa
            return self.multiply_k(f.truncate(n), g, i, n), self.one_k(i, n)

        def correct(E):
            return -gaussian_quotient(self.multiply_k(seed_inv, E, i, 0), seed_inv)

        return solve_by_orders(seed_inv.with_P(EpsSeries([seed_inv.P.coeffs[0]] + [Frac.const(0)] * self.kappa)),
                               self.kappa, residual, correct, name)

    def one_k(self, i, n) -> PG:
        return PG((), (str(i),), {}, {}, EpsSeries.one(n))

    def multiply_k(self, f: PG, g: PG, out, n) -> PG:
        (a,), (b,) = f.cod, g.cod
        a2, b2 = tmp("p"), tmp("p")
        m = self._m.truncate(n)
        return compose(product(relabel(f, {a: a2}), relabel(g, {b: b2})),
                       relabel(m, {"i": a2, "j": b2, "k": out}))


def _invert_eps0(f: PG) -> PG:
    """Inverse at ε=0 of a one-strand element with no Gaussian part."""
    if f.L or f.Q:
        raise AxiomFailure("inverse", "element has a Gaussian part at ε=0")
    p = f.P.coeffs[0]
    if not p.body_free():
        raise AxiomFailure("inverse", "ε=0 part is not a scalar")
    return f.with_P(EpsSeries([p.inverse()]))


# -- axioms -------------------------------------------------------------------------

def _prod(*fs: PG) -> PG:
    out = fs[0]
    for f in fs[1:]:
        out = product(out, f)
    return out


def _chain(f: PG, *gs: PG) -> PG:
    for g in gs:
        f = compose(f, g)
    return f


def axiom_checks(c: AlgebraContext) -> dict:
    """name → thunk returning (lhs, rhs); each pair must agree to order κ."""
    n = c.kappa
    m, D, S, Sb, R, Rb, eps = c.m, c.Delta, c.S, c.Sbar, c.R, c.Rbar, c.eps
    I = c.identity

    def one_lab(l):
        return c.one(l)

    checks = {
        "associativity": lambda: (
            _chain(_prod(I("1"), I("2"), I("3")), m("1", "2", "a"), m("a", "3", "z")),
            _chain(_prod(I("1"), I("2"), I("3")), m("2", "3", "b"), m("1", "b", "z"))),
        "coassociativity": lambda: (
            _chain(D("i", "m", "c"), D("m", "a", "b")),
            _chain(D("i", "a", "m"), D("m", "b", "c"))),
        "coproduct is multiplicative": lambda: (
            _chain(m("i", "j", "k"), D("k", "a", "b")),
            _chain(_prod(D("i", "i1", "i2"), D("j", "j1", "j2")), m("i1", "j1", "a"), m("i2", "j2", "b"))),
        "left counit": lambda: (_chain(D("i", "j", "k"), eps("j")), I("i", "k")),
        "right counit": lambda: (_chain(D("i", "j", "k"), eps("k")), I("i", "j")),
        "left antipode": lambda: (
            _chain(D("i", "j", "k"), S("j", "s"), m("s", "k", "l")), _prod(eps("i"), one_lab("l"))),
        "right antipode": lambda: (
            _chain(D("i", "j", "k"), S("k", "s"), m("j", "s", "l")), _prod(eps("i"), one_lab("l"))),
        "inverse antipode": lambda: (_chain(S("i", "m"), Sb("m", "j")), I("i", "j")),
        "antipode is anti-multiplicative": lambda: (
            _chain(m("i", "j", "k"), S("k", "l")),
            _chain(_prod(S("i", "i1"), S("j", "j1")), m("j1", "i1", "l"))),
        "R inverse": lambda: (
            _chain(_prod(R("1", "2"), Rb("3", "4")), m("1", "3", "i"), m("2", "4", "j")),
            _prod(one_lab("i"), one_lab("j"))),
        "R inverse via antipode": lambda: (_chain(R("1", "j"), S("1", "i")), Rb("i", "j")),
        "quasi-triangular 1": lambda: (
            _chain(R("i", "j"), D("i", "a", "b")),
            _chain(_prod(R("a", "j1"), R("b", "j2")), m("j1", "j2", "j"))),
        "quasi-triangular 2": lambda: (
            _chain(R("i", "j"), D("j", "a", "b")),
            _chain(_prod(R("i1", "b"), R("i2", "a")), m("i1", "i2", "i"))),
        "quasi-triangular 3": lambda: (
            _chain(_prod(R("a1", "b1"), D("k", "a2", "b2")), m("a1", "a2", "a"), m("b1", "b2", "b")),
            _chain(_prod(D("k", "b2", "a2"), R("a1", "b1")), m("a2", "a1", "a"), m("b2", "b1", "b"))),
        "Yang-Baxter": lambda: (
            _chain(_prod(R("1", "2"), R("1b", "3"), R("2b", "3b")),
                   m("1", "1b", "x"), m("2", "2b", "y"), m("3", "3b", "z")),
            _chain(_prod(R("2", "3"), R("1", "3b"), R("1b", "2b")),
                   m("1", "1b", "x"), m("2", "2b", "y"), m("3", "3b", "z"))),
        "double antipode on R": lambda: (_chain(R("1", "2"), S("1", "i"), S("2", "j")), R("i", "j")),
        "ribbon inverse": lambda: (c.multiply(c.v("1"), c.vbar("2")), one_lab("i")),
        "ribbon central": lambda: (
            _chain(_prod(c.v("1"), I("i", "2")), m("1", "2", "k")),
            _chain(_prod(I("i", "1"), c.v("2")), m("1", "2", "k"))),
        "ribbon squared": lambda: (c.multiply(c.v("1"), c.v("2")), c.multiply(c.u("1"), c.Su("2"))),
        "ribbon antipode": lambda: (_chain(c.v("1"), S("1", "i")), c.v("i")),
        "ribbon counit": lambda: (_chain(c.v("1"), eps("1")), PG((), (), {}, {}, EpsSeries.one(n))),
        "ribbon coproduct": lambda: (
            _chain(c.v("i"), D("i", "l", "r")),
            _chain(_prod(c.v("5"), c.v("6"), Rb("2", "1"), Rb("4", "3")),
                   m("4", "1", "p"), m("p", "5", "l"), m("3", "2", "q"), m("q", "6", "r"))),
        "spinner conjugation": lambda: (
            _chain(_prod(c.C("1"), I("i", "2"), c.Cbar("3")), m("1", "2", "p"), m("p", "3", "k")),
            _chain(S("i", "s"), S("s", "k"))),
        "spinner group-like": lambda: (_chain(c.C("i"), D("i", "j", "k")), _prod(c.C("j"), c.C("k"))),
        "spinner inverse": lambda: (c.multiply(c.C("1"), c.Cbar("2")), one_lab("i")),
        "spinner from u and v": lambda: (c.C("i"), c.multiply(c.u("1"), c.vbar("2"))),
        "u = AB S(u)": lambda: (
            c.u("i"), _chain(_prod(c.C("1"), c.C("2"), c.Su("3")), m("1", "2", "p"), m("p", "3", "i"))),
        "u S(u) central": lambda: (
            _chain(_prod(c.u("1"), c.Su("1b"), I("i", "2")), m("1", "1b", "p"), m("p", "2", "k")),
            _chain(_prod(I("i", "1"), c.u("2"), c.Su("2b")), m("2", "2b", "p"), m("1", "p", "k"))),
        "casimir central": lambda: (
            _chain(_prod(c.w("1"), I("i", "2")), m("1", "2", "k")),
            _chain(_prod(I("i", "1"), c.w("2")), m("1", "2", "k"))),
    }
    return checks


@dataclass
class AxiomReport:
    order: int
    results: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.results.values())

    def failures(self) -> list[str]:
        return [k for k, v in self.results.items() if not v]

    def to_json(self) -> dict:
        return {"order": self.order, "ok": self.ok, "results": dict(self.results),
                "failures": {k: self.details[k] for k in self.failures()}}


def verify_axioms(c: AlgebraContext, names=None) -> AxiomReport:
    report = AxiomReport(c.kappa)
    for name, thunk in axiom_checks(c).items():
        if names is not None and name not in names:
            continue
        try:
            lhs, rhs = thunk()
            ok = pg_equal(lhs, rhs)
            report.details[name] = "" if ok else "; ".join(pg_diff(lhs, rhs))[:500]
        except (AxiomFailure, CompositionError, ArithmeticError) as e:
            ok = False
            report.details[name] = f"{type(e).__name__}: {e}"
        report.results[name] = ok
    return report
