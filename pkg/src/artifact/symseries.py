"""Body variables, polynomials over Scalars and ε-truncated series.

A BodyPoly is a :class:`~artifact.exact.Frac` whose numerator may mention
body variables; the denominator stays in the symbols only.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .exact import (BODY_CLASSES, GREEK, LATIN, Frac, ScalarError, is_symbol,
                    split_name, vname)

BodyPoly = Frac

UNICODE = {"η": "eta", "τ": "tau", "α": "alpha", "ξ": "xi", "β": "beta"}
PRETTY = {v: k for k, v in UNICODE.items()}

# (wh, wt) per generator; ħ has wh = -1 and wt = 0.
WEIGHTS = {
    "y": (1, 1), "eta": (-1, 1),
    "b": (1, 0), "beta": (-1, 2),
    "t": (1, 0), "tau": (-1, 2),
    "a": (0, 2), "alpha": (0, 0),
    "x": (0, 1), "xi": (0, 1),
    "eps": (1, -4),
}
# canonical order along a strand: y < t < a < x < η < τ < α < ξ
CLASS_ORDER = ("y", "b", "t", "a", "x", "eta", "beta", "tau", "alpha", "xi")


@dataclass(frozen=True, order=True)
class BodyVar:
    cls: str
    label: str

    def __post_init__(self):
        object.__setattr__(self, "cls", UNICODE.get(self.cls, self.cls))
        object.__setattr__(self, "label", str(self.label))
        if self.cls not in BODY_CLASSES:
            raise ValueError(f"unknown body class {self.cls!r}")

    @property
    def name(self) -> str:
        return vname(self.cls, self.label)

    @property
    def greek(self) -> bool:
        return self.cls in GREEK

    def dual(self) -> "BodyVar":
        return BodyVar(GREEK.get(self.cls) or LATIN[self.cls], self.label)

    def poly(self) -> Frac:
        return Frac.var(self.name)

    def __str__(self):
        return f"{PRETTY.get(self.cls, self.cls)}[{self.label}]"


def V(cls: str, label) -> Frac:
    """Shorthand: the body variable cls[label] as a polynomial."""
    return BodyVar(cls, label).poly()


def body_names(p: Frac) -> set[str]:
    return {n for n in p.names() if not is_symbol(n)}


def monomial_key(exps: Mapping[str, int]):
    """Graded lex key: total degree, then (label, class) order."""
    items = []
    for n, e in exps.items():
        if is_symbol(n):
            continue
        cls, label = split_name(n)
        items.append(((label, CLASS_ORDER.index(cls)), e))
    items.sort()
    return (sum(e for _, e in items), tuple(items))


# -- grading --------------------------------------------------------------

def grading(exps: Mapping[str, int], eps: int = 0) -> tuple[int, int]:
    """(wt, wh) of a monomial given by exponent dict (symbols ignored)."""
    wt = WEIGHTS["eps"][1] * eps
    wh = WEIGHTS["eps"][0] * eps
    for n, e in exps.items():
        if is_symbol(n):
            continue
        cls, _ = split_name(n)
        h, t = WEIGHTS[cls]
        wh += h * e
        wt += t * e
    return wt, wh


def term_gradings(p: Frac, eps: int = 0) -> list[tuple[int, int]]:
    return [grading(exps, eps) for exps, _ in p.terms()]


@dataclass(frozen=True)
class HbarTerm:
    """One monomial with its ħ power restored: coeff * ħ^hbar * ε^eps * mono."""
    eps: int
    hbar: int
    mono: tuple[tuple[str, int], ...]
    coeff: Frac


def restore_hbar(series: "EpsSeries") -> list[HbarTerm]:
    """Attach to each monomial the ħ power that makes wh vanish.

    With wh(ħ) = -1 the power equals wh of the monomial. Coefficients keep
    their common denominator.
    """
    out = []
    for k, p in enumerate(series.coeffs):
        den = Frac(p.den)
        for exps, c in p.terms():
            body = {n: e for n, e in exps.items() if not is_symbol(n)}
            sym = {n: e for n, e in exps.items() if is_symbol(n)}
            _, wh = grading(body, k)
            coeff = Frac.monomial(sym, c) / den
            out.append(HbarTerm(k, wh, tuple(sorted(body.items())), coeff))
    return out


def drop_hbar(terms: Iterable[HbarTerm], kappa: int) -> "EpsSeries":
    """Set ħ = 1."""
    coeffs = [Frac.const(0) for _ in range(kappa + 1)]
    for t in terms:
        if t.eps > kappa:
            continue
        coeffs[t.eps] = coeffs[t.eps] + Frac.monomial(dict(t.mono)) * t.coeff
    return EpsSeries(coeffs)


def check_hbar_balanced(terms: Iterable[HbarTerm]) -> None:
    for t in terms:
        _, wh = grading(dict(t.mono), t.eps)
        if wh - t.hbar != 0:
            raise ScalarError(f"monomial {t.mono} at ε^{t.eps} cannot be balanced by ħ^{t.hbar}")


# -- ε-series ----------------------------------------------------------------

class EpsSeries:
    """P_0 + P_1 ε + ... + P_κ ε^κ with BodyPoly coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[Frac]):
        self.coeffs = tuple(c if isinstance(c, Frac) else Frac.const(c) for c in coeffs)

    @property
    def kappa(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def one(cls, kappa: int) -> "EpsSeries":
        return cls([Frac.const(1)] + [Frac.const(0)] * kappa)

    @classmethod
    def const(cls, c, kappa: int) -> "EpsSeries":
        c = c if isinstance(c, Frac) else Frac.const(c)
        return cls([c] + [Frac.const(0)] * kappa)

    def _check(self, other: "EpsSeries"):
        if other.kappa != self.kappa:
            raise ValueError(f"mismatched truncation orders {self.kappa} and {other.kappa}")

    def __add__(self, other: "EpsSeries") -> "EpsSeries":
        self._check(other)
        return EpsSeries([a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "EpsSeries") -> "EpsSeries":
        self._check(other)
        return EpsSeries([a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return EpsSeries([-a for a in self.coeffs])

    def __mul__(self, other) -> "EpsSeries":
        if not isinstance(other, EpsSeries):
            return self.scale(other)
        self._check(other)
        n = self.kappa + 1
        out = []
        for k in range(n):
            acc = Frac.const(0)
            for i in range(k + 1):
                a, b = self.coeffs[i], other.coeffs[k - i]
                if a.is_zero() or b.is_zero():
                    continue
                acc = acc + a * b
            out.append(acc)
        return EpsSeries(out)

    __rmul__ = lambda self, other: self.scale(other)

    def scale(self, c) -> "EpsSeries":
        return EpsSeries([a * c for a in self.coeffs])

    def shift(self, n: int = 1) -> "EpsSeries":
        """Multiply by ε^n."""
        z = [Frac.const(0)] * n
        return EpsSeries((z + list(self.coeffs))[: self.kappa + 1])

    def map(self, fn) -> "EpsSeries":
        return EpsSeries([fn(c) for c in self.coeffs])

    def truncate(self, kappa: int) -> "EpsSeries":
        cs = list(self.coeffs[: kappa + 1])
        cs += [Frac.const(0)] * (kappa + 1 - len(cs))
        return EpsSeries(cs)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, EpsSeries):
            return NotImplemented
        return self.kappa == other.kappa and all(a == b for a, b in zip(self.coeffs, other.coeffs))

    def __repr__(self):
        return " + ".join(f"ε^{k}·({c})" for k, c in enumerate(self.coeffs) if not c.is_zero()) or "0"


def series_mul(a: EpsSeries, b: EpsSeries) -> EpsSeries:
    return a * b


def exp_series(x: EpsSeries) -> EpsSeries:
    """exp of a series with zero ε⁰ part."""
    if not x.coeffs[0].is_zero():
        raise ValueError("exp_series needs a vanishing constant term")
    kappa = x.kappa
    out = EpsSeries.one(kappa)
    term = EpsSeries.one(kappa)
    for n in range(1, kappa + 1):
        term = (term * x).scale(Fraction(1, n))
        out = out + term
    return out


# -- univariate rational ε-series (used for q-expansions) --------------------

def q_series(kappa: int, shift: Fraction = Fraction(1)) -> list[Fraction]:
    """Coefficients of e^(shift·ε) up to ε^κ."""
    out, c = [], Fraction(1)
    for n in range(kappa + 1):
        out.append(c)
        c = c * shift / (n + 1)
    return out


def ser_mul(a: Sequence[Fraction], b: Sequence[Fraction], n: int) -> list[Fraction]:
    out = [Fraction(0)] * n
    for i, x in enumerate(a[:n]):
        if x:
            for j, y in enumerate(b[: n - i]):
                out[i + j] += x * y
    return out


def ser_inv(a: Sequence[Fraction], n: int) -> list[Fraction]:
    if not a[0]:
        raise ZeroDivisionError("series not invertible")
    out = [Fraction(0)] * n
    out[0] = 1 / Fraction(a[0])
    for k in range(1, n):
        s = sum((a[j] * out[k - j] for j in range(1, min(k, len(a) - 1) + 1)), Fraction(0))
        out[k] = -s / a[0]
    return out


def faddeev_log_coeffs(kappa: int) -> dict[int, list[Fraction]]:
    """log e_q^z - z = sum_n c_n(ε) z^n with q = e^ε, up to ε^κ.

    c_n = (1-q)^n / ((1-q^n) n) vanishes to order n-1, so n ≤ κ+1.
    """
    out = {}
    N = kappa + 2
    for n in range(2, kappa + 2):
        # (1-q) = -ε(1 + ε/2 + ...); (1-q^n) = -nε(1 + nε/2 + ...)
        one_minus_q = [-c for c in q_series(N + n)][1:]  # divided by ε
        one_minus_qn = [-c for c in q_series(N + n, Fraction(n))][1:]
        num = [Fraction(1)]
        for _ in range(n):
            num = ser_mul(num, one_minus_q, N + n)
        ratio = ser_mul(num, ser_inv(one_minus_qn, N + n), N + n)  # times ε^(n-1)
        c = [Fraction(0)] * (kappa + 1)
        for k in range(kappa + 1):
            j = k - (n - 1)
            if 0 <= j < len(ratio):
                c[k] = ratio[j] / n
        out[n] = c
    return out
