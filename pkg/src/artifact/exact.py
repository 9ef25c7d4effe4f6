"""Exact scalars: rational functions in square roots of group-like symbols.

Every variable of the underlying flint context stands for the *square root*
of a symbol, so T^(1/2) is the generator ``T_`` and T itself is ``T_**2``.
Exponents that leave this module are therefore doubled integers.

The same machinery also carries body variables (see :mod:`artifact.symseries`);
a :class:`Frac` whose numerator mentions only symbols is a Scalar.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

import flint

Rational = Fraction

SYMBOL_KINDS = ("T", "A", "B")
BODY_CLASSES = ("y", "b", "t", "a", "x", "eta", "beta", "tau", "alpha", "xi")
GREEK = {"eta": "y", "beta": "b", "tau": "t", "alpha": "a", "xi": "x"}
LATIN = {v: k for k, v in GREEK.items()}
_CLASS_RANK = {c: i for i, c in enumerate(("y", "b", "t", "a", "x", "eta", "beta", "tau", "alpha", "xi"))}
GLOBAL = ""  # label of the global symbol T


class ScalarError(ArithmeticError):
    pass


def vname(kind: str, label) -> str:
    """flint variable name for a symbol or body variable."""
    return f"{kind}_{label}"


def split_name(name: str) -> tuple[str, str]:
    kind, label = name.split("_", 1)
    return kind, label


def is_symbol(name: str) -> bool:
    return name[0].isupper()


def _key(name: str):
    kind, label = split_name(name)
    if kind[0].isupper():
        return (0, label, kind)
    return (1, label, _CLASS_RANK.get(kind, 99), kind)


@lru_cache(maxsize=None)
def context(names: tuple[str, ...]) -> flint.fmpq_mpoly_ctx:
    return flint.fmpq_mpoly_ctx.get(names, "degrevlex")


def ctx_for(names: Iterable[str]) -> flint.fmpq_mpoly_ctx:
    return context(tuple(sorted(set(names), key=_key)))


def ctx_names(ctx) -> tuple[str, ...]:
    return ctx.names()


@lru_cache(maxsize=None)
def _union(c1, c2):
    if c1 is c2:
        return c1
    n1, n2 = c1.names(), c2.names()
    if set(n2) <= set(n1):
        return c1
    if set(n1) <= set(n2):
        return c2
    return ctx_for(n1 + n2)


@lru_cache(maxsize=None)
def _index(ctx) -> dict[str, int]:
    return {n: i for i, n in enumerate(ctx.names())}


def _q(c) -> flint.fmpq:
    if isinstance(c, Fraction):
        return flint.fmpq(c.numerator, c.denominator)
    return flint.fmpq(c)


def _frac(c: flint.fmpq) -> Fraction:
    return Fraction(int(c.p), int(c.q))


_EMPTY = ctx_for(())


class Frac:
    """num/den over a shared flint context; den never mentions body variables.

    Canonical form: gcd(num, den) = 1 and den has leading coefficient 1.
    Instances are treated as immutable.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, *, reduce: bool = True):
        if den is None:
            den = num.context().constant(1)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if reduce:
            num, den = _reduce(num, den)
        self.num = num
        self.den = den

    # -- construction -------------------------------------------------
    @classmethod
    def const(cls, c=0) -> "Frac":
        return cls(_EMPTY.constant(_q(c)), _EMPTY.constant(1), reduce=False)

    @classmethod
    def var(cls, name: str) -> "Frac":
        ctx = ctx_for((name,))
        return cls(ctx.gens()[0], ctx.constant(1), reduce=False)

    @classmethod
    def monomial(cls, exps: Mapping[str, int], coeff=1) -> "Frac":
        """coeff * prod name**e, negative e allowed (doubled for symbols)."""
        exps = {k: e for k, e in exps.items() if e}
        ctx = ctx_for(exps)
        idx = _index(ctx)
        pos = [0] * len(idx)
        neg = [0] * len(idx)
        for k, e in exps.items():
            if e > 0:
                pos[idx[k]] = e
            else:
                neg[idx[k]] = -e
        num = ctx.from_dict({tuple(pos): _q(coeff)})
        den = ctx.from_dict({tuple(neg): 1})
        return cls(num, den, reduce=False)

    @property
    def ctx(self):
        return self.num.context()

    # -- helpers --------------------------------------------------------
    def _in(self, ctx) -> "Frac":
        if self.num.context() is ctx:
            return self
        return Frac(self.num.project_to_context(ctx), self.den.project_to_context(ctx), reduce=False)

    def names(self) -> set[str]:
        """Variables actually used."""
        ns = self.ctx.names()
        d1, d2 = self.num.degrees(), self.den.degrees()
        return {n for n, a, b in zip(ns, d1, d2) if a > 0 or b > 0}

    def shrink(self) -> "Frac":
        used = self.names()
        if len(used) == len(self.ctx.names()):
            return self
        return self._in(ctx_for(used))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num.is_one() and self.den.is_one()

    def is_const(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def const_value(self) -> Fraction:
        if not self.is_const():
            raise ScalarError("not a constant")
        if self.num.is_zero():
            return Fraction(0)
        return _frac(self.num.leading_coefficient()) / _frac(self.den.leading_coefficient())

    def body_free(self) -> bool:
        return all(is_symbol(n) for n in self.names())

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other) -> "Frac":
        other = _coerce(other)
        if other.num.is_zero():
            return self
        if self.num.is_zero():
            return other
        ctx = _union(self.ctx, other.ctx)
        a, b = self._in(ctx), other._in(ctx)
        if a.den == b.den:
            if a.den.is_one():
                return Frac(a.num + b.num, a.den, reduce=False)
            return Frac(a.num + b.num, a.den)
        if a.den.is_constant() and b.den.is_constant():
            return Frac(a.num * b.den + b.num * a.den, a.den * b.den)
        g = a.den.gcd(b.den)
        da, db = a.den / g, b.den / g
        return Frac(a.num * db + b.num * da, a.den * db)

    __radd__ = __add__

    def __neg__(self) -> "Frac":
        return Frac(-self.num, self.den, reduce=False)

    def __sub__(self, other) -> "Frac":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "Frac":
        return _coerce(other) + (-self)

    def __mul__(self, other) -> "Frac":
        other = _coerce(other)
        if self.num.is_zero() or other.num.is_zero():
            return Frac.const(0)
        ctx = _union(self.ctx, other.ctx)
        a, b = self._in(ctx), other._in(ctx)
        if a.den.is_one() and b.den.is_one():
            return Frac(a.num * b.num, a.den, reduce=False)
        if b.is_const():
            return Frac(a.num * b.num, a.den * b.den)
        if a.is_const():
            return Frac(a.num * b.num, a.den * b.den)
        # cross-cancel before multiplying
        g1 = a.num.gcd(b.den) if not b.den.is_one() else None
        g2 = b.num.gcd(a.den) if not a.den.is_one() else None
        an, bd = (a.num / g1, b.den / g1) if g1 is not None else (a.num, b.den)
        bn, ad = (b.num / g2, a.den / g2) if g2 is not None else (b.num, a.den)
        return Frac(an * bn, ad * bd, reduce=False)._monic()

    __rmul__ = __mul__

    def inverse(self) -> "Frac":
        if self.num.is_zero():
            raise ZeroDivisionError("division by zero scalar")
        if not self.body_free():
            raise ScalarError("cannot invert an expression in body variables")
        return Frac(self.den, self.num, reduce=False)._monic()

    def __truediv__(self, other) -> "Frac":
        return self * _coerce(other).inverse()

    def __rtruediv__(self, other) -> "Frac":
        return _coerce(other) * self.inverse()

    def __pow__(self, n: int) -> "Frac":
        if n < 0:
            return self.inverse() ** (-n)
        return Frac(self.num ** n, self.den ** n, reduce=False)

    def __eq__(self, other) -> bool:
        try:
            other = _coerce(other)
        except TypeError:
            return NotImplemented
        ctx = _union(self.ctx, other.ctx)
        a, b = self._in(ctx), other._in(ctx)
        return a.num * b.den == b.num * a.den

    def __hash__(self):
        raise TypeError("Frac is not hashable")

    def _monic(self) -> "Frac":
        lc = self.den.leading_coefficient()
        if lc == 1:
            return self
        return Frac(self.num / lc, self.den / lc, reduce=False)

    # -- calculus and substitution ---------------------------------------
    def derivative(self, name: str) -> "Frac":
        """Partial derivative in a flint variable (no chain rule for sqrt)."""
        if name not in _index(self.ctx) or name not in self.names():
            return Frac.const(0)
        dn = self.num.derivative(name)
        if self.den.degrees()[_index(self.ctx)[name]] == 0:
            return Frac(dn, self.den)
        dd = self.den.derivative(name)
        return Frac(dn * self.den - self.num * dd, self.den * self.den)

    def log_derivative(self, sym: str) -> "Frac":
        """X d/dX for the symbol X whose square root is the variable ``sym``."""
        d = self.derivative(sym)
        if d.is_zero():
            return d
        return d * Frac.var(sym) * Fraction(1, 2)

    def subs_monomial(self, rule: Mapping[str, Mapping[str, int]]) -> "Frac":
        """Replace each variable ``k`` by the Laurent monomial ``rule[k]``."""
        rule = {k: v for k, v in rule.items() if k in self.names()}
        if not rule:
            return self
        num = _subs_mono_poly(self.num, rule)
        den = _subs_mono_poly(self.den, rule)
        res = num / den
        return res

    def subs_poly(self, images: Mapping[str, "Frac"]) -> "Frac":
        """Substitute polynomials for body variables (images free of symbols in den)."""
        return subs_linear(self, images)

    def evaluate(self, values: Mapping[str, int]) -> "Frac":
        """Set some variables to integer constants (used with 0 for body vars)."""
        vals = {k: v for k, v in values.items() if k in _index(self.ctx)}
        if not vals:
            return self
        num = self.num.subs(vals)
        den = self.den.subs(vals)
        if den.is_zero():
            raise ScalarError("substitution produced a zero denominator")
        return Frac(num, den)

    # -- views ------------------------------------------------------------
    def terms(self):
        """Iterate (exponent dict, Fraction) over the numerator."""
        names = self.ctx.names()
        for exps, c in self.num.to_dict().items():
            yield {n: e for n, e in zip(names, exps) if e}, _frac(c)

    def laurent(self) -> dict[tuple[tuple[str, int], ...], Fraction]:
        """Doubled-exponent Laurent terms; requires a monomial denominator."""
        if len(self.den.to_dict()) != 1:
            raise ScalarError("not a Laurent polynomial")
        (dexp, dc), = self.den.to_dict().items()
        names = self.ctx.names()
        out = {}
        for exps, c in self.num.to_dict().items():
            key = tuple((n, e - d) for n, e, d in zip(names, exps, dexp) if e - d)
            out[key] = _frac(c) / _frac(dc)
        return out

    def __repr__(self):
        return f"Scalar({to_text(self)})"

    __str__ = lambda self: to_text(self)


Scalar = Frac


def _coerce(x) -> Frac:
    if isinstance(x, Frac):
        return x
    if isinstance(x, (int, Fraction)):
        return Frac.const(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to Scalar")


def _reduce(num, den):
    if num.is_zero():
        ctx = num.context()
        return num, ctx.constant(1)
    if den.is_constant():
        lc = den.leading_coefficient()
        if lc != 1:
            return num / lc, den / lc
        return num, den
    g = num.gcd(den)
    if not g.is_one():
        num, den = num / g, den / g
    lc = den.leading_coefficient()
    if lc != 1:
        num, den = num / lc, den / lc
    return num, den


def _subs_mono_poly(p, rule):
    """Laurent-monomial substitution into a polynomial; returns a Frac."""
    names = p.context().names()
    out_names = set(n for n in names if n not in rule)
    for img in rule.values():
        out_names.update(img)
    ctx = ctx_for(out_names)
    idx = _index(ctx)
    n = len(idx)
    acc: dict[tuple, flint.fmpq] = {}
    minv = [0] * n
    rows = []
    for exps, c in p.to_dict().items():
        v = [0] * n
        for name, e in zip(names, exps):
            if not e:
                continue
            img = rule.get(name)
            if img is None:
                v[idx[name]] += e
            else:
                for k, f in img.items():
                    v[idx[k]] += e * f
        rows.append((v, c))
        for i in range(n):
            if v[i] < minv[i]:
                minv[i] = v[i]
    for v, c in rows:
        key = tuple(a - b for a, b in zip(v, minv))
        acc[key] = acc.get(key, 0) + c
    num = ctx.from_dict({k: c for k, c in acc.items() if c != 0}) if acc else ctx.constant(0)
    den = ctx.from_dict({tuple(-m for m in minv): 1})
    return Frac(num, den, reduce=False)


def subs_linear(f: Frac, images: Mapping[str, Frac]) -> Frac:
    """Substitute Frac values (with symbol-only denominators) for variables of f.

    Uses a homogenizing variable so each image's denominator is applied once
    per degree.
    """
    images = {k: v for k, v in images.items() if k in f.names()}
    if not images:
        return f
    # common denominator of all images
    dens = [im for im in images.values() if not im.den.is_one()]
    ctx = f.ctx
    for im in images.values():
        ctx = _union(ctx, im.ctx)
    if not dens:
        tgt = ctx
        gens = []
        for n in f.ctx.names():
            if n in images:
                gens.append(images[n]._in(tgt).num)
            else:
                gens.append(tgt.gens()[_index(tgt)[n]])
        num = f.num.compose(*gens, ctx=tgt)
        den = f.den.project_to_context(tgt)
        return Frac(num, den)
    D = dens[0]._in(ctx).den
    for im in dens[1:]:
        d2 = im._in(ctx).den
        g = D.gcd(d2)
        D = D * (d2 / g)
    hname = "Z_#h"
    tgt = _union(ctx, ctx_for((hname,)))
    h = tgt.gens()[_index(tgt)[hname]]
    Dt = D.project_to_context(tgt)
    gens = []
    for n in f.ctx.names():
        if n in images:
            im = images[n]._in(tgt)
            gens.append(im.num * (Dt / im.den) * h)
        else:
            gens.append(tgt.gens()[_index(tgt)[n]])
    num = f.num.compose(*gens, ctx=tgt)
    hi = _index(tgt)[hname]
    top = num.degrees()[hi]
    # num = sum_k N_k h^k  ->  sum_k N_k D^(top-k) / D^top
    parts: dict[int, dict] = {}
    for exps, c in num.to_dict().items():
        k = exps[hi]
        e = list(exps)
        e[hi] = 0
        parts.setdefault(k, {})[tuple(e)] = c
    total = tgt.constant(0)
    Dpow = tgt.constant(1)
    for k in range(top, -1, -1):
        if k in parts:
            total += tgt.from_dict(parts[k]) * Dpow
        if k:
            Dpow = Dpow * Dt
    res = Frac(total, f.den.project_to_context(tgt) * Dpow)
    return res._in(ctx) if res.names() <= set(ctx.names()) else res


# -- symbols ------------------------------------------------------------------

def symbol(kind: str, label=GLOBAL, half_power: int = 2) -> Frac:
    """kind_label ** (half_power/2); e.g. symbol('T') is T, symbol('T', half_power=1) is T^(1/2)."""
    if kind not in SYMBOL_KINDS:
        raise ValueError(kind)
    return Frac.monomial({vname(kind, label): half_power})


def T(power: Fraction | int = 1) -> Frac:
    d = Fraction(power) * 2
    if d.denominator != 1:
        raise ScalarError("only half-integer powers of T are allowed")
    return symbol("T", GLOBAL, int(d))


def substitute(s: Frac, rule: Mapping[tuple[str, str], Mapping[tuple[str, str], int]]) -> Frac:
    """Group-like substitution: {(kind,label): {(kind,label): doubled_exp}}.

    The image of the full symbol is given in doubled exponents; the square
    root image therefore needs even doubled exponents.
    """
    r = {}
    for (k, l), img in rule.items():
        half = {}
        for (k2, l2), e in img.items():
            if e % 2:
                raise ScalarError("image of a square root is not a half-integer monomial")
            half[vname(k2, l2)] = e // 2
        r[vname(k, l)] = half
    return s.subs_monomial(r)


# -- serialization ----------------------------------------------------------------

def _fmt_mono(exps: Mapping[str, int]) -> str:
    parts = []
    for n in sorted(exps, key=_key):
        e = exps[n]
        kind, label = split_name(n)
        if kind[0].isupper():
            base = kind if label == GLOBAL else f"{kind}_{label}"
            parts.append(f"{base}^({e}/2)")
        else:
            base = f"{kind}[{label}]"
            parts.append(base if e == 1 else f"{base}^{e}")
    return " * ".join(parts)


def _poly_text(p, names) -> str:
    d = p.to_dict()
    if not d:
        return "0"
    out = []
    for exps in sorted(d, key=lambda e: [-x for x in e]):
        c = _frac(d[exps])
        mono = _fmt_mono({n: e for n, e in zip(names, exps) if e})
        if mono:
            out.append(f"{c} * {mono}")
        else:
            out.append(f"{c}")
    return " + ".join(out)


def to_text(s: Frac) -> str:
    names = s.ctx.names()
    num = _poly_text(s.num, names)
    if s.den.is_one():
        return num
    return f"({num}) / ({_poly_text(s.den, names)})"


def to_json(s: Frac) -> dict:
    """{"num": [[{var: exp}, "c"], ...], "den": [...]} with doubled symbol exponents."""
    names = s.ctx.names()

    def enc(p):
        return [[{n: int(e) for n, e in zip(names, exps) if e}, str(_frac(c))]
                for exps, c in sorted(p.to_dict().items())]

    return {"num": enc(s.num), "den": enc(s.den)}


def from_json(obj) -> Frac:
    def dec(rows):
        acc = Frac.const(0)
        for exps, c in rows:
            acc = acc + Frac.monomial(exps, Fraction(c))
        return acc

    return dec(obj["num"]) / dec(obj["den"])
