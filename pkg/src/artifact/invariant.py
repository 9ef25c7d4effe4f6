"""The universal invariant Z of rotational tangles and its center decomposition."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .doublealg import AlgebraContext
from .exact import GLOBAL, Frac, is_symbol, vname
from .pgcalc import PG, compose, fuse, globalize_t, pg_equal, product, relabel
from .symseries import EpsSeries
from .tangles import as_program

HOPF_OPS = ("Delta", "S", "Sbar", "Eps")


class InvariantError(ValueError):
    pass


class GlobalElements:
    """Context elements with every t, T replaced by the global ones."""

    def __init__(self, ctx: AlgebraContext):
        self.ctx = ctx
        self._cache = {}

    def get(self, name: str) -> PG:
        if name not in self._cache:
            self._cache[name] = globalize_t(getattr(self.ctx, "_" + name))
        return self._cache[name]


_GLOBAL: dict[int, GlobalElements] = {}


def _globals(ctx: AlgebraContext) -> GlobalElements:
    g = _GLOBAL.get(id(ctx))
    if g is None or g.ctx is not ctx:
        g = _GLOBAL[id(ctx)] = GlobalElements(ctx)
    return g


def _element(ctx: AlgebraContext, glob: GlobalElements | None, name: str, mapping: dict) -> PG:
    base = glob.get(name) if glob else getattr(ctx, "_" + name)
    return relabel(base, mapping)


def evaluate_Z(program, ctx: AlgebraContext, *, global_t: bool | None = None, start: PG | None = None) -> PG:
    """Z of a program; the output strands keep their labels.

    Programs without Hopf operations that end on a single strand are
    evaluated with one global T by default, which keeps the group-like block
    empty. ``start`` is an element already sitting on the strands the program
    consumes first.
    """
    program = as_program(program)
    if global_t is None:
        global_t = (start is None and len(program.live_labels()) == 1
                    and not any(st.op in HOPF_OPS for st in program.statements))
    glob = _globals(ctx) if global_t else None
    Z = start if start is not None else PG((), (), {}, {}, EpsSeries.one(ctx.kappa))
    for st in program.statements:
        op, args = st.op, st.args
        if op in ("X", "Xbar"):
            Z = product(Z, _element(ctx, glob, "R" if op == "X" else "Rbar", {"i": args[0], "j": args[1]}))
        elif op in ("C", "Cbar", "v", "vbar"):
            Z = product(Z, _element(ctx, glob, op, {"i": args[0]}))
        elif op == "One":
            Z = product(Z, ctx.one(args[0]))
        elif op == "m":
            Z = compose(Z, _element(ctx, glob, "m", {"i": args[0], "j": args[1], "k": st.out[0]}))
        elif op == "Delta":
            Z = compose(Z, ctx.Delta(args[0], st.out[0], st.out[1]))
        elif op == "S":
            Z = compose(Z, ctx.S(args[0], args[0]))
        elif op == "Sbar":
            Z = compose(Z, ctx.Sbar(args[0], args[0]))
        elif op == "Eps":
            Z = compose(Z, ctx.eps(args[0]))
        else:
            raise InvariantError(f"unknown statement {op}")
    return Z


def _power_of(ctx: AlgebraContext, glob: GlobalElements | None, name: str, n: int, out: str) -> PG:
    """name^n on label out (n ≥ 0)."""
    if n == 0:
        return ctx.one(out)
    labels = [f"#pw{k}" for k in range(n)]
    f = None
    for l in labels:
        e = _element(ctx, glob, name, {"i": l})
        f = e if f is None else product(f, e)
    if n == 1:
        return relabel(f, {labels[0]: out})
    acc = labels[0]
    for k, l in enumerate(labels[1:], 1):
        new = out if k == n - 1 else f"#pa{k}"
        f = compose(f, _element(ctx, glob, "m", {"i": acc, "j": l, "k": new}))
        acc = new
    return f


def framing_normalize(Z: PG, writhe: int, ctx: AlgebraContext, *, global_t: bool = True) -> PG:
    """v^w · Z for a one-strand value Z of writhe w."""
    if writhe == 0:
        return Z
    glob = _globals(ctx) if global_t else None
    (lab,) = Z.cod
    k = tmp_label()
    corr = _power_of(ctx, glob, "v" if writhe > 0 else "vbar", abs(writhe), k)
    z2 = tmp_label()
    f = product(corr, relabel(Z, {lab: z2}))
    return compose(f, _element(ctx, glob, "m", {"i": k, "j": z2, "k": lab}))


_counter = [0]


def tmp_label() -> str:
    _counter[0] += 1
    return f"#z{_counter[0]}"


def knot_value(program, ctx: AlgebraContext) -> PG:
    """The 0-framed one-strand value of a knot program, on label "0" with global T."""
    from .tangles import writhe_and_rotation

    program = as_program(program)
    Z = evaluate_Z(program, ctx, global_t=True)
    if len(Z.cod) != 1:
        raise InvariantError("program does not describe a single strand")
    w, _ = writhe_and_rotation(program)
    Z = framing_normalize(Z, w, ctx)
    (lab,) = Z.cod
    return relabel(Z, {lab: "0"}) if lab != "0" else Z


# -- center decomposition ------------------------------------------------------

def _split_body(p: Frac) -> dict[tuple[tuple[str, int], ...], Frac]:
    """Group the numerator of p by body monomial; values are Scalars."""
    parts: dict[tuple, dict] = {}
    for exps, c in p.terms():
        body = tuple(sorted((n, e) for n, e in exps.items() if not is_symbol(n)))
        sym = {n: e for n, e in exps.items() if is_symbol(n)}
        parts.setdefault(body, []).append(Frac.monomial(sym, c))
    den = Frac(p.den)
    return {b: sum(ts[1:], ts[0]) / den for b, ts in parts.items()}


def _y_degree(p: Frac, label: str) -> int:
    y = vname("y", label)
    return max((dict(b).get(y, 0) for b in _split_body(p)), default=0)


@dataclass
class CenterValue:
    """Δ and the ρ_{k,j} of a central one-strand value."""

    order: int
    alexander: Frac
    rho: dict[tuple[int, int], Frac]
    M: dict[tuple[int, int], Frac] = field(default_factory=dict, repr=False)

    def rho_kj(self, k: int, j: int) -> Frac:
        return self.rho.get((k, j), Frac.const(0))


class CasimirPowers:
    """w^j on one label with the global T, computed on demand."""

    def __init__(self, ctx: AlgebraContext, label: str = "0"):
        self.ctx, self.label = ctx, label
        glob = _globals(ctx)
        self._w = relabel(glob.get("w"), {"i": label})
        self._m = glob.get("m")
        self._pow = [ctx.one(label), self._w]

    def __getitem__(self, j: int) -> EpsSeries:
        while len(self._pow) <= j:
            a, b = tmp_label(), tmp_label()
            f = product(relabel(self._pow[-1], {self.label: a}), relabel(self._w, {self.label: b}))
            self._pow.append(compose(f, relabel(self._m, {"i": a, "j": b, "k": self.label})))
        return self._pow[j].P


_POWERS: dict[int, CasimirPowers] = {}


def casimir_powers(ctx: AlgebraContext) -> CasimirPowers:
    p = _POWERS.get(id(ctx))
    if p is None or p.ctx is not ctx:
        p = _POWERS[id(ctx)] = CasimirPowers(ctx)
    return p


def w_coefficients(Z: PG, ctx: AlgebraContext) -> dict[tuple[int, int], Frac]:
    """M_{k,j} with Z = Σ ε^k M_{k,j} w^j, solved from the top y^j x^j terms down."""
    if len(Z.cod) != 1 or Z.dom:
        raise InvariantError("expected a one-strand element")
    if Z.L or Z.Q:
        raise InvariantError("value has a Gaussian part; is the framing normalized?")
    (lab,) = Z.cod
    if lab != "0":
        Z = relabel(Z, {lab: "0"})
    W = casimir_powers(ctx)
    y, x = vname("y", "0"), vname("x", "0")
    R = list(Z.P.coeffs)
    M = {}
    for k in range(len(R)):
        for j in range(_y_degree(R[k], "0"), -1, -1):
            key = ((x, j), (y, j)) if j else ()
            c = _split_body(R[k]).get(tuple(sorted(key)), Frac.const(0))
            if c.is_zero():
                continue
            M[(k, j)] = c
            Wj = W[j].coeffs
            for n in range(k, len(R)):
                R[n] = R[n] - c * Wj[n - k]
        if not R[k].is_zero():
            raise InvariantError(f"value is not a polynomial in w at ε^{k}")
    return M


def _series_log(cs: list[dict[int, Frac]], kappa: int) -> list[dict[int, Frac]]:
    """log(1 + Σ_{k≥1} ε^k c_k(w)) as ε-coefficients of polynomials in w."""

    def mul(p, q):
        out = {}
        for i, a in p.items():
            for j, b in q.items():
                out[i + j] = out.get(i + j, Frac.const(0)) + a * b
        return out

    X = [{}] + [cs[k] for k in range(1, kappa + 1)]
    out = [{} for _ in range(kappa + 1)]
    power = [{0: Frac.const(1)}] + [{} for _ in range(kappa)]
    for n in range(1, kappa + 1):
        nxt = [{} for _ in range(kappa + 1)]
        for a in range(kappa + 1):
            for b in range(1, kappa + 1 - a):
                for j, c in mul(power[a], X[b]).items():
                    nxt[a + b][j] = nxt[a + b].get(j, Frac.const(0)) + c
        power = nxt
        sign = Fraction((-1) ** (n + 1), n)
        for k in range(kappa + 1):
            for j, c in power[k].items():
                out[k][j] = out[k].get(j, Frac.const(0)) + c * sign
    return out


def _series_exp(cs: list[dict[int, Frac]], kappa: int) -> list[dict[int, Frac]]:
    """exp(Σ_{k≥1} ε^k c_k(w)) as ε-coefficients of polynomials in w."""
    out = [{0: Frac.const(1)}] + [{} for _ in range(kappa)]
    term = [{0: Frac.const(1)}] + [{} for _ in range(kappa)]
    for n in range(1, kappa + 1):
        nxt = [{} for _ in range(kappa + 1)]
        for a in range(kappa + 1):
            for b in range(1, kappa + 1 - a):
                for i, p in term[a].items():
                    for j, q in cs[b].items():
                        nxt[a + b][i + j] = nxt[a + b].get(i + j, Frac.const(0)) + p * q * Fraction(1, n)
        term = nxt
        for k in range(kappa + 1):
            for j, c in term[k].items():
                out[k][j] = out[k].get(j, Frac.const(0)) + c
    return out


def extract_center(Z: PG, ctx: AlgebraContext) -> CenterValue:
    """Δ and ρ_{k,j} from Z = Δ⁻¹ exp(Σ ε^k Σ_j ρ_{k,j} w^j / Δ^{2k−j})."""
    kappa = Z.P.kappa
    M = w_coefficients(Z, ctx)
    if any(j for (k, j) in M if k == 0):
        raise InvariantError("ε⁰ part is not a scalar")
    z0 = M.get((0, 0))
    if z0 is None or z0.is_zero():
        raise InvariantError("ε⁰ part vanishes")
    delta = z0.inverse()
    for (k, j) in M:
        if j > 2 * k:
            raise InvariantError(f"M_{k},{j} is nonzero above the structure bound")
    scaled = [{} for _ in range(kappa + 1)]
    for (k, j), c in M.items():
        if k:
            scaled[k][j] = c * delta
    logs = _series_log(scaled, kappa)
    rho = {}
    for k in range(1, kappa + 1):
        for j, c in logs[k].items():
            r = c * delta ** (2 * k - j) if 2 * k >= j else c / delta ** (j - 2 * k)
            if not r.is_zero():
                rho[(k, j)] = r
    return CenterValue(kappa, delta, rho, M)


def reconstruct(cv: CenterValue, ctx: AlgebraContext, label: str = "0") -> PG:
    """The one-strand value rebuilt from Δ and the ρ_{k,j}."""
    kappa = cv.order
    d = cv.alexander
    cs = [{} for _ in range(kappa + 1)]
    for (k, j), r in cv.rho.items():
        cs[k][j] = r / d ** (2 * k - j) if 2 * k >= j else r * d ** (j - 2 * k)
    ex = _series_exp(cs, kappa)
    W = casimir_powers(ctx)
    out = [Frac.const(0)] * (kappa + 1)
    for k in range(kappa + 1):
        for j, c in ex[k].items():
            Wj = W[j].coeffs
            for n in range(k, kappa + 1):
                out[n] = out[n] + c * Wj[n - k] / d
    f = PG((), ("0",), {}, {}, EpsSeries(out))
    return relabel(f, {"0": label}) if label != "0" else f


def localize_t(Z: PG, label: str) -> PG:
    """Turn the global T of a one-strand value into the T of its strand."""
    return fuse(Z, {GLOBAL: label})


def whitehead_value(companion, ctx: AlgebraContext) -> PG:
    """0-framed value of the untwisted Whitehead double of a knot program."""
    from .tangles import whitehead_program

    inner = localize_t(knot_value(companion, ctx), "0")
    Z = evaluate_Z(whitehead_program("0", "0"), ctx, global_t=False, start=inner)
    return globalize_t(Z)


# -- reports -------------------------------------------------------------------

def laurent_T(f: Frac) -> dict[Fraction, Fraction]:
    """Exponent -> coefficient of a Laurent polynomial in the global T."""
    t = vname("T", GLOBAL)
    out = {}
    for key, c in f.laurent().items():
        d = dict(key)
        if set(d) - {t}:
            raise InvariantError(f"{f} is not a Laurent polynomial in T")
        out[Fraction(int(d.get(t, 0)), 2)] = c
    return out


def from_laurent(cs: dict) -> Frac:
    return sum((Frac.monomial({vname("T", GLOBAL): int(2 * Fraction(e))}, c) for e, c in cs.items()),
               Frac.const(0))


def alexander_scalar(coeffs) -> Frac:
    """Δ from symmetric integer coefficients listed from T^{-g} to T^{g}."""
    g = Fraction(len(coeffs) - 1, 2)
    return from_laurent({d - g: c for d, c in enumerate(coeffs)})


def degree(f: Frac) -> Fraction | None:
    """Highest exponent of T; None for the zero polynomial."""
    cs = laurent_T(f)
    return max(cs) if cs else None


def is_integral(f: Frac) -> bool:
    try:
        return all(c.denominator == 1 for c in laurent_T(f).values())
    except (InvariantError, ArithmeticError):
        return False


def is_palindromic(f: Frac) -> bool:
    cs = laurent_T(f)
    return all(cs.get(-e) == c for e, c in cs.items())


def plus_part(f: Frac) -> dict[Fraction, Fraction]:
    """Monomials with non-negative exponent."""
    return {e: c for e, c in laurent_T(f).items() if e >= 0}


def rho11_expected(delta: Frac) -> Frac:
    """2T Δ'/(1−T) with ħ = 1."""
    dT = delta.log_derivative(vname("T", GLOBAL)) / T_(1)
    return T_(1) * dT * 2 / (1 - T_(1))


def T_(n) -> Frac:
    return Frac.monomial({vname("T", GLOBAL): int(2 * Fraction(n))})


def rho1_plus_scalar(cv: CenterValue) -> Frac:
    return cv.rho_kj(1, 0) * T_(1) / (T_(1) - 1) ** 2


def rho2_plus_scalar(cv: CenterValue) -> Frac:
    """ρ_{2,0} with the universal factor (T−1)²/(−4T) divided out."""
    return cv.rho_kj(2, 0) * T_(1) * (-4) / (T_(1) - 1) ** 2


@dataclass
class GenusReport:
    genus: int
    degree: Fraction | None
    ok: bool

    @property
    def half_degree(self) -> Fraction:
        return (self.degree or Fraction(0)) / 2


def genus_report(cv: CenterValue, genus: int) -> GenusReport:
    d = degree(cv.rho_kj(1, 0))
    return GenusReport(genus, d, d is None or d <= 2 * genus)


@dataclass
class WhiteheadReport:
    v2: Fraction
    delta_ok: bool
    rho_ok: bool
    expected: Frac

    @property
    def ok(self) -> bool:
        return self.delta_ok and self.rho_ok


def whitehead_report(cv: CenterValue, v2) -> WhiteheadReport:
    """Δ = 1 and ρ_{1,0} = −4 v₂ (T^{1/2} − T^{−1/2})²."""
    expected = (T_(Fraction(1, 2)) - T_(Fraction(-1, 2))) ** 2 * (-4 * Fraction(v2))
    return WhiteheadReport(Fraction(v2), cv.alexander == Frac.const(1), cv.rho_kj(1, 0) == expected, expected)


# -- output -----------------------------------------------------------------------

def _exp_text(e: Fraction) -> str:
    return str(e.numerator) if e.denominator == 1 else f"{e.numerator}/{e.denominator}"


def laurent_json(f: Frac) -> dict[str, str]:
    return {_exp_text(e): _exp_text(c) for e, c in sorted(laurent_T(f).items())}


def laurent_text(cs: dict[Fraction, Fraction]) -> str:
    """Highest power first, e.g. T^3+T^2+4T+9."""
    out = []
    for e in sorted(cs, reverse=True):
        c = cs[e]
        if not c:
            continue
        mono = "" if e == 0 else ("T" if e == 1 else f"T^{_exp_text(e)}")
        mag = abs(c)
        coef = _exp_text(mag) if (mag != 1 or not mono) else ""
        if mono and coef and "/" in coef:
            coef = f"({coef})"
        sign = "-" if c < 0 else "+"
        out.append((sign, coef + mono))
    if not out:
        return "0"
    text = ("-" if out[0][0] == "-" else "") + out[0][1]
    return text + "".join(s + t for s, t in out[1:])


@dataclass
class KnotResult:
    name: str
    order: int
    center: CenterValue
    checks: dict[str, bool]
    millis: int = 0

    def normalized(self) -> dict[str, str]:
        cv = self.center
        out = {"delta_plus": laurent_text(plus_part(cv.alexander))}
        out["rho1_plus"] = laurent_text(plus_part(rho1_plus_scalar(cv))) if cv.order >= 1 else ""
        out["rho2_plus"] = laurent_text(plus_part(rho2_plus_scalar(cv))) if cv.order >= 2 else ""
        return out

    def to_json(self) -> dict:
        cv = self.center
        return {
            "name": self.name,
            "order": self.order,
            "alexander": laurent_json(cv.alexander),
            "rho": {f"{k},{j}": laurent_json(r) for (k, j), r in sorted(cv.rho.items())},
            "normalized": self.normalized(),
            "checks": dict(self.checks),
        }


def analyze(name: str, program, ctx: AlgebraContext, *, alexander_ref=None) -> KnotResult:
    """Evaluate, extract and run the built-in consistency checks."""
    Z = knot_value(program, ctx)
    cv = extract_center(Z, ctx)
    checks = {"reconstruction": pg_equal(reconstruct(cv, ctx), Z)}
    checks["alexander_symmetric"] = is_palindromic(cv.alexander)
    checks["alexander_at_one"] = cv.alexander.evaluate({vname("T", GLOBAL): 1}) == Frac.const(1)
    if alexander_ref is not None:
        checks["alexander_oracle"] = cv.alexander == alexander_scalar(alexander_ref)
    if cv.order >= 1:
        checks["rho11_formula"] = cv.rho_kj(1, 1) == rho11_expected(cv.alexander)
        checks["rho12_zero"] = cv.rho_kj(1, 2).is_zero()
        checks["rho1_integral"] = all(is_integral(cv.rho_kj(1, j)) for j in range(3))
        checks["rho1_plus_palindromic"] = is_palindromic(rho1_plus_scalar(cv))
    if cv.order >= 2:
        checks["rho2_plus_integral"] = is_integral(rho2_plus_scalar(cv))
        checks["rho2_plus_palindromic"] = is_palindromic(rho2_plus_scalar(cv))
    return KnotResult(name, cv.order, cv, checks)
