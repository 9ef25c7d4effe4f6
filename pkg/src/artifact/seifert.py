"""Alexander polynomials of braid closures from their Seifert matrices.

This is the independent oracle for the ε⁰ part of the invariant. The closed
braid bounds the surface made of one disk per strand and one twisted band per
letter; its first homology is spanned by the loops running through two
consecutive bands of the same column.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def seifert_matrix(word: Sequence[int]) -> list[list[int]]:
    """Seifert matrix of the closure of a braid word (generators ±1, ±2, ...)."""
    columns: dict[int, list[tuple[int, int]]] = {}
    for pos, g in enumerate(word):
        columns.setdefault(abs(g), []).append((pos, 1 if g > 0 else -1))
    loops = []  # (column, first band, second band)
    for k in sorted(columns):
        bands = columns[k]
        loops += [(k, bands[i], bands[i + 1]) for i in range(len(bands) - 1)]
    n = len(loops)
    V = [[0] * n for _ in range(n)]
    for a, (k, (p1, e1), (p2, e2)) in enumerate(loops):
        V[a][a] = -(e1 + e2) // 2
        for b, (l, (q1, f1), (q2, f2)) in enumerate(loops):
            if a == b:
                continue
            if l == k and q1 == p2:
                # consecutive loops share the band at p2
                if e2 > 0:
                    V[a][b] = 1
                else:
                    V[b][a] = -1
            elif l == k + 1:
                # interleaved loops of neighbouring columns link once
                if p1 < q1 < p2 < q2:
                    V[a][b] = -1
                elif q1 < p1 < q2 < p2:
                    V[a][b] = 1
    return V


def _det(M: list[list[Fraction]]) -> Fraction:
    M = [row[:] for row in M]
    n, det = len(M), Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if M[r][c]), None)
        if p is None:
            return Fraction(0)
        if p != c:
            M[c], M[p] = M[p], M[c]
            det = -det
        det *= M[c][c]
        for r in range(c + 1, n):
            f = M[r][c] / M[c][c]
            if f:
                for j in range(c, n):
                    M[r][j] -= f * M[c][j]
    return det


def _interpolate(xs: Sequence[int], ys: Sequence[Fraction]) -> list[Fraction]:
    """Coefficients (lowest first) of the polynomial through the points."""
    n = len(xs)
    coeffs = [Fraction(0)] * n
    for i in range(n):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j in range(n):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for d in range(len(basis) - 1):
                basis[d] -= xs[j] * basis[d + 1]
            denom *= xs[i] - xs[j]
        for d in range(n):
            coeffs[d] += ys[i] * basis[d] / denom
    return coeffs


def alexander_from_seifert(V: list[list[int]]) -> list[int]:
    """Coefficients of det(V T^{1/2} − Vᵗ T^{−1/2}) from T^{−g} to T^{g}."""
    n = len(V)
    if n == 0:
        return [1]
    if n % 2:
        raise ValueError("a knot Seifert matrix has even size")
    xs = list(range(2, n + 3))
    ys = [_det([[Fraction(V[i][j] * t - V[j][i]) for j in range(n)] for i in range(n)]) for t in xs]
    cs = _interpolate(xs, ys)
    if any(c.denominator != 1 for c in cs):
        raise ArithmeticError("non-integral Alexander coefficients")
    return [int(c) for c in cs]


def trim(cs: Sequence[int]) -> list[int]:
    """Drop vanishing outer coefficients symmetrically."""
    cs = list(cs)
    while len(cs) > 1 and cs[0] == 0 and cs[-1] == 0:
        cs = cs[1:-1]
    return cs


def alexander_of_braid(word: Sequence[int]) -> list[int]:
    """Conway-normalized Alexander coefficients, symmetric about T⁰."""
    return trim(alexander_from_seifert(seifert_matrix(word)))


def v2_from_alexander(cs: Sequence[int]) -> Fraction:
    """Δ''(1)/2 for symmetric coefficients cs from T^{−g} to T^{g}."""
    g = (len(cs) - 1) // 2
    return Fraction(sum(c * (d - g) * (d - g - 1) for d, c in enumerate(cs)), 2)
