"""Programs describing rotational tangles, and their construction.

A program is a whitespace separated list of statements::

    X[i,j]  Xbar[i,j]  C[i]  Cbar[i]  One[i]  v[i]  vbar[i]
    m[i,j>k]  Delta[i>r,l]  S[i]  Sbar[i]  Eps[i]

Generators introduce fresh strand labels; the remaining statements act on
live labels. Labels are any run of word characters, primes allowed.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from importlib import resources

GENERATORS = {"X": 2, "Xbar": 2, "C": 1, "Cbar": 1, "One": 1, "v": 1, "vbar": 1}
UNARY = ("S", "Sbar")
_STMT = re.compile(r"([A-Za-z]+)\[([^\]]*)\]")
_LABEL = re.compile(r"^[\w′']+$")


class ProgramError(ValueError):
    pass


@dataclass(frozen=True)
class Statement:
    op: str
    args: tuple[str, ...]
    out: tuple[str, ...] = ()

    def render(self) -> str:
        if self.op == "m":
            return f"m[{self.args[0]},{self.args[1]}>{self.out[0]}]"
        if self.op == "Delta":
            return f"Delta[{self.args[0]}>{self.out[0]},{self.out[1]}]"
        return f"{self.op}[{','.join(self.args)}]"


@dataclass
class Program:
    statements: list[Statement] = field(default_factory=list)

    def render(self) -> str:
        return " ".join(s.render() for s in self.statements)

    __str__ = render

    def live_labels(self) -> list[str]:
        return _check(self.statements)

    def __add__(self, other: "Program") -> "Program":
        return Program(self.statements + other.statements)


def _labels(text: str, pos: int) -> list[str]:
    labs = [t.strip() for t in text.split(",")]
    for l in labs:
        if not _LABEL.match(l):
            raise ProgramError(f"bad label {l!r} at offset {pos}")
    return labs


def _parse_stmt(op: str, body: str, pos: int) -> Statement:
    if op in GENERATORS:
        labs = _labels(body, pos)
        if len(labs) != GENERATORS[op]:
            raise ProgramError(f"{op} takes {GENERATORS[op]} labels (offset {pos})")
        return Statement(op, tuple(labs))
    if op == "m":
        if body.count(">") != 1:
            raise ProgramError(f"merge needs the form m[i,j>k] (offset {pos})")
        left, right = body.split(">")
        a = _labels(left, pos)
        b = _labels(right, pos)
        if len(a) != 2 or len(b) != 1:
            raise ProgramError(f"merge needs the form m[i,j>k] (offset {pos})")
        return Statement("m", tuple(a), tuple(b))
    if op == "Delta":
        if body.count(">") != 1:
            raise ProgramError(f"doubling needs the form Delta[i>r,l] (offset {pos})")
        left, right = body.split(">")
        a = _labels(left, pos)
        b = _labels(right, pos)
        if len(a) != 1 or len(b) != 2:
            raise ProgramError(f"doubling needs the form Delta[i>r,l] (offset {pos})")
        return Statement("Delta", tuple(a), tuple(b))
    if op in UNARY or op == "Eps":
        labs = _labels(body, pos)
        if len(labs) != 1:
            raise ProgramError(f"{op} takes one label (offset {pos})")
        return Statement(op, tuple(labs))
    raise ProgramError(f"unknown statement {op!r} at offset {pos}")


def _check(stmts) -> list[str]:
    """Validate label flow; returns the live labels in order of appearance."""
    live: dict[str, None] = {}

    def intro(l, st):
        if l in live:
            raise ProgramError(f"label {l!r} reused in {st.render()}")
        live[l] = None

    def use(l, st):
        if l not in live:
            raise ProgramError(f"unknown label {l!r} in {st.render()}")

    for st in stmts:
        if st.op in GENERATORS:
            if len(set(st.args)) != len(st.args):
                raise ProgramError(f"repeated label in {st.render()}")
            for l in st.args:
                intro(l, st)
        elif st.op == "m":
            i, j = st.args
            if i == j:
                raise ProgramError(f"cannot merge {i!r} with itself")
            use(i, st)
            use(j, st)
            del live[i], live[j]
            intro(st.out[0], st)
        elif st.op == "Delta":
            r, l = st.out
            if r == l:
                raise ProgramError(f"repeated label in {st.render()}")
            use(st.args[0], st)
            del live[st.args[0]]
            intro(r, st)
            intro(l, st)
        elif st.op == "Eps":
            use(st.args[0], st)
            del live[st.args[0]]
        else:
            use(st.args[0], st)
    return list(live)


def parse_program(text: str) -> Program:
    stmts = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _STMT.match(text, pos)
        if not m:
            raise ProgramError(f"cannot parse statement at offset {pos}: {text[pos:pos + 20]!r}")
        stmts.append(_parse_stmt(m.group(1), m.group(2), pos))
        pos = m.end()
    _check(stmts)
    return Program(stmts)


def as_program(p) -> Program:
    return parse_program(p) if isinstance(p, str) else p


def render_program(p: Program) -> str:
    return p.render()


def writhe_and_rotation(p) -> tuple[int, dict[str, int]]:
    """Self-writhe summed over components, and rotation number per live strand.

    A crossing counts only when both of its strands end up on the same
    component. Doubling copies the rotation of a strand to both children and
    forgets crossings made before it; S and S̄ negate the rotation.
    """
    p = as_program(p)
    parent: dict[str, str] = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    crossings: list[tuple[str, str, int]] = []
    kinks: list[tuple[str, int]] = []
    rot: dict[str, int] = {}
    node = {}  # live label -> union-find node
    fresh = 0

    def new_node(lab):
        nonlocal fresh
        fresh += 1
        n = f"{lab}#{fresh}"
        parent[n] = n
        node[lab] = n
        return n

    for st in p.statements:
        if st.op in ("X", "Xbar"):
            a, b = (new_node(l) for l in st.args)
            crossings.append((a, b, 1 if st.op == "X" else -1))
            rot.update({st.args[0]: 0, st.args[1]: 0})
        elif st.op in ("C", "Cbar", "One"):
            new_node(st.args[0])
            rot[st.args[0]] = {"C": 1, "Cbar": -1, "One": 0}[st.op]
        elif st.op in ("v", "vbar"):
            kinks.append((new_node(st.args[0]), -1 if st.op == "v" else 1))
            rot[st.args[0]] = 1 if st.op == "v" else -1
        elif st.op == "m":
            i, j = st.args
            a, b = find(node.pop(i)), find(node.pop(j))
            parent[b] = a
            node[st.out[0]] = a
            rot[st.out[0]] = rot.pop(i) + rot.pop(j)
        elif st.op == "Delta":
            old = find(node.pop(st.args[0]))
            crossings = [c for c in crossings if find(c[0]) != old and find(c[1]) != old]
            kinks = [k for k in kinks if find(k[0]) != old]
            r = rot.pop(st.args[0])
            for lab in st.out:
                new_node(lab)
                rot[lab] = r
        elif st.op in UNARY:
            rot[st.args[0]] = -rot[st.args[0]]
        elif st.op == "Eps":
            node.pop(st.args[0])
            rot.pop(st.args[0])
    writhe = sum(s for a, b, s in crossings if find(a) == find(b)) + sum(s for _, s in kinks)
    return writhe, rot


# -- braids ----------------------------------------------------------------------

def braid_permutation(word, n: int) -> list[int]:
    """perm[p] = top position reached by the strand starting at bottom position p."""
    pos = list(range(n))  # pos[strand] = current position
    at = list(range(n))  # at[position] = strand
    for g in word:
        k = abs(g) - 1
        a, b = at[k], at[k + 1]
        at[k], at[k + 1] = b, a
        pos[a], pos[b] = k + 1, k
    return pos


def braid_strands(word) -> int:
    return max((abs(g) for g in word), default=0) + 1


def braid_to_program(word, n: int | None = None, out: str = "0") -> Program:
    """Rotational long knot whose closure is the closure of the braid word.

    σ_k (positive) is X[over, under] with the strand at position k passing
    over to position k+1. The knot is cut at the bottom of position 1 and the
    closure arcs of positions 2..n each contribute a clockwise C̄.
    """
    word = [int(g) for g in word]
    if any(g == 0 for g in word):
        raise ProgramError("braid generators are nonzero integers")
    n = max(n or 1, braid_strands(word))
    perm = braid_permutation(word, n)
    # cycle check
    seen, p = [], 0
    while p not in seen:
        seen.append(p)
        p = perm[p]
    if len(seen) != n:
        raise ProgramError("braid closure has more than one component")
    if not word:
        return Program([Statement("One", (out,))])
    stmts: list[Statement] = []
    seg: list[str | None] = [None] * n  # label of the running segment at each position
    start: list[int] = list(range(n))  # bottom position where that segment began
    counter = 0

    def extend(p: int, lab: str):
        nonlocal counter
        if seg[p] is None:
            seg[p] = lab
        else:
            counter += 1
            new = f"s{counter}"
            stmts.append(Statement("m", (seg[p], lab), (new,)))
            seg[p] = new

    for c, g in enumerate(word, 1):
        k = abs(g) - 1
        lo, hi = f"c{c}l", f"c{c}r"  # strand leaving position k, strand leaving k+1
        if g > 0:
            stmts.append(Statement("X", (lo, hi)))
        else:
            stmts.append(Statement("Xbar", (hi, lo)))
        extend(k, lo)
        extend(k + 1, hi)
        seg[k], seg[k + 1] = seg[k + 1], seg[k]
        start[k], start[k + 1] = start[k + 1], start[k]
    # seg[q] is now the segment ending at top position q; order them from bottom 1
    by_start = {start[q]: seg[q] for q in range(n)}
    order = [0]
    while len(order) < n:
        order.append(perm[order[-1]])
    acc = by_start[order[0]]
    for idx, b in enumerate(order[1:], 1):
        cl = f"k{idx}"
        stmts.append(Statement("Cbar", (cl,)))
        counter += 1
        mid = f"s{counter}"
        stmts.append(Statement("m", (acc, cl), (mid,)))
        counter += 1
        nxt = f"s{counter}"
        stmts.append(Statement("m", (mid, by_start[b]), (nxt,)))
        acc = nxt
    last = stmts[-1]
    stmts[-1] = Statement("m", last.args, (out,))
    _check(stmts)
    return Program(stmts)


# -- Hopf-algebra built programs -----------------------------------------------------

def whitehead_program(inner: str = "0", out: str = "0") -> Program:
    """The doubling operation: one strand in, its untwisted Whitehead double out.

    The strand is doubled into j and k, j is reversed, and the clasp is made of
    two crossings, two negative kinks and a pair of opposite spinners.
    """
    st = [
        Statement("Delta", (inner,), ("wj", "wk")),
        Statement("S", ("wj",)),
        Statement("X", ("w1", "w8")),
        Statement("X", ("w6", "w2")),
        Statement("v", ("w3",)),
        Statement("v", ("w4",)),
        Statement("Cbar", ("w7",)),
        Statement("C", ("w5",)),
    ]
    chain = ["w1", "w2", "w3", "w4", "wj", "w5", "w6", "w7", "w8", "wk"]
    acc = chain[0]
    for n, lab in enumerate(chain[1:], 1):
        new = out if n == len(chain) - 1 else f"wm{n}"
        st.append(Statement("m", (acc, lab), (new,)))
        acc = new
    return Program(st)


def seifert_band(i: str = "i", j: str = "j", out: str = "k") -> Program:
    """Ribbon band joining two Seifert-surface strands i and j into one."""
    st = [
        Statement("C", ("b3",)),
        Statement("C", ("b4",)),
        Statement("Delta", (i,), ("r1", "l1")),
        Statement("Delta", (j,), ("r2", "l2")),
        Statement("Sbar", ("r1",)),
        Statement("S", ("r2",)),
    ]
    chain = ["l1", "r2", "b3", "b4", "r1", "l2"]
    acc = chain[0]
    for n, lab in enumerate(chain[1:], 1):
        new = out if n == len(chain) - 1 else f"bm{n}"
        st.append(Statement("m", (acc, lab), (new,)))
        acc = new
    return Program(st)


# -- curated knots ---------------------------------------------------------------------

@dataclass(frozen=True)
class KnotRecord:
    name: str
    braid: tuple[int, ...] | None
    program: str | None
    alexander: tuple[int, ...] | None  # symmetric, from T^{-g} to T^{g}
    genus: int | None
    v2: int | None
    crossings: int

    def to_program(self, out: str = "0") -> Program:
        if self.program is not None:
            return parse_program(self.program)
        return braid_to_program(self.braid, out=out)


def load_knots() -> dict[str, KnotRecord]:
    raw = json.loads(resources.files("artifact").joinpath("data/knots.json").read_text())
    out = {}
    for rec in raw:
        refs = rec.get("refs", {})
        alex = refs.get("alexander")
        out[rec["name"]] = KnotRecord(
            rec["name"],
            tuple(rec["braid"]) if "braid" in rec else None,
            rec.get("program"),
            tuple(alex) if alex is not None else None,
            refs.get("genus"),
            refs.get("v2"),
            rec.get("crossings", 0),
        )
    return out
