"""Corona transition matrices: the block construction for all-≥4 monomorphic
sequences, the per-family catalog, and the M1/M2 pair for [4,4,6,8].

Every matrix is stored with column = parent type and row = child type, so
v_{n+1} = M v_n and |F_n| = j . v_n.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .cyclic import as_sequence, format_sequence

WEDGE = "Wedge"
BRICK = "Brick"
NOTCHED = "NotchedBrick"
OTHER = "Other"


class TransitionError(ValueError):
    pass


@dataclass(frozen=True)
class FaceTypeId:
    kind: str
    index: int | None = None
    label: str | None = None

    def __str__(self):
        if self.kind == OTHER:
            return self.label
        return {WEDGE: "w", BRICK: "b", NOTCHED: "n"}[self.kind] + str(self.index)


def _fmt(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class TransitionMatrix:
    entries: tuple
    labels: tuple
    # weights of j in |F_n| = j . v_n; all ones except for reduced systems
    weights: tuple = ()
    name: str = ""

    def __post_init__(self):
        rows = tuple(tuple(Fraction(x) for x in r) for r in self.entries)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise TransitionError("matrix is not square")
        if len(self.labels) != n:
            raise TransitionError("label count does not match the matrix order")
        for r in rows:
            for x in r:
                if 4 % x.denominator:
                    raise TransitionError(f"entry {x} is not in (1/4)Z")
        object.__setattr__(self, "entries", rows)
        w = tuple(Fraction(x) for x in self.weights) or (Fraction(1),) * n
        if len(w) != n:
            raise TransitionError("weight count does not match the matrix order")
        object.__setattr__(self, "weights", w)

    @property
    def order(self):
        return len(self.entries)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def column_sums(self):
        n = self.order
        return [sum(self.entries[i][j] for i in range(n)) for j in range(n)]

    def apply(self, v):
        return [sum(a * b for a, b in zip(row, v)) for row in self.entries]

    def transpose(self):
        n = self.order
        return TransitionMatrix([[self.entries[j][i] for j in range(n)] for i in range(n)],
                                self.labels, self.weights, self.name)

    def to_dict(self):
        return {
            "name": self.name,
            "labels": [str(x) for x in self.labels],
            "weights": [_fmt(x) for x in self.weights],
            "entries": [[_fmt(x) for x in r] for r in self.entries],
        }

    def to_grid(self):
        cells = [[str(x) for x in self.labels]] + [[_fmt(x) for x in r] for r in self.entries]
        width = max(len(c) for r in cells for c in r)
        rows = []
        head = " " * (width + 1) + " ".join(c.rjust(width) for c in cells[0])
        rows.append(head)
        for lab, r in zip(self.labels, cells[1:]):
            rows.append(str(lab).rjust(width) + " " + " ".join(c.rjust(width) for c in r))
        return "\n".join(rows)


@dataclass
class DistributionVector:
    labels: tuple
    counts: list
    weights: tuple = field(default=())

    def total(self):
        w = self.weights or (1,) * len(self.counts)
        return sum(Fraction(a) * b for a, b in zip(w, self.counts))

    def to_dict(self):
        return {"labels": [str(x) for x in self.labels], "counts": [_fmt(x) for x in self.counts]}


@dataclass(frozen=True)
class OffspringCount:
    face_type: FaceTypeId
    value: Fraction


# offspring counts ------------------------------------------------------------

def offspring_counts(s, f):
    """Ω of a single wedge, brick or notched brick of the given type."""
    from .classification import MONOMORPHIC, match_pattern, uniformly_concentric_class

    s = as_sequence(s)
    # the counts are local, so Euclidean members of a monomorphic family qualify too
    hit = match_pattern(s)
    if hit is None or hit[0].morphism != MONOMORPHIC or not hit[0].parity_ok(hit[1]) \
            or not uniformly_concentric_class(s):
        raise TransitionError(f"{s} is not monomorphic in G44, G3+5 or G36")
    p = s.terms
    k = s.k
    i = f.index
    if i is None or not 1 <= i <= k:
        raise TransitionError(f"face index must lie in 1..{k}")

    def P(j):
        return p[j % k]

    def rest(excluded):
        ex = {j % k for j in excluded}
        return sum(p[j] for j in range(k) if j not in ex)

    if f.kind == WEDGE:
        v = Fraction(P(i - 2) + P(i), 2) - 2 * k + 3 + rest([i - 2, i - 1, i])
    elif f.kind == BRICK:
        v = Fraction(P(i - 3) + P(i), 2) - 2 * k + 5 + rest([i - 3, i - 2, i - 1, i])
    elif f.kind == NOTCHED:
        if P(i - 1) != 3:
            raise TransitionError(f"notched brick n{i} needs p_{i - 1} = 3, got {P(i - 1)}")
        v = Fraction(P(i - 3) + P(i + 1), 2) - 2 * k + 7 + rest([i - 3, i - 2, i - 1, i, i + 1])
    else:
        raise TransitionError(f"no offspring formula for {f}")
    return OffspringCount(f, v)


# block matrix ---------------------------------------------------------------

def block_matrix_g44(s):
    """2k x 2k matrix [[A, B], [C, D]] over wedges w1..wk and bricks b1..bk."""
    s = as_sequence(s)
    if s.k < 4 or min(s.terms) < 4:
        raise TransitionError(f"{s} is not an all->=4 sequence of length >= 4")
    from .classification import MONOMORPHIC, classify

    if classify(s).morphism != MONOMORPHIC:
        raise TransitionError(f"{s} is not monomorphic")
    return _block(s.terms)


def _block(p):
    k = len(p)
    n = 2 * k
    m = [[Fraction(0)] * n for _ in range(n)]
    for i in range(k):
        x = p[i]
        h = Fraction(x - 4, 2)
        for j in range(k):
            d = (j - i) % k
            m[i][j] = 0 if d == 0 else h if d in (1, k - 1) else x - 3
            m[i][k + j] = 0 if d in (0, 1) else h if d in (2, k - 1) else x - 3
            m[k + i][j] = 0 if d in (0, 1) else 1
            m[k + i][k + j] = 0 if d in (0, 1, k - 1) else 1
    labels = [FaceTypeId(WEDGE, i + 1) for i in range(k)] + [FaceTypeId(BRICK, i + 1) for i in range(k)]
    return TransitionMatrix(m, tuple(labels), name=f"block {format_sequence(p)}")


# catalog --------------------------------------------------------------------

F = Fraction
half = F(1, 2)


def h(x):
    return F(x - 4, 2)


def t(x):
    return F(3 * x - 10, 2)


def _pp3(b):
    p = b["p"]
    return [[F(p, 2) - 4, -1], [1, 0]]


def _ppq(b):
    p, q = b["p"], b["q"]
    return [[h(p), p - 4, -1, 0], [h(q), 0, 0, -1], [1, 0, 0, 0], [0, 1, 0, 0]]


def _4pq(b):
    p, q = b["p"], b["q"]
    return [[0, h(p), -1, 0], [h(q), 0, 0, -1], [1, 0, 0, 0], [0, 1, 0, 0]]


def _pqr(b):
    p, q, r = b["p"], b.get("q", b["p"]), b.get("r", b["p"])
    return [[0, h(p), h(p), -1, 0, 0],
            [h(q), 0, h(q), 0, -1, 0],
            [h(r), h(r), 0, 0, 0, -1],
            [1, 0, 0, 0, 0, 0],
            [0, 1, 0, 0, 0, 0],
            [0, 0, 1, 0, 0, 0]]


def _ppqq(b):
    p, q = b["p"], b["q"]
    return [[h(p), t(p), h(p), 0, p - 4],
            [t(q), h(q), h(q), q - 4, 0],
            [1, 1, 1, 0, 0],
            [0, 1, 0, 0, 1],
            [1, 0, 0, 1, 0]]


def _3p4p(b):
    p = b["p"]
    return [[p - 3, p - 4, p - 4, h(p), h(p), -2, 0],
            [0] * 7,
            [0, 1, 0, 0, 0, 0, 0],
            [1, 2, 0, 0, 1, -2, 0],
            [0, 0, 2, 0, 0, 2, 0],
            [half, 0, 0, half, 0, 0, 0],
            [0, 0, 0, 0, 0, 1, 0]]


def _3pqp(b):
    p, q = b["p"], b["q"]
    return [[p - 3, p - 4, p - 4, h(p), h(p), 0],
            [0] * 6,
            [h(q), q - 3, 0, 0, h(q), -1],
            [1, 2, 0, 0, 1, 0],
            [0, 0, 2, 0, 0, 0],
            [half, 0, 0, half, 0, 0]]


def _pqpr(b):
    p, q, r = b["p"], b["q"], b["r"]
    return [[p - 3, p - 4, p - 4, h(p), h(p)],
            [h(q), 0, q - 3, 0, h(q)],
            [h(r), r - 3, 0, h(r), 0],
            [1, 0, 2, 0, 1],
            [1, 2, 0, 1, 0]]


def _pqrs(b):
    p, q, r, s = b["p"], b["q"], b["r"], b["s"]
    return [[0, h(p), p - 3, h(p), 0, 0, h(p), h(p)],
            [h(q), 0, h(q), q - 3, h(q), 0, 0, h(q)],
            [r - 3, h(r), 0, h(r), h(r), h(r), 0, 0],
            [h(s), s - 3, h(s), 0, 0, h(s), h(s), 0],
            [0, 1, 1, 0, 0, 0, 1, 0],
            [0, 0, 1, 1, 0, 0, 0, 1],
            [1, 0, 0, 1, 1, 0, 0, 0],
            [1, 1, 0, 0, 0, 1, 0, 0]]


def _3333p(b):
    p = b["p"]
    return [[0, 0, h(p), 0, h(p), -1],
            [0, 0, 1, 0, 0, 0],
            [1, 0, 0, 0, 0, 0],
            [0, 0, half, 0, half, 0],
            [1, half, 0, 0, 0, 0],
            [0, half, 0, 0, 0, 0]]


def _333pp(b):
    p = b["p"]
    return [[h(p), h(p), t(p), 0, p - 4, h(p)],
            [1, 1, 0, 0, 0, 0],
            [1, 0, 0, 0, 0, 0],
            [0, 0, 1, 0, 1, 0],
            [half, 0, 0, 1, 0, 0],
            [0, half, half, 0, 0, half]]


def _33p3p(b):
    p = b["p"]
    return [[p - 3, h(p), h(p)], [1, 1, 0], [1, half, half]]


def _33p3q(b):
    p, q = b["p"], b["q"]
    return [[0, p - 3, 0, h(p), h(p), 0],
            [q - 3, 0, h(q), 0, 0, h(q)],
            [0, 1, 0, 1, 0, 0],
            [1, 0, 1, 0, 0, 0],
            [1, 0, half, 0, 0, half],
            [0, 1, 0, half, half, 0]]


def _ppqrq(b):
    p, q, r = b["p"], b["q"], b["r"]
    return [[h(p), t(p), 2 * p - 6, h(p), 0, t(p)],
            [t(q), q - 3, q - 4, q - 3, q - 4, h(q)],
            [r - 3, h(r), 0, h(r), r - 3, 0],
            [1, 1, 2, 1, 0, 1],
            [0, 1, 1, 0, 0, 1],
            [2, 1, 0, 1, 2, 0]]


def _ppq3q(b):
    p, q = b["p"], b["q"]
    return [[h(p), t(p), h(p), 0, t(p), p - 4],
            [t(q), q - 3, q - 3, q - 4, h(q), 0],
            [1, 1, 1, 0, 1, 0],
            [0, 1, 0, 0, 1, 1],
            [2, 0, 0, 2, 0, 0],
            [0, half, half, 0, 0, 0]]


def _pqrst(b):
    p, q, r, s, u = b["p"], b["q"], b["r"], b["s"], b["t"]
    return [[0, h(p), p - 3, p - 3, h(p), 0, 0, h(p), p - 3, h(p)],
            [h(q), 0, h(q), q - 3, q - 3, h(q), 0, 0, h(q), q - 3],
            [r - 3, h(r), 0, h(r), r - 3, r - 3, h(r), 0, 0, h(r)],
            [s - 3, s - 3, h(s), 0, h(s), h(s), s - 3, h(s), 0, 0],
            [h(u), u - 3, u - 3, h(u), 0, 0, h(u), u - 3, h(u), 0],
            [0, 1, 1, 1, 0, 0, 0, 1, 1, 0],
            [0, 0, 1, 1, 1, 0, 0, 0, 1, 1],
            [1, 0, 0, 1, 1, 1, 0, 0, 0, 1],
            [1, 1, 0, 0, 1, 1, 1, 0, 0, 0],
            [1, 1, 1, 0, 0, 0, 1, 1, 0, 0]]


def _ppqppq(b):
    p, q = b["p"], b["q"]
    return [[F(5 * p - 16, 2), 3 * p - 10, 2 * p - 7, 2 * p - 6],
            [t(q), q - 3, q - 3, q - 4],
            [3, 2, 2, 2],
            [1, 2, 1, 1]]


def _pqqprr(b):
    p, q, r = b["p"], b["q"], b["r"]
    return [[p - 3, t(p), t(p), p - 3, p - 3, p - 4, p - 4],
            [t(q), h(q), 2 * q - 6, t(q), h(q), 0, 2 * q - 6],
            [t(r), 2 * r - 6, h(r), h(r), t(r), 2 * r - 6, 0],
            [1, 2, 1, 1, 1, 2, 0],
            [1, 1, 2, 1, 1, 0, 2],
            [1, 0, 1, 1, 0, 0, 1],
            [1, 1, 0, 0, 1, 1, 0]]


def _pqprsr(b, s_key="s"):
    p, q, r, s = b["p"], b["q"], b["r"], b[s_key]
    return [[p - 3, p - 4, t(p), 2 * p - 6, p - 3, h(p), t(p)],
            [h(q), 0, q - 3, q - 3, h(q), 0, q - 3],
            [t(r), 2 * r - 6, r - 3, r - 4, r - 3, t(r), h(r)],
            [s - 3, s - 3, h(s), 0, h(s), s - 3, 0],
            [1, 2, 1, 2, 1, 1, 1],
            [1, 0, 2, 2, 1, 0, 2],
            [2, 2, 1, 0, 1, 2, 0]]


def _pqprqr(b):
    return _pqprsr(b, "q")


def _pqrpqr(b):
    p, q, r = b["p"], b["q"], b["r"]
    return [[p - 3, t(p), t(p), p - 3, p - 3, p - 4],
            [t(q), q - 3, t(q), q - 4, q - 3, q - 3],
            [t(r), t(r), r - 3, r - 3, r - 4, r - 3],
            [1, 2, 1, 1, 1, 1],
            [1, 1, 2, 1, 1, 1],
            [2, 1, 1, 1, 1, 1]]


def _hexa_top(vals):
    # wedge and brick rows of the 12x12 matrices for six distinct letters
    rows = []
    pats = [
        ["0", "h", "3", "3", "3", "h", "0", "0", "h", "3", "3", "h"],
        ["h", "0", "h", "3", "3", "3", "h", "0", "0", "h", "3", "3"],
        ["3", "h", "0", "h", "3", "3", "3", "h", "0", "0", "h", "3"],
        ["3", "3", "h", "0", "h", "3", "3", "3", "h", "0", "0", "h"],
        ["3", "3", "3", "h", "0", "h", "h", "3", "3", "h", "0", "0"],
        ["h", "3", "3", "3", "h", "0", "0", "h", "3", "3", "h", "0"],
    ]
    for x, pat in zip(vals, pats):
        rows.append([0 if c == "0" else h(x) if c == "h" else x - 3 for c in pat])
    return rows


def _pqrpst(b):
    vals = [b["p"], b["q"], b["r"], b["p"], b["s"], b["t"]]
    return _hexa_top(vals) + [
        [0, 0, 1, 1, 1, 1, 0, 0, 1, 1, 1, 0],
        [1, 0, 0, 1, 1, 1, 0, 0, 0, 1, 1, 1],
        [1, 1, 0, 0, 1, 1, 1, 0, 0, 0, 1, 1],
        [1, 1, 1, 0, 0, 1, 1, 1, 0, 0, 0, 1],
        [1, 1, 1, 1, 0, 0, 1, 1, 1, 0, 0, 0],
        [0, 1, 1, 1, 1, 0, 0, 1, 1, 1, 0, 0]]


def _pqrstu(b):
    vals = [b["p"], b["q"], b["r"], b["s"], b["t"], b["u"]]
    return _hexa_top(vals) + [
        [0, 1, 1, 1, 1, 0, 0, 0, 1, 1, 1, 0],
        [0, 0, 1, 1, 1, 1, 0, 0, 0, 1, 1, 1],
        [1, 0, 0, 1, 1, 1, 1, 0, 0, 0, 1, 1],
        [1, 1, 0, 0, 1, 1, 1, 1, 0, 0, 0, 1],
        [1, 1, 1, 0, 0, 1, 1, 1, 1, 0, 0, 0],
        [1, 1, 1, 1, 0, 0, 0, 1, 1, 1, 0, 0]]


def _pp3pp3(b):
    p = b["p"]
    return [[F(5 * p - 16, 2), 3 * p - 10, 2 * p - 7, 2 * p - 6, p - 4],
            [0] * 5,
            [2, 2, 2, 0, 2],
            [1, 0, 1, 1, 0],
            [half, 0, 0, 1, 0]]


def _333pqp(b):
    p, q = b["p"], b["q"]
    return [[p - 3, p - 4, p - 3, t(p), h(p), p - 3, p - 4],
            [h(q), 0, h(q), q - 3, 0, h(q), q - 3],
            [1, 2, 1, 0, 1, 0, 0],
            [1, 2, 0, 0, 1, 0, 0],
            [1, 0, 1, 2, 0, 1, 2],
            [0, 0, half, half, 0, half, 0],
            [half, 0, 0, 0, half, 0, 0]]


def _p3pq3q(b):
    p, q = b["p"], b["q"]
    return [[p - 3, t(p), p - 3, h(p), t(p), 0, p - 4],
            [t(q), q - 3, q - 3, t(q), h(q), q - 4, 0],
            [1, 1, 1, 1, 1, 0, 0],
            [0, 2, 0, 0, 2, 0, 2],
            [2, 0, 0, 2, 0, 2, 0],
            [half, 0, half, 0, 0, 0, 0],
            [0, half, half, 0, 0, 0, 0]]


def _3p3q3r(b):
    p, q, r = b["p"], b["q"], b["r"]
    mid = [[0, 0, 1, 1, 0, 0, 0, 0, 1, 0, 0, 0],
           [1, 0, 0, 0, 1, 1, 0, 0, 0, 0, 0, 0],
           [0, 1, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0]]
    return [[0, p - 3, p - 3, h(p), 0, 0, h(p), p - 3, p - 3, 0, 0, p - 3],
            [q - 3, 0, q - 3, q - 3, q - 3, h(q), 0, 0, h(q), q - 3, 0, 0],
            [r - 3, r - 3, 0, 0, h(r), r - 3, r - 3, h(r), 0, 0, r - 3, 0]] + mid + [list(x) for x in mid] + [
            [0, 1, 0, 0, 0, 0, half, half, 0, 0, half, half],
            [0, 0, 1, half, 0, 0, 0, 0, half, half, 0, half],
            [1, 0, 0, 0, half, half, 0, 0, 0, half, half, 0]]


def _p3pqrq(b):
    p, q, r = b["p"], b["q"], b["r"]
    return [[p - 3, t(p), 2 * p - 6, p - 3, h(p), t(p), 0],
            [t(q), q - 3, q - 4, q - 3, t(q), h(q), q - 4],
            [r - 3, h(r), 0, h(r), r - 3, 0, r - 3],
            [1, 1, 2, 1, 1, 1, 0],
            [0, 2, 2, 0, 0, 2, 0],
            [2, 1, 0, 1, 2, 0, 2],
            [half, 0, 0, half, 0, 0, 0]]


_M1 = [[0, 0, 0, 1, 0, 0, 0, 0],
       [0, 0, 1, 0, 0, 0, 0, 0],
       [3, 1, 0, 1, 1, 1, 0, 0],
       [2, 5, 2, 0, 0, 2, 2, 0],
       [0, 1, 1, 0, 0, 0, 1, 0],
       [0, 0, 1, 1, 0, 0, 0, 1],
       [1, 0, 0, 1, 1, 0, 0, 0],
       [1, 1, 0, 0, 0, 1, 0, 0]]


def m1_matrix():
    return TransitionMatrix(_M1, _other_labels(8), name="M1 [4,4,6,8] T1")


def m2_matrix():
    m = [list(r) for r in _M1]
    m[0][2:4] = [1, 0]
    m[1][2:4] = [0, 1]
    return TransitionMatrix(m, _other_labels(8), name="M2 [4,4,6,8] T2")


BUILDERS = {
    "pp3": _pp3, "ppq": _ppq, "4pq": _4pq, "pqr": _pqr, "ppqq": _ppqq, "3p4p": _3p4p,
    "3pqp": _3pqp, "pqpr": _pqpr, "pqrs": _pqrs, "3333p": _3333p, "333pp": _333pp,
    "33p3p": _33p3p, "33p3q": _33p3q, "ppqrq": _ppqrq, "ppq3q": _ppq3q, "pqrst": _pqrst,
    "ppqppq": _ppqppq, "pqqprr": _pqqprr, "pqprqr": _pqprqr, "pqrpqr": _pqrpqr,
    "pqprsr": _pqprsr, "pqrpst": _pqrpst, "pqrstu": _pqrstu, "pp3pp3": _pp3pp3,
    "333pqp": _333pqp, "p3pq3q": _p3pq3q, "3p3q3r": _3p3q3r, "p3pqrq": _p3pqrq,
}

# weight vector j for reduced systems
WEIGHTS = {"pp3": (2, 4)}


def _other_labels(n):
    return tuple(FaceTypeId(OTHER, label=f"f{i + 1}") for i in range(n))


def build_catalog_matrix(matrix_id, binding):
    rows = BUILDERS[matrix_id](binding)
    return TransitionMatrix(rows, _other_labels(len(rows)), WEIGHTS.get(matrix_id, ()),
                            name=matrix_id)


def _family_and_binding(s):
    from .classification import match_pattern

    hit = match_pattern(s)
    if hit is None:
        raise TransitionError(f"{s} matches no catalog family")
    return hit


def is_4468(s):
    return as_sequence(s) == as_sequence([4, 4, 6, 8])


def matrix_for(s, variant=None):
    """The transition matrix for s (catalog, block construction, or M1/M2)."""
    s = as_sequence(s)
    if is_4468(s):
        if variant in ("T1", "M1"):
            return m1_matrix()
        if variant in ("T2", "M2"):
            return m2_matrix()
        raise TransitionError("[4,4,6,8] is polymorphic: pass variant T1 or T2")
    fam, b = _family_and_binding(s)
    if fam.matrix is None:
        raise TransitionError(f"family {fam.id} has no transition matrix"
                              + (" (edge-homogeneous)" if fam.formula == "edge" else ""))
    if fam.matrix == "block":
        return _block(_aligned_terms(fam, b))
    return build_catalog_matrix(fam.matrix, b)


def _aligned_terms(fam, b):
    return [b[x] if isinstance(x, str) else x for x in fam.template]


def catalog_matrix(s, variant=None):
    """(matrix, first distribution vector, root description) for s."""
    s = as_sequence(s)
    m = matrix_for(s, variant)
    v1, root = first_distribution(s, variant=variant, matrix=m, with_root=True)
    return m, v1, root


# first distributions ----------------------------------------------------------

def first_distribution(s, root=None, variant=None, matrix=None, with_root=False):
    """Face-type census of corona 1 around the family's root vertex.

    The vectors are fitted once against the simulator and stored in the
    catalog as affine functions of the family's letters.
    """
    from .classification import catalog_document

    s = as_sequence(s)
    m = matrix if matrix is not None else matrix_for(s, variant)
    if is_4468(s):
        key = "M1" if variant in ("T1", "M1") else "M2"
        entry = catalog_document().get("first_distributions", {}).get(key)
        b = {}
    else:
        fam, b = _family_and_binding(s)
        entry = catalog_document().get("first_distributions", {}).get(fam.id)
    if entry is None:
        raise TransitionError(f"no first distribution recorded for {s}")
    root_val = _eval_affine(entry["root"], b)
    if root is not None and int(root) != root_val:
        raise TransitionError(f"first distribution for {s} is recorded for root {root_val}, not {root}")
    counts = [_eval_affine(x, b) for x in entry["vector"]]
    v = DistributionVector(m.labels, counts, m.weights)
    if with_root:
        return v, {"vertex": int(root_val), "note": entry.get("note", "")}
    return v


def _eval_affine(expr, b):
    # {"1": c0, "p": cp, ...} -> c0 + cp*p + ...
    if isinstance(expr, (int, str)) and not isinstance(expr, dict):
        return b[expr] if isinstance(expr, str) and expr in b else Fraction(expr)
    total = Fraction(0)
    for key, coef in expr.items():
        total += Fraction(coef) * (1 if key == "1" else b[key])
    return total


# printed characteristic polynomials that take precedence over the printed
# matrix; the [3,p,3,q,3,r] matrix repeats its second block row and its own
# spectrum disagrees with both the printed polynomial and the simulator
def _chi_3p3q3r(b):
    from .spectral import RationalPolynomial, Z

    p, q, r = b["p"], b["q"], b["r"]
    a = p * q + p * r + q * r - 4 * p - 4 * q - 4 * r + 9
    bb = 2 * p * q * r - 4 * p * q - 4 * p * r - 4 * q * r + 8 * p + 8 * q + 8 * r - 16
    sext = RationalPolynomial.from_high([1, 0, -a, -bb, -a, 0, 1])
    return (RationalPolynomial([0, 0, 0, 1]) * (Z - 1) * (2 * Z + 1) ** 2 * sext).monic()


PRINTED_CHI = {"3p3q3r": _chi_3p3q3r}


def printed_chi(s):
    """The printed characteristic polynomial for s when it overrides the matrix."""
    if is_4468(s):
        return None
    hit = None
    try:
        hit = _family_and_binding(as_sequence(s))
    except TransitionError:
        return None
    fam, b = hit
    fn = PRINTED_CHI.get(fam.matrix)
    return fn(b) if fn else None
