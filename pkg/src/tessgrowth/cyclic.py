"""Cyclic valence sequences: canonical form, partial order, angle excess."""

from __future__ import annotations

import re
from fractions import Fraction
from functools import total_ordering

LESS = "Less"
EQUAL = "Equal"
GREATER = "Greater"
INCOMPARABLE = "Incomparable"

FINITE = "Finite"
EUCLIDEAN = "Euclidean"
HYPERBOLIC = "Hyperbolic"

OK = "Ok"
PARITY_VIOLATION = "ParityViolation"
UNKNOWN = "Unknown"


def traversals(word):
    """All 2k rotations and reflections of a linear word, as tuples."""
    word = tuple(word)
    k = len(word)
    rev = word[::-1]
    out = []
    for i in range(k):
        out.append(word[i:] + word[:i])
        out.append(rev[i:] + rev[:i])
    return out


def canonical_word(word):
    return min(traversals(word))


@total_ordering
class CyclicSequence:
    """A valence sequence up to rotation and reflection.

    `terms` always holds the lexicographically least traversal.
    """

    __slots__ = ("terms",)

    def __init__(self, raw):
        raw = tuple(int(x) for x in raw)
        if len(raw) < 3:
            raise ValueError(f"a cyclic sequence needs at least 3 terms, got {len(raw)}")
        if min(raw) < 3:
            raise ValueError(f"valences must be at least 3: {list(raw)}")
        self.terms = canonical_word(raw)

    @property
    def k(self):
        return len(self.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __getitem__(self, i):
        return self.terms[i % len(self.terms)]

    def __eq__(self, other):
        if not isinstance(other, CyclicSequence):
            return NotImplemented
        return self.terms == other.terms

    def __lt__(self, other):
        # sorting order only (length, then word); see leq for the partial order
        return (len(self.terms), self.terms) < (len(other.terms), other.terms)

    def __hash__(self):
        return hash(self.terms)

    def __repr__(self):
        return f"CyclicSequence({format_sequence(self.terms)})"

    def __str__(self):
        return format_sequence(self.terms)

    def traversals(self):
        return traversals(self.terms)

    def distinct_values(self):
        return sorted(set(self.terms))


def canonicalize(raw):
    return CyclicSequence(raw)


def as_sequence(s):
    if isinstance(s, CyclicSequence):
        return s
    if isinstance(s, str):
        return parse_sequence(s)
    return CyclicSequence(s)


_SEQ_RE = re.compile(r"^\s*\[?\s*(\d+(?:\s*,\s*\d+)*)\s*\]?\s*$")


def parse_sequence(text):
    """Parse "[4,6,14]" (brackets optional)."""
    m = _SEQ_RE.match(text)
    if not m:
        raise ValueError(f"cannot parse valence sequence: {text!r}")
    return CyclicSequence(int(x) for x in m.group(1).split(","))


def format_sequence(terms):
    return "[" + ",".join(str(x) for x in terms) + "]"


def equivalent(a, b):
    return as_sequence(a) == as_sequence(b)


def _dominated_subsequence(small, big):
    # greedy earliest match is optimal for "some subsequence of big dominates small"
    i = 0
    for x in big:
        if i < len(small) and x >= small[i]:
            i += 1
    return i == len(small)


def dominates(a, b):
    """True when a <= b in the partial order on cyclic sequences."""
    a = as_sequence(a)
    b = as_sequence(b)
    if len(a) > len(b):
        return False
    return any(_dominated_subsequence(a.terms, t) for t in b.traversals())


def leq(a, b):
    a = as_sequence(a)
    b = as_sequence(b)
    if a == b:
        return EQUAL
    if dominates(a, b):
        return LESS
    if dominates(b, a):
        return GREATER
    return INCOMPARABLE


def angle_excess(s):
    s = as_sequence(s)
    return sum(Fraction(p - 2, p) for p in s.terms) - 2


def growth_class(s):
    eta = angle_excess(s)
    if eta < 0:
        return FINITE
    if eta == 0:
        return EUCLIDEAN
    return HYPERBOLIC


def neighbour_pair_walk_ok(s):
    """Local parity test from vertex neighbourhoods.

    Around a vertex of valence v the faces contribute unordered pairs of
    neighbour valences, and consecutive faces share a neighbour. So there
    must be a closed walk of length v in the graph whose edges are the
    pairs {p_(i-1), p_(i+1)} over the positions i holding v.
    """
    t = as_sequence(s).terms
    k = len(t)
    for v in set(t):
        edges = {frozenset((t[i - 1], t[(i + 1) % k])) for i in range(k) if t[i] == v}
        nodes = sorted({x for e in edges for x in e})
        idx = {x: j for j, x in enumerate(nodes)}
        n = len(nodes)
        adj = [[False] * n for _ in range(n)]
        for e in edges:
            xs = list(e)
            a = idx[xs[0]]
            b = idx[xs[-1]]
            adj[a][b] = adj[b][a] = True
        # reach[i][j]: a walk of the current length joins i and j
        reach = [row[:] for row in adj]
        for _ in range(v - 1):
            reach = [[any(reach[i][m] and adj[m][j] for m in range(n)) for j in range(n)]
                     for i in range(n)]
        if not any(reach[i][i] for i in range(n)):
            return False
    return True


def realizability_check(s):
    """Apply the catalog parity rule of the matching family."""
    from .classification import match_pattern

    s = as_sequence(s)
    hit = match_pattern(s)
    if hit is None:
        return UNKNOWN
    family, binding = hit
    if family.parity_ok(binding):
        return OK
    return PARITY_VIOLATION


def minimal_representatives(template):
    from .classification import minimal_representatives as _mr

    return _mr(template)
