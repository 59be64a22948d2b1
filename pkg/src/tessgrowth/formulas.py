"""Closed-form growth rates, the edge-homogeneous function, and the tables."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable
from fractions import Fraction

from .cyclic import as_sequence
from .spectral import (CLOSED_FORM, EDGE, GrowthRate, RationalPolynomial, certify_real_root,
                       palindromic_quartic)


@dataclass(frozen=True)
class EdgeSymbol:
    p: int
    q: int
    k: int
    l: int

    def __str__(self):
        return f"<{self.p},{self.q};{self.k},{self.l}>"

    def dual(self):
        return EdgeSymbol(self.k, self.l, self.p, self.q)

    def exists(self):
        p, q, k, l = self.p, self.q, self.k, self.l
        if min(p, q, k, l) < 3:
            return False
        cases = [
            all(x % 2 == 0 for x in (p, q, k, l)),
            k == l and k % 2 == 0 and (p % 2 or q % 2),
            p == q and p % 2 == 0 and (k % 2 or l % 2),
            p == q and k == l and p % 2 and k % 2,
        ]
        return sum(bool(c) for c in cases) == 1

    def t(self):
        return (Fraction(self.p + self.q, 2) - 2) * (Fraction(self.k + self.l, 2) - 2)

    def special(self):
        # <3,p;4,4> with p >= 6, or its dual
        for e in (self, self.dual()):
            a, b = sorted((e.p, e.q))
            if a == 3 and b >= 6 and e.k == e.l == 4:
                return True
        return False


def g_value(t):
    t = float(t)
    return 0.5 * (t - 2 + math.sqrt((t - 2) ** 2 - 4))


def edge_homogeneous_growth(e):
    if not e.exists():
        raise ValueError(f"no edge-homogeneous tessellation has edge-symbol {e}")
    t = e.t()
    if e.special():
        t -= 1
    if t <= 4:
        raise ValueError(f"{e} does not grow exponentially (t = {t})")
    val = g_value(t)
    # g(t) is the larger root of z^2 - (t-2) z + 1
    lo, hi = certify_real_root(RationalPolynomial([1, -(t - 2), 1]), val)
    return GrowthRate(val, lo, hi, EDGE, f"edge-symbol {e}, t = {t}")


def edge_symbol_for(s):
    """Edge-symbol of s when its tessellation is also edge-homogeneous."""
    t = as_sequence(s).terms
    k = len(t)
    if len(set(t)) == 1:
        return EdgeSymbol(t[0], t[0], k, k)
    if k % 2 == 0 and len(set(t)) == 2 and all(t[i] != t[(i + 1) % k] for i in range(k)):
        a, b = sorted(set(t))
        return EdgeSymbol(a, b, k, k)
    return None


# closed forms ------------------------------------------------------------------

def _sqrt(x):
    if x < 0:
        raise ValueError(f"negative radicand {x}")
    return math.sqrt(x)


def _recip(c):
    # z^2 - c z + 1, reciprocal roots
    return RationalPolynomial([1, -Fraction(c), 1])


def _recip_sq(c):
    # z^4 - c z^2 + 1
    return RationalPolynomial([1, 0, -Fraction(c), 0, 1])


@dataclass(frozen=True)
class ClosedFormEntry:
    """A printed growth-rate expression for one family.

    evaluate takes the letter binding and returns a float computed the way
    the expression is written; poly returns an exact polynomial having that
    value as a root, used to certify it.  quartic gives (a, b) when the value
    is the dominant root of z^4 - a z^3 - b z^2 - a z + 1.
    """
    family: str
    evaluate: Callable
    poly: Callable
    anchor: str = ""
    quartic: Callable | None = None
    note: str = ""


def _pal(a, b):
    # the quartic's dominant root, in its radical form:
    # 1/4 (A + sqrt(A^2 - 16)) with A = a + sqrt(a^2 + 4b + 8)
    A = a + _sqrt(a * a + 4 * b + 8)
    return 0.25 * (A + _sqrt(A * A - 16))


def _ppq_ab(b):
    p, q = b["p"], b["q"]
    return Fraction(p - 4, 2), Fraction((p - 4) * (q - 4) - 4, 2)


def _3p4p_ab(b):
    p = b["p"]
    return Fraction(p - 3), Fraction(p - 8, 2)


def _3pqp_ab(b):
    p, q = b["p"], b["q"]
    return Fraction(p - 4), Fraction(p * q - p - 2 * q - 4, 2)


def _pqpr_ab(b):
    p, q, r = b["p"], b["q"], b["r"]
    return Fraction(p - 4), Fraction(p * q + p * r + 2 * q * r - 4 * p - 8 * q - 8 * r + 20, 2)


def _333pp_ab(b):
    p = b["p"]
    return Fraction(p - 4, 2), Fraction(5 * p - 16, 2)


def _ppqppq_ab(b):
    p, q = b["p"], b["q"]
    return Fraction(5 * p + 2 * q - 16, 2), Fraction(2 * p * q - 7 * p - 6 * q + 18)


def _pp3pp3_ab(b):
    p = b["p"]
    return Fraction(5 * p - 10, 2), Fraction(-p)


def _f_ppp(b):
    p = b["p"]
    return 0.5 * ((p - 4) + _sqrt((p - 4) ** 2 - 4))


def _f_3pp(b):
    p = b["p"]
    return 0.25 * (p - 8 + _sqrt((p - 8) ** 2 - 16))


def _f_ppq(b):
    # the printed radicand 4b - 8 + a(a + s) lacks a factor 2 on its last
    # term; this is the corrected expression
    a, bb = (float(x) for x in _ppq_ab(b))
    s = _sqrt(a * a + 4 * bb + 8)
    return 0.25 * ((a + s) + _sqrt(4 * bb - 8 + 2 * a * (a + s)))


def _f_4pq(b):
    m = (b["p"] - 4) * (b["q"] - 4)
    return 0.25 * _sqrt((2 * m - 16) + 2 * _sqrt(m * m - 16 * m))


def _f_pppp(b):
    p = b["p"]
    return (p - 3) + _sqrt((p - 3) ** 2 - 1)


def _f_ppqq(b):
    p, q = b["p"], b["q"]
    a = _sqrt(p * p + 34 * p * q + q * q - 96 * p - 96 * q + 256)
    # printed without the constant 256 and with a stray leading "1/8 +"
    return (p + q + a - 8 + _sqrt(2 * (p * p + q * q) + 36 * p * q - 112 * (p + q) + 256
                                  + 2 * a * (p + q - 8))) / 8


def _f_pqpq(b):
    p, q = b["p"], b["q"]
    return 0.5 * (p + q - 6 + _sqrt((p + q - 6) ** 2 - 4))


def _f_3p3p(b):
    p = b["p"]
    return 0.5 * (p - 4 + _sqrt((p - 4) ** 2 - 4))


def _f_3p4p(b):
    p = b["p"]
    r = _sqrt(p * p - 4 * p + 1)
    return 0.25 * (p - 3 + r + _sqrt(2 * p * p - 10 * p - 6 + 2 * (p - 3) * r))


def _f_3pqp(b):
    p, q = b["p"], b["q"]
    a = _sqrt(p * p + 2 * p * q - 10 * p - 4 * q + 16)
    return 0.25 * (p - 4 + a + _sqrt(2 * p * p + 2 * p * q - 18 * p - 4 * q + 16 + a * (2 * p - 8)))


def _f_pqpr(b):
    p, q, r = b["p"], b["q"], b["r"]
    a = _sqrt(p * p + 2 * p * q + 2 * p * r + 4 * q * r - 16 * p - 16 * q - 16 * r + 64)
    return 0.25 * (p - 4 + a + _sqrt(2 * p * p + 2 * p * q + 2 * p * r + 4 * q * r
                                      - 24 * p - 16 * q - 16 * r + 64 + a * (2 * p - 8)))


def _f_ppppp(b):
    p = b["p"]
    return 0.5 * (3 * p - 8 + _sqrt(9 * p * p - 48 * p + 60))


def _f_3333p(b):
    p = b["p"]
    return 0.5 * _sqrt(2 * (p - 4) + 2 * _sqrt((p - 5) * (p - 2)))


def _f_333pp(b):
    p = b["p"]
    s = _sqrt(p * p + 32 * p - 80)
    return (p - 4 + s + _sqrt(2 * (p - 4) * (p + 16 + s))) / 8


def _f_33p3p(b):
    p = b["p"]
    return 0.5 * (p - 2 + _sqrt((p - 2) ** 2 - 4))


def _f_33p3q(b):
    m = (b["p"] - 2) * (b["q"] - 2)
    return 0.5 * _sqrt(2 * m - 4 + 2 * _sqrt(m * m - 4 * m))


def _f_pppppp(b):
    p = b["p"]
    return 2 * p - 5 + 2 * _sqrt(p * p - 5 * p + 6)


def _f_ppqppq(b):
    p, q = b["p"], b["q"]
    a = _sqrt((p + 2 * q - 8) * (25 * p + 2 * q - 72))
    bb = 5 * p + 2 * q - 16
    return (a + bb + _sqrt(2 * a * bb + 2 * bb * bb + 32 * p * q - 112 * p - 96 * q + 256)) / 8


def _f_pqpqpq(b):
    p, q = b["p"], b["q"]
    return p + q - 5 + _sqrt((p + q - 4) * (p + q - 6))


def _f_pp3pp3(b):
    # radicand of a read as 25p^2 - 116p + 132
    p = b["p"]
    a = _sqrt(25 * p * p - 116 * p + 132)
    return (5 * p - 10 + a + _sqrt(50 * p * p + (10 * a - 216) * p - 20 * a + 168)) / 8


def _f_3p3p3p(b):
    p = b["p"]
    return p - 2 + _sqrt((p - 2) ** 2 - 1)


def _q(ab):
    return lambda b: palindromic_quartic(*ab(b))


CLOSED_FORMS = {e.family: e for e in [
    ClosedFormEntry("[p,p,p]", _f_ppp, lambda b: _recip(b["p"] - 4), "family [p,p,p]"),
    ClosedFormEntry("[3,p,p]", _f_3pp, lambda b: _recip(Fraction(b["p"] - 8, 2)), "family [3,p,p]"),
    ClosedFormEntry("[p,p,q]", _f_ppq, _q(_ppq_ab), "family [p,p,q]", _ppq_ab,
                    "printed radicand corrected"),
    ClosedFormEntry("[4,p,q]", _f_4pq,
                    lambda b: _recip_sq(Fraction((b["p"] - 4) * (b["q"] - 4) - 8, 4)), "family [4,p,q]"),
    ClosedFormEntry("[p,p,p,p]", _f_pppp, lambda b: _recip(2 * (b["p"] - 3)), "family [p,p,p,p]"),
    ClosedFormEntry("[p,q,p,q]", _f_pqpq, lambda b: _recip(b["p"] + b["q"] - 6), "family [p,q,p,q]"),
    ClosedFormEntry("[3,p,3,p]", _f_3p3p, lambda b: _recip(b["p"] - 4), "family [3,p,3,p]"),
    ClosedFormEntry("[3,p,4,p]", _f_3p4p, _q(_3p4p_ab), "family [3,p,4,p]", _3p4p_ab),
    ClosedFormEntry("[3,p,q,p]", _f_3pqp, _q(_3pqp_ab), "family [3,p,q,p]", _3pqp_ab),
    ClosedFormEntry("[p,q,p,r]", _f_pqpr, _q(_pqpr_ab), "family [p,q,p,r]", _pqpr_ab),
    ClosedFormEntry("[p,p,p,p,p]", _f_ppppp, lambda b: _recip(3 * b["p"] - 8), "family [p,p,p,p,p]"),
    ClosedFormEntry("[3,3,3,3,p]", _f_3333p,
                    lambda b: RationalPolynomial([-Fraction(b["p"] - 6, 4), 0, -(b["p"] - 4), 0, 1]),
                    "family [3,3,3,3,p]"),
    ClosedFormEntry("[3,3,3,p,p]", _f_333pp, _q(_333pp_ab), "family [3,3,3,p,p]", _333pp_ab),
    ClosedFormEntry("[3,3,p,3,p]", _f_33p3p, lambda b: _recip(b["p"] - 2), "family [3,3,p,3,p]"),
    ClosedFormEntry("[3,3,p,3,q]", _f_33p3q,
                    lambda b: _recip_sq((b["p"] - 2) * (b["q"] - 2) - 2), "family [3,3,p,3,q]"),
    ClosedFormEntry("[p,p,p,p,p,p]", _f_pppppp, lambda b: _recip(2 * (2 * b["p"] - 5)), "family [p,p,p,p,p,p]"),
    ClosedFormEntry("[p,p,q,p,p,q]", _f_ppqppq, _q(_ppqppq_ab), "family [p,p,q,p,p,q]", _ppqppq_ab),
    ClosedFormEntry("[p,q,p,q,p,q]", _f_pqpqpq, lambda b: _recip(2 * (b["p"] + b["q"] - 5)),
                    "family [p,q,p,q,p,q]"),
    ClosedFormEntry("[p,p,3,p,p,3]", _f_pp3pp3, _q(_pp3pp3_ab), "family [p,p,3,p,p,3]", _pp3pp3_ab),
    ClosedFormEntry("[3,p,3,p,3,p]", _f_3p3p3p, lambda b: _recip(2 * (b["p"] - 2)), "family [3,p,3,p,3,p]"),
]}


def _ppqq_poly(b):
    # the value is 1/4 (A + sqrt(A^2 - 16)) with A = (p+q+a-8)/2 and a the inner root,
    # i.e. the dominant root of the quartic with these a, b
    p, q = b["p"], b["q"]
    return palindromic_quartic(Fraction(p + q - 8, 2), Fraction(4 * p * q - 10 * p - 10 * q + 20, 2))


CLOSED_FORMS["[p,p,q,q]"] = ClosedFormEntry(
    "[p,p,q,q]", _f_ppqq, _ppqq_poly, "family [p,p,q,q]",
    lambda b: (Fraction(b["p"] + b["q"] - 8, 2), Fraction(4 * b["p"] * b["q"] - 10 * b["p"] - 10 * b["q"] + 20, 2)),
    "printed expression corrected")


def closed_form_entry(s):
    from .classification import match_pattern

    hit = match_pattern(s)
    if hit is None:
        return None, None
    fam, b = hit
    return CLOSED_FORMS.get(fam.id), b


def closed_form_gamma(s):
    """The family's printed growth-rate expression at s, or None when the
    family only has a numeric lower bound."""
    s = as_sequence(s)
    entry, b = closed_form_entry(s)
    if entry is None:
        return None
    return evaluate_entry(entry, b)


def evaluate_entry(entry, b):
    val = entry.evaluate(b)
    lo, hi = certify_real_root(entry.poly(b), val)
    return GrowthRate(val, lo, hi, CLOSED_FORM, entry.note)


# tables ------------------------------------------------------------------------

# families of the least-growth table, in its printed order
LEAST_GROWTH_FAMILIES = (
    "[p,p,p]", "[3,p,p]", "[p,p,q]", "[4,p,q]", "[p,q,r]",
    "[p,p,p,p]", "[p,p,q,q]", "[3,p,3,p]", "[p,q,p,q]", "[3,p,4,p]", "[3,p,q,p]",
    "[p,q,p,r]", "[p,q,r,s]",
    "[p,p,p,p,p]", "[3,3,3,3,p]", "[3,3,3,p,p]", "[3,3,p,3,p]", "[3,3,p,3,q]",
    "[p,p,q,r,q]", "[p,p,q,3,q]", "[p,q,r,s,t]",
    "[p,p,p,p,p,p]", "[p,p,q,p,p,q]", "[p,q,p,q,p,q]", "[p,q,q,p,r,r]", "[p,q,p,r,q,r]",
    "[p,q,r,p,q,r]", "[p,q,p,r,s,r]", "[p,q,r,p,s,t]", "[p,q,r,s,t,u]",
    "[p,p,3,p,p,3]", "[3,p,3,p,3,p]", "[3,3,3,p,q,p]", "[p,3,p,q,3,q]", "[3,p,3,q,3,r]",
    "[p,3,p,q,r,q]",
)

GOLDEN = (1 + math.sqrt(5)) / 2


@dataclass(frozen=True)
class TableRow:
    family: str
    sequence: object
    growth: GrowthRate

    @property
    def truncated(self):
        return self.growth.truncated(4)

    @property
    def golden(self):
        return abs(self.growth.value - GOLDEN) <= 1e-9

    def to_dict(self, places=4):
        return {"family": self.family, "sequence": str(self.sequence),
                "growth": self.growth.truncated(places), "value": repr(self.growth.value),
                "source": self.growth.source, "golden": self.golden}


def least_in_family(fid):
    from .classification import minimal_representatives
    from .spectral import growth_rate

    best = None
    for s in minimal_representatives(fid):
        g = growth_rate(s)
        if best is None or g.value < best[1].value:
            best = (s, g)
    return best


def _fan_out(fn, items, workers=None):
    # bounded process pool; map keeps input order so output is deterministic
    if not workers or workers < 2:
        return [fn(x) for x in items]
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _least_row(fid):
    s, g = least_in_family(fid)
    return TableRow(fid, s, g)


def least_growth_table(workers=None):
    """Least growth rate of each monomorphic class, from its minimal members."""
    return _fan_out(_least_row, LEAST_GROWTH_FAMILIES, workers)


def _necklaces(values):
    # permutations up to rotation and reflection, smallest value first
    from itertools import permutations

    first, rest = values[0], values[1:]
    seen = []
    for perm in permutations(rest):
        if perm[0] < perm[-1]:
            seen.append((first,) + perm)
    return seen


def _arrangement_row(t):
    from .spectral import growth_rate

    return TableRow("[" + ",".join("pqrstu"[:len(t)]) + "]", as_sequence(list(t)), growth_rate(list(t)))


def minimal_class_table(values, workers=None):
    """Growth rates of every arrangement of `values` around a face."""
    return _fan_out(_arrangement_row, _necklaces(sorted(values)), workers)


def pqrst_table(workers=None):
    return minimal_class_table((4, 6, 8, 10, 12), workers)


def pqrstu_table(workers=None):
    return minimal_class_table((4, 6, 8, 10, 12, 14), workers)


def corona_table_4468(max_n=9):
    """|F_n| for the two [4,4,6,8] tessellations from their matrices."""
    from .spectral import corona_series
    from .transition import catalog_matrix

    cols = []
    for v in ("T1", "T2"):
        m, v1, _ = catalog_matrix([4, 4, 6, 8], v)
        cols.append(corona_series(m, v1, max_n).counts)
    return [(n + 1, int(cols[0][n]), int(cols[1][n])) for n in range(max_n)]


# consistency -------------------------------------------------------------------

@dataclass
class ConsistencyReport:
    family: str
    checked: int = 0
    skipped: int = 0
    worst: float = 0.0
    mismatches: list = None

    @property
    def ok(self):
        return not self.mismatches

    def to_dict(self):
        return {"family": self.family, "checked": self.checked, "skipped": self.skipped, "worst": self.worst,
                "mismatches": self.mismatches, "ok": self.ok}


def sweep(fid, count=20, start=16):
    """At least `count` admissible bindings of a family, smallest first."""
    from .classification import enumerate_family

    bound = start
    while True:
        found = enumerate_family(fid, bound)
        if len(found) >= count or bound > 200:
            return sorted(found.values(), key=lambda b: (max(b.values()), sorted(b.items())))[:max(count, 0)]
        bound += 4


def verify_consistency(fid, bindings=None, tolerance=1e-9, count=20):
    """Closed form against the matrix spectrum over a parameter sweep."""
    from .classification import admissible, family_by_id
    from .spectral import spectral_growth
    from .transition import matrix_for

    fam = family_by_id(fid)
    entry = CLOSED_FORMS[fam.id]
    rep = ConsistencyReport(fam.id, mismatches=[])
    for b in bindings if bindings is not None else sweep(fam.id, count):
        if not admissible(fam, b):
            # outside the family's guards: parity or non-positive excess
            rep.skipped += 1
            continue
        s = fam.instantiate(b)
        c = evaluate_entry(entry, b)
        g = spectral_growth(matrix_for(s))
        d = abs(c.value - g.value)
        rep.checked += 1
        rep.worst = max(rep.worst, d)
        if d > tolerance:
            rep.mismatches.append({"binding": dict(b), "closed": c.value, "spectral": g.value})
    return rep


def consistency_families():
    """Families with both a printed closed form and a transition matrix."""
    from .classification import family_by_id

    return [fid for fid in CLOSED_FORMS if family_by_id(fid).matrix is not None]


# export ------------------------------------------------------------------------

def rows_to_csv(rows, places=4):
    import csv
    import io

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["family", "sequence", f"growth_trunc{places}", "growth", "source", "golden"])
    for r in rows:
        d = r.to_dict(places)
        w.writerow([d["family"], d["sequence"], d["growth"], d["value"], d["source"], int(d["golden"])])
    return buf.getvalue()


def rows_to_json(rows, places=4):
    import json

    return json.dumps([r.to_dict(places) for r in rows], indent=1) + "\n"


# monotonicity ------------------------------------------------------------------

def monotonicity_sample(per_family=3):
    """A few members of every uniformly concentric monomorphic family."""
    from .classification import families

    out = []
    for fam in families():
        if fam.morphism != "Monomorphic" or fam.concentricity != "UniformlyConcentric":
            continue
        if fam.formula is None and fam.matrix is None:
            continue
        for b in sweep(fam.id, per_family, start=10)[:per_family]:
            out.append(fam.instantiate(b))
    return out


def monotonicity_violations(sample=None, tolerance=1e-9):
    """Pairs x < y in the partial order whose growth rates decrease."""
    from .cyclic import LESS, leq
    from .spectral import growth_rate

    sample = sample if sample is not None else monotonicity_sample()
    rates = {}
    for s in sample:
        rates[s] = growth_rate(s).value
    bad, pairs = [], 0
    for x in sample:
        for y in sample:
            if x is not y and leq(x, y) == LESS:
                pairs += 1
                if rates[x] > rates[y] + tolerance:
                    bad.append((x, y, rates[x], rates[y]))
    return pairs, bad
