"""Acceptance criteria 1-8, each at its stated tolerance and time budget.

Every check records its outcome in RESULTS; the terminal summary (see
conftest.py) prints one PASS/FAIL line per criterion.  Rows that cannot be
reproduced are strict xfails and still count as FAIL in that summary.

Run directly with `python3 tests/test_acceptance.py`.
"""

import functools
import itertools
import math
import random
import time
from fractions import Fraction

import pytest

from tessgrowth.bilinski import Stuck, bounded_ratio_ok, count_coronas, estimate_growth, grow, oracle_equivalence
from tessgrowth.classification import MONOMORPHIC, classify, families, minimal_representatives
from tessgrowth.cyclic import (
    EQUAL, GREATER, INCOMPARABLE, LESS, angle_excess, canonical_word, equivalent, leq,
    traversals,
)
from tessgrowth.formulas import (
    CLOSED_FORMS, consistency_families, least_growth_table, monotonicity_violations, pqrst_table, pqrstu_table,
    sweep, verify_consistency,
)
from tessgrowth.spectral import (
    RationalPolynomial, char_poly, growth_rate, max_modulus_root, palindromic_quartic, palindromic_quartic_root,
)
from tessgrowth.transition import block_matrix_g44, catalog_matrix, matrix_for, offspring_counts

from oracles import (
    CHI_M1_FACTORS, CHI_M2_FACTORS, CORONAS_T1, CORONAS_T2, GOLDEN, LAMBDA_M1, LAMBDA_M2, LEAST_GROWTH,
    LEAST_GROWTH_UNATTAINABLE, ORACLE_MISMATCH, PQRST, PQRSTU,
)

RESULTS = {}
TITLES = {
    1: "golden-mean result",
    2: "least-growth table",
    3: "[4,4,6,8] polynomials, roots and corona counts",
    4: "minimal [p,q,r,s,t] and [p,q,r,s,t,u] tables",
    5: "closed form against spectrum",
    6: "simulator against matrix series",
    7: "corrected palindromic formula",
    8: "property suites",
}


def record(criterion, label, ok):
    RESULTS.setdefault(criterion, []).append((label, bool(ok)))
    return bool(ok)


def summary_lines():
    out = []
    for c in sorted(TITLES):
        rows = RESULTS.get(c)
        if not rows:
            out.append(f"criterion {c} ({TITLES[c]}): NOT RUN")
            continue
        bad = [label for label, ok in rows if not ok]
        verdict = "FAIL" if bad else "PASS"
        line = f"criterion {c} ({TITLES[c]}): {verdict} {len(rows) - len(bad)}/{len(rows)}"
        if bad:
            line += "; failing: " + ", ".join(bad)
        out.append(line)
    return out


def timed(fn, *args, **kwargs):
    t = time.perf_counter()
    value = fn(*args, **kwargs)
    return value, time.perf_counter() - t


def product(factors):
    out = RationalPolynomial([1])
    for f in factors:
        out = out * RationalPolynomial.from_high(f)
    return out


def xfail_if(cond, reason):
    return pytest.mark.xfail(cond, reason=reason, strict=True)


# 1 ------------------------------------------------------------------------------

def test_c1_golden_mean():
    start = time.perf_counter()
    for s in ([4, 6, 14], [3, 4, 7, 4]):
        g = growth_rate(s)
        assert record(1, str(s), abs(g.value - GOLDEN) <= 1e-9), g.value
    elapsed = time.perf_counter() - start
    assert record(1, "runtime < 1s", elapsed < 1), elapsed


# 2 ------------------------------------------------------------------------------

@functools.lru_cache(maxsize=None)
def least_table():
    rows, elapsed = timed(least_growth_table)
    return {r.family: r for r in rows}, elapsed


def test_c2_runtime():
    rows, elapsed = least_table()
    assert record(2, "runtime < 30s", elapsed < 30), elapsed
    assert record(2, "36 rows", len(rows) == 36)


@pytest.mark.parametrize("fid, seq, printed", [
    pytest.param(*row, marks=xfail_if(row[0] in LEAST_GROWTH_UNATTAINABLE,
                                      LEAST_GROWTH_UNATTAINABLE.get(row[0], "")))
    for row in LEAST_GROWTH
])
def test_c2_row(fid, seq, printed):
    row = least_table()[0][fid]
    places = len(printed.split(".")[1])
    ok = equivalent(row.sequence, seq) and row.growth.truncated(places) == printed
    assert record(2, fid, ok), (str(row.sequence), row.growth.value)


# 3 ------------------------------------------------------------------------------

@pytest.mark.parametrize("variant, factors, lam", [("T1", CHI_M1_FACTORS, LAMBDA_M1), ("T2", CHI_M2_FACTORS, LAMBDA_M2)])
def test_c3_polynomials(variant, factors, lam):
    chi = char_poly(matrix_for([4, 4, 6, 8], variant))
    assert record(3, f"chi {variant}", chi == product(factors))
    value = max_modulus_root(chi).value
    assert record(3, f"root {variant}", round(value, 5) == lam), value


def test_c3_coronas():
    start = time.perf_counter()
    for variant, expected in (("T1", CORONAS_T1), ("T2", CORONAS_T2)):
        root = catalog_matrix([4, 4, 6, 8], variant)[2]["vertex"]
        _, prof = grow([4, 4, 6, 8], root, 9, policy=variant, keep_faces=False, counts_only=True)
        record(8, f"bounded ratio [4,4,6,8] {variant}", bounded_ratio_ok([4, 4, 6, 8], prof))
        assert record(3, f"coronas {variant}", prof.faces == expected), prof.faces
    elapsed = time.perf_counter() - start
    assert record(3, "runtime < 60s", elapsed < 60), elapsed


# 4 ------------------------------------------------------------------------------

def test_c4_tables():
    start = time.perf_counter()
    for name, table, printed, least in (("[p,q,r,s,t]", pqrst_table, PQRST, ("[4,6,10,12,8]", "14.5753")),
                                       ("[p,q,r,s,t,u]", pqrstu_table, PQRSTU, ("[4,6,10,14,12,8]", "23.9963"))):
        rows = {str(r.sequence): r for r in table()}
        want = {seq: v[:v.index(".") + 5] for seq, v in printed}
        got = {seq: r.growth.truncated(4) for seq, r in rows.items()}
        record(4, f"{name} rows", got == want)
        best = min(rows.values(), key=lambda r: r.growth.value)
        assert record(4, f"{name} minimum", (str(best.sequence), best.growth.truncated(4)) == least)
        assert got == want, {k: (got.get(k), v) for k, v in want.items() if got.get(k) != v}
    elapsed = time.perf_counter() - start
    assert record(4, "runtime < 2min", elapsed < 120), elapsed


# 5 ------------------------------------------------------------------------------

@pytest.mark.parametrize("fid", consistency_families())
def test_c5_consistency(fid):
    r = verify_consistency(fid, count=20)
    assert record(5, fid, r.ok and r.checked >= 20), r.to_dict()


# 6 ------------------------------------------------------------------------------

def uc_monomorphic():
    return [f.id for f in families()
            if f.morphism == MONOMORPHIC and f.concentricity == "UniformlyConcentric" and f.matrix is not None]


@functools.lru_cache(maxsize=None)
def minimal_profile(fid, n=8):
    s = minimal_representatives(fid)[0]
    _, _, root = catalog_matrix(s)
    return s, count_coronas(s, root["vertex"], n)


@pytest.mark.parametrize("fid", [
    pytest.param(fid, marks=xfail_if(fid in ORACLE_MISMATCH, ORACLE_MISMATCH.get(fid, "")))
    for fid in uc_monomorphic()
])
def test_c6_oracle_equivalence(fid):
    s = minimal_representatives(fid)[0]
    sim, series = oracle_equivalence(s, 8)
    assert record(6, fid, sim == series), (sim, series)


# 7 ------------------------------------------------------------------------------

def test_c7_random_pairs():
    rnd = random.Random(20260)
    worst = 0.0
    for _ in range(1000):
        # (0, 20]: 1 - random() lies in (0, 1]
        a, b = 20 * (1 - rnd.random()), 20 * (1 - rnd.random())
        a, b = Fraction(a), Fraction(b)
        closed = palindromic_quartic_root(a, b).value
        numeric = max_modulus_root(palindromic_quartic(a, b)).value
        worst = max(worst, abs(closed - numeric))
    assert record(7, "1000 random (a,b)", worst <= 1e-10), worst


@pytest.mark.parametrize("fid", ["[p,p,q]", "[3,p,4,p]", "[3,p,q,p]", "[p,q,p,r]", "[p,p,3,p,p,3]"])
def test_c7_family_sweeps(fid):
    entry = CLOSED_FORMS[fid]
    bindings = sweep(fid, 20)
    worst = 0.0
    for b in bindings:
        printed = entry.evaluate(b)
        corrected = palindromic_quartic_root(*entry.quartic(b)).value
        spectral = growth_rate(_instantiate(fid, b)).value
        worst = max(worst, abs(printed - corrected), abs(corrected - spectral))
    assert record(7, fid, len(bindings) >= 20 and worst <= 1e-9), worst


def _instantiate(fid, b):
    return next(f for f in families() if f.id == fid).instantiate(b)


# 8 ------------------------------------------------------------------------------

VALENCES = range(3, 15)


def bracelets(n, k):
    # number of k-coloured bracelets of length n
    neck = sum(k ** math.gcd(n, i) for i in range(n)) // n
    if n % 2:
        refl = k ** ((n + 1) // 2)
    else:
        refl = (k ** (n // 2 + 1) + k ** (n // 2)) // 2
    return (neck + refl) // 2


@functools.lru_cache(maxsize=None)
def canonical_words(k):
    return sorted({canonical_word(w) for w in itertools.product(VALENCES, repeat=k)})


def test_c8_canonical_forms_exhaustive():
    ok = True
    for k in range(3, 7):
        words = canonical_words(k)
        ok &= len(words) == bracelets(k, len(VALENCES))
        for c in words:
            ok &= canonical_word(c) == c and all(canonical_word(t) == c for t in traversals(c))
    assert record(8, "canonical forms k<=6, valences<=14", ok)


def step_ups(w):
    # raising one term by 1 and inserting a 3 generate the order
    for i, x in enumerate(w):
        if x < 14:
            yield w[:i] + (x + 1,) + w[i + 1:]
    if len(w) < 6:
        for i in range(len(w)):
            yield w[:i] + (3,) + w[i:]


def test_c8_order_steps_exhaustive():
    bad = []
    for k in range(3, 7):
        for w in canonical_words(k):
            ew = angle_excess(w)
            for v in step_ups(w):
                if leq(w, v) != LESS or not angle_excess(v) > ew:
                    bad.append((w, v))
    assert record(8, "order and excess on every elementary step", not bad), bad[:5]


def test_c8_order_pairs_small_box():
    words = [c for k in (3, 4) for c in sorted({canonical_word(w) for w in itertools.product(range(3, 8), repeat=k)})]
    rel = {(a, b): leq(a, b) for a in words for b in words}
    bad = []
    for (a, b), r in rel.items():
        back = rel[b, a]
        if (r == EQUAL) != (a == b) or {r, back} not in ({EQUAL}, {LESS, GREATER}, {INCOMPARABLE}):
            bad.append((a, b))
        if r == LESS and not angle_excess(a) < angle_excess(b):
            bad.append((a, b))
    above = {a: [b for b in words if rel[a, b] == LESS] for a in words}
    for a in words:
        for b in above[a]:
            bad += [(a, b, c) for c in above[b] if rel[a, c] != LESS]
    assert record(8, "order axioms on k<=4, valences<=7", not bad), bad[:5]


def test_c8_column_sums():
    bad = []
    for k, top in ((4, 14), (5, 9), (6, 7)):
        for w in itertools.product(range(4, top + 1), repeat=k):
            if w != canonical_word(w) or classify(w).morphism != MONOMORPHIC:
                continue
            m = block_matrix_g44(w)
            if m.column_sums() != [offspring_counts(w, f).value for f in m.labels]:
                bad.append(w)
    assert record(8, "column sum = offspring count on G44 blocks", not bad), bad[:5]


@pytest.mark.parametrize("fid", uc_monomorphic())
def test_c8_bounded_ratio(fid):
    s, prof = minimal_profile(fid)
    assert record(8, f"bounded ratio {fid}", bounded_ratio_ok(s, prof))


def test_c8_monotonicity():
    pairs, bad = monotonicity_violations()
    assert record(8, f"monotonicity over {pairs} pairs", pairs > 0 and not bad), bad[:5]


@functools.lru_cache(maxsize=None)
def golden_estimate(root):
    prof = count_coronas([4, 6, 14], root, 12)
    record(8, f"bounded ratio [4,6,14] root {root}", bounded_ratio_ok([4, 6, 14], prof))
    return estimate_growth(prof).value


@pytest.mark.parametrize("root", [
    pytest.param(4, marks=xfail_if(True, "rings from a 4-valent root collapse at corona 2; the simulator stops")),
    6, 14,
])
def test_c8_root_invariance(root):
    try:
        est = golden_estimate(root)
    except Stuck as exc:
        record(8, f"root invariance [4,6,14] root {root}", False)
        raise AssertionError(f"stuck: {exc}") from exc
    others = [golden_estimate(r) for r in (6, 14) if r != root]
    ok = abs(est - GOLDEN) <= 0.02 * GOLDEN and all(abs(est - o) <= 0.02 * o for o in others)
    assert record(8, f"root invariance [4,6,14] root {root}", ok), (est, others)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
