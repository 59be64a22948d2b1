"""Property tests for the invariants of each module."""

import functools
import itertools
from fractions import Fraction

from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from tessgrowth.classification import MONOMORPHIC, classify, enumerate_family, families
from tessgrowth.cyclic import (
    EQUAL, GREATER, INCOMPARABLE, LESS, CyclicSequence, angle_excess, canonical_word, leq, traversals,
)
from tessgrowth.formulas import EdgeSymbol, edge_homogeneous_growth
from tessgrowth.spectral import (
    RationalPolynomial, char_poly, char_poly_cofactor, growth_rate, max_modulus_root, palindromic_quartic,
    palindromic_quartic_root, roots,
)
from tessgrowth.transition import TransitionMatrix, block_matrix_g44, offspring_counts

valence = st.integers(3, 14)
word = st.lists(valence, min_size=3, max_size=6)
quarter = st.integers(-12, 12).map(lambda n: Fraction(n, 4))
slow = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])


def grow_word(w, data):
    # an elementary step up in the order: raise one term or insert one
    w = list(w)
    if len(w) < 6 and data.draw(st.booleans()):
        i = data.draw(st.integers(0, len(w)))
        w.insert(i, data.draw(valence))
    else:
        i = data.draw(st.integers(0, len(w) - 1))
        assume(w[i] < 14)
        w[i] += data.draw(st.integers(1, 14 - w[i]))
    return w


# cyclic sequences -----------------------------------------------------------

@given(word)
def test_canonical_is_idempotent_and_orbit_constant(w):
    c = canonical_word(w)
    assert canonical_word(c) == c
    assert all(canonical_word(t) == c for t in traversals(w))


@given(word)
def test_order_is_reflexive(w):
    assert leq(w, w) == EQUAL


@given(word, st.data())
def test_step_up_is_less_and_raises_excess(w, data):
    v = grow_word(w, data)
    assert leq(w, v) == LESS and leq(v, w) == GREATER
    assert angle_excess(w) < angle_excess(v)


@given(word, word)
def test_order_is_antisymmetric_and_excess_compatible(a, b):
    r = leq(a, b)
    back = leq(b, a)
    assert {r, back} in ({EQUAL}, {LESS, GREATER}, {INCOMPARABLE})
    if r == LESS:
        assert angle_excess(a) < angle_excess(b)


@given(word, st.data())
def test_order_is_transitive(a, data):
    b = grow_word(a, data)
    c = grow_word(b, data)
    assert leq(a, c) == LESS


@given(st.integers(3, 9), st.integers(3, 40))
def test_constant_excess(k, p):
    assert angle_excess([p] * k) == Fraction(k * (p - 2), p) - 2


@given(word, st.integers(0, 11))
def test_classification_is_orbit_invariant(w, i):
    t = traversals(w)[i % (2 * len(w))]
    assert classify(w).to_dict() == classify(t).to_dict()


# transition matrices --------------------------------------------------------

@functools.lru_cache(maxsize=None)
def g44_monomorphic():
    out = []
    for k in (4, 5, 6):
        top = {4: 14, 5: 9, 6: 8}[k]
        for w in itertools.product(range(4, top + 1), repeat=k):
            if w == canonical_word(w) and classify(w).morphism == MONOMORPHIC:
                out.append(w)
    return out


@slow
@given(st.data())
def test_column_sum_is_offspring_count(data):
    w = data.draw(st.sampled_from(g44_monomorphic()))
    m = block_matrix_g44(w)
    assert m.column_sums() == [offspring_counts(w, f).value for f in m.labels]
    assert all(offspring_counts(w, f).value >= 0 for f in m.labels)


# spectra --------------------------------------------------------------------

@st.composite
def matrices(draw, max_order=6):
    n = draw(st.integers(1, max_order))
    return [[draw(quarter) for _ in range(n)] for _ in range(n)]


@slow
@given(matrices())
def test_char_poly_matches_cofactor(rows):
    m = TransitionMatrix(rows, tuple(range(len(rows))))
    chi = char_poly(m)
    assert chi == char_poly_cofactor(m)
    assert chi.degree == m.order and chi.lead() == 1


@slow
@given(matrices(5).filter(lambda r: all(x >= 0 for row in r for x in row) and any(any(row) for row in r)),
       st.randoms())
def test_growth_invariant_under_transpose_and_relabel(rows, rnd):
    n = len(rows)
    m = TransitionMatrix(rows, tuple(range(n)))
    perm = list(range(n))
    rnd.shuffle(perm)
    q = TransitionMatrix([[rows[perm[i]][perm[j]] for j in range(n)] for i in range(n)], tuple(range(n)))
    base = max_modulus_root(char_poly(m)).value
    assert abs(max_modulus_root(char_poly(m.transpose())).value - base) < 1e-9
    assert abs(max_modulus_root(char_poly(q)).value - base) < 1e-9


ab = st.fractions(Fraction(1, 100), 20, max_denominator=100)


@settings(max_examples=1000, deadline=None)
@given(ab, ab)
def test_palindromic_closed_form(a, b):
    closed = palindromic_quartic_root(a, b).value
    numeric = max_modulus_root(palindromic_quartic(a, b)).value
    assert abs(closed - numeric) <= 1e-10


@slow
@given(ab, ab)
def test_palindromic_roots_come_in_reciprocal_pairs(a, b):
    zs = roots(palindromic_quartic(a, b))
    for z in zs:
        assert min(abs(1 / z - w) for w in zs) < 1e-9


@given(st.integers(3, 12), st.integers(3, 12), st.integers(3, 12), st.integers(3, 12))
def test_edge_duality(p, q, k, l):
    e = EdgeSymbol(p, q, k, l)
    assert e.t() == e.dual().t()
    try:
        g = edge_homogeneous_growth(e).value
    except ValueError:
        return
    assert g == edge_homogeneous_growth(e.dual()).value


# growth -----------------------------------------------------------------------

@functools.lru_cache(maxsize=None)
def catalog_members():
    out = []
    for fam in families():
        if fam.matrix is None or fam.morphism != MONOMORPHIC:
            continue
        found = sorted(enumerate_family(fam.id, 14).values(), key=lambda b: sorted(b.items()))
        out += [fam.instantiate(b) for b in found[:8]]
    return out


@slow
@given(st.data())
def test_bounded_ratio(data):
    s = data.draw(st.sampled_from(catalog_members()))
    assert growth_rate(s).value <= 1 + sum(s.terms) - 2 * s.k


@slow
@given(st.integers(7, 20))
def test_pp3_reduces_to_half_valence_triangles(h):
    p = 2 * h
    assert abs(growth_rate([p, p, 3]).value - growth_rate([h, h, h]).value) < 1e-9


@slow
@given(st.data())
def test_growth_intervals_are_tight(data):
    s = data.draw(st.sampled_from(catalog_members()))
    g = growth_rate(s)
    assert g.lo <= Fraction(g.value) <= g.hi and g.hi - g.lo <= Fraction(1, 10**9)
