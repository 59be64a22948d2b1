from fractions import Fraction

import pytest

from tessgrowth.cyclic import (
    EQUAL, EUCLIDEAN, FINITE, GREATER, HYPERBOLIC, INCOMPARABLE, LESS, OK, PARITY_VIOLATION,
    CyclicSequence, angle_excess, canonicalize, equivalent, growth_class, leq, minimal_representatives,
    parse_sequence, realizability_check,
)


@pytest.mark.parametrize("raw, canon", [
    ([6, 8, 12, 4], [4, 6, 8, 12]),
    ([5, 4, 5, 4], [4, 5, 4, 5]),
    ([7, 7, 7], [7, 7, 7]),
    ([4, 7, 4, 3], [3, 4, 7, 4]),
])
def test_canonicalize(raw, canon):
    assert list(canonicalize(raw).terms) == canon


@pytest.mark.parametrize("raw", [[3, 3], [2, 5, 5], []])
def test_canonicalize_rejects(raw):
    with pytest.raises(ValueError):
        canonicalize(raw)


@pytest.mark.parametrize("a, b, same", [
    ([4, 5, 4, 5], [5, 4, 5, 4], True),
    ([4, 6, 8, 10], [4, 6, 10, 8], False),
    ([3, 4, 7, 4], [4, 7, 4, 3], True),
])
def test_equivalent(a, b, same):
    assert equivalent(a, b) is same


@pytest.mark.parametrize("a, b, verdict", [
    ([4, 6, 8, 10], [6, 8, 12, 4], LESS),
    # 10,8,12,6 dominates 6,8,12,4 term by term, so these are comparable
    ([6, 8, 12, 4], [10, 8, 12, 6, 4], LESS),
    ([4, 6, 8, 12], [5, 5, 5, 5, 5], INCOMPARABLE),
    ([4, 6, 8, 10], [10, 8, 12, 6, 4], LESS),
    ([10, 8, 12, 6, 4], [4, 6, 8, 10], GREATER),
    ([5, 4, 5, 4], [4, 5, 4, 5], EQUAL),
])
def test_leq(a, b, verdict):
    assert leq(a, b) == verdict


@pytest.mark.parametrize("s, eta", [
    ([4, 4, 4, 4], Fraction(0)),
    ([4, 6, 14], Fraction(1, 42)),
    ([3] * 7, Fraction(1, 3)),
    ([3, 3, 3], Fraction(-1)),
])
def test_angle_excess(s, eta):
    assert angle_excess(s) == eta


@pytest.mark.parametrize("s, cls", [
    ([3, 3, 3], FINITE), ([6, 6, 6], EUCLIDEAN), ([7, 7, 7], HYPERBOLIC), ([4, 4, 4, 4], EUCLIDEAN),
])
def test_growth_class(s, cls):
    assert growth_class(s) == cls


@pytest.mark.parametrize("s, verdict", [
    ([5, 5, 6], PARITY_VIOLATION), ([6, 8, 10], OK), ([5, 4, 5, 6, 5, 8], OK),
])
def test_realizability(s, verdict):
    assert realizability_check(s) == verdict


def test_minimal_representatives():
    assert [str(s) for s in minimal_representatives("[p,q,r]")] == ["[6,8,10]"]
    assert {str(s) for s in minimal_representatives("[p,q,r,s]")} == {"[4,6,8,10]", "[4,6,10,8]", "[4,8,6,10]"}
    five = minimal_representatives("[p,q,r,s,t]")
    assert len(five) == 12 and str(min(five)) == "[4,6,8,10,12]"


def test_parse_sequence():
    assert parse_sequence(" [4, 6,14] ") == CyclicSequence([14, 6, 4])
    assert parse_sequence("4,6,14") == CyclicSequence([4, 6, 14])
    with pytest.raises(ValueError):
        parse_sequence("4;6;14")
