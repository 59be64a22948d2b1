import itertools

import pytest

from tessgrowth.classification import (
    MONOMORPHIC, NON_CONCENTRIC, POLYMORPHIC, UNIFORMLY_CONCENTRIC, UNKNOWN, PreconditionError,
    catalog_document, classify, families, family_by_id, match_pattern, polymorphism_sufficient,
)
from tessgrowth.cyclic import HYPERBOLIC, OK, angle_excess, canonical_word, realizability_check


@pytest.mark.parametrize("s, fid, binding", [
    ([4, 6, 14], "[4,p,q]", {"p": 6, "q": 14}),
    ([3, 4, 7, 4], "[3,p,q,p]", {"p": 4, "q": 7}),
    ([5, 5, 5, 5, 5], "[p,p,p,p,p]", {"p": 5}),
])
def test_match_pattern(s, fid, binding):
    fam, b = match_pattern(s)
    assert fam.id == fid and b == binding


@pytest.mark.parametrize("s, morphism, conc, root", [
    ([7, 7, 7], MONOMORPHIC, UNIFORMLY_CONCENTRIC, None),
    ([4, 4, 6, 8], POLYMORPHIC, None, None),
    ([3, 4, 7, 4], MONOMORPHIC, NON_CONCENTRIC, None),
    ([4, 4, 4, 5], POLYMORPHIC, None, None),
    ([3, 3, 5, 3, 5], MONOMORPHIC, NON_CONCENTRIC, [5]),
    ([4, 6, 14], MONOMORPHIC, NON_CONCENTRIC, [6, 14]),
])
def test_classify(s, morphism, conc, root):
    c = classify(s)
    assert c.growth_class == HYPERBOLIC
    assert c.morphism == morphism
    if conc is not None:
        assert c.concentricity == conc
    if root is not None:
        assert c.recommended_root == root


def test_classify_finite_and_parity():
    assert classify([3, 3, 3]).morphism == UNKNOWN
    c = classify([7, 7, 8])
    assert c.morphism == UNKNOWN and "parity" in c.notes[0]


@pytest.mark.parametrize("s, verdict", [([5, 5, 5, 6], True), ([4, 5, 4, 5], False), ([4, 4, 6, 8], True)])
def test_polymorphism_sufficient(s, verdict):
    assert polymorphism_sufficient(s) is verdict


def test_polymorphism_sufficient_precondition():
    with pytest.raises(PreconditionError):
        polymorphism_sufficient([3, 3, 4, 3, 4])


def test_catalog_document_shape():
    doc = catalog_document()
    ids = [f["id"] for f in doc["families"]]
    assert len(ids) == len(set(ids))
    assert "M1" in doc["first_distributions"] and "M2" in doc["first_distributions"]
    for f in families():
        assert family_by_id(f.id) is f


def _canonical_words(k, top):
    for w in itertools.product(range(3, top + 1), repeat=k):
        if w == canonical_word(w):
            yield w


def test_sufficient_implies_polymorphic():
    # exhaustive over k <= 6, valences <= 10, positive excess
    for k in (4, 5, 6):
        top = 10 if k < 6 else 7
        for w in _canonical_words(k, top):
            if angle_excess(w) <= 0:
                continue
            try:
                suff = polymorphism_sufficient(w)
            except PreconditionError:
                continue
            if suff:
                assert classify(w).morphism in (POLYMORPHIC, UNKNOWN), w


def test_classification_exhaustive_for_short_sequences():
    # every realizable hyperbolic sequence with k <= 6 gets a verdict
    for k in (3, 4, 5, 6):
        top = {3: 14, 4: 10, 5: 8, 6: 6}[k]
        for w in _canonical_words(k, top):
            if angle_excess(w) <= 0 or realizability_check(w) != OK:
                continue
            assert classify(w).morphism != UNKNOWN, w
