from fractions import Fraction

import pytest

from tessgrowth.classification import families
from tessgrowth.spectral import corona_series
from tessgrowth.transition import (
    BRICK, NOTCHED, WEDGE, FaceTypeId, TransitionError, TransitionMatrix, block_matrix_g44, catalog_matrix,
    first_distribution, matrix_for, offspring_counts,
)


def entries(m):
    return [[str(x) for x in r] for r in m.entries]


@pytest.mark.parametrize("s, kind, value", [
    ([5, 5, 5, 5, 5], WEDGE, 8),
    ([5, 5, 5, 5, 5], BRICK, 5),
    ([4, 4, 4, 4], WEDGE, 3),
])
def test_offspring_counts(s, kind, value):
    assert offspring_counts(s, FaceTypeId(kind, 1)).value == value


def test_offspring_counts_rejects():
    with pytest.raises(TransitionError):
        offspring_counts([4, 4, 6, 8], FaceTypeId(WEDGE, 1))
    with pytest.raises(TransitionError):
        offspring_counts([5, 5, 5, 5, 5], FaceTypeId(NOTCHED, 1))


def test_matrix_4pq():
    assert entries(matrix_for([4, 6, 14])) == [["0", "1", "-1", "0"], ["5", "0", "0", "-1"],
                                               ["1", "0", "0", "0"], ["0", "1", "0", "0"]]


def test_matrix_33p3p():
    assert entries(matrix_for([3, 3, 5, 3, 5])) == [["2", "1/2", "1/2"], ["1", "1", "0"], ["1", "1/2", "1/2"]]


def test_m1_m2():
    m1 = matrix_for([4, 4, 6, 8], "T1")
    m2 = matrix_for([4, 4, 6, 8], "T2")
    assert m1[3, 1] == 5 and m1[0, 3] == 1
    diff = [(i, j) for i in range(8) for j in range(8) if m1[i, j] != m2[i, j]]
    assert diff == [(0, 2), (0, 3), (1, 2), (1, 3)]
    with pytest.raises(TransitionError):
        matrix_for([4, 4, 6, 8])


def test_matrix_validation():
    with pytest.raises(TransitionError):
        TransitionMatrix([[1, 2]], ("a",))
    with pytest.raises(TransitionError):
        TransitionMatrix([[Fraction(1, 3)]], ("a",))


def test_first_distributions():
    v, root = first_distribution([4, 4, 6, 8], variant="T1", with_root=True)
    assert v.total() == 4 and root["vertex"] == 4
    v = first_distribution([7, 7, 7])
    assert v.total() == 7
    v, root = first_distribution([3, 16, 16], with_root=True)
    assert v.counts == [8, 0] and root["vertex"] == 16


def test_halved_system_first_term():
    m, v1, _ = catalog_matrix([3, 16, 16])
    assert m.weights == (2, 4)
    assert corona_series(m, v1, 1).counts == [16]


def test_all_entries_in_quarter_integers():
    from tessgrowth.classification import minimal_representatives

    for fam in families():
        if fam.matrix is None:
            continue
        for s in minimal_representatives(fam.id)[:1]:
            try:
                m = matrix_for(s)
            except TransitionError:
                continue
            assert all((4 * x).denominator == 1 for r in m.entries for x in r), fam.id


def test_block_matrix_shape():
    m = block_matrix_g44([5, 5, 5, 5, 5])
    assert m.order == 10
    assert [f.kind for f in m.labels] == [WEDGE] * 5 + [BRICK] * 5
    with pytest.raises(TransitionError):
        block_matrix_g44([3, 5, 5, 5, 5])


def test_orientation_law():
    # j . (M v1) equals the simulator's |F_2| at every catalog minimal representative
    from tessgrowth.bilinski import count_coronas
    from tessgrowth.classification import minimal_representatives

    checked = 0
    for fam in families():
        if fam.matrix is None or fam.concentricity != "UniformlyConcentric":
            continue
        s = minimal_representatives(fam.id)[0]
        m, v1, root = catalog_matrix(s)
        f2 = corona_series(m, v1, 2).counts[1]
        assert f2 == count_coronas(s, root["vertex"], 2).faces[1], fam.id
        checked += 1
    assert checked >= 25
