from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from posmaps.biquadratic import BiquadraticForm, map_from_biquadratic
from posmaps.maps import (
    BlockMatrix,
    LinearMap,
    ParameterError,
    Permutation,
    apply_map,
    choi_and_witness,
    classify_map,
    identity_map,
    identity_matrix,
    is_psd_exact,
    partial_transpose,
    qi_hou_map,
    rational_matrix,
    unit_matrix,
)


def diag(*vals):
    return rational_matrix(np.diag(vals))


def reference_qi_hou(n, k, a):
    """Direct transcription of A -> diag(b) - A, independent of the block layout."""
    a = np.asarray(a, dtype=object)
    b = [(n - 1) * a[i, i] + a[(i + k) % n, (i + k) % n] for i in range(n)]
    return rational_matrix(np.diag(b)) - a


def test_permutations():
    s = Permutation.shift(5, 2)
    assert [s(i) for i in range(1, 6)] == [3, 4, 5, 1, 2]
    assert s * s.inverse() == Permutation.identity(5)
    with pytest.raises(ValueError):
        Permutation((1, 1, 2))


@pytest.mark.parametrize("n,k", [(2, 1), (3, 0), (3, 3), (4, -1)])
def test_qi_hou_map_parameter_errors(n, k):
    with pytest.raises(ParameterError):
        qi_hou_map(n, k)


def test_qi_hou_map_examples():
    assert np.all(apply_map(qi_hou_map(3, 1), unit_matrix(3, 1, 1)) == diag(1, 0, 1))
    assert np.all(apply_map(qi_hou_map(4, 2), unit_matrix(4, 3, 3)) == diag(1, 0, 2, 0))
    for n in range(3, 7):
        for k in range(1, n):
            assert np.all(apply_map(qi_hou_map(n, k), identity_matrix(n)) == (n - 1) * identity_matrix(n))


def test_apply_map_examples():
    m = qi_hou_map(3, 1)
    assert np.all(apply_map(m, rational_matrix(np.zeros((3, 3), dtype=int))) == 0)
    assert np.all(apply_map(m, identity_matrix(3)) == 2 * identity_matrix(3))
    with pytest.raises(ValueError):
        apply_map(m, identity_matrix(4))


def test_square_form_map_sends_e11_to_e33():
    form = BiquadraticForm.parse("x1^2*y3^2 - 2*x1*x3*y1*y3 + x3^2*y1^2", 3)
    assert np.all(apply_map(map_from_biquadratic(form), unit_matrix(3, 1, 1)) == unit_matrix(3, 3, 3))


@settings(max_examples=200, deadline=None)
@given(st.integers(3, 6).flatmap(lambda n: st.tuples(
    st.just(n), st.integers(1, n - 1),
    st.lists(st.integers(-9, 9), min_size=n * n, max_size=n * n))))
def test_qi_hou_map_matches_its_definition(args):
    n, k, entries = args
    a = rational_matrix(np.array(entries).reshape(n, n))
    assert np.all(apply_map(qi_hou_map(n, k), a) == reference_qi_hou(n, k, a))


def test_linear_map_requires_hermiticity_preservation():
    blocks = np.zeros((2, 2, 2, 2), dtype=int)
    blocks[0, 1, 0, 0] = 1
    with pytest.raises(ValueError):
        LinearMap(2, blocks)


def test_choi_of_identity_on_m2():
    choi, witness = choi_and_witness(identity_map(2))
    expected = np.zeros((4, 4), dtype=int)
    for r, c in [(0, 0), (0, 3), (3, 0), (3, 3)]:
        expected[r, c] = 1
    assert np.all(choi.matrix == expected)
    assert witness == choi.scale(Fraction(1, 2))


def test_choi_blocks_of_qi_hou_3_1():
    choi, witness = choi_and_witness(qi_hou_map(3, 1))
    diagonal = {1: diag(1, 0, 1), 2: diag(1, 1, 0), 3: diag(0, 1, 1)}
    for i in range(1, 4):
        for j in range(1, 4):
            expected = diagonal[i] if i == j else -unit_matrix(3, i, j)
            assert np.all(choi.block(i, j) == expected)
    assert np.all(witness.matrix * 3 == choi.matrix)


def test_choi_trace():
    for n in range(3, 8):
        for k in range(1, n):
            choi, _ = choi_and_witness(qi_hou_map(n, k))
            assert choi.trace() == n * (n - 1)


def test_partial_transpose_examples():
    choi, _ = choi_and_witness(identity_map(2))
    swap = np.zeros((4, 4), dtype=int)
    for r, c in [(0, 0), (3, 3), (1, 2), (2, 1)]:
        swap[r, c] = 1
    assert np.all(partial_transpose(choi).matrix == swap)
    block_diag = BlockMatrix(np.kron(np.eye(2, dtype=int), np.array([[1, 2], [2, 5]])), 2)
    assert partial_transpose(block_diag) == block_diag


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.tuples(
    st.just(n), st.lists(st.integers(-5, 5), min_size=n**4, max_size=n**4),
    st.lists(st.integers(-5, 5), min_size=n**4, max_size=n**4))))
def test_partial_transpose_is_a_linear_involution(args):
    n, e1, e2 = args
    a = BlockMatrix(np.array(e1).reshape(n * n, n * n), n)
    b = BlockMatrix(np.array(e2).reshape(n * n, n * n), n)
    assert partial_transpose(partial_transpose(a)) == a
    assert partial_transpose(a + b.scale(3)) == partial_transpose(a) + partial_transpose(b).scale(3)


def test_block_matrix_shape_check():
    with pytest.raises(ValueError):
        BlockMatrix(np.zeros((3, 3), dtype=int), 2)


def test_psd_examples():
    assert is_psd_exact(identity_matrix(3)).psd
    v = is_psd_exact(diag(1, -1))
    assert not v.psd
    assert v.witness[0] == 0 and v.witness[1] != 0
    assert v.value < 0
    good = is_psd_exact(rational_matrix([[2, -1], [-1, 2]]))
    assert good.psd
    assert [p for _, p in good.pivots] == [2, Fraction(3, 2)]


def test_psd_rejects_non_symmetric():
    with pytest.raises(ValueError):
        is_psd_exact(rational_matrix([[1, 2], [0, 1]]))


def test_zero_diagonal_with_off_diagonal_entry_is_indefinite():
    v = is_psd_exact(rational_matrix([[0, 1], [1, 0]]))
    assert not v.psd
    assert v.witness.dot(rational_matrix([[0, 1], [1, 0]]).dot(v.witness)) < 0


def psd_by_minors(s):
    """Oracle: a symmetric matrix is psd iff every principal minor is >= 0."""
    n = s.shape[0]
    for r in range(1, n + 1):
        for idx in combinations(range(n), r):
            sub = s[np.ix_(idx, idx)]
            if _det(sub) < 0:
                return False
    return True


def _det(m):
    m = [list(row) for row in m]
    n = len(m)
    if n == 1:
        return m[0][0]
    return sum((-1) ** c * m[0][c] * _det(np.array([row[:c] + row[c + 1:] for row in m[1:]], dtype=object))
               for c in range(n))


@settings(max_examples=400, deadline=None)
@given(st.integers(2, 4).flatmap(lambda n: st.tuples(
    st.just(n), st.lists(st.fractions(-3, 3, max_denominator=3), min_size=n * n, max_size=n * n))))
def test_psd_verdict_matches_minor_oracle(args):
    n, entries = args
    a = rational_matrix(np.array(entries, dtype=object).reshape(n, n))
    s = a + a.T
    verdict = is_psd_exact(s)
    assert verdict.psd == psd_by_minors(s)
    if not verdict.psd:
        assert verdict.witness.dot(s.dot(verdict.witness)) == verdict.value < 0


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.integers(-4, 4), min_size=n * 3, max_size=n * 3)))
def test_gram_matrices_are_psd(entries):
    g = np.vectorize(Fraction, otypes=[object])(np.array(entries).reshape(-1, 3))
    assert is_psd_exact(g.T.dot(g)).psd


def test_classify_examples():
    ident = classify_map(identity_map(3))
    assert ident.completely_positive
    square = map_from_biquadratic(BiquadraticForm.parse("x1^2*y3^2 - 2*x1*x3*y1*y3 + x3^2*y1^2", 3))
    cls = classify_map(square)
    assert not cls.completely_positive and cls.completely_copositive


def test_qi_hou_4_1_is_neither_cp_nor_ccp():
    cls = classify_map(qi_hou_map(4, 1))
    assert not cls.completely_positive and not cls.completely_copositive
    choi, _ = choi_and_witness(qi_hou_map(4, 1))
    for verdict, mat in [(cls.cp_verdict, choi.matrix), (cls.ccp_verdict, partial_transpose(choi).matrix)]:
        v = verdict.witness
        assert all(isinstance(c, Fraction) for c in v)
        assert v.dot(mat.dot(v)) == verdict.value < 0
