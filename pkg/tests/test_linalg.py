import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from crreg.exact import GaussRational, InconsistentSystem, SpanReducer, nullspace, rank, rref, solve
from crreg.exact.linalg import det, inverse, matmul
from oracles import sym_scalar

ints = st.integers(-4, 4)
entries = st.builds(GaussRational, ints, ints)


def matrices(rows, cols):
    return st.lists(st.lists(entries, min_size=cols, max_size=cols), min_size=rows, max_size=rows)


def sym(m):
    return sp.Matrix([[sym_scalar(x) for x in r] for r in m])


@given(matrices(3, 5))
def test_rank_and_nullspace_against_sympy(m):
    assert rank(m, 5) == sym(m).rank()
    ker = nullspace(m, 5)
    assert len(ker) == 5 - sym(m).rank()
    for v in ker:
        assert all(sum((a * b for a, b in zip(row, v)), GaussRational(0)) == 0 for row in m)


@given(matrices(4, 4))
def test_det_and_inverse(m):
    d = det(m)
    assert sp.expand(sym_scalar(d) - sym(m).det()) == 0
    if d:
        inv = inverse(m)
        ident = matmul(m, inv)
        assert all(ident[i][j] == (1 if i == j else 0) for i in range(4) for j in range(4))
    else:
        with pytest.raises(ZeroDivisionError):
            inverse(m)


def test_rref_shape():
    red, piv = rref([[2, 4, 6], [1, 2, 4]], 3)
    assert piv == [0, 2]
    assert red == [[1, 2, 0], [0, 0, 1]]


def test_solve_and_inconsistency():
    assert solve([[1, 1], [1, -1]], [3, 1]) == [2, 1]
    with pytest.raises(InconsistentSystem):
        solve([[1, 1], [2, 2]], [1, 3])


def test_span_reducer():
    red = SpanReducer([[1, 0, 1], [0, 1, 1]], 3)
    assert red.contains([2, 3, 5])
    assert not red.contains([0, 0, 1])
    assert red.coordinates([2, 3, 5]) == [2, 3]
    assert red.coordinates([0, 0, 1]) is None
