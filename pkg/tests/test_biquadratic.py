from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from posmaps.biquadratic import (
    BiquadraticForm,
    biquadratic_of_map,
    biquadratic_registry,
    is_canonical_map,
    map_from_biquadratic,
)
from posmaps.forms import cross_square, qi_hou_form
from posmaps.maps import LinearMap, apply_map, classify_map, identity_map, qi_hou_map, unit_matrix
from posmaps.poly import Polynomial, evaluate


def square_13():
    return BiquadraticForm.parse("x1^2*y3^2 - 2*x1*x3*y1*y3 + x3^2*y1^2", 3)


def test_bidegree_is_enforced():
    with pytest.raises(ValueError):
        BiquadraticForm.parse("x1^3*y1", 2)
    with pytest.raises(ValueError):
        BiquadraticForm(Polynomial(biquadratic_registry(3), {}), 2)


def test_form_of_identity_is_squared_inner_product():
    reg = biquadratic_registry(3)
    inner = sum((reg.var(f"x{i}") * reg.var(f"y{i}") for i in range(1, 4)), reg.zero())
    assert biquadratic_of_map(identity_map(3)).poly == inner * inner


def test_form_of_transpose_conjugation_map():
    # a -> V a^T V^T with V = E31 - E13 has form (x1 y3 - x3 y1)^2
    n = 3
    v = unit_matrix(n, 3, 1) - unit_matrix(n, 1, 3)
    blocks = np.empty((n, n, n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            blocks[i, j] = v.dot(unit_matrix(n, i + 1, j + 1).T).dot(v.T)
    assert biquadratic_of_map(LinearMap(n, blocks)) == square_13()


def test_square_form_gives_the_documented_map():
    # phi([a_ij]) = a33 E11 - a13 E13 - a31 E31 + a11 E33
    m = map_from_biquadratic(square_13())
    a = np.array([[Fraction(10 * i + j) for j in range(1, 4)] for i in range(1, 4)], dtype=object)
    expected = np.zeros((3, 3), dtype=object)
    expected[0, 0], expected[0, 2], expected[2, 0], expected[2, 2] = a[2, 2], -a[0, 2], -a[2, 0], a[0, 0]
    assert np.all(apply_map(m, a) == expected)
    cls = classify_map(m)
    assert not cls.completely_positive and cls.completely_copositive


def test_cross_square_map_is_conjugation_and_cp():
    n = 2
    m = map_from_biquadratic(cross_square(n, 1, 2))
    v = unit_matrix(n, 1, 1) - unit_matrix(n, 2, 2)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            assert np.all(m.block(i, j) == v.dot(unit_matrix(n, i, j)).dot(v.T))
    assert classify_map(m).completely_positive


@pytest.mark.parametrize("n", range(3, 9))
def test_qi_hou_round_trip(n):
    for k in range(1, n):
        m = qi_hou_map(n, k)
        assert biquadratic_of_map(m) == qi_hou_form(n, k)
        assert map_from_biquadratic(qi_hou_form(n, k)) == m
        assert is_canonical_map(m)


def test_non_canonical_map_does_not_round_trip():
    # Phi(E12) = E21 has the same form as the canonical Phi(E12) = E12 split
    n = 2
    blocks = np.zeros((n, n, n, n), dtype=object)
    blocks[0, 1, 1, 0] = 1
    blocks[1, 0, 0, 1] = 1
    m = LinearMap(n, blocks)
    assert not is_canonical_map(m)
    assert biquadratic_of_map(map_from_biquadratic(biquadratic_of_map(m))) == biquadratic_of_map(m)


coef = st.integers(-4, 4)


@st.composite
def forms(draw, n=3):
    reg = biquadratic_registry(n)
    xs = [reg.var(f"x{i}") for i in range(1, n + 1)]
    ys = [reg.var(f"y{i}") for i in range(1, n + 1)]
    total = reg.zero()
    for _ in range(draw(st.integers(0, 6))):
        i, j, a, b = (draw(st.integers(0, n - 1)) for _ in range(4))
        total = total + xs[i] * xs[j] * ys[a] * ys[b] * draw(coef)
    return BiquadraticForm(total, n)


@settings(max_examples=300, deadline=None)
@given(forms())
def test_form_to_map_to_form_round_trip(form):
    assert biquadratic_of_map(map_from_biquadratic(form)) == form


@settings(max_examples=200, deadline=None)
@given(forms(), st.lists(st.integers(-3, 3), min_size=6, max_size=6))
def test_map_reproduces_form_values(form, pt):
    # independent oracle: y^T Phi(x x^T) y evaluated numerically
    x = np.array([Fraction(v) for v in pt[:3]], dtype=object)
    y = np.array([Fraction(v) for v in pt[3:]], dtype=object)
    image = apply_map(map_from_biquadratic(form), np.outer(x, x))
    point = {f"x{i + 1}": x[i] for i in range(3)} | {f"y{i + 1}": y[i] for i in range(3)}
    assert y.dot(image.dot(y)) == evaluate(form.poly, point)
