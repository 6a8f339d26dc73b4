import numpy as np
import numpy.polynomial.polynomial as npp
import pytest

from matdisc import rpoly
from matdisc.errors import DegreeMismatch, DegreeZero, NotRealRooted


def test_roots_examples():
    assert sorted(np.real(rpoly.roots([-1.0, 0.0, 1.0]))) == pytest.approx([-1.0, 1.0])
    assert np.allclose(rpoly.roots([0.0, 0.0, 0.0, 1.0]), 0.0)
    expanded = npp.polyfromroots([1.0, 2.0, 3.0])
    assert sorted(np.real(rpoly.roots(expanded))) == pytest.approx([1.0, 2.0, 3.0], abs=1e-10)


def test_roots_degree_zero():
    with pytest.raises(DegreeZero):
        rpoly.roots([4.0])


def test_roots_expand_round_trip():
    rng = np.random.default_rng(1)
    for _ in range(20):
        rts = np.sort(rng.uniform(-3, 3, size=6))
        got = np.sort(np.real(rpoly.roots(npp.polyfromroots(rts))))
        assert np.abs(got - rts).max() < 1e-8


def test_lambda_max_examples():
    assert rpoly.lambda_max([-4.0, 0.0, 1.0]) == pytest.approx(2.0, abs=1e-12)
    assert rpoly.lambda_max([1.0, -2.0, 1.0]) == pytest.approx(1.0, abs=1e-7)
    # top polynomial of the one-vector symmetric-sign family in dimension 1
    assert rpoly.lambda_max([-1.0, 0.0, 1.0]) == pytest.approx(1.0, abs=1e-12)


def test_lambda_max_rejects_complex_roots():
    with pytest.raises(NotRealRooted):
        rpoly.lambda_max([1.0, 0.0, 1.0])


def test_is_real_rooted_examples():
    assert not rpoly.is_real_rooted([1.0, 0.0, 1.0])
    assert rpoly.is_real_rooted([-1.0, 0.0, 1.0])


def test_origin_multiplicity_is_deflated():
    # (x^6)(x - 1): the sextuple origin root would split into a complex
    # cluster under coefficient noise without deflation
    c = npp.polymul([0.0] * 6 + [1.0], [-1.0, 1.0])
    c = np.asarray(c) * (1 + 1e-15)
    assert rpoly.is_real_rooted(c, tol=1e-7)
    assert rpoly.lambda_max(c) == pytest.approx(1.0, abs=1e-10)


def test_interlaces_examples():
    assert rpoly.interlaces([0.0, 1.0], [-1.0, 0.0, 1.0])
    assert not rpoly.interlaces([-5.0, 1.0], [-1.0, 0.0, 1.0])


def test_interlaces_degree_mismatch():
    with pytest.raises(DegreeMismatch):
        rpoly.interlaces([0.0, 1.0], [0.0, 0.0, 0.0, 1.0])


def test_derivative_interlaces_by_rolle():
    rng = np.random.default_rng(2)
    for _ in range(25):
        rts = np.sort(rng.uniform(-4, 4, size=5))
        p = npp.polyfromroots(rts)
        assert rpoly.interlaces(npp.polyder(p), p)


def test_interlacing_bounds_lambda_max():
    rng = np.random.default_rng(3)
    for _ in range(10):
        rts = np.sort(rng.uniform(-4, 4, size=5))
        p = npp.polyfromroots(rts)
        g = npp.polyder(p)
        assert rpoly.lambda_max(g) <= rpoly.lambda_max(p) + 1e-7


def test_common_interlacing_examples():
    assert rpoly.has_common_interlacing([[-1.0, 0.0, 1.0], [-4.0, 0.0, 1.0]])
    p1 = npp.polyfromroots([1.0, 3.0])
    p2 = npp.polyfromroots([2.0, 4.0])
    assert rpoly.has_common_interlacing([p1, p2])
    assert not rpoly.has_common_interlacing([[-1.0, 0.0, 1.0], [1.0, 0.0, 1.0]])


def test_common_interlacing_single_polynomial_trivial():
    assert rpoly.has_common_interlacing([npp.polyfromroots([1.0, 2.0])])


def test_common_interlacing_detects_disjoint_root_intervals():
    # {(x-1)(x-2), (x-5)(x-6)} have no common interlacer; some convex
    # combination must go complex
    p1 = npp.polyfromroots([1.0, 2.0])
    p2 = npp.polyfromroots([5.0, 6.0])
    assert not rpoly.has_common_interlacing([p1, p2])


def test_trim_threshold():
    c = rpoly.trim([1.0, 2.0, 1e-20])
    assert len(c) == 2
    assert rpoly.degree([0.0]) == 0
