import numpy as np
import pytest
from conftest import random_complex

from linkshapes.biquandle import Shape, Shaping
from linkshapes.catalog import figure_eight_shaping, figure_eight_diagram, trefoil_diagram, \
    trefoil_shaping
from linkshapes.errors import InvalidPath
from linkshapes.holonomy import (GroupoidPath, evaluate_path, longitude_word, meridian_loop,
                                 meridian_matrix, mobius, region_path, verify_holonomy,
                                 wirtinger_meridian, x_minus, x_plus)


def test_meridian_matrix_is_loop(rng):
    s = Shape(*(random_complex(rng) for _ in range(3)))
    loop = x_plus(s) @ np.linalg.inv(x_minus(s))
    assert np.allclose(meridian_matrix(s), loop)
    assert np.isclose(np.trace(loop), s.m + 1 / s.m)
    assert np.isclose(np.linalg.det(loop), 1)


def test_holonomy_relations_hold():
    for d, s in [(trefoil_diagram(), trefoil_shaping(1.2 - 0.7j)),
                 (figure_eight_diagram(), figure_eight_shaping())]:
        rep = verify_holonomy(d, s)
        assert rep.ok and rep.max_residual < 1e-12


def test_perturbed_shaping_fails():
    d = trefoil_diagram()
    s = trefoil_shaping(1.2 - 0.7j)
    bad = Shaping(s.a * np.r_[1.01, np.ones(5)], s.b, s.m)
    assert not verify_holonomy(d, bad).ok


def test_wirtinger_meridians_are_conjugate():
    d = trefoil_diagram()
    s = trefoil_shaping(1.5 + 0.5j)
    traces = [np.trace(evaluate_path(d, s, wirtinger_meridian(d, k))) for k in range(6)]
    assert np.allclose(traces, 1.5 + 0.5j + 1 / (1.5 + 0.5j))


def test_longitude_commutes_with_meridian():
    d = trefoil_diagram()
    s = trefoil_shaping(0.9 + 0.3j)
    M = evaluate_path(d, s, meridian_loop(d, 0, at="right"))
    L = evaluate_path(d, s, longitude_word(d, 0))
    assert np.allclose(M @ L, L @ M, atol=1e-10)


def test_region_path_connects():
    d = figure_eight_diagram()
    for start in range(d.n_regions):
        for end in range(d.n_regions):
            path = region_path(d, start, end)
            if start != end:
                assert len(path) > 0


def test_path_parsing_and_errors():
    p = GroupoidPath.parse("x1+ x2-^-1")
    assert str(p) == "x1+ x2-^-1"
    assert str(p.inverse()) == "x2- x1+^-1"
    with pytest.raises(InvalidPath):
        GroupoidPath.parse("y1+")
    d = trefoil_diagram()
    s = trefoil_shaping(2.0)
    with pytest.raises(InvalidPath):
        # the two letters do not share a region
        evaluate_path(d, s, "x0+ x3+")


def test_mobius_infinity():
    mat = np.array([[2, 0], [1, 1]], dtype=complex)
    assert mobius(None, mat) is None
    assert mobius(0, mat) == 1
