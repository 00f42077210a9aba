import mpmath
import numpy as np
import pytest
from conftest import random_complex

from linkshapes.catalog import (FIGURE_EIGHT_LAMBDAS, figure_eight_diagram, figure_eight_shaping,
                                trefoil_diagram, trefoil_shaping)
from linkshapes.errors import DegenerateTetrahedron, PinchedCrossing
from linkshapes.biquandle import Shape, braid, CrossingShapes
from linkshapes.octahedra import (INF, TetShape, bloch_wigner, compare_decompositions,
                                  cross_ratio, decompose_crossing, face_map_check,
                                  segment_hyperbolicity, tetrahedra, verify_gluing_equations,
                                  vertical_ratios, volume)
from linkshapes.twist import TorusKnotFamily, torus_knot_diagram, torus_knot_shaping


def _mp_bloch_wigner(z):
    z = mpmath.mpc(z)
    return float(mpmath.im(mpmath.polylog(2, z)) + mpmath.arg(1 - z) * mpmath.log(abs(z)))


def test_bloch_wigner_against_mpmath(rng):
    pts = list(random_complex(rng, 200, 0.01, 30.0))
    pts += [0.5 + 0.5j, np.exp(1j * np.pi / 3), 2 - 1e-3j, -1 + 1e-9j, 1 + 1e-6j, 0.999 + 0.01j]
    for z in pts:
        assert abs(bloch_wigner(z) - _mp_bloch_wigner(z)) < 1e-12


def test_bloch_wigner_symmetries(rng):
    for z in random_complex(rng, 20, 0.1, 5):
        D = bloch_wigner(z)
        assert np.isclose(bloch_wigner(1 / (1 - z)), D)
        assert np.isclose(bloch_wigner(1 / z), -D)
        assert np.isclose(bloch_wigner(np.conj(z)), -D)
    assert bloch_wigner(0.3) == pytest.approx(0.0, abs=1e-15)


def test_regular_tetrahedron_volume():
    assert bloch_wigner(np.exp(1j * np.pi / 3)) == pytest.approx(1.0149416064096536, abs=1e-13)


def test_cross_ratio_at_infinity():
    p = [0.3 + 1j, -2, 1.5j]
    for k in range(4):
        pts = list(p)
        pts.insert(k, INF)
        big = list(p)
        big.insert(k, 1e9)
        assert np.isclose(cross_ratio(*pts), cross_ratio(*big), rtol=1e-7)
    with pytest.raises(DegenerateTetrahedron):
        cross_ratio(1, 1, 2, 3)


@pytest.mark.parametrize("sign", [1, -1])
def test_shape_cycle_has_period_three(rng, sign):
    t = TetShape("t", sign, ("a", "b", "c", "d"), complex(random_complex(rng)))
    z0, z1, z2 = t.shapes
    assert np.isclose(TetShape("t", sign, t.vertices, z2).z1, z0)


def test_gluing_equations_both_decompositions():
    for d, s in [(trefoil_diagram(), trefoil_shaping(1.3 + 0.2j)),
                 (figure_eight_diagram(), figure_eight_shaping(0.4 + 0.1j, 1.6, 0.9 - 0.2j))]:
        for kind in ("five", "four"):
            rep = verify_gluing_equations(d, s, kind)
            assert rep.ok, rep.to_dict()
            assert not rep.degenerate_tetrahedra
        for c in range(d.n_crossings):
            assert compare_decompositions(s.crossing_shapes(d, c)) < 1e-10


def test_tetrahedron_counts():
    d = figure_eight_diagram()
    s = figure_eight_shaping()
    assert len(tetrahedra(d, s, "five")) == 5 * d.n_crossings
    assert len(tetrahedra(d, s, "four")) == 4 * d.n_crossings


def test_figure_eight_volume():
    # twice the regular ideal tetrahedron
    expected = 2 * _mp_bloch_wigner(np.exp(1j * np.pi / 3))
    d = figure_eight_diagram()
    for L, sign in zip(FIGURE_EIGHT_LAMBDAS, (1, -1)):
        for p, q, r in [(0.5, 2.0, 1.0), (0.3 + 0.4j, 1.7 - 0.2j, 0.6 + 0.9j)]:
            s = figure_eight_shaping(p, q, r, L, d)
            for kind in ("five", "four"):
                assert volume(d, s, kind) == pytest.approx(sign * expected, abs=1e-10)


def test_torus_knot_volume_vanishes():
    d = torus_knot_diagram(2)
    s = torus_knot_shaping(TorusKnotFamily.from_root(2, 1.2 + 0.3j, 1), d)
    assert abs(volume(d, s)) < 1e-10


def test_hyperbolicity_ratios():
    d = figure_eight_diagram()
    s = figure_eight_shaping(0.4 + 0.1j, 1.6, 0.9 - 0.2j)
    ratio, expected = vertical_ratios(d, s)
    assert np.allclose(ratio, expected, rtol=1e-12)
    assert segment_hyperbolicity(d, s).max() < 1e-12


def test_face_maps_trefoil():
    d = trefoil_diagram()
    s = trefoil_shaping(0.7 + 0.9j)
    for c in range(3):
        res = face_map_check(s.crossing_shapes(d, c))
        assert max(res.values()) < 1e-12


def test_face_maps_reject_pinched_and_negative():
    x = Shape(0.7 + 0.2j, 1.3 - 0.4j, 1.5)
    y = Shape(1.1 - 0.3j, x.m * x.b, 0.9 + 0.1j)
    out2, out1 = braid(1, x, y)
    with pytest.raises(PinchedCrossing):
        face_map_check(CrossingShapes(1, x, y, out2, out1))
    with pytest.raises(PinchedCrossing):
        decompose_crossing(CrossingShapes(1, x, y, out2, out1), "four")
    d = figure_eight_diagram()
    s = figure_eight_shaping()
    with pytest.raises(ValueError):
        face_map_check(s.crossing_shapes(d, 0))
