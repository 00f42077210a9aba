import numpy as np
import pytest
from conftest import random_complex

from linkshapes.biquandle import (Shape, Shaping, a_from_b, b_ratios_from_a, braid,
                                  braid_arrays, crossing_flags, shaping_from_b, verify_shaping)
from linkshapes.catalog import trefoil_diagram, trefoil_shaping
from linkshapes.errors import InconsistentPropagation, PinchedCrossing, SingularBraiding


def _shape(rng):
    return Shape(*(random_complex(rng) for _ in range(3)))


@pytest.mark.parametrize("sign", [1, -1])
def test_scalar_matches_vectorised(rng, sign):
    x, y = _shape(rng), _shape(rng)
    out2, out1 = braid(sign, x, y)
    a2p, b2p, a1p, b1p, _ = braid_arrays(sign, *x, *y)
    assert np.allclose([out2.a, out2.b, out1.a, out1.b], [a2p, b2p, a1p, b1p], rtol=1e-14)
    assert out2.m == y.m and out1.m == x.m


def test_negative_braiding_undoes_positive(rng):
    for _ in range(50):
        x, y = _shape(rng), _shape(rng)
        u, v = braid(1, x, y)
        back_x, back_y = braid(-1, u, v)
        assert np.allclose(tuple(back_x), tuple(x), rtol=1e-10)
        assert np.allclose(tuple(back_y), tuple(y), rtol=1e-10)


@pytest.mark.parametrize("sign", [1, -1])
def test_a_values_recovered_from_b(rng, sign):
    x, y = _shape(rng), _shape(rng)
    out2, out1 = braid(sign, x, y)
    a1, a2, a1p, a2p = a_from_b(sign, x.b, y.b, out2.b, out1.b, x.m, y.m)
    assert np.allclose([a1, a2, a1p, a2p], [x.a, y.a, out1.a, out2.a], rtol=1e-10)


@pytest.mark.parametrize("sign", [1, -1])
def test_b_ratios_from_a(rng, sign):
    x, y = _shape(rng), _shape(rng)
    out2, out1 = braid(sign, x, y)
    r = b_ratios_from_a(sign, x.a, y.a, out1.a, out2.a, x.m, y.m)
    assert np.isclose(r["W"], y.b / (x.m * x.b))
    assert np.isclose(r["E"], y.m * out2.b / out1.b)
    assert np.isclose(r["N"], x.b / out2.b)
    assert np.isclose(r["S"], x.m * out1.b / (y.m * y.b))


def test_pinched_pair_is_flagged():
    x = Shape(0.7 + 0.2j, 1.3 - 0.4j, 1.5)
    y = Shape(1.1 - 0.3j, x.m * x.b, 0.9 + 0.1j)
    out2, out1 = braid(1, x, y)
    flags = crossing_flags(x, y, out2, out1)
    assert flags.pinched and max(flags.pinch_residuals) < 1e-12
    with pytest.raises(PinchedCrossing):
        a_from_b(1, x.b, y.b, out2.b, out1.b, x.m, y.m)


def test_singular_denominator():
    # 1 - m2 a2 (1 - b2/(m1 b1)) = 0
    x = Shape(1.3, 1.0, 1.0)
    y = Shape(0.5, -1.0, 1.0)
    with pytest.raises(SingularBraiding):
        braid(1, x, y)


def test_shape_rejects_zero():
    with pytest.raises(ValueError):
        Shape(0, 1, 1)


def test_trefoil_shaping_verifies():
    d = trefoil_diagram()
    s = trefoil_shaping(1.4 + 0.3j)
    rep = verify_shaping(d, s)
    assert rep.ok and not any(rep.pinched) and not any(rep.degenerate)
    assert rep.m_residual == 0


def test_inconsistent_b_values_rejected():
    d = trefoil_diagram()
    b = trefoil_shaping(2.0).b.copy()
    b[4] *= 1.1
    with pytest.raises(InconsistentPropagation):
        shaping_from_b(d, b, 2.0)


def test_shaping_dict_round_trip():
    s = trefoil_shaping(0.8 - 0.6j)
    again = Shaping.from_dict(s.to_dict())
    assert np.array_equal(again.a, s.a) and np.array_equal(again.b, s.b)
