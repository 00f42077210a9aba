import numpy as np
import pytest
from conftest import random_complex

from linkshapes.biquandle import Shape, braid
from linkshapes.errors import SingularBraiding
from linkshapes.holonomy import x_minus, x_plus
from linkshapes.weyl import (CentralCharacter, phi_character, r_action, r_inverse_action,
                             weyl_center_braid)


def _chars(rng, k=2):
    return [tuple(random_complex(rng) for _ in range(3)) for _ in range(k)]


def test_documented_pair():
    chi2p, chi1p = weyl_center_braid(1, (2, 1, 3), (5, 2, 2))
    assert np.allclose(tuple(chi2p), (11 / 4, 1 / 2, 2), rtol=1e-14)
    assert np.allclose(tuple(chi1p), (40 / 11, -4 / 7, 3), rtol=1e-14)


@pytest.mark.parametrize("sign", [1, -1])
def test_matches_shape_braiding(rng, sign):
    for _ in range(200):
        c1, c2 = _chars(rng)
        try:
            ref = braid(sign, c1, c2)
        except SingularBraiding:
            continue
        got = weyl_center_braid(sign, c1, c2)
        for g, r in zip(got, ref):
            assert np.allclose(tuple(g), tuple(r), rtol=1e-11, atol=0)


def test_z_values_fixed(rng):
    c1, c2 = _chars(rng)
    first, second, _ = r_action(c1, c2)
    assert first[2] == c1[2] and second[2] == c2[2]


def test_inverse_composes_to_identity(rng):
    for _ in range(100):
        c1, c2 = _chars(rng)
        f, s, _ = r_action(c1, c2)
        f2, s2, _ = r_inverse_action(f, s)
        assert np.allclose(f2 + s2, c1 + c2, rtol=1e-11)


def test_b1_prime_identity(rng):
    (a1, b1, m1), (a2, b2, m2) = _chars(rng)
    _, chi1p = weyl_center_braid(1, (a1, b1, m1), (a2, b2, m2))
    assert np.isclose(1 / chi1p.yN, m1 / (b2 * m2) + (1 / b1 - m1 / b2) * a2, rtol=1e-12)


def test_phi_matches_holonomy_pair(rng):
    for _ in range(20):
        (a, b, m), = _chars(rng, 1)
        lower, upper = phi_character((a, b, m))
        assert np.allclose(lower, x_plus(Shape(a, b, m)), rtol=1e-14)
        assert np.allclose(upper, x_minus(Shape(a, b, m)), rtol=1e-14)
        assert np.isclose(upper[0, 1], b * (a - m))


def test_trivial_character():
    lower, upper = phi_character(CentralCharacter(1, 1, 1))
    assert np.allclose(lower, np.eye(2)) and np.allclose(upper, np.eye(2))


def test_singular_factor():
    # g = 1 + (1/x2)(y1/y2)(x1 - z1)(x2 - 1/z2) = 1 + (1/2)(-2)(1) = 0
    with pytest.raises(SingularBraiding):
        weyl_center_braid(1, (1, 1, 3), (2, 1, 1))
