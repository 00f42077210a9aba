import json

import numpy as np
import pytest

from linkshapes.biquandle import shaping_from_b
from linkshapes.catalog import (trefoil_b_values, trefoil_diagram, trefoil_region_abelian,
                                trefoil_region_nonabelian, trefoil_shaping)
from linkshapes.errors import InvalidDiagram
from linkshapes.gluing import (GAUGE_VALUES, RationalSystem, build_a_system, build_b_system,
                               build_lifted_b_system, corner_terms, gauge_candidates,
                               region_residuals, regions_from_shaping, shaping_from_regions)
from linkshapes.polynomial import Poly
from linkshapes.twist import TorusKnotFamily, torus_knot_diagram, torus_knot_shaping


def _trefoil_point(m):
    b = trefoil_b_values(m, *GAUGE_VALUES)
    return b, shaping_from_b(trefoil_diagram(), b, m)


def test_gauge_candidates_trefoil():
    assert gauge_candidates(trefoil_diagram())[0] == (0, 1, 2)


def test_b_system_vanishes_at_closed_form():
    m = 1.3 + 0.4j
    sys_ = build_b_system(trefoil_diagram(), m)
    b, _ = _trefoil_point(m)
    x = sys_.free_point({f"b{j}": b[j] for j in range(6)})
    assert np.abs(sys_.residuals(x)).max() < 1e-12
    assert sys_.guard_separations(x).min() > 1e-3


def test_lifted_system_vanishes_at_closed_form():
    m = 0.6 - 0.8j
    sys_ = build_lifted_b_system(trefoil_diagram(), m)
    b, s = _trefoil_point(m)
    values = {f"b{j}": b[j] for j in range(6)} | {f"a{j}": s.a[j] for j in range(6)}
    x = sys_.free_point(values)
    assert np.abs(sys_.residuals(x)).max() < 1e-12
    assert sys_.kind == "ab" and sys_.n_vars == 9


def test_jacobian_matches_finite_differences(rng):
    sys_ = build_lifted_b_system(torus_knot_diagram(2), 1.1 + 0.2j)
    x = rng.normal(size=sys_.n_vars) + 1j * rng.normal(size=sys_.n_vars)
    J = sys_.jacobian(x)
    h = 1e-7
    for i in range(sys_.n_vars):
        e = np.zeros(sys_.n_vars, dtype=complex)
        e[i] = h
        fd = (sys_.residuals(x + e) - sys_.residuals(x - e)) / (2 * h)
        assert np.allclose(J[:, i], fd, rtol=1e-5, atol=1e-6)


def test_compiled_matches_direct_evaluation(rng):
    sys_ = build_b_system(torus_knot_diagram(2), 0.9 + 0.5j)
    x = rng.normal(size=sys_.n_vars) + 1j * rng.normal(size=sys_.n_vars)
    direct = np.array([p(x) for p in sys_.equations])
    assert np.allclose(sys_.residuals(x), direct, rtol=1e-12, atol=1e-12)
    seps = np.array([g.separation(x) for g in sys_.guards])
    assert np.allclose(sys_.guard_separations(x), seps, rtol=1e-12)


def test_export_round_trip_is_bit_stable(rng):
    sys_ = build_lifted_b_system(torus_knot_diagram(1), 1.7 - 0.2j)
    again = RationalSystem.from_json(json.dumps(json.loads(sys_.to_json())))
    x = rng.normal(size=sys_.n_vars) + 1j * rng.normal(size=sys_.n_vars)
    assert np.array_equal(sys_.residuals(x), again.residuals(x))
    assert np.array_equal(sys_.guard_separations(x), again.guard_separations(x))
    assert again.variables == sys_.variables and again.fixed == sys_.fixed


def test_free_m_system_includes_m():
    sys_ = build_b_system(trefoil_diagram(), None)
    assert "m0" in sys_.variables and not sys_.isolated
    m = 1.4 + 0.1j
    b, _ = _trefoil_point(m)
    x = sys_.free_point({f"b{j}": b[j] for j in range(6)} | {"m0": m})
    assert np.abs(sys_.residuals(x)).max() < 1e-12


def test_bad_gauge():
    with pytest.raises(InvalidDiagram):
        build_b_system(trefoil_diagram(), 1.0, gauge=(0, 0, 1))


def test_region_system_at_trefoil_families():
    d = trefoil_diagram()
    sys_ = build_a_system(d, 1.0)
    for r in (trefoil_region_nonabelian(0.3 + 0.2j, 1.7 - 0.4j), trefoil_region_abelian(0.6j)):
        assert region_residuals(d, r, 1.0).max() < 1e-12
        # corner terms are scale invariant; the system fixes the unbounded region to 1
        r = r / r[d.unbounded_region]
        x = sys_.free_point({f"r{j}": r[j] for j in range(d.n_regions)})
        assert np.abs(sys_.residuals(x)).max() < 1e-12


def test_regions_round_trip():
    d = trefoil_diagram()
    s = trefoil_shaping(1.25 - 0.5j)
    r = regions_from_shaping(d, s)
    assert r[d.unbounded_region] == 1
    assert region_residuals(d, r, 1.25 - 0.5j).max() < 1e-10
    lifted = shaping_from_regions(d, r, 1.25 - 0.5j, b_seed=s.b[0])
    assert np.allclose(lifted.a, s.a) and np.allclose(lifted.b, s.b)


def test_corner_terms_are_b_ratios():
    d = torus_knot_diagram(2)
    s = torus_knot_shaping(TorusKnotFamily.from_root(2, 1.2, 0), d)
    r = regions_from_shaping(d, s)
    terms = corner_terms(d, r, 1.2)
    x = d.crossings[0]
    assert np.isclose(terms[(0, "W")], s.b[x.in2] / (1.2 * s.b[x.in1]))


def test_poly_algebra():
    x = Poly.var(2, 0)
    y = Poly.var(2, 1)
    p = (x + 2 * y) ** 2 - x * x
    assert p([1.0, 3.0]) == pytest.approx(48)
    assert p.degree == 2
    q = p.substitute({0: 2.0}, keep=[1])
    assert q([1.0]) == pytest.approx(p([2.0, 1.0]))
