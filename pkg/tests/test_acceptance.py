"""End-to-end acceptance checks, one test per criterion.

Each test prints a PASS/FAIL line; the lines are repeated in the pytest
terminal summary.
"""

import time

import numpy as np
import pytest
from conftest import random_complex, record

from linkshapes.biquandle import braid, braid_arrays, verify_shaping
from linkshapes.catalog import (FIGURE_EIGHT_LAMBDAS, figure_eight_diagram, figure_eight_shaping,
                                trefoil_diagram, trefoil_region_abelian,
                                trefoil_region_nonabelian, trefoil_shaping)
from linkshapes.decoration import eigenvalue_decoration
from linkshapes.errors import ShapingError, SingularBraiding, SingularTwist
from linkshapes.gluing import region_residuals, shaping_from_regions
from linkshapes.holonomy import evaluate_path, meridian_loop, verify_holonomy
from linkshapes.numeric import rel_diff
from linkshapes.octahedra import face_map_check, verify_gluing_equations, vertical_ratios, volume
from linkshapes.solver import ShapingSolver, invariant_signature
from linkshapes.twist import TorusKnotFamily, riley_roots, torus_knot_diagram, torus_knot_shaping
from linkshapes.weyl import weyl_center_braid

TOL = 1e-9


def _shapes(rng, n):
    return tuple(random_complex(rng, n) for _ in range(3))


def _pair_map(sign, x, y):
    a2p, b2p, a1p, b1p, _ = braid_arrays(sign, *x, *y)
    return (a2p, b2p, y[2]), (a1p, b1p, x[2])


def _generic(sign, x, y, floor=1e-2):
    a1, b1, m1 = x
    a2, b2, m2 = y
    _, b2p, _, b1p, A = braid_arrays(sign, a1, b1, m1, a2, b2, m2)
    if sign > 0:
        den = 1 - m2 * a2 * (1 - b2 / (m1 * b1))
    else:
        den = 1 - (1 / (m1 * a1)) * (1 - m1 * b1 / b2)
    return np.min(np.abs([A, den, b1p, b2p]), axis=0) > floor


def _rel(u, v):
    u, v = np.asarray(u), np.asarray(v)
    return np.abs(u - v) / np.maximum(np.maximum(np.abs(u), np.abs(v)), 1e-300)


def _all_verifiers(diagram, shaping, tol=TOL):
    shp = verify_shaping(diagram, shaping, tol)
    reports = {"shaping": shp.ok, "holonomy": verify_holonomy(diagram, shaping, tol).ok}
    if not any(shp.degenerate):
        reports["five"] = verify_gluing_equations(diagram, shaping, "five", tol).ok
    if not any(shp.pinched):
        reports["four"] = verify_gluing_equations(diagram, shaping, "four", tol).ok
        reports["decoration"] = eigenvalue_decoration(diagram, shaping, tol).ok
    return reports


def test_criterion_01_braiding_inverse_and_yang_baxter():
    rng = np.random.default_rng(1)
    t0 = time.perf_counter()
    n = 12000
    x, y = _shapes(rng, n), _shapes(rng, n)
    keep = _generic(1, x, y)
    x = tuple(v[keep] for v in x)
    y = tuple(v[keep] for v in y)
    u, v = _pair_map(1, x, y)
    back_x, back_y = _pair_map(-1, u, v)
    inv_err = max(_rel(p, q).max() for p, q in zip(back_x + back_y, x + y))

    nt = 1500
    x, y, z = _shapes(rng, nt), _shapes(rng, nt), _shapes(rng, nt)
    yb_err = 0.0
    n_triples = 0
    for sign in (1, -1):
        def left(t):
            p, q = _pair_map(sign, t[0], t[1])
            return p, q, t[2]

        def right(t):
            p, q = _pair_map(sign, t[1], t[2])
            return t[0], p, q

        with np.errstate(all="ignore"):
            lhs = left(right(left((x, y, z))))
            rhs = right(left(right((x, y, z))))
            # generic: every braiding step along both sides is well away from its poles
            ok = _generic(sign, x, y) & _generic(sign, y, z)
            mid = left((x, y, z))
            ok &= _generic(sign, mid[1], mid[2])
            mid = right((x, y, z))
            ok &= _generic(sign, mid[0], mid[1])
        errs = [_rel(np.stack(a), np.stack(b))[:, ok].max() for a, b in zip(lhs, rhs)]
        yb_err = max(yb_err, *errs)
        n_triples += int(ok.sum())
    elapsed = time.perf_counter() - t0
    ok = (keep.sum() >= 10_000 and n_triples >= 1000 and inv_err < 1e-10 and yb_err < 1e-9
          and elapsed < 5)
    record(1, "braiding inverse and Yang-Baxter", ok,
           f"{keep.sum()} pairs inv {inv_err:.1e}, {n_triples} triples YB {yb_err:.1e}, "
           f"{elapsed:.2f}s")
    assert ok


def test_criterion_02_weyl_oracle():
    rng = np.random.default_rng(2)
    t0 = time.perf_counter()
    worst, used = 0.0, 0
    while used < 1000:
        chi1 = tuple(random_complex(rng) for _ in range(3))
        chi2 = tuple(random_complex(rng) for _ in range(3))
        try:
            out = braid(1, chi1, chi2)
            ref = weyl_center_braid(1, chi1, chi2)
        except SingularBraiding:
            continue
        got = np.array([*out[0], *out[1]])
        want = np.array([*ref[0], *ref[1]])
        worst = max(worst, rel_diff(got, want))
        used += 1
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-11 and elapsed < 1
    record(2, "Weyl center braiding equals the shape braiding", ok,
           f"{used} pairs, max rel {worst:.1e}, {elapsed:.2f}s")
    assert ok


def test_criterion_03_trefoil_closed_form():
    rng = np.random.default_rng(3)
    d = trefoil_diagram()
    worst_ell, failures, draws = 0.0, [], 0
    while draws < 10:
        m, b1, b2, b3 = (random_complex(rng) for _ in range(4))
        try:
            s = trefoil_shaping(m, b1, b2, b3, diagram=d)
        except ShapingError:
            continue
        flags = verify_shaping(d, s, TOL)
        if any(flags.pinched) or any(flags.degenerate):
            continue
        draws += 1
        reports = {"shaping": flags.ok, "holonomy": verify_holonomy(d, s, TOL).ok,
                   "five": verify_gluing_equations(d, s, "five", TOL).ok}
        if not all(reports.values()):
            failures.append(reports)
        ell = eigenvalue_decoration(d, s, TOL).ell[0]
        worst_ell = max(worst_ell, rel_diff(ell, -m ** -6))
    ok = not failures and worst_ell < 1e-10
    record(3, "trefoil closed form", ok, f"{draws} draws, ell rel {worst_ell:.1e}")
    assert ok


def test_criterion_04_torus_knot_family():
    rng = np.random.default_rng(4)
    t0 = time.perf_counter()
    failures, worst_ell, count = [], 0.0, 0
    for n in (1, 2, 3):
        d = torus_knot_diagram(n)
        N = 2 * n + 1
        for _ in range(5):
            m = random_complex(rng, inner=0.7, outer=1.5)
            for root in range(n):
                fam = TorusKnotFamily.from_root(n, m, root)
                s = torus_knot_shaping(fam, d)
                reports = _all_verifiers(d, s)
                if not all(reports.values()) or len(reports) < 5:
                    failures.append((n, root, reports))
                ell = eigenvalue_decoration(d, s, TOL).ell[0]
                worst_ell = max(worst_ell, rel_diff(ell, -m ** (-2 * N)))
                count += 1
    distinct = []
    for n in range(1, 7):
        roots = riley_roots(n)
        gaps = [abs(u - v) for i, u in enumerate(roots) for v in roots[i + 1:]]
        distinct.append(len(roots) == n and (not gaps or min(gaps) > 1e-6))
    elapsed = time.perf_counter() - t0
    ok = not failures and worst_ell < 1e-9 and all(distinct) and elapsed < 10
    record(4, "torus-knot family", ok,
           f"{count} shapings, ell rel {worst_ell:.1e}, Riley n<=6 distinct {all(distinct)}, "
           f"{elapsed:.2f}s")
    assert ok


def test_criterion_05_figure_eight_parabolic():
    rng = np.random.default_rng(5)
    d = figure_eight_diagram()
    failures, worst_trace, draws = [], 0.0, 0
    while draws < 5:
        p, q, r = (random_complex(rng) for _ in range(3))
        try:
            shapings = [figure_eight_shaping(p, q, r, L, diagram=d) for L in FIGURE_EIGHT_LAMBDAS]
        except ShapingError:
            continue
        draws += 1
        for s in shapings:
            flags = verify_shaping(d, s, TOL)
            four = verify_gluing_equations(d, s, "four", TOL)
            if not (flags.ok and four.ok):
                failures.append((p, q, r))
            for seg in range(d.n_segments):
                M = evaluate_path(d, s, meridian_loop(d, seg))
                worst_trace = max(worst_trace, abs(np.trace(M) - 2))
    ok = not failures and worst_trace < 1e-10
    record(5, "figure-eight parabolic family", ok,
           f"{draws} draws x 2 roots, max |tr - 2| {worst_trace:.1e}")
    assert ok


def test_criterion_06_solver_recovery():
    t0 = time.perf_counter()
    m = 1.3 + 0.4j
    expected = {1: 1, 2: 2}
    runs, good, worst_sig = 0, 0, 0.0
    for n, n_classes in expected.items():
        d = torus_knot_diagram(n)
        closed = [invariant_signature(d, torus_knot_shaping(TorusKnotFamily.from_root(n, m, k), d))
                  for k in range(n)]
        for seed in range(5):
            solver = ShapingSolver(m=m, restarts=200, seed=seed).fit(d)
            runs += 1
            if solver.n_classes_ != n_classes:
                continue
            errs = [min(rel_diff(sig, c) for c in closed) for sig in solver.signatures_]
            worst_sig = max(worst_sig, *errs)
            if max(errs) < 1e-7:
                good += 1
    elapsed = time.perf_counter() - t0
    rate = good / runs
    ok = rate >= 0.95 and elapsed < 60
    record(6, "solver recovers the (2,3) and (2,5) classes", ok,
           f"{good}/{runs} runs, signature rel {worst_sig:.1e}, {elapsed:.1f}s")
    assert ok


def test_criterion_07_region_system():
    rng = np.random.default_rng(7)
    d = trefoil_diagram()
    res, lift_ok, abelian_pinched = 0.0, True, True
    for _ in range(5):
        p, q = random_complex(rng), random_complex(rng)
        r = trefoil_region_nonabelian(p, q)
        res = max(res, region_residuals(d, r, 1.0).max())
        reports = _all_verifiers(d, shaping_from_regions(d, r, 1.0))
        lift_ok &= all(reports.values()) and len(reports) == 5
        r = trefoil_region_abelian(p)
        res = max(res, region_residuals(d, r, 1.0).max())
        flags = verify_shaping(d, shaping_from_regions(d, r, 1.0), TOL)
        abelian_pinched &= all(flags.pinched)
    ok = res < 1e-10 and lift_ok and abelian_pinched
    record(7, "trefoil region families", ok,
           f"residual {res:.1e}, nonabelian lifts {lift_ok}, abelian pinched {abelian_pinched}")
    assert ok


def _verified_shapings():
    rng = np.random.default_rng(8)
    out = []
    d = trefoil_diagram()
    out.append((d, trefoil_shaping(1.7 - 0.3j, diagram=d)))
    for n in (1, 2, 3):
        d = torus_knot_diagram(n)
        for root in range(n):
            out.append((d, torus_knot_shaping(TorusKnotFamily.from_root(n, 0.8 + 0.5j, root), d)))
    d = figure_eight_diagram()
    for L in FIGURE_EIGHT_LAMBDAS:
        out.append((d, figure_eight_shaping(Lambda=L, diagram=d)))
        out.append((d, figure_eight_shaping(*(random_complex(rng) for _ in range(3)), L, d)))
    return out


def test_criterion_08_hyperbolicity_and_cusp_holonomy():
    worst_ratio, worst_ell2, count = 0.0, 0.0, 0
    for d, s in _verified_shapings():
        assert verify_shaping(d, s, TOL).ok
        ratio, expected = vertical_ratios(d, s)
        worst_ratio = max(worst_ratio, rel_diff(ratio, expected))
        dec = eigenvalue_decoration(d, s, TOL)
        worst_ell2 = max(worst_ell2, *(c.checks["ell_squared"] for c in dec.components))
        count += 1
    ok = worst_ratio < 1e-10 and worst_ell2 < 1e-9
    record(8, "m-hyperbolicity and longitude cusp holonomy", ok,
           f"{count} shapings, ratio rel {worst_ratio:.1e}, ell^2 rel {worst_ell2:.1e}")
    assert ok


def test_criterion_09_face_maps():
    worst, checked = 0.0, 0
    for d, s in _verified_shapings():
        if d.n_crossings not in (3, 4):
            continue
        for c, x in enumerate(d.crossings):
            cs = s.crossing_shapes(d, c)
            if x.sign < 0 or cs.flags().pinched:
                continue
            worst = max(worst, *face_map_check(cs).values())
            checked += 1
    ok = checked > 0 and worst < 1e-10
    record(9, "face maps at positive crossings", ok, f"{checked} crossings, max {worst:.1e}")
    assert ok


def test_criterion_10_gauge_invariance():
    rng = np.random.default_rng(10)
    worst_sig, worst_vol = 0.0, 0.0
    for n in (1, 2, 3):
        d = torus_knot_diagram(n)
        m = random_complex(rng, inner=0.7, outer=1.5)
        for root in range(n):
            sigs, vols = [], []
            while len(sigs) < 5:
                p, q, r = (random_complex(rng) for _ in range(3))
                try:
                    s = torus_knot_shaping(TorusKnotFamily.from_root(n, m, root, p, q, r), d)
                except SingularTwist:
                    continue
                flags = verify_shaping(d, s, TOL)
                if any(flags.pinched) or any(flags.degenerate):
                    continue
                sigs.append(invariant_signature(d, s))
                vols.append(volume(d, s))
            worst_sig = max(worst_sig, *(rel_diff(g, sigs[0]) for g in sigs))
            worst_vol = max(worst_vol, max(vols) - min(vols))
    ok = worst_sig < 1e-8 and worst_vol < 1e-8
    record(10, "gauge invariance of torus-knot invariants", ok,
           f"signature rel {worst_sig:.1e}, volume spread {worst_vol:.1e}")
    assert ok


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
