"""Tolerances and small complex-number helpers."""

from __future__ import annotations

import os

import numpy as np

EPS_SING = 1e-8
TOL_ENV = "LINKSHAPES_TOL"


def default_tol() -> float:
    """Verification tolerance, overridable through ``LINKSHAPES_TOL``."""
    return float(os.environ.get(TOL_ENV, "1e-9"))


def rel_diff(x, y) -> float:
    """Largest relative difference between two complex arrays."""
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    scale = np.maximum(np.maximum(np.abs(x), np.abs(y)), 1e-300)
    diff = np.abs(x - y)
    out = np.where(diff == 0, 0.0, diff / scale)
    return float(np.max(out)) if out.size else 0.0


def cjson(z) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def from_cjson(v) -> complex:
    if isinstance(v, (list, tuple)):
        return complex(float(v[0]), float(v[1]))
    if isinstance(v, str):
        return complex(v.replace(" ", "").replace("i", "j"))
    return complex(v)


def random_annulus(rng: np.random.Generator, size, inner: float = 0.2, outer: float = 5.0):
    """Complex samples uniform in area on ``inner <= |z| <= outer``."""
    radius = np.sqrt(rng.uniform(inner ** 2, outer ** 2, size))
    angle = rng.uniform(0.0, 2 * np.pi, size)
    return radius * np.exp(1j * angle)
