"""Sparse multivariate polynomials with complex coefficients.

Just enough algebra to assemble cleared gluing equations and to evaluate
them, with their Jacobians, at many points.
"""

from __future__ import annotations

from typing import Mapping, Sequence

import numpy as np

__all__ = ["CompiledSystem", "Poly"]


class Poly:
    """Polynomial stored as ``{exponent tuple: coefficient}``."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[tuple[int, ...], complex] | None = None):
        self.nvars = nvars
        self.terms: dict[tuple[int, ...], complex] = {}
        for exp, c in (terms or {}).items():
            if c != 0:
                self.terms[tuple(exp)] = complex(c)

    @classmethod
    def const(cls, nvars: int, c) -> "Poly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, nvars: int, i: int) -> "Poly":
        exp = [0] * nvars
        exp[i] = 1
        return cls(nvars, {tuple(exp): 1})

    def _lift(self, other) -> "Poly":
        if isinstance(other, Poly):
            return other
        return Poly.const(self.nvars, other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return Poly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        out: dict[tuple[int, ...], complex] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Poly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Poly.const(self.nvars, 1)
        for _ in range(k):
            out = out * self
        return out

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def is_zero(self) -> bool:
        return not self.terms

    def __call__(self, x) -> complex:
        x = np.asarray(x, dtype=complex)
        return complex(sum(c * np.prod(x ** np.array(e)) for e, c in self.terms.items()))

    def substitute(self, values: Mapping[int, complex], keep: Sequence[int]) -> "Poly":
        """Fix the variables in ``values`` and renumber ``keep`` as 0, 1, ..."""
        out: dict[tuple[int, ...], complex] = {}
        for e, c in self.terms.items():
            coef = c
            for i, v in values.items():
                if e[i]:
                    coef *= complex(v) ** e[i]
            key = tuple(e[i] for i in keep)
            out[key] = out.get(key, 0) + coef
        return Poly(len(keep), out)

    def to_list(self) -> list[dict]:
        return [{"exp": list(e), "c": [c.real, c.imag]} for e, c in sorted(self.terms.items())]

    @classmethod
    def from_list(cls, nvars: int, items) -> "Poly":
        return cls(nvars, {tuple(t["exp"]): complex(t["c"][0], t["c"][1]) for t in items})

    def __repr__(self):
        return f"Poly(nvars={self.nvars}, terms={len(self.terms)}, degree={self.degree})"


class CompiledSystem:
    """Vectorised evaluation of a list of polynomials and their Jacobian."""

    def __init__(self, polys: Sequence[Poly], nvars: int):
        self.n_eq = len(polys)
        self.nvars = nvars
        exps, coefs, rows = [], [], []
        for k, p in enumerate(polys):
            # canonical term order, so that evaluation does not depend on how
            # the polynomial was built (or read back from JSON)
            for e, c in sorted(p.terms.items()):
                exps.append(e)
                coefs.append(c)
                rows.append(k)
        self.exps = np.array(exps, dtype=int).reshape(-1, nvars)
        self.coefs = np.array(coefs, dtype=complex)
        self.rows = np.array(rows, dtype=int)
        d_exps, d_coefs, d_rows, d_cols = [], [], [], []
        for t in range(len(coefs)):
            for i in range(nvars):
                k = self.exps[t, i]
                if k:
                    e = self.exps[t].copy()
                    e[i] -= 1
                    d_exps.append(e)
                    d_coefs.append(coefs[t] * k)
                    d_rows.append(rows[t])
                    d_cols.append(i)
        self.d_exps = np.array(d_exps, dtype=int).reshape(-1, nvars)
        self.d_coefs = np.array(d_coefs, dtype=complex)
        self.d_rows = np.array(d_rows, dtype=int)
        self.d_cols = np.array(d_cols, dtype=int)

    def _monomials(self, x, exps):
        if exps.shape[0] == 0:
            return np.zeros(0, dtype=complex)
        # table of x_i^e for every degree that occurs, gathered per term
        top = int(self.exps.max(initial=0))
        powers = np.ones((self.nvars, top + 1), dtype=complex)
        for e in range(1, top + 1):
            powers[:, e] = powers[:, e - 1] * x
        return np.prod(powers[np.arange(self.nvars)[None, :], exps], axis=1)

    def values(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=complex)
        out = np.zeros(self.n_eq, dtype=complex)
        np.add.at(out, self.rows, self.coefs * self._monomials(x, self.exps))
        return out

    def magnitudes(self, x) -> np.ndarray:
        """Sum of absolute term values per equation, a natural residual scale."""
        x = np.asarray(x, dtype=complex)
        out = np.zeros(self.n_eq)
        np.add.at(out, self.rows, np.abs(self.coefs * self._monomials(x, self.exps)))
        return out

    def jacobian(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=complex)
        out = np.zeros((self.n_eq, self.nvars), dtype=complex)
        np.add.at(out, (self.d_rows, self.d_cols), self.d_coefs * self._monomials(x, self.d_exps))
        return out
