"""Sparse multivariate polynomials and compiled square systems.

Polynomials are stored as ``{exponent tuple: coefficient}`` maps. The
representation is deliberately small: the systems built from strain-energy
gradients are quartic in at most a dozen variables, so dict arithmetic is
cheap and the heavy lifting happens in :class:`CompiledSystem`, which
flattens a list of polynomials onto a shared monomial basis for fast
vectorized evaluation of values and Jacobians (real or complex points).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["Poly", "CompiledSystem"]


class Poly:
    """Sparse polynomial in ``nvars`` real variables."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: dict | None = None):
        self.nvars = nvars
        self.terms: dict[tuple, float] = {}
        if terms:
            for e, c in terms.items():
                if c != 0.0:
                    self.terms[tuple(e)] = self.terms.get(tuple(e), 0.0) + c

    # ---- constructors -------------------------------------------------
    @classmethod
    def const(cls, value: float, nvars: int) -> "Poly":
        p = cls(nvars)
        if value != 0.0:
            p.terms[(0,) * nvars] = float(value)
        return p

    @classmethod
    def var(cls, i: int, nvars: int) -> "Poly":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1.0})

    @classmethod
    def affine(cls, coeffs, offset: float, nvars: int) -> "Poly":
        """offset + sum_i coeffs[i] * x_i"""
        p = cls.const(offset, nvars)
        for i, c in enumerate(coeffs):
            if c != 0.0:
                e = [0] * nvars
                e[i] = 1
                p.terms[tuple(e)] = p.terms.get(tuple(e), 0.0) + float(c)
        p._prune()
        return p

    # ---- arithmetic ----------------------------------------------------
    def _prune(self):
        dead = [e for e, c in self.terms.items() if c == 0.0]
        for e in dead:
            del self.terms[e]

    def copy(self) -> "Poly":
        return Poly(self.nvars, dict(self.terms))

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(float(other), self.nvars)
        out = Poly(self.nvars, dict(self.terms))
        for e, c in other.terms.items():
            out.terms[e] = out.terms.get(e, 0.0) + c
        out._prune()
        return out

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(float(other), self.nvars)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            out = Poly(self.nvars)
            f = float(other)
            if f != 0.0:
                out.terms = {e: c * f for e, c in self.terms.items()}
            return out
        out = Poly(self.nvars)
        t = out.terms
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, 0.0) + c1 * c2
        out._prune()
        return out

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Poly.const(1.0, self.nvars)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def diff(self, i: int) -> "Poly":
        out = Poly(self.nvars)
        for e, c in self.terms.items():
            if e[i] > 0:
                d = list(e)
                d[i] -= 1
                out.terms[tuple(d)] = out.terms.get(tuple(d), 0.0) + c * e[i]
        return out

    @property
    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def __call__(self, x):
        x = np.asarray(x)
        val = 0.0
        for e, c in self.terms.items():
            m = c
            for i, k in enumerate(e):
                if k:
                    m = m * x[i] ** k
            val = val + m
        return val

    def __repr__(self):
        return f"Poly(nvars={self.nvars}, nterms={len(self.terms)})"


@dataclass
class CompiledSystem:
    """A system of polynomials on a shared monomial basis.

    ``exps`` has shape (n_mono, nvars), ``coeffs`` shape (n_eq, n_mono) and
    ``jac_coeffs`` shape (nvars, n_eq, n_mono); all evaluated against the
    same monomial vector so one set of power tables serves both values and
    the Jacobian.
    """

    nvars: int
    exps: np.ndarray
    coeffs: np.ndarray
    jac_coeffs: np.ndarray
    degrees: np.ndarray

    @classmethod
    def compile(cls, polys: list[Poly]) -> "CompiledSystem":
        if not polys:
            raise ValueError("empty system")
        nvars = polys[0].nvars
        basis: dict[tuple, int] = {}

        def key(e):
            if e not in basis:
                basis[e] = len(basis)
            return basis[e]

        rows = []
        for p in polys:
            if p.nvars != nvars:
                raise ValueError("mixed variable counts")
            rows.append({key(e): c for e, c in p.terms.items()})
        jrows = []
        for p in polys:
            jrows.append([{key(e): c for e, c in p.diff(j).terms.items()}
                          for j in range(nvars)])
        nm = max(len(basis), 1)
        if not basis:
            basis[(0,) * nvars] = 0
        exps = np.zeros((len(basis), nvars), dtype=np.int64)
        for e, idx in basis.items():
            exps[idx] = e
        n_eq = len(polys)
        coeffs = np.zeros((n_eq, len(basis)))
        for i, r in enumerate(rows):
            for j, c in r.items():
                coeffs[i, j] = c
        jac = np.zeros((nvars, n_eq, len(basis)))
        for i, dr in enumerate(jrows):
            for v, r in enumerate(dr):
                for j, c in r.items():
                    jac[v, i, j] = c
        degrees = np.array([p.total_degree for p in polys], dtype=np.int64)
        _ = nm
        return cls(nvars=nvars, exps=exps, coeffs=coeffs, jac_coeffs=jac,
                   degrees=degrees)

    @property
    def n_eq(self) -> int:
        return self.coeffs.shape[0]

    def _monomials(self, x: np.ndarray) -> np.ndarray:
        maxdeg = int(self.exps.max(initial=0))
        pows = np.empty((self.nvars, maxdeg + 1), dtype=x.dtype)
        pows[:, 0] = 1
        for k in range(1, maxdeg + 1):
            pows[:, k] = pows[:, k - 1] * x
        cols = np.arange(self.nvars)
        return np.prod(pows[cols[None, :], self.exps], axis=1)

    def eval(self, x) -> np.ndarray:
        x = np.asarray(x)
        return self.coeffs @ self._monomials(x)

    def eval_with_jac(self, x) -> tuple[np.ndarray, np.ndarray]:
        x = np.asarray(x)
        mono = self._monomials(x)
        vals = self.coeffs @ mono
        jac = (self.jac_coeffs @ mono).T  # (n_eq, nvars)
        return vals, jac

    def jac(self, x) -> np.ndarray:
        return self.eval_with_jac(x)[1]
