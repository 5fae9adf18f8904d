"""Framework-level strain-energy density and the induced pseudometric.

The density of a framework at a deformed intrinsic metric L' is the total
stored energy divided by the total material volume, with each body's
energy taken as the volume-weighted mean over its full-dimensional
sub-simplices ("full" mode) or as the energy of a single representative
simplex under an affine deformation of the body ("affine" mode; the
representative is the maximum-volume simplex, for conditioning — any
non-degenerate one would do).  Both modes agree when every body is itself
a simplex.

Because every element energy is an exact quadratic polynomial in the
squared deformed edge lengths, the density assembles into one symmetric
matrix M with

    u(L') = Q'^T M Q',        Q' = (1, ..., L'_e^2, ...).

The pseudometric between two intrinsic metrics is
``d(L', L'') = |u(L') - u(L'')| / E``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .elasticity import element_quadratic
from .model import (Dimensioning, Framework, cayley_menger_volume,
                    compute_dimensioning)

__all__ = ["DensityFunction", "pseudometric"]


def _simplex_volume(fw: Framework, simplex: tuple[int, ...]) -> float:
    k = len(simplex)
    D = np.zeros((k, k))
    for a in range(k):
        for b in range(a + 1, k):
            D[a, b] = D[b, a] = fw.edge_length(simplex[a], simplex[b])
    return cayley_menger_volume(D)


@dataclass
class DensityFunction:
    """Quadratic-form representation of the energy density of a framework.

    ``edges`` orders the squared-length variables; ``M`` is the symmetric
    (n_edges+1) matrix of the augmented quadratic form.  In affine mode
    only representative-simplex edges and bar edges are active; the
    remaining rows/columns of M are zero and ``active_edges`` lists the
    edges that actually enter the density.
    """

    framework: Framework
    nu: float = 0.5
    E: float = 1.0
    mode: str = "full"                       # "full" | "affine"
    dimensioning: Dimensioning | None = None
    edges: list[tuple[int, int]] = field(init=False)
    M: np.ndarray = field(init=False)
    total_volume: float = field(init=False)
    representatives: dict[int, tuple[int, ...]] = field(init=False,
                                                        default_factory=dict)
    # per-element quadratic forms (bar or body sub-simplex), for inspecting
    # individual element energies along a metric path
    elements: list[tuple[str, list[int], np.ndarray]] = field(
        init=False, default_factory=list)

    def __post_init__(self):
        if self.mode not in ("full", "affine"):
            raise ValueError(f"unknown density mode {self.mode!r}")
        if not 0.0 <= self.nu <= 0.5:
            raise ValueError(f"Poisson ratio {self.nu} outside [0, 1/2]")
        if self.E <= 0.0:
            raise ValueError("Young modulus must be positive")
        fw = self.framework
        if self.dimensioning is None:
            self.dimensioning = compute_dimensioning(fw)
        dim = self.dimensioning
        self.edges = fw.edges
        eidx = {e: i for i, e in enumerate(self.edges)}
        n = len(self.edges)
        M = np.zeros((n + 1, n + 1))

        # bars not absorbed into a body
        for e, vol in dim.bar_volume.items():
            el_edges, Mel = element_quadratic(fw.lengths, e, vol, self.nu,
                                              self.E)
            self._scatter(M, Mel, el_edges, eidx)
            self.elements.append((f"bar {e[0]}-{e[1]}",
                                  [eidx[d] for d in el_edges], Mel))

        # bodies: volume-weighted simplex average (full) or representative
        for k, body in enumerate(fw.bodies):
            body_vol = (dim.panel_volume.get(k) if body.kind == "panel"
                        else dim.poly_volume.get(k))
            simplices = fw.body_simplices(body)
            vols = np.array([_simplex_volume(fw, s) for s in simplices])
            if self.mode == "affine":
                best = int(np.argmax(vols))
                self.representatives[k] = simplices[best]
                simplices = [simplices[best]]
                vols = vols[best:best + 1]
            weights = body_vol * vols / vols.sum()
            for s, w in zip(simplices, weights):
                el_edges, Mel = element_quadratic(fw.lengths, s, float(w),
                                                  self.nu, self.E)
                self._scatter(M, Mel, el_edges, eidx)
                self.elements.append((f"body{k} simplex {s}",
                                      [eidx[d] for d in el_edges], Mel))

        self.total_volume = dim.total_volume
        self.M = (M + M.T) / 2.0 / self.total_volume

    @staticmethod
    def _scatter(M: np.ndarray, Mel: np.ndarray,
                 el_edges: list[tuple[int, int]], eidx: dict) -> None:
        rows = [0] + [eidx[e] + 1 for e in el_edges]
        for a, ra in enumerate(rows):
            for b, rb in enumerate(rows):
                M[ra, rb] += Mel[a, b]

    @property
    def active_edges(self) -> list[tuple[int, int]]:
        """Edges whose squared length actually enters the density."""
        act = np.any(self.M != 0.0, axis=0)
        return [e for i, e in enumerate(self.edges) if act[i + 1]]

    # -- evaluation ----------------------------------------------------------
    def _augment(self, q: np.ndarray) -> np.ndarray:
        q = np.asarray(q, dtype=float)
        if q.shape != (len(self.edges),):
            raise ValueError(f"expected {len(self.edges)} squared lengths")
        return np.concatenate(([1.0], q))

    def density_q(self, q: np.ndarray) -> float:
        """u from squared deformed lengths, ordered as ``self.edges``."""
        Q = self._augment(q)
        return float(Q @ self.M @ Q)

    def density(self, lengths: dict[tuple[int, int], float] | np.ndarray) -> float:
        """u from deformed lengths (dict over edges, or vector)."""
        if isinstance(lengths, dict):
            q = np.array([lengths[e] ** 2 for e in self.edges])
        else:
            q = np.asarray(lengths, dtype=float) ** 2
        return self.density_q(q)

    def density_from_realization(self, V: np.ndarray) -> float:
        q = self.squared_lengths(V)
        return self.density_q(q)

    def squared_lengths(self, V: np.ndarray) -> np.ndarray:
        V = np.asarray(V, dtype=float)
        return np.array([np.sum((V[i] - V[j]) ** 2) for (i, j) in self.edges])

    def element_energies_q(self, q: np.ndarray) -> np.ndarray:
        """Per-element energy contributions to u (same normalization as
        density_q, i.e. already divided by the total volume)."""
        q = np.asarray(q, dtype=float)
        out = np.empty(len(self.elements))
        for k, (_, idx, Mel) in enumerate(self.elements):
            Qe = np.concatenate(([1.0], q[idx]))
            out[k] = Qe @ Mel @ Qe / self.total_volume
        return out

    def gradient_q(self, q: np.ndarray) -> np.ndarray:
        """Gradient of u with respect to the squared lengths."""
        Q = self._augment(q)
        return 2.0 * (self.M @ Q)[1:]

    def gradient_realization(self, V: np.ndarray) -> np.ndarray:
        """Gradient of u with respect to joint coordinates, shape like V."""
        V = np.asarray(V, dtype=float)
        gq = self.gradient_q(self.squared_lengths(V))
        out = np.zeros_like(V)
        for g, (i, j) in zip(gq, self.edges):
            d = 2.0 * (V[i] - V[j])
            out[i] += g * d
            out[j] -= g * d
        return out

    def hessian_q(self) -> np.ndarray:
        return 2.0 * self.M[1:, 1:]

    def hessian_realization(self, V: np.ndarray) -> np.ndarray:
        """Hessian of u in flattened joint coordinates."""
        V = np.asarray(V, dtype=float)
        n, d = V.shape
        J = np.zeros((len(self.edges), n * d))
        for r, (i, j) in enumerate(self.edges):
            diff = 2.0 * (V[i] - V[j])
            J[r, i * d:(i + 1) * d] = diff
            J[r, j * d:(j + 1) * d] = -diff
        gq = self.gradient_q(self.squared_lengths(V))
        H = J.T @ self.hessian_q() @ J
        for g, (i, j) in zip(gq, self.edges):
            blk = 2.0 * g * np.eye(d)
            H[i * d:(i + 1) * d, i * d:(i + 1) * d] += blk
            H[j * d:(j + 1) * d, j * d:(j + 1) * d] += blk
            H[i * d:(i + 1) * d, j * d:(j + 1) * d] -= blk
            H[j * d:(j + 1) * d, i * d:(i + 1) * d] -= blk
        return H

    def pseudometric(self, la, lb) -> float:
        """d(L', L'') = |u(L') - u(L'')| / E."""
        return abs(self.density(la) - self.density(lb)) / self.E


def pseudometric(df: DensityFunction, la, lb) -> float:
    return df.pseudometric(la, lb)
