"""Rigidity matrices, shakiness, self-stresses, line-geometry tests.

The rigidity matrix R has one row per coordinate unknown and one column
per constraint gradient (squared edge lengths, plus pinning when no chart
is supplied).  A realization is infinitesimally flexible ("shaky") when R
drops row rank, which is decided numerically via the singular-value ratio
sigma_min / sigma_max against a relative threshold — the numeric stand-in
for rank conditions on symbolic minors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import Chart, Framework

__all__ = [
    "rigidity_matrix",
    "is_shaky",
    "SelfStress",
    "self_stress",
    "stress_from_density_gradient",
    "isostatic_check",
    "pluecker_coordinates",
    "line_complex_rank",
    "SHAKY_TOL",
]

SHAKY_TOL = 1e-8


def _edge_gradient_columns(fw: Framework, V: np.ndarray) -> np.ndarray:
    """(wd, b) matrix; column e = gradient of the squared length of edge e."""
    V = np.asarray(V, dtype=float)
    n, d = V.shape
    cols = np.zeros((n * d, len(fw.edges)))
    for c, (i, j) in enumerate(fw.edges):
        diff = 2.0 * (V[i] - V[j])
        cols[i * d:(i + 1) * d, c] = diff
        cols[j * d:(j + 1) * d, c] = -diff
    return cols


def _pinning_columns(fw: Framework, n: int, d: int) -> tuple[np.ndarray, list[str]]:
    """Unit columns fixing the standard pinned coordinates."""
    fixed: list[tuple[int, int]] = []
    pins = fw.pin_joints
    if pins:
        fixed += [(pins[0], a) for a in range(d)]
    if len(pins) > 1:
        fixed += [(pins[1], a) for a in range(1, d)]
    if len(pins) > 2 and d == 3:
        fixed.append((pins[2], 2))
    cols = np.zeros((n * d, len(fixed)))
    labels = []
    for c, (v, a) in enumerate(fixed):
        cols[v * d + a, c] = 1.0
        labels.append(f"pin:{v}.{a}")
    return cols, labels


def rigidity_matrix(fw: Framework, V: np.ndarray,
                    chart: Chart | None = None,
                    edges: list[tuple[int, int]] | None = None,
                    ) -> tuple[np.ndarray, list[str]]:
    """Rigidity matrix and constraint labels at a realization.

    Without a chart: rows are all wd coordinates, columns are edge
    constraints followed by pinning constraints.  With a chart: rows are
    the chart parameters (pinning and identifications are absorbed into
    the chart) and columns are edge constraints only.  ``edges`` restricts
    the edge constraints (default: all metric edges).
    """
    V = np.asarray(V, dtype=float)
    n, d = V.shape
    if edges is None:
        edges = fw.edges
    cols = np.zeros((n * d, len(edges)))
    for c, (i, j) in enumerate(edges):
        diff = 2.0 * (V[i] - V[j])
        cols[i * d:(i + 1) * d, c] = diff
        cols[j * d:(j + 1) * d, c] = -diff
    labels = [f"bar:{i}-{j}" for (i, j) in edges]
    if chart is not None:
        return chart.C.T @ cols, labels
    pin_cols, pin_labels = _pinning_columns(fw, n, d)
    return np.hstack([cols, pin_cols]), labels + pin_labels


def is_shaky(fw: Framework, V: np.ndarray, tol: float = SHAKY_TOL,
             chart: Chart | None = None,
             edges: list[tuple[int, int]] | None = None,
             ) -> tuple[bool, float]:
    """Shakiness test; returns (shaky, sigma_min / sigma_max of R)."""
    R, _ = rigidity_matrix(fw, V, chart=chart, edges=edges)
    s = np.linalg.svd(R, compute_uv=False)
    m = R.shape[0]
    if R.shape[1] < m or s[0] == 0.0:
        return True, 0.0
    ratio = float(s[m - 1] / s[0])
    return ratio < tol, ratio


@dataclass
class SelfStress:
    omega: np.ndarray                  # one coefficient per edge
    edges: list[tuple[int, int]]
    residual: float

    def is_nonzero(self, scale: float = 1.0, tol: float = 1e-8) -> bool:
        return float(np.max(np.abs(self.omega))) > tol * scale


def self_stress(fw: Framework, V: np.ndarray) -> SelfStress:
    """Minimum-norm self-stress: unit vector omega minimizing the
    equilibrium residual ``max_i |sum_j omega_ij (v_i - v_j)|``."""
    A = _edge_gradient_columns(fw, V)
    _, _, vt = np.linalg.svd(A)
    omega = vt[-1]
    res = float(np.max(np.abs(A @ omega)))
    return SelfStress(omega=omega, edges=list(fw.edges), residual=res)


def stress_from_density_gradient(df, V: np.ndarray) -> SelfStress:
    """Stress coefficients induced by the density gradient at a realization.

    At a critical point of the density these coefficients satisfy the
    equilibrium equations; at the undeformed metric they vanish.  For a
    plain bar the coefficient reduces to
    ``E * Area * (L'^2 - L^2) / (2 L^3)`` (up to the constant total-volume
    normalization of the density).
    """
    V = np.asarray(V, dtype=float)
    gq = df.gradient_q(df.squared_lengths(V))
    omega = 2.0 * df.total_volume * gq / df.E
    n, d = V.shape
    forces = np.zeros((n, d))
    for w, (i, j) in zip(omega, df.edges):
        forces[i] += w * (V[i] - V[j])
        forces[j] += w * (V[j] - V[i])
    return SelfStress(omega=omega, edges=list(df.edges),
                      residual=float(np.max(np.abs(forces))))


def isostatic_check(fw: Framework, seed: int = 0,
                    chart: Chart | None = None,
                    edges: list[tuple[int, int]] | None = None) -> dict:
    """Generic degree-of-freedom count at a random realization.

    Reports m (coordinate unknowns), n (constraints) and the rank of the
    rigidity matrix at random generic coordinates.  Without a chart the
    unknown count excludes the trivial rigid motions, so a framework is
    isostatic iff the constraints exactly absorb the remaining freedoms
    at generic coordinates.
    """
    rng = np.random.default_rng(seed)
    V = rng.standard_normal((fw.n_joints, fw.dimension))
    R, _ = rigidity_matrix(fw, V, chart=chart, edges=edges)
    m, n = R.shape
    rank = int(np.linalg.matrix_rank(R, tol=1e-10 * max(m, n)))
    if chart is None:
        d = fw.dimension
        m -= d * (d + 1) // 2
    return {"m": m, "n": n, "rank": rank,
            "isostatic": bool(m == n and rank == n)}


def pluecker_coordinates(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Normalized Pluecker coordinates (direction; moment) of line pq."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    d = q - p
    nrm = np.linalg.norm(d)
    if nrm < 1e-14:
        raise ValueError("coincident point pair")
    m = np.cross(p, q)
    return np.concatenate([d, m]) / nrm


def line_complex_rank(pairs, tol: float = SHAKY_TOL) -> tuple[int, np.ndarray]:
    """Rank of the 6x6 Pluecker matrix of six lines; rank < 6 means the
    lines belong to a linear line complex (singular leg configuration)."""
    rows = np.array([pluecker_coordinates(p, q) for p, q in pairs])
    s = np.linalg.svd(rows, compute_uv=False)
    rank = int(np.sum(s > tol * s[0]))
    return rank, s
