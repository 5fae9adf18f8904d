"""Green-Lagrange element energies for bars, triangular plates, tetrahedra.

The deformation of a single element is measured intrinsically: the affine
map between the canonical embeddings of the undeformed and deformed
simplex gives the Green-Lagrange strain

    eps = 1/2 (A^T A - I),   A = P' P^{-1}.

Since  A^T A = P^{-T} G' P^{-1}  and the deformed Gram matrix G' is linear
in the squared deformed edge lengths, the strain — and hence the stored
energy, a quadratic form in the strain — is an exact polynomial of degree
2 in the squared deformed lengths.  ``element_quadratic`` returns that
polynomial as an augmented symmetric matrix, which is what the global
energy density assembles from.  ``element_energy`` evaluates the same
energy geometrically from two coordinate embeddings (used as an
independent cross-check).
"""

from __future__ import annotations

import math

import numpy as np

from .model import simplex_coordinates

__all__ = [
    "constitutive_matrix",
    "green_lagrange_strain",
    "strain_voigt",
    "element_energy",
    "element_quadratic",
    "bar_energy",
]


def constitutive_matrix(dimension: int, nu: float) -> np.ndarray:
    """Dimensionless isotropic stiffness (Young's modulus factored out).

    dimension 1: scalar [1].  dimension 2: plane stress.  dimension 3:
    full 3D Hooke law; at nu = 1/2 (incompressible limit) the matrix is
    singular and its Moore-Penrose pseudoinverse form is used, which has
    rank 5 and annihilates pure volumetric strain.
    """
    if dimension == 1:
        return np.array([[1.0]])
    if dimension == 2:
        if not (-1.0 < nu < 1.0):
            raise ValueError(f"invalid Poisson ratio {nu} in 2D")
        a = 1.0 / (1.0 - nu ** 2)
        g = 1.0 / (2.0 * (1.0 + nu))
        return np.array([[a, nu * a, 0.0],
                         [nu * a, a, 0.0],
                         [0.0, 0.0, g]])
    if dimension == 3:
        if not (-1.0 < nu <= 0.5):
            raise ValueError(f"invalid Poisson ratio {nu} in 3D")
        g = 1.0 / (2.0 * (1.0 + nu))
        if abs(nu - 0.5) < 1e-14:
            d, o = 4.0 / 9.0, -2.0 / 9.0
        else:
            den = 2.0 * nu ** 2 + nu - 1.0
            d = (nu - 1.0) / den
            o = -nu / den
        D = np.zeros((6, 6))
        D[:3, :3] = o
        np.fill_diagonal(D[:3, :3], d)
        D[3, 3] = D[4, 4] = D[5, 5] = g
        return D
    raise ValueError(f"unsupported dimension {dimension}")


def green_lagrange_strain(P: np.ndarray, Pd: np.ndarray) -> np.ndarray:
    """Strain of the affine map taking edge matrix P to Pd (columns = edges)."""
    A = Pd @ np.linalg.inv(P)
    k = P.shape[0]
    return 0.5 * (A.T @ A - np.eye(k))


def strain_voigt(eps: np.ndarray) -> np.ndarray:
    """Engineering Voigt vector (shear components doubled)."""
    k = eps.shape[0]
    if k == 1:
        return np.array([eps[0, 0]])
    if k == 2:
        return np.array([eps[0, 0], eps[1, 1], 2 * eps[0, 1]])
    return np.array([eps[0, 0], eps[1, 1], eps[2, 2],
                     2 * eps[1, 2], 2 * eps[0, 2], 2 * eps[0, 1]])


def _edge_matrix(points: np.ndarray) -> np.ndarray:
    """Columns are the edge vectors from the first vertex."""
    return (points[1:] - points[0]).T


def element_energy(points: np.ndarray, points_def: np.ndarray,
                   volume: float, nu: float = 0.5, E: float = 1.0) -> float:
    """Stored energy of a simplex element between two embeddings.

    ``points`` / ``points_def`` are (k+1, >=k) vertex coordinate arrays of
    the undeformed / deformed simplex; ``volume`` is the material volume
    assigned to the element.
    """
    points = np.asarray(points, dtype=float)
    points_def = np.asarray(points_def, dtype=float)
    k = points.shape[0] - 1
    # reduce both embeddings to canonical k-dimensional frames
    P = _canonical_frame(points)
    Pd = _canonical_frame(points_def)
    eps = green_lagrange_strain(P, Pd)
    e = strain_voigt(eps)
    D = constitutive_matrix(k, nu)
    return float(volume * 0.5 * E * e @ D @ e)


def _canonical_frame(points: np.ndarray) -> np.ndarray:
    """Edge matrix in an orthonormal frame of the simplex's own span."""
    Em = _edge_matrix(np.asarray(points, dtype=float))
    k = Em.shape[1]
    if Em.shape[0] == k:
        return Em
    q, r = np.linalg.qr(Em)
    return r


def bar_energy(L: float, L_def: float, volume: float, E: float = 1.0) -> float:
    """E * vol / (8 L^4) * (L'^2 - L^2)^2."""
    return E * volume * (L_def ** 2 - L ** 2) ** 2 / (8.0 * L ** 4)


def element_quadratic(lengths: dict[tuple[int, int], float],
                      vertices: tuple[int, ...],
                      volume: float, nu: float = 0.5,
                      E: float = 1.0) -> tuple[list[tuple[int, int]], np.ndarray]:
    """Element energy as a quadratic form in squared deformed edge lengths.

    Returns (edge list, M) where M is symmetric of size (1 + n_edges) and

        U = [1, q]^T  M  [1, q],      q_e = (deformed length of edge e)^2

    with edges ordered as in the returned list.
    """
    vs = tuple(vertices)
    k = len(vs) - 1
    pts = simplex_coordinates(lengths, vs)
    P = _edge_matrix(pts)
    Pinv = np.linalg.inv(P)

    edges = []
    for a in range(len(vs)):
        for b in range(a + 1, len(vs)):
            edges.append((min(vs[a], vs[b]), max(vs[a], vs[b])))
    ne = len(edges)
    eidx = {}
    pos = 0
    for a in range(len(vs)):
        for b in range(a + 1, len(vs)):
            eidx[(a, b)] = pos
            pos += 1

    # Gram matrix G'[i][j] = (q_{0,i+1} + q_{0,j+1} - q_{i+1,j+1}) / 2
    # as a linear map from q; rows of `lin` give the Voigt strain.
    nv = 1 if k == 1 else (3 if k == 2 else 6)
    lin = np.zeros((nv, ne))
    const = np.zeros(nv)
    for i in range(k):
        for j in range(k):
            # coefficient matrix of G'[i][j] over q
            coefs = np.zeros(ne)
            if i == j:
                coefs[eidx[(0, i + 1)]] = 1.0
            else:
                coefs[eidx[(0, i + 1)]] += 0.5
                coefs[eidx[(0, j + 1)]] += 0.5
                a, b = min(i + 1, j + 1), max(i + 1, j + 1)
                coefs[eidx[(a, b)]] -= 0.5
            # strain: eps = 1/2 (Pinv^T G' Pinv - I)
            w = 0.5 * np.outer(Pinv[i, :], Pinv[j, :])
            # accumulate into Voigt components
            for r in range(k):
                for c in range(k):
                    v, scale = _voigt_index(k, r, c)
                    lin[v] += scale * w[r, c] * coefs
    for r in range(k):
        v, scale = _voigt_index(k, r, r)
        const[v] += scale * (-0.5)

    D = constitutive_matrix(k, nu)
    f = volume * 0.5 * E
    M = np.zeros((1 + ne, 1 + ne))
    M[0, 0] = f * const @ D @ const
    cross = f * (lin.T @ D @ const)
    M[1:, 0] = cross
    M[0, 1:] = cross
    M[1:, 1:] = f * (lin.T @ D @ lin)
    return edges, M


def _voigt_index(k: int, r: int, c: int) -> tuple[int, float]:
    """Voigt slot and weight of strain component (r, c)."""
    if k == 1:
        return 0, 1.0
    if r == c:
        return r, 1.0
    if k == 2:
        return 2, 1.0  # off-diagonals both feed 2*eps12 with weight 1 each
    pair = (min(r, c), max(r, c))
    slot = {(1, 2): 3, (0, 2): 4, (0, 1): 5}[pair]
    return slot, 1.0
