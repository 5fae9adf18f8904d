"""Framework model: joints, bars, rigid bodies, intrinsic metrics.

A framework lives in dimension 2 or 3 and consists of joints connected by
bars and/or grouped into rigid bodies (panels = convex polygons, polyhedra
= convex solids).  The *intrinsic metric* of a framework is the vector of
its bar lengths plus the body edge lengths; realizations are coordinate
assignments compatible (or not) with that metric.

Also provided here:

* canonical coordinatization of segments / triangles / tetrahedra from
  edge lengths alone (used to express strains in squared deformed lengths),
* Cayley-Menger volumes,
* the cross-sectional dimensioning that assigns an area to every bar and a
  thickness to every panel so that total material volume balances,
* linear charts (affine parameterizations of realizations) used to reduce
  symmetric frameworks to few variables.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Body",
    "Framework",
    "Chart",
    "simplex_coordinates",
    "cayley_menger_volume",
    "triangle_area",
    "Dimensioning",
    "compute_dimensioning",
    "FrameworkError",
]


class FrameworkError(ValueError):
    """Raised for invalid framework descriptions."""


@dataclass(frozen=True)
class Body:
    """A rigid panel (2D face) or polyhedron (3D solid) on given joints."""

    kind: str                 # "panel" | "polyhedron"
    vertices: tuple[int, ...]

    def __post_init__(self):
        if self.kind not in ("panel", "polyhedron"):
            raise FrameworkError(f"unknown body kind {self.kind!r}")
        if self.kind == "panel" and len(self.vertices) < 3:
            raise FrameworkError("panel needs at least 3 vertices")
        if self.kind == "polyhedron" and len(self.vertices) < 4:
            raise FrameworkError("polyhedron needs at least 4 vertices")

    @property
    def edges(self) -> list[tuple[int, int]]:
        """All vertex pairs of the body (complete edge graph)."""
        return [tuple(sorted(p)) for p in
                itertools.combinations(self.vertices, 2)]


def _edge_key(i: int, j: int) -> tuple[int, int]:
    return (i, j) if i < j else (j, i)


@dataclass
class Framework:
    """A body-bar framework with an intrinsic metric.

    ``lengths`` maps each edge (bars and body edges) to its undeformed
    length.  ``realization`` (optional) is an (n, d) coordinate array whose
    induced lengths match ``lengths``.
    """

    dimension: int
    n_joints: int
    bars: list[tuple[int, int]]
    bodies: list[Body] = field(default_factory=list)
    pin_joints: list[int] = field(default_factory=list)
    lengths: dict[tuple[int, int], float] = field(default_factory=dict)
    realization: np.ndarray | None = None
    name: str = ""

    # -- derived structure ------------------------------------------------
    def __post_init__(self):
        self.validate()

    @property
    def edges(self) -> list[tuple[int, int]]:
        """All metric edges: bars first, then body-only edges, sorted."""
        seen = {_edge_key(*b) for b in self.bars}
        out = [_edge_key(*b) for b in self.bars]
        for body in self.bodies:
            for e in body.edges:
                if e not in seen:
                    seen.add(e)
                    out.append(e)
        return sorted(out)

    def edge_length(self, i: int, j: int) -> float:
        return self.lengths[_edge_key(i, j)]

    def length_vector(self) -> np.ndarray:
        return np.array([self.lengths[e] for e in self.edges])

    def mean_length(self) -> float:
        return float(np.mean(self.length_vector()))

    # -- validation ---------------------------------------------------------
    def validate(self) -> None:
        if self.dimension not in (2, 3):
            raise FrameworkError(f"dimension must be 2 or 3, got {self.dimension}")
        if self.n_joints < 2:
            raise FrameworkError("need at least two joints")
        for i, j in self.bars:
            if i == j:
                raise FrameworkError(f"degenerate bar ({i},{j})")
            if not (0 <= i < self.n_joints and 0 <= j < self.n_joints):
                raise FrameworkError(f"bar ({i},{j}) references unknown joint")
        seen = set()
        for b in self.bars:
            k = _edge_key(*b)
            if k in seen:
                raise FrameworkError(f"duplicate bar {k}")
            seen.add(k)
        for body in self.bodies:
            if self.dimension == 2 and body.kind == "polyhedron":
                raise FrameworkError("polyhedron body in a planar framework")
            for v in body.vertices:
                if not (0 <= v < self.n_joints):
                    raise FrameworkError(f"body references unknown joint {v}")
            if len(set(body.vertices)) != len(body.vertices):
                raise FrameworkError("body repeats a joint")
        for p in self.pin_joints:
            if not (0 <= p < self.n_joints):
                raise FrameworkError(f"pin joint {p} out of range")
        # lengths must cover all edges, or be derivable from a realization
        if self.realization is not None:
            V = np.asarray(self.realization, dtype=float)
            if V.shape != (self.n_joints, self.dimension):
                raise FrameworkError(
                    f"realization shape {V.shape} != ({self.n_joints}, {self.dimension})")
            self.realization = V
            if not self.lengths:
                self.lengths = {e: float(np.linalg.norm(V[e[0]] - V[e[1]]))
                                for e in self.edges}
        missing = [e for e in self.edges if e not in self.lengths]
        if missing:
            raise FrameworkError(f"missing lengths for edges {missing[:5]}")
        for e, L in self.lengths.items():
            if L <= 0:
                raise FrameworkError(f"non-positive length on edge {e}")
        # triangle inequality on every 3-cycle of the edge graph
        adjacency: dict[int, set[int]] = {}
        for i, j in self.edges:
            adjacency.setdefault(i, set()).add(j)
            adjacency.setdefault(j, set()).add(i)
        for i, j in self.edges:
            for k in adjacency.get(i, ()) & adjacency.get(j, ()):
                a = self.lengths[_edge_key(i, j)]
                b = self.lengths[_edge_key(j, k)]
                c = self.lengths[_edge_key(i, k)]
                if a > b + c or b > c + a or c > a + b:
                    raise FrameworkError(
                        f"triangle inequality violated on joints "
                        f"({i},{j},{k})")
        # triangle inequalities / simplex non-degeneracy inside bodies
        tol = 1e-10 * self.mean_length() ** self.dimension
        for body in self.bodies:
            order = 3 if body.kind == "panel" else 4
            for simplex in itertools.combinations(body.vertices, order):
                L = {frozenset(p): self.lengths[_edge_key(*p)]
                     for p in itertools.combinations(simplex, 2)}
                vol = cayley_menger_volume(
                    [[0.0 if a == b else L[frozenset((a, b))]
                      for b in simplex] for a in simplex])
                if vol <= tol:
                    raise FrameworkError(
                        f"degenerate simplex {simplex} in body {body.vertices}")
        if self.realization is not None:
            V = self.realization
            for e in self.edges:
                got = float(np.linalg.norm(V[e[0]] - V[e[1]]))
                if abs(got - self.lengths[e]) > 1e-6 * (1 + self.lengths[e]):
                    raise FrameworkError(
                        f"realization violates length of edge {e}: "
                        f"{got} vs {self.lengths[e]}")

    # -- body simplices -----------------------------------------------------
    def body_simplices(self, body: Body) -> list[tuple[int, ...]]:
        """All sub-simplices of full body dimension (triangles or tetrahedra)."""
        order = 3 if body.kind == "panel" else 4
        return list(itertools.combinations(body.vertices, order))

    # -- JSON ---------------------------------------------------------------
    @classmethod
    def from_json(cls, data: dict | str) -> "Framework":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            dim = int(data["dimension"])
            n = int(data["joints"])
        except KeyError as exc:
            raise FrameworkError(f"missing field {exc}") from exc
        bars = [tuple(int(v) for v in b) for b in data.get("bars", [])]
        bodies = [Body(kind=b["kind"], vertices=tuple(int(v) for v in b["vertices"]))
                  for b in data.get("bodies", [])]
        pins = [int(p) for p in data.get("pin_joints", [])]
        lengths = {}
        for key, val in data.get("lengths", {}).items():
            i, j = (int(t) for t in key.split("-"))
            lengths[_edge_key(i, j)] = float(val)
        real = data.get("realization")
        if real is not None:
            real = np.asarray(real, dtype=float)
        return cls(dimension=dim, n_joints=n, bars=bars, bodies=bodies,
                   pin_joints=pins, lengths=lengths, realization=real,
                   name=data.get("name", ""))

    @classmethod
    def from_file(cls, path: str) -> "Framework":
        with open(path) as fh:
            return cls.from_json(json.load(fh))

    def to_json(self) -> dict:
        out = {
            "dimension": self.dimension,
            "joints": self.n_joints,
            "bars": [list(b) for b in self.bars],
            "bodies": [{"kind": b.kind, "vertices": list(b.vertices)}
                       for b in self.bodies],
            "pin_joints": list(self.pin_joints),
            "lengths": {f"{i}-{j}": self.lengths[(i, j)]
                        for (i, j) in self.edges},
        }
        if self.name:
            out["name"] = self.name
        if self.realization is not None:
            out["realization"] = np.asarray(self.realization).tolist()
        return out

    # -- bar-joint expansion --------------------------------------------------
    def expand_to_bar_joint(self) -> "Framework":
        """Replace every body by the complete bar graph on its joints."""
        bars = {_edge_key(*b) for b in self.bars}
        for body in self.bodies:
            bars.update(body.edges)
        return Framework(dimension=self.dimension, n_joints=self.n_joints,
                         bars=sorted(bars), bodies=[],
                         pin_joints=list(self.pin_joints),
                         lengths=dict(self.lengths),
                         realization=None if self.realization is None
                         else np.array(self.realization),
                         name=self.name + "+bar-joint" if self.name else "")

    # -- DOT export --------------------------------------------------------
    def to_dot(self) -> str:
        lines = ["graph framework {"]
        for v in range(self.n_joints):
            attrs = ' [shape=doublecircle]' if v in self.pin_joints else ""
            lines.append(f"  {v}{attrs};")
        bar_set = {_edge_key(*b) for b in self.bars}
        for (i, j) in self.edges:
            style = "" if (i, j) in bar_set else ' [style=dashed]'
            lines.append(f"  {i} -- {j}{style};")
        for k, body in enumerate(self.bodies):
            verts = " ".join(str(v) for v in body.vertices)
            lines.append(f"  // body {k} ({body.kind}): {verts}")
        lines.append("}")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# Geometry helpers


def cayley_menger_volume(dist: np.ndarray) -> float:
    """Volume of the simplex with pairwise distance matrix ``dist``.

    ``dist`` is (k, k) for a (k-1)-simplex; returns length / area / volume
    for k = 2 / 3 / 4.
    """
    D = np.asarray(dist, dtype=float)
    k = D.shape[0]
    B = np.ones((k + 1, k + 1))
    B[0, 0] = 0.0
    B[1:, 1:] = D ** 2
    det = np.linalg.det(B)
    n = k - 1
    coef = (-1) ** (n + 1) / (2 ** n * math.factorial(n) ** 2)
    v2 = coef * det
    return math.sqrt(max(v2, 0.0))


def triangle_area(la: float, lb: float, lc: float) -> float:
    s = (la + lb + lc) / 2.0
    return math.sqrt(max(s * (s - la) * (s - lb) * (s - lc), 0.0))


def simplex_coordinates(lengths: dict[tuple[int, int], float],
                        vertices: tuple[int, ...]) -> np.ndarray:
    """Canonical coordinates of a 1/2/3-simplex from its edge lengths.

    First vertex at the origin, second on the +x axis, third in the upper
    xy half-plane, fourth with z > 0.  Rows are vertices, columns are up to
    len(vertices)-1 coordinates.
    """
    def L(a, b):
        return lengths[_edge_key(vertices[a], vertices[b])]

    k = len(vertices)
    if k == 2:
        return np.array([[0.0], [L(0, 1)]])
    lab = L(0, 1)
    xc = (lab ** 2 + L(0, 2) ** 2 - L(1, 2) ** 2) / (2 * lab)
    yc2 = L(0, 2) ** 2 - xc ** 2
    if yc2 <= 0:
        raise FrameworkError(f"degenerate triangle on vertices {vertices[:3]}")
    yc = math.sqrt(yc2)
    if k == 3:
        return np.array([[0.0, 0.0], [lab, 0.0], [xc, yc]])
    xd = (lab ** 2 + L(0, 3) ** 2 - L(1, 3) ** 2) / (2 * lab)
    yd = (L(0, 3) ** 2 - L(2, 3) ** 2 + xc ** 2 + yc ** 2 - 2 * xc * xd) / (2 * yc)
    zd2 = L(0, 3) ** 2 - xd ** 2 - yd ** 2
    if zd2 <= 0:
        raise FrameworkError(f"degenerate tetrahedron on vertices {vertices}")
    zd = math.sqrt(zd2)
    return np.array([[0.0, 0.0, 0.0], [lab, 0.0, 0.0],
                     [xc, yc, 0.0], [xd, yd, zd]])


# ---------------------------------------------------------------------------
# Cross-sectional dimensioning


@dataclass
class Dimensioning:
    """Bar cross-section area and per-panel thicknesses.

    ``area`` is the common bar cross-section; ``thickness[k]`` belongs to
    body k if it is a panel.  ``bar_volume[e]``, ``panel_volume[k]`` and
    ``poly_volume[k]`` give the material volumes entering the density
    weighting.  ``edge_weight[e]`` is 1 over the number of bodies sharing
    the edge (1 when the edge belongs to at most one body).
    """

    area: float
    thickness: dict[int, float]
    bar_volume: dict[tuple[int, int], float]
    panel_volume: dict[int, float]
    poly_volume: dict[int, float]
    edge_weight: dict[tuple[int, int], float]

    @property
    def total_volume(self) -> float:
        return (sum(self.bar_volume.values()) + sum(self.panel_volume.values())
                + sum(self.poly_volume.values()))


def compute_dimensioning(fw: Framework, area: float | None = None) -> Dimensioning:
    """Assign cross sections so material volume balances across elements.

    Edges shared by several bodies contribute with weight 1/#bodies.  If
    the framework has polyhedra, the common cross-section area is fixed by
    requiring that the total weighted prism volume of all panel edges
    equals the total polyhedral volume; otherwise the area is a free
    overall factor (default 1) that cancels from the energy density.
    """
    # weight of each edge = 1 / (number of bodies containing it), min 1 body
    count: dict[tuple[int, int], int] = {}
    for body in fw.bodies:
        for e in body.edges:
            count[e] = count.get(e, 0) + 1
    weight = {e: 1.0 / max(count.get(e, 0), 1) for e in fw.edges}

    # body edge-length sums and true volumes
    panel_wl: dict[int, float] = {}
    panel_area: dict[int, float] = {}
    poly_vol: dict[int, float] = {}
    for k, body in enumerate(fw.bodies):
        wl = sum(weight[e] * fw.lengths[e] for e in body.edges)
        if body.kind == "panel":
            panel_wl[k] = wl
            panel_area[k] = _convex_polygon_area(fw, body)
        else:
            panel_wl[k] = wl
            poly_vol[k] = _convex_polyhedron_volume(fw, body)

    if area is None:
        if poly_vol:
            denom = sum(panel_wl[k] for k in poly_vol)
            area = sum(poly_vol.values()) / denom
        else:
            area = 1.0

    thickness = {}
    panel_volume = {}
    for k, body in enumerate(fw.bodies):
        if body.kind == "panel":
            thickness[k] = area * panel_wl[k] / panel_area[k]
            panel_volume[k] = area * panel_wl[k]

    bar_volume = {}
    body_edges = set()
    for body in fw.bodies:
        body_edges.update(body.edges)
    for b in fw.bars:
        e = _edge_key(*b)
        if e not in body_edges:
            bar_volume[e] = area * fw.lengths[e]

    return Dimensioning(area=area, thickness=thickness, bar_volume=bar_volume,
                        panel_volume=panel_volume, poly_volume=poly_vol,
                        edge_weight=weight)


def _embed_body(fw: Framework, body: Body) -> np.ndarray:
    """Coordinates of a body's joints from its intrinsic edge lengths."""
    verts = list(body.vertices)
    k = 3 if body.kind == "panel" else 4
    base = simplex_coordinates(fw.lengths, tuple(verts[:k]))
    pts = {verts[i]: base[i] for i in range(min(k, len(verts)))}
    dim = k - 1
    # place remaining vertices by trilateration against the first dim+1
    anchors = verts[:dim + 1]
    A = np.array([pts[a] for a in anchors])
    for v in verts[dim + 1:]:
        d = np.array([fw.edge_length(v, a) for a in anchors])
        # solve |x - A_i|^2 = d_i^2 -> linear system vs anchor 0
        M = 2 * (A[1:] - A[0])
        rhs = (d[0] ** 2 - d[1:] ** 2
               + np.sum(A[1:] ** 2, axis=1) - np.sum(A[0] ** 2))
        x = np.linalg.solve(M, rhs)
        pts[v] = x
        if abs(np.linalg.norm(x - A[0]) - d[0]) > 1e-6 * (1 + d[0]):
            raise FrameworkError(
                f"body {body.vertices} edge lengths are not embeddable")
    # verify all remaining pairwise lengths
    for (i, j) in body.edges:
        got = np.linalg.norm(pts[i] - pts[j])
        want = fw.lengths[(i, j)]
        if abs(got - want) > 1e-6 * (1 + want):
            raise FrameworkError(
                f"body {body.vertices}: inconsistent edge {(i, j)}")
    return np.array([pts[v] for v in verts])


def _convex_polygon_area(fw: Framework, body: Body) -> float:
    P = _embed_body(fw, body)
    hull = _convex_hull_2d(P)
    x, y = hull[:, 0], hull[:, 1]
    return 0.5 * abs(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def _convex_hull_2d(P: np.ndarray) -> np.ndarray:
    pts = sorted(map(tuple, P))

    def half(points):
        out = []
        for p in points:
            while len(out) >= 2 and _cross(out[-2], out[-1], p) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = half(pts)
    upper = half(pts[::-1])
    return np.array(lower[:-1] + upper[:-1])


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _convex_polyhedron_volume(fw: Framework, body: Body) -> float:
    from scipy.spatial import ConvexHull
    P = _embed_body(fw, body)
    return float(ConvexHull(P).volume)


# ---------------------------------------------------------------------------
# Linear charts


@dataclass
class Chart:
    """Affine parameterization ``V = offset + C @ theta`` of realizations.

    ``offset`` and the columns of ``C`` are flattened (n_joints * dim)
    coordinate vectors.  Charts encode symmetry reductions and pinning:
    the flat coordinate of joint v, axis a, sits at index v * dim + a.
    """

    n_joints: int
    dimension: int
    offset: np.ndarray
    C: np.ndarray
    names: list[str] = field(default_factory=list)

    @property
    def n_params(self) -> int:
        return self.C.shape[1]

    def realize(self, theta: np.ndarray) -> np.ndarray:
        flat = self.offset + self.C @ np.asarray(theta, dtype=float)
        return flat.reshape(self.n_joints, self.dimension)

    def project(self, V: np.ndarray) -> np.ndarray:
        """Least-squares chart coordinates of a realization."""
        flat = np.asarray(V, dtype=float).ravel() - self.offset
        theta, *_ = np.linalg.lstsq(self.C, flat, rcond=None)
        return theta

    @classmethod
    def from_assignments(cls, n_joints: int, dimension: int,
                         names: list[str],
                         table: dict[tuple[int, int], list],
                         ) -> "Chart":
        """Build a chart from per-coordinate affine expressions.

        ``table[(joint, axis)]`` is ``[offset, (name, coeff), ...]``; any
        coordinate not listed is fixed to 0.
        """
        idx = {nm: i for i, nm in enumerate(names)}
        off = np.zeros(n_joints * dimension)
        C = np.zeros((n_joints * dimension, len(names)))
        for (v, a), expr in table.items():
            row = v * dimension + a
            off[row] = float(expr[0])
            for nm, coef in expr[1:]:
                C[row, idx[nm]] += float(coef)
        return cls(n_joints=n_joints, dimension=dimension, offset=off, C=C,
                   names=list(names))

    @classmethod
    def pinned_full(cls, n_joints: int, dimension: int,
                    pins: list[int]) -> "Chart":
        """Full coordinate chart with the standard pinning.

        In 3D: first pinned joint at the origin, second restricted to the
        +x axis, third to the xy plane (y free).  In 2D: first at the
        origin, second on the +x axis.  Remaining coordinates are free.
        """
        fixed = set()
        if pins:
            p0 = pins[0]
            fixed.update((p0, a) for a in range(dimension))
        if len(pins) > 1:
            p1 = pins[1]
            fixed.update((p1, a) for a in range(1, dimension))
        if len(pins) > 2 and dimension == 3:
            fixed.add((pins[2], 2))
        names, table = [], {}
        for v in range(n_joints):
            for a in range(dimension):
                if (v, a) in fixed:
                    continue
                nm = f"q{v}_{a}"
                names.append(nm)
                table[(v, a)] = [0.0, (nm, 1.0)]
        return cls.from_assignments(n_joints, dimension, names, table)
