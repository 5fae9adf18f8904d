"""Stewart-Gough platform: direct kinematics and joint-space singularity
distance under two intrinsic leg-length metrics.

The platform pose is represented point-based by the three anchor points
v1', v2', v3' (9 unknowns); the remaining anchors v4'..v6' follow from the
affine frame spanned by v2'-v1', v3'-v1' and their cross product.  Three
side conditions e1 = e2 = e3 = 0 (the squared platform triangle sides)
force the affine map to be a direct isometry, so poses are exactly the
common zeros of the six leg equations and the side conditions.

Two metrics measure the distance of a platform position from the base
pose in the 6-dimensional joint space:

    relative  u(L') = (1 / sum L_i) * sum (L_i'^2 - L_i^2)^2 / (8 L_i^3)
    absolute  l(L') = sum (L_i'^2 - L_i^2)^2

Their critical points subject to the side conditions are found through
the Lagrangian in 12 unknowns (9 coordinates + 3 multipliers); the
saddles are singular leg configurations (the six leg lines belong to a
linear line complex), and the closest one reachable by a monotone-energy
leg-length path gives the singularity distance, which here equals the
snappability of the pose.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .critical import BudgetError
from .poly import CompiledSystem, Poly
from .polysolve import TrackerConfig, solve_multistart, solve_total_degree, \
    track_parameter_path
from .rigidity import line_complex_rank

__all__ = [
    "SGManipulator",
    "SGPose",
    "SGSingularityResult",
    "reconstruct_platform",
    "direct_kinematics",
    "sg_metric_value",
    "sg_singularity_distance",
]

N_COORDS = 9                 # v1', v2', v3'
ENDPOINT_TOL = 1e-9          # relative mismatch of squared leg lengths
ENDGAME_EPS = 1e-8           # fold endgame pivot, as in the generic tracker
POSE_DEDUP_TOL = 1e-7


@dataclass(frozen=True)
class SGManipulator:
    """Geometry of a Stewart-Gough manipulator.

    ``base``: six anchor points in the fixed frame (rows).  ``sides``:
    squared platform triangle side lengths keyed "23", "31", "12".
    ``affine``: rows (xi_j, ups_j, zeta_j) for j = 4, 5, 6.  ``legs``:
    undeformed leg lengths L1..L6; leg i joins platform anchor i to base
    anchor i.
    """

    base: np.ndarray
    sides: dict
    affine: np.ndarray
    legs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "base", np.asarray(self.base, dtype=float))
        object.__setattr__(self, "affine",
                           np.asarray(self.affine, dtype=float))
        object.__setattr__(self, "legs", np.asarray(self.legs, dtype=float))
        if self.base.shape != (6, 3) or self.affine.shape != (3, 3) \
                or self.legs.shape != (6,):
            raise ValueError("need 6 base anchors, 3 affine rows, 6 legs")
        if np.any(self.legs <= 0.0):
            raise ValueError("leg lengths must be positive")
        a, b, c = (math.sqrt(self.sides[k]) for k in ("23", "31", "12"))
        if a + b <= c or b + c <= a or c + a <= b:
            raise ValueError("platform anchors V1, V2, V3 are collinear")

    @classmethod
    def from_json(cls, data: dict) -> "SGManipulator":
        return cls(base=np.array(data["base"], dtype=float),
                   sides={k: float(v)
                          for k, v in data["platform_triangle"].items()},
                   affine=np.array(data["affine_coords"], dtype=float),
                   legs=np.array(data["legs"], dtype=float))

    def to_json(self) -> dict:
        return {"base": self.base.tolist(),
                "platform_triangle": dict(self.sides),
                "affine_coords": self.affine.tolist(),
                "legs": self.legs.tolist()}

    def design_platform(self) -> np.ndarray:
        """A canonical congruent copy of the platform: v1 at the origin,
        v2 on the +x axis, v3 in the upper xy half-plane, v4..v6 by the
        affine reconstruction."""
        s23, s31, s12 = (self.sides[k] for k in ("23", "31", "12"))
        v1 = np.zeros(3)
        v2 = np.array([math.sqrt(s12), 0.0, 0.0])
        x3 = (s12 + s31 - s23) / (2.0 * math.sqrt(s12))
        y3 = math.sqrt(max(s31 - x3 * x3, 0.0))
        v3 = np.array([x3, y3, 0.0])
        rest = reconstruct_platform(v1, v2, v3, self.affine)
        return np.vstack([v1, v2, v3, rest])


def reconstruct_platform(v1, v2, v3, affine) -> np.ndarray:
    """Anchors v4..v6 from v1..v3 and their affine coordinates.

    v_j = v1 + xi_j (v2 - v1) + ups_j (v3 - v1)
             + zeta_j (v2 - v1) x (v3 - v1).
    """
    v1 = np.asarray(v1, dtype=float)
    v2 = np.asarray(v2, dtype=float)
    v3 = np.asarray(v3, dtype=float)
    a = v2 - v1
    b = v3 - v1
    n = np.cross(a, b)
    if np.linalg.norm(n) < 1e-12 * max(np.linalg.norm(a), 1.0):
        raise ValueError("collinear platform anchors")
    affine = np.asarray(affine, dtype=float)
    return v1[None, :] + affine[:, 0:1] * a + affine[:, 1:2] * b \
        + affine[:, 2:3] * n


@dataclass
class SGPose:
    """One solution of the direct kinematics."""

    v: np.ndarray                 # (3, 3): rows v1', v2', v3'
    platform: np.ndarray          # (6, 3): all platform anchors
    legs: np.ndarray              # realized leg lengths
    below_base: bool
    residual: float

    def to_json(self) -> dict:
        return {"v": self.v.tolist(), "platform": self.platform.tolist(),
                "legs": self.legs.tolist(), "below_base": self.below_base,
                "residual": self.residual}


def _coordinate_polys(nvars: int) -> list[list[Poly]]:
    """v1', v2', v3' coordinates as variables; rows of length 3."""
    return [[Poly.var(3 * i + a, nvars) for a in range(3)] for i in range(3)]


def _platform_polys(sg: SGManipulator, nvars: int) -> list[list[Poly]]:
    """Coordinate polynomials of all six platform anchors."""
    v = _coordinate_polys(nvars)
    a = [v[1][k] - v[0][k] for k in range(3)]
    b = [v[2][k] - v[0][k] for k in range(3)]
    n = [a[1] * b[2] - a[2] * b[1],
         a[2] * b[0] - a[0] * b[2],
         a[0] * b[1] - a[1] * b[0]]
    pts = list(v)
    for j in range(3):
        xi, ups, zeta = sg.affine[j]
        pts.append([v[0][k] + xi * a[k] + ups * b[k] + zeta * n[k]
                    for k in range(3)])
    return pts


def _leg_sq_polys(sg: SGManipulator, nvars: int) -> list[Poly]:
    """Squared leg lengths as polynomials in the 9 coordinates."""
    pts = _platform_polys(sg, nvars)
    out = []
    for i in range(6):
        q = None
        for k in range(3):
            diff = pts[i][k] - sg.base[i, k]
            term = diff * diff
            q = term if q is None else q + term
        out.append(q)
    return out


def _side_polys(sg: SGManipulator, nvars: int) -> list[Poly]:
    """Side conditions e1, e2, e3 (squared platform sides preserved)."""
    v = _coordinate_polys(nvars)
    pairs = [((1, 2), "23"), ((2, 0), "31"), ((0, 1), "12")]
    out = []
    for (i, j), key in pairs:
        q = None
        for k in range(3):
            diff = v[i][k] - v[j][k]
            term = diff * diff
            q = term if q is None else q + term
        out.append(q - sg.sides[key])
    return out


def dk_system(sg: SGManipulator,
              leg_sq: np.ndarray | None = None) -> CompiledSystem:
    """Square system of the direct kinematics: six leg equations plus the
    three side conditions, in the 9 platform coordinates."""
    if leg_sq is None:
        leg_sq = sg.legs ** 2
    legs = _leg_sq_polys(sg, N_COORDS)
    polys = [legs[i] + Poly.const(-float(leg_sq[i]), N_COORDS)
             for i in range(6)]
    polys.extend(_side_polys(sg, N_COORDS))
    return CompiledSystem.compile(polys)


def _base_plane(base: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Best-fit plane of the base anchors: (centroid, unit normal)."""
    c = base.mean(axis=0)
    _, _, vt = np.linalg.svd(base - c)
    return c, vt[-1]


def _make_pose(sg: SGManipulator, x: np.ndarray,
               system: CompiledSystem) -> SGPose:
    v = np.asarray(x, dtype=float).reshape(3, 3)
    platform = np.vstack([v, reconstruct_platform(v[0], v[1], v[2],
                                                  sg.affine)])
    legs = np.linalg.norm(platform - sg.base, axis=1)
    c, n = _base_plane(sg.base)
    # orient the normal away from the base interior using the mean leg
    # direction of the design (positive z for the usual conventions)
    if n[2] < 0:
        n = -n
    height = float((platform.mean(axis=0) - c) @ n)
    return SGPose(v=v, platform=platform, legs=legs,
                  below_base=height < 0.0,
                  residual=float(np.max(np.abs(system.eval(x)))))


def direct_kinematics(sg: SGManipulator,
                      cfg: TrackerConfig | None = None,
                      engine: str = "homotopy",
                      seeds: np.ndarray | None = None,
                      n_starts: int = 2000) -> list[SGPose]:
    """All real platform poses for the design leg lengths.

    Solves the nine realization equations by total-degree homotopy
    (exhaustive) or seeded multistart Newton; poses below the base plane
    are flagged, never dropped.
    """
    cfg = cfg or TrackerConfig()
    system = dk_system(sg)
    if engine == "homotopy":
        sols = solve_total_degree(system, cfg)
    elif engine == "multistart":
        sols = solve_multistart(system, seeds=seeds, n_starts=n_starts,
                                scale=float(np.max(np.abs(sg.base)))
                                + float(np.max(sg.legs)), cfg=cfg)
    else:
        raise ValueError(f"unknown engine {engine!r}")
    poses = [_make_pose(sg, s.x, system) for s in sols.real]
    poses.sort(key=lambda p: tuple(p.v.ravel()))
    return poses


# ---------------------------------------------------------------------------
# Intrinsic metrics on the joint space


def sg_metric_value(sg: SGManipulator, kind: str,
                    leg_sq_deformed: np.ndarray) -> float:
    """u (relative) or l (absolute) at squared deformed leg lengths."""
    L = sg.legs
    diff = np.asarray(leg_sq_deformed, dtype=float) - L ** 2
    if kind == "rel":
        return float(np.sum(diff ** 2 / (8.0 * L ** 3)) / np.sum(L))
    if kind == "abs":
        return float(np.sum(diff ** 2))
    raise ValueError(f"unknown metric kind {kind!r}")


def _metric_poly(sg: SGManipulator, kind: str, nvars: int) -> Poly:
    legs = _leg_sq_polys(sg, nvars)
    L = sg.legs
    out = None
    for i in range(6):
        diff = legs[i] + Poly.const(-float(L[i] ** 2), nvars)
        term = diff * diff
        if kind == "rel":
            term = term * float(1.0 / (8.0 * L[i] ** 3 * np.sum(L)))
        elif kind != "abs":
            raise ValueError(f"unknown metric kind {kind!r}")
        out = term if out is None else out + term
    return out


def _lift(p: Poly, nvars: int) -> Poly:
    out = Poly(nvars)
    out.terms = {e + (0,) * (nvars - p.nvars): c for e, c in p.terms.items()}
    return out


def sg_lagrangian_system(sg: SGManipulator, kind: str) -> CompiledSystem:
    """Critical equations of the metric subject to e1 = e2 = e3 = 0:
    twelve polynomials in v1', v2', v3' and three multipliers."""
    nv = N_COORDS + 3
    u = _lift(_metric_poly(sg, kind, N_COORDS), nv)
    sides = [_lift(e, nv) for e in _side_polys(sg, N_COORDS)]
    polys = []
    for k in range(N_COORDS):
        g = u.diff(k)
        for l, e in enumerate(sides):
            g = g + Poly.var(N_COORDS + l, nv) * e.diff(k)
        polys.append(g)
    polys.extend(sides)
    return CompiledSystem.compile(polys)


@dataclass
class SGCritical:
    """A critical point of the constrained joint-space metric."""

    v: np.ndarray
    platform: np.ndarray
    legs: np.ndarray
    d: float                      # metric value (distance from the base)
    multipliers: np.ndarray
    n_negative: int
    kind: str
    line_rank: int
    singular_legs: bool
    residual: float

    def to_json(self) -> dict:
        return {"v": self.v.tolist(), "legs": self.legs.tolist(),
                "d": self.d, "kind": self.kind,
                "n_negative": self.n_negative, "line_rank": self.line_rank,
                "singular_legs": self.singular_legs,
                "residual": self.residual,
                "multipliers": self.multipliers.tolist()}


@dataclass
class SGSingularityResult:
    base: SGPose
    metric: str
    sigma: float
    saddle: SGCritical | None
    exhaustive: bool
    verified_path: bool = False
    ties: list[int] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"base": self.base.to_json(), "metric": self.metric,
                "sigma": None if math.isinf(self.sigma) else self.sigma,
                "saddle": None if self.saddle is None
                else self.saddle.to_json(),
                "exhaustive": self.exhaustive,
                "verified_path": self.verified_path, "ties": self.ties}


def _classify_sg(sg: SGManipulator, system: CompiledSystem,
                 x: np.ndarray, kind_metric: str) -> SGCritical:
    """Constraint-projected Hessian classification of one solution."""
    v = x[:N_COORDS]
    eta = x[N_COORDS:]
    h = 1e-6

    def lag(y):
        u = sg_metric_value(sg, kind_metric, _leg_sq_at(sg, y))
        e = _sides_at(sg, y)
        return u + float(eta @ e)

    H = np.zeros((N_COORDS, N_COORDS))
    for i in range(N_COORDS):
        for j in range(i, N_COORDS):
            ei = np.zeros(N_COORDS)
            ej = np.zeros(N_COORDS)
            ei[i] = h
            ej[j] = h
            val = (lag(v + ei + ej) - lag(v + ei - ej)
                   - lag(v - ei + ej) + lag(v - ei - ej)) / (4 * h * h)
            H[i, j] = H[j, i] = val
    # project onto the tangent space of the side conditions
    J = np.zeros((3, N_COORDS))
    for l in range(3):
        for i in range(N_COORDS):
            ei = np.zeros(N_COORDS)
            ei[i] = h
            J[l, i] = (_sides_at(sg, v + ei)[l]
                       - _sides_at(sg, v - ei)[l]) / (2 * h)
    _, _, vt = np.linalg.svd(J)
    T = vt[3:].T
    eigs = np.linalg.eigvalsh(T.T @ H @ T)
    tol = 1e-8 * max(np.max(np.abs(eigs)), 1e-30)
    n_neg = int(np.sum(eigs < -tol))
    n_pos = int(np.sum(eigs > tol))
    total = eigs.size
    if n_neg == 0 and n_pos == total:
        kind = "minimum"
    elif n_pos == 0 and n_neg == total:
        kind = "maximum"
    elif n_neg + n_pos == total:
        kind = "saddle"
    else:
        kind = "degenerate"

    platform = np.vstack([v.reshape(3, 3),
                          reconstruct_platform(v[0:3], v[3:6], v[6:9],
                                               sg.affine)])
    legs = np.linalg.norm(platform - sg.base, axis=1)
    rank, sv = line_complex_rank(list(zip(sg.base, platform)))
    return SGCritical(v=v.reshape(3, 3), platform=platform, legs=legs,
                      d=sg_metric_value(sg, kind_metric, legs ** 2),
                      multipliers=eta, n_negative=n_neg, kind=kind,
                      line_rank=rank, singular_legs=rank < 6,
                      residual=float(np.max(np.abs(system.eval(x)))))


def _leg_sq_at(sg: SGManipulator, x: np.ndarray) -> np.ndarray:
    v = np.asarray(x, dtype=float).reshape(3, 3)
    platform = np.vstack([v, reconstruct_platform(v[0], v[1], v[2],
                                                  sg.affine)])
    return np.sum((platform - sg.base) ** 2, axis=1)


def _sides_at(sg: SGManipulator, x: np.ndarray) -> np.ndarray:
    v = np.asarray(x, dtype=float).reshape(3, 3)
    return np.array([
        np.sum((v[1] - v[2]) ** 2) - sg.sides["23"],
        np.sum((v[2] - v[0]) ** 2) - sg.sides["31"],
        np.sum((v[0] - v[1]) ** 2) - sg.sides["12"],
    ])


def sg_critical_points(sg: SGManipulator, kind: str,
                       poses: list[SGPose] | None = None,
                       cfg: TrackerConfig | None = None,
                       engine: str = "multistart",
                       n_starts: int = 6000,
                       budget: int = 3 ** 12) -> list[SGCritical]:
    """Critical points of the constrained metric, ascending in d.

    The multistart engine seeds around the direct-kinematics poses, their
    pairwise midpoints and a random cloud; the homotopy engine tracks the
    full total-degree start system (slow but exhaustive)."""
    cfg = cfg or TrackerConfig()
    system = sg_lagrangian_system(sg, kind)
    if engine == "homotopy":
        bezout = int(np.prod([max(int(d), 1) for d in system.degrees]))
        if bezout > budget:
            raise BudgetError(f"total-degree homotopy needs {bezout} "
                              f"paths, budget is {budget}")
        sols = solve_total_degree(system, cfg)
    elif engine == "multistart":
        if poses is None:
            poses = direct_kinematics(sg, cfg)
        anchors = [p.v.ravel() for p in poses]
        for i in range(len(poses)):
            for j in range(i + 1, len(poses)):
                anchors.append(0.5 * (poses[i].v + poses[j].v).ravel())
        anchors = np.array(anchors) if anchors \
            else np.zeros((1, N_COORDS))
        rng = np.random.default_rng(cfg.seed)
        reps = max(1, n_starts // len(anchors))
        seeds9 = np.repeat(anchors, reps, axis=0)
        seeds9 += 0.25 * rng.standard_normal(seeds9.shape)
        lam = rng.uniform(-1.0, 1.0, size=(seeds9.shape[0], 3))
        scale = 1.0 if kind == "rel" else float(np.sum(sg.legs ** 2))
        seeds = np.hstack([seeds9, scale * lam])
        sols = solve_multistart(system, seeds=seeds, n_starts=0, cfg=cfg)
    else:
        raise ValueError(f"unknown engine {engine!r}")
    points = [_classify_sg(sg, system, s.x, kind) for s in sols.real]
    points.sort(key=lambda p: p.d)
    return points


def _track_leg_path(sg: SGManipulator, x_base: np.ndarray,
                    leg_sq_target: np.ndarray,
                    cfg: TrackerConfig) -> np.ndarray | None:
    """Track the pose along the straight path of squared leg lengths."""
    sys0 = dk_system(sg)
    sys1 = dk_system(sg, leg_sq=leg_sq_target)
    end = track_parameter_path(sys0, sys1, x_base, cfg=cfg)
    if end is None:
        # the target metric may sit exactly at a fold (shaky saddle)
        q0 = sg.legs ** 2
        q_eps = q0 + (1.0 - ENDGAME_EPS) * (leg_sq_target - q0)
        end = track_parameter_path(sys0, dk_system(sg, leg_sq=q_eps),
                                   x_base, cfg=cfg)
    if end is None or np.iscomplexobj(end):
        return None
    mismatch = np.max(np.abs(_leg_sq_at(sg, end) - leg_sq_target))
    if mismatch > ENDPOINT_TOL * float(np.max(leg_sq_target)) + 1e-6:
        return None
    return end


def sg_singularity_distance(sg: SGManipulator, base: SGPose,
                            metric: str = "rel",
                            cfg: TrackerConfig | None = None,
                            engine: str = "multistart",
                            n_starts: int = 6000,
                            tie_tol: float = 1e-12,
                            points: list[SGCritical] | None = None,
                            ) -> SGSingularityResult:
    """Joint-space singularity distance of a pose: the nearest singular
    (shaky) saddle of the constrained metric reachable along the straight
    leg-length path with monotonically increasing leg energies.

    A base pose that is itself singular has distance zero.
    """
    cfg = cfg or TrackerConfig()
    rank, _ = line_complex_rank(list(zip(sg.base, base.platform)))
    if rank < 6:
        return SGSingularityResult(base=base, metric=metric, sigma=0.0,
                                   saddle=None, exhaustive=True,
                                   verified_path=True)
    if points is None:
        points = sg_critical_points(sg, metric, cfg=cfg, engine=engine,
                                    n_starts=n_starts)
    x_base = base.v.ravel()
    for idx, p in enumerate(points):
        if p.kind not in ("saddle", "maximum"):
            continue
        if p.d <= tie_tol:
            continue
        end = _track_leg_path(sg, x_base, p.legs ** 2, cfg)
        if end is None:
            continue
        ties = [j for j, q in enumerate(points)
                if q.kind in ("saddle", "maximum")
                and abs(q.d - p.d) < tie_tol * max(1.0, p.d)]
        return SGSingularityResult(base=base, metric=metric, sigma=p.d,
                                   saddle=p,
                                   exhaustive=(engine == "homotopy"),
                                   verified_path=True, ties=ties)
    return SGSingularityResult(base=base, metric=metric, sigma=math.inf,
                               saddle=None,
                               exhaustive=(engine == "homotopy"))
