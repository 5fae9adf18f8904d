"""Singularity distance: closest shaky realization in the intrinsic metric.

The local singularity distance of a stable realization is the smallest
pseudometric distance d(L, L''') to a point of the shakiness variety (the
realizations with an infinitesimal flex) that the framework can reach by a
continuous deformation with monotonically increasing element energies.

Candidates come from two sources: the shaky members of the enumerated
critical set of the density (every shaky critical point of u lies on the
variety with vanishing multiplier), and an optional direct solve of the
variety-constrained Lagrangian via multistart (``shaky_variety_critical``)
for cross-validation.  The snappability bound s <= sigma holds whenever the
base is not shaky, with equality when the snappability saddle is itself
shaky.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .critical import (CriticalPoint, CriticalSet, _coordinate_polys,
                       classify_point, density_poly, edge_polys)
from .density import DensityFunction
from .model import Chart
from .poly import CompiledSystem, Poly
from .polysolve import TrackerConfig, solve_multistart
from .rigidity import is_shaky
from .snap import (PathRecord, SnapResult, TIE_TOL, _descent_reaches,
                   select_tracking_edges, track_metric_path, undeformed_minima)

__all__ = [
    "SingularityResult",
    "local_singularity_distance",
    "global_singularity_distance",
    "reality_check",
    "shaky_variety_system",
    "shaky_variety_critical",
]


@dataclass
class SingularityResult:
    base_theta: np.ndarray
    sigma: float                          # math.inf when nothing is reachable
    shaky_point: CriticalPoint | None
    path: PathRecord | None
    exhaustive: bool
    base_shaky: bool = False
    mode: str = ""
    ties: list[int] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"base_theta": self.base_theta.tolist(),
                "sigma": None if math.isinf(self.sigma) else self.sigma,
                "shaky_point": (None if self.shaky_point is None
                                else self.shaky_point.to_json()),
                "path": None if self.path is None else self.path.to_json(),
                "exhaustive": self.exhaustive,
                "base_shaky": self.base_shaky,
                "mode": self.mode,
                "ties": self.ties}


def _shaky_candidates(df: DensityFunction, cs: CriticalSet,
                      u_base: float,
                      admissible=None) -> list[tuple[float, int]]:
    """(d, index) pairs for the shaky critical points, ascending in d."""
    out = []
    for i, p in enumerate(cs.points):
        if not p.shaky:
            continue
        if admissible is not None and not admissible(p):
            continue
        d = abs(p.u - u_base) / df.E
        if d < TIE_TOL:
            continue            # the base itself (or its density level)
        out.append((d, i))
    out.sort(key=lambda pair: pair[0])
    return out


def local_singularity_distance(df: DensityFunction, chart: Chart,
                               theta_base: np.ndarray, cs: CriticalSet,
                               mode: str = "auto",
                               constraints=(),
                               cfg: TrackerConfig | None = None,
                               admissible=None) -> SingularityResult:
    """Minimal density barrier from theta_base to the shakiness variety.

    Modes mirror local_snappability: "track" imposes the Q_t metric path
    on the realization equations, "descent" accepts a shaky point when a
    gradient flow from it descends to the base, "auto" picks by the rank
    of the chart rigidity matrix at the base.
    """
    from .rigidity import rigidity_matrix

    cfg = cfg or TrackerConfig()
    theta_base = np.asarray(theta_base, dtype=float)
    fw = df.framework
    V_base = chart.realize(theta_base)
    u_base = df.density_from_realization(V_base)
    base_shaky, _ = is_shaky(fw, V_base, chart=chart)
    if base_shaky:
        return SingularityResult(base_theta=theta_base, sigma=0.0,
                                 shaky_point=None, path=None, exhaustive=True,
                                 base_shaky=True, mode="trivial")

    cands = _shaky_candidates(df, cs, u_base, admissible)
    if mode == "auto":
        R, _ = rigidity_matrix(fw, V_base, chart=chart)
        rank = np.linalg.matrix_rank(R, tol=1e-10 * max(1.0, np.abs(R).max()))
        mode = "track" if rank == chart.n_params else "descent"

    if mode == "descent":
        for d, i in cands:
            p = cs.points[i]
            if _descent_reaches(df, chart, p, theta_base, constraints):
                ties = [j for dd, j in cands if abs(dd - d) < TIE_TOL]
                return SingularityResult(base_theta=theta_base, sigma=d,
                                         shaky_point=p, path=None,
                                         exhaustive=True, mode=mode, ties=ties)
        return SingularityResult(base_theta=theta_base, sigma=math.inf,
                                 shaky_point=None, path=None,
                                 exhaustive=True, mode=mode)

    if mode != "track":
        raise ValueError(f"unknown singularity-distance mode {mode!r}")

    sel = select_tracking_edges(df, chart, theta_base)
    for d, i in cands:
        p = cs.points[i]
        q_target = df.squared_lengths(p.V)
        rec = track_metric_path(df, chart, theta_base, q_target, sel=sel,
                                cfg=cfg, shaky_start=False)
        if rec.success and rec.monotone:
            ties = [j for dd, j in cands if abs(dd - d) < TIE_TOL]
            return SingularityResult(base_theta=theta_base, sigma=d,
                                     shaky_point=p, path=rec,
                                     exhaustive=True, mode=mode, ties=ties)
    return SingularityResult(base_theta=theta_base, sigma=math.inf,
                             shaky_point=None, path=None,
                             exhaustive=True, mode=mode)


def global_singularity_distance(df: DensityFunction, chart: Chart,
                                cs: CriticalSet, mode: str = "auto",
                                constraints=(),
                                cfg: TrackerConfig | None = None,
                                admissible=None,
                                ) -> tuple[float, list[SingularityResult]]:
    """Minimum local singularity distance over all undeformed realizations."""
    results = []
    for i in undeformed_minima(cs):
        results.append(local_singularity_distance(
            df, chart, cs.points[i].theta, cs, mode=mode,
            constraints=constraints, cfg=cfg, admissible=admissible))
    sigma = min((r.sigma for r in results), default=math.inf)
    return sigma, results


def check_relation(snap: SnapResult, sing: SingularityResult,
                   tol: float = 1e-12) -> dict:
    """s <= sigma for a non-shaky base, with equality when the snappability
    saddle is itself shaky.  Returns a record; raises on violation."""
    rec = {"s": snap.s, "sigma": sing.sigma,
           "equality_expected": snap.saddle_shaky,
           "holds": True, "equal": False}
    if sing.base_shaky:
        return rec
    scale = max(abs(snap.s), abs(sing.sigma), 1.0)
    if snap.s > sing.sigma + tol * scale:
        rec["holds"] = False
        raise AssertionError(
            f"snappability {snap.s} exceeds singularity distance {sing.sigma}")
    rec["equal"] = abs(snap.s - sing.sigma) <= tol * scale
    if snap.saddle_shaky and not rec["equal"]:
        raise AssertionError(
            "snappability saddle is shaky but s != sigma "
            f"({snap.s} vs {sing.sigma})")
    return rec


def reality_check(path: PathRecord, base_shaky: bool,
                  target_shaky: bool) -> str:
    """Verdict on path realness per the reality guarantee.

    A tracked minimal-energy path is guaranteed real when at most one of
    its endpoints is shaky.  A non-real path under the guarantee is a
    tracker fault and raises; with both endpoints shaky realness is only
    reported empirically.
    """
    if base_shaky and target_shaky:
        return ("not guaranteed (empirically real)" if path.real_throughout
                else "not guaranteed (complex detour observed)")
    if not path.real_throughout:
        raise RuntimeError("path guaranteed real but tracked complex; "
                           "tracker fault")
    return "real"


# ---------------------------------------------------------------------------
# Direct solve on the shakiness variety (cross-validation oracle)


def _det_poly(mat: list[list[Poly]]) -> Poly:
    """Determinant of a square matrix of polynomials (Laplace expansion)."""
    n = len(mat)
    if n == 1:
        return mat[0][0]
    out = None
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in mat[1:]]
        term = mat[0][j] * _det_poly(minor)
        if j % 2:
            term = -term
        out = term if out is None else out + term
    return out


def shaky_variety_system(df: DensityFunction, chart: Chart,
                         theta_ref: np.ndarray,
                         ) -> tuple[CompiledSystem, Poly]:
    """Lagrangian system for critical points of u on the shakiness variety.

    The variety is cut out by g = det of the square block of the chart
    rigidity matrix selected by column pivoting at ``theta_ref`` (exactly
    the determinant of the rigidity matrix in the isostatic case).
    Unknowns are the chart parameters followed by one multiplier; returns
    (compiled system, g).
    """
    n = chart.n_params
    sel = select_tracking_edges(df, chart, np.asarray(theta_ref, float))
    qs = edge_polys(df, chart, nvars=n)
    # rigidity rows: d q_e / d theta_k, linear in theta
    rig = [[qs[e].diff(k) for e in sel] for k in range(n)]
    g = _det_poly(rig)
    u = density_poly(df, chart, nvars=n)

    def widen(p: Poly) -> Poly:
        out = Poly(n + 1)
        out.terms = {e + (0,): c for e, c in p.terms.items()}
        return out

    lam = Poly.var(n, n + 1)
    polys = [widen(u.diff(k)) + lam * widen(g.diff(k)) for k in range(n)]
    polys.append(widen(g))
    return CompiledSystem.compile(polys), g


def shaky_variety_critical(df: DensityFunction, chart: Chart,
                           theta_ref: np.ndarray,
                           cfg: TrackerConfig | None = None,
                           n_starts: int = 4000,
                           seed_scale: float | None = None,
                           ) -> list[CriticalPoint]:
    """Critical points of the density restricted to the shakiness variety,
    found by multistart on the determinant-constrained Lagrangian.

    The Lagrangian is regular only where the rigidity matrix drops rank by
    exactly one; on deeper strata (corank >= 2) every block determinant
    vanishes to higher order together with its gradient, so those
    solutions are not isolated and escape the Newton polish.  A
    constrained local minimizer on such a stratum is, however, a critical
    point of the unrestricted density, so the lambda = 0 branch is
    recovered separately by multistart on the plain gradient system and
    the shaky solutions merged in.  Multistart carries no exhaustiveness
    guarantee; this routine cross-validates the critical-set route.
    """
    from .critical import build_gradient_system

    cfg = cfg or TrackerConfig()
    n = chart.n_params
    system, g = shaky_variety_system(df, chart, theta_ref)
    if seed_scale is None:
        seed_scale = 2.0 * df.framework.mean_length()
    rng = np.random.default_rng(cfg.seed)
    seeds = rng.uniform(-seed_scale, seed_scale, size=(n_starts, n + 1))
    seeds[:, :n] += np.asarray(theta_ref, float)[None, :]
    sols = solve_multistart(system, seeds=seeds, n_starts=0, cfg=cfg)
    candidates = [(s.x[:n], s.x[n:], system) for s in sols.real]

    grad_sys = CompiledSystem.compile(build_gradient_system(df, chart, []))
    gseeds = rng.uniform(-seed_scale, seed_scale, size=(n_starts, n))
    gseeds += np.asarray(theta_ref, float)[None, :]
    gsols = solve_multistart(grad_sys, seeds=gseeds, n_starts=0, cfg=cfg)
    candidates.extend((s.x, np.zeros(1), None) for s in gsols.real)

    points = []
    for theta, lam, src in candidates:
        V = chart.realize(theta)
        shaky, ratio = is_shaky(df.framework, V, chart=chart)
        if not shaky:
            continue
        u = df.density_from_realization(V)
        kind, n_neg, eigs = classify_point(df, chart, theta,
                                           constraints=[g],
                                           multipliers=lam)
        if src is None:
            resid = float(np.max(np.abs(grad_sys.eval(theta))))
        else:
            resid = float(np.max(np.abs(src.eval(np.concatenate([theta,
                                                                 lam])))))
        points.append(CriticalPoint(
            theta=theta, V=V, u=u, kind=kind, n_negative=n_neg,
            eigenvalues=eigs, shaky=shaky, shaky_ratio=ratio,
            grad_residual=resid, stress_residual=0.0, stress_norm=0.0,
            multipliers=lam))
    points.sort(key=lambda p: p.u)
    return points
