"""Critical points of the energy density: enumeration and classification.

Realizations are parameterized by a linear chart V = offset + C * theta,
so squared edge lengths are quadratic and the density u(theta) is an exact
quartic polynomial.  Its gradient is a square cubic system solved either
by total-degree homotopy or by multistart Newton.  Optional polynomial
side conditions (e.g. oriented-volume preservation at the incompressible
limit) are appended with Lagrange multipliers.

Saddles are separated from extrema by the eigenvalues of the (constraint-
projected) Hessian, and gradient-descent flows from each saddle's negative
curvature directions build the directed transition graph between saddles
and the stable realizations they connect.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .density import DensityFunction
from .model import Chart
from .poly import CompiledSystem, Poly
from .polysolve import (SolutionSet, TrackerConfig, solve_multistart,
                        solve_total_degree)
from .rigidity import is_shaky, stress_from_density_gradient

__all__ = [
    "BudgetError",
    "CriticalPoint",
    "CriticalSet",
    "edge_polys",
    "density_poly",
    "oriented_volume_poly",
    "build_gradient_system",
    "enumerate_critical_points",
    "classify_point",
    "descend_flow",
    "transition_graph",
    "transition_graph_dot",
]

CLASSIFY_TOL = 1e-8       # eigenvalue threshold factor
DEGENERATE_EDGE_TOL = 1e-8  # x mean length


class BudgetError(RuntimeError):
    """A homotopy run would exceed the configured path budget."""


# ---------------------------------------------------------------------------
# Polynomial construction


def _coordinate_polys(chart: Chart, nvars: int | None = None) -> list[Poly]:
    """Affine polynomials for every flat coordinate of the chart."""
    n = chart.n_params if nvars is None else nvars
    out = []
    for row in range(chart.offset.size):
        out.append(Poly.affine(list(chart.C[row, :]) + [0.0] * (n - chart.n_params),
                               chart.offset[row], n))
    return out


def edge_polys(df: DensityFunction, chart: Chart,
               nvars: int | None = None) -> list[Poly]:
    """Squared-length polynomials q_e(theta) for every metric edge."""
    coords = _coordinate_polys(chart, nvars)
    d = chart.dimension
    out = []
    for (i, j) in df.edges:
        q = None
        for a in range(d):
            diff = coords[i * d + a] - coords[j * d + a]
            term = diff * diff
            q = term if q is None else q + term
        out.append(q)
    return out


def oriented_volume_poly(chart: Chart, tetra, nvars: int | None = None,
                         reference: float = 0.0) -> Poly:
    """Signed volume of the tetrahedron on the given joints, minus
    ``reference``, as a cubic polynomial in the chart parameters.

    Used as a side constraint when the constitutive law is insensitive to
    volume changes (nu = 1/2) and the critical equations alone would admit
    a positive-dimensional solution set.
    """
    if chart.dimension != 3 or len(tetra) != 4:
        raise ValueError("oriented volume needs four joints in 3D")
    coords = _coordinate_polys(chart, nvars)
    p0, p1, p2, p3 = tetra
    r = [[coords[p * 3 + a] - coords[p0 * 3 + a] for a in range(3)]
         for p in (p1, p2, p3)]
    det = (r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1])
           - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
           + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0]))
    return (1.0 / 6.0) * det - reference


def density_poly(df: DensityFunction, chart: Chart,
                 nvars: int | None = None) -> Poly:
    """The density u as a quartic polynomial in the chart parameters."""
    n = chart.n_params if nvars is None else nvars
    qs = edge_polys(df, chart, nvars)
    M = df.M
    u = Poly.const(M[0, 0], n)
    for e, qe in enumerate(qs):
        c = M[0, e + 1]
        if c != 0.0:
            u = u + (2.0 * c) * qe
    for e1, q1 in enumerate(qs):
        row = M[e1 + 1, 1:]
        if not np.any(row):
            continue
        for e2 in range(e1, len(qs)):
            c = row[e2]
            if c == 0.0:
                continue
            u = u + ((1.0 if e1 == e2 else 2.0) * c) * (q1 * qs[e2])
    return u


def build_gradient_system(df: DensityFunction, chart: Chart,
                          constraints: list[Poly] = ()) -> list[Poly]:
    """Square Lagrangian system: grad u + sum lambda_l grad c_l = 0, c = 0.

    Constraint polynomials are given in the chart parameters; the returned
    polynomials live in n_params + n_constraints variables, multipliers
    last.
    """
    n = chart.n_params
    m = len(constraints)
    nv = n + m
    u = density_poly(df, chart, nv)
    cons = [_lift(c, nv) for c in constraints]
    eqs = []
    for k in range(n):
        g = u.diff(k)
        for l, c in enumerate(cons):
            g = g + Poly.var(n + l, nv) * c.diff(k)
        eqs.append(g)
    eqs.extend(cons)
    return eqs


def _lift(p: Poly, nvars: int) -> Poly:
    if p.nvars == nvars:
        return p
    out = Poly(nvars)
    pad = nvars - p.nvars
    out.terms = {e + (0,) * pad: c for e, c in p.terms.items()}
    return out


# ---------------------------------------------------------------------------
# Critical points


@dataclass
class CriticalPoint:
    theta: np.ndarray
    V: np.ndarray
    u: float
    kind: str                    # minimum | maximum | saddle | degenerate
    n_negative: int
    eigenvalues: np.ndarray
    shaky: bool
    shaky_ratio: float
    grad_residual: float
    stress_residual: float
    stress_norm: float
    multipliers: np.ndarray | None = None
    label: str = ""
    min_separation: float = float("inf")   # smallest inter-joint distance

    def to_json(self) -> dict:
        return {
            "theta": self.theta.tolist(),
            "realization": self.V.tolist(),
            "u": self.u,
            "kind": self.kind,
            "n_negative": self.n_negative,
            "eigenvalues": self.eigenvalues.tolist(),
            "shaky": self.shaky,
            "shaky_ratio": self.shaky_ratio,
            "grad_residual": self.grad_residual,
            "stress_residual": self.stress_residual,
            "stress_norm": self.stress_norm,
            "multipliers": None if self.multipliers is None
            else self.multipliers.tolist(),
            "label": self.label,
            "min_separation": self.min_separation,
        }


@dataclass
class CriticalSet:
    points: list[CriticalPoint]
    n_paths: int
    n_real: int
    n_rejected: int
    engine: str
    solutions: SolutionSet | None = None

    @property
    def minima(self) -> list[CriticalPoint]:
        return [p for p in self.points if p.kind == "minimum"]

    @property
    def saddles(self) -> list[CriticalPoint]:
        return [p for p in self.points if p.kind == "saddle"]

    def to_json(self) -> dict:
        return {
            "n_paths": self.n_paths,
            "n_real": self.n_real,
            "n_rejected": self.n_rejected,
            "engine": self.engine,
            "points": [p.to_json() for p in self.points],
        }


def _constraint_basis(constraints: list[Poly], theta: np.ndarray,
                      n: int) -> np.ndarray | None:
    """Orthonormal basis of the constraint tangent space at theta."""
    if not constraints:
        return None
    J = np.zeros((len(constraints), n))
    for l, c in enumerate(constraints):
        for k in range(n):
            J[l, k] = c.diff(k)(theta)
    _, s, vt = np.linalg.svd(J)
    rank = int(np.sum(s > 1e-10 * max(s[0], 1.0)))
    return vt[rank:].T      # columns span the tangent space


def classify_point(df: DensityFunction, chart: Chart, theta: np.ndarray,
                   constraints: list[Poly] = (),
                   multipliers: np.ndarray | None = None,
                   ) -> tuple[str, int, np.ndarray]:
    """Second-derivative test; returns (kind, #negative, eigenvalues).

    With active constraints the Hessian of the Lagrangian is projected
    onto the constraint tangent space first.
    """
    n = chart.n_params
    V = chart.realize(theta)
    H = chart.C.T @ df.hessian_realization(V) @ chart.C
    if constraints:
        mult = (np.zeros(len(constraints)) if multipliers is None
                else np.asarray(multipliers, dtype=float))
        for lam, c in zip(mult, constraints):
            Hc = np.zeros((n, n))
            for a in range(n):
                da = c.diff(a)
                for b in range(a, n):
                    Hc[a, b] = Hc[b, a] = da.diff(b)(theta)
            H = H + lam * Hc
        B = _constraint_basis(constraints, theta, n)
        H = B.T @ H @ B
    eigs = np.linalg.eigvalsh(H)
    tol = CLASSIFY_TOL * max(np.max(np.abs(eigs)), 1e-300)
    n_neg = int(np.sum(eigs < -tol))
    n_pos = int(np.sum(eigs > tol))
    n_zero = eigs.size - n_neg - n_pos
    if n_zero:
        kind = "degenerate"
    elif n_neg == 0:
        kind = "minimum"
    elif n_pos == 0:
        kind = "maximum"
    else:
        kind = "saddle"
    return kind, n_neg, eigs


def _min_joint_separation(V: np.ndarray, dim: int) -> float:
    """Smallest pairwise distance between joints of a realization."""
    P = np.asarray(V, dtype=float).reshape(-1, dim)
    d = np.linalg.norm(P[:, None, :] - P[None, :, :], axis=-1)
    iu = np.triu_indices(P.shape[0], k=1)
    return float(d[iu].min()) if iu[0].size else float("inf")


def _is_degenerate_realization(df: DensityFunction, V: np.ndarray) -> bool:
    scale = df.framework.mean_length()
    q = df.squared_lengths(V)
    return bool(np.any(np.sqrt(q) < DEGENERATE_EDGE_TOL * scale))


def enumerate_critical_points(df: DensityFunction, chart: Chart,
                              constraints: list[Poly] = (),
                              engine: str = "homotopy",
                              cfg: TrackerConfig | None = None,
                              budget: int = 3 ** 12,
                              seeds: np.ndarray | None = None,
                              n_starts: int = 2000,
                              seed_scale: float = 1.0,
                              admissible=None) -> CriticalSet:
    """Solve the (possibly constrained) gradient system and classify.

    ``admissible(theta, V) -> bool`` filters solutions (on top of the
    built-in zero-length-edge rejection).  The homotopy engine raises
    :class:`BudgetError` when its path count exceeds ``budget``.
    """
    cfg = cfg or TrackerConfig()
    n = chart.n_params
    m = len(constraints)
    polys = build_gradient_system(df, chart, constraints)
    system = CompiledSystem.compile(polys)

    if engine == "homotopy":
        bezout = int(np.prod([max(int(d), 1) for d in system.degrees]))
        if bezout > budget:
            raise BudgetError(f"total-degree homotopy needs {bezout} "
                              f"paths, budget is {budget}")
    if engine == "homotopy":
        sols = solve_total_degree(system, cfg)
    elif engine == "multistart":
        center = np.zeros(n + m)
        full_seeds = None
        if seeds is not None:
            full_seeds = np.atleast_2d(np.asarray(seeds, dtype=float))
            if full_seeds.shape[1] == n and m:
                full_seeds = np.hstack([full_seeds,
                                        np.zeros((full_seeds.shape[0], m))])
        sols = solve_multistart(system, seeds=full_seeds, n_starts=n_starts,
                                scale=seed_scale, center=center, cfg=cfg)
    else:
        raise ValueError(f"unknown engine {engine!r}")

    points: list[CriticalPoint] = []
    n_rejected = 0
    fw = df.framework
    for s in sols.real:
        theta = np.asarray(s.x[:n], dtype=float)
        mult = np.asarray(s.x[n:], dtype=float) if m else None
        V = chart.realize(theta)
        if _is_degenerate_realization(df, V):
            n_rejected += 1
            continue
        if admissible is not None and not admissible(theta, V):
            n_rejected += 1
            continue
        kind, n_neg, eigs = classify_point(df, chart, theta, constraints, mult)
        shaky, ratio = is_shaky(fw, V, chart=chart)
        stress = stress_from_density_gradient(df, V)
        g = chart.C.T @ df.gradient_realization(V).ravel()
        if constraints and mult is not None:
            for lam, c in zip(mult, constraints):
                for k in range(n):
                    g[k] += lam * c.diff(k)(theta)
        points.append(CriticalPoint(
            theta=theta, V=V, u=df.density_from_realization(V),
            kind=kind, n_negative=n_neg, eigenvalues=eigs,
            shaky=shaky, shaky_ratio=ratio,
            grad_residual=float(np.max(np.abs(g))),
            stress_residual=stress.residual,
            stress_norm=float(np.max(np.abs(stress.omega))),
            multipliers=mult,
            min_separation=_min_joint_separation(V, chart.dimension)))
    points.sort(key=lambda p: p.u)
    return CriticalSet(points=points, n_paths=sols.n_paths,
                       n_real=len(sols.real), n_rejected=n_rejected,
                       engine=sols.engine, solutions=sols)


# ---------------------------------------------------------------------------
# Gradient-descent flows and the transition graph


def descend_flow(df: DensityFunction, chart: Chart, theta0: np.ndarray,
                 direction: np.ndarray,
                 eps: float | None = None,
                 constraints: list[Poly] = (),
                 max_steps: int = 20000,
                 ) -> tuple[np.ndarray | None, list[np.ndarray], bool]:
    """Gradient descent from a saddle, nudged along ``direction``.

    Returns (endpoint theta or None, trajectory samples, degenerate_flag);
    the flag is set when the flow runs into a zero-length edge.  With
    constraints, the step is projected onto the constraint tangent space
    and the point re-projected onto the constraint manifold.
    """
    scale = df.framework.mean_length()
    if eps is None:
        eps = 1e-4 * scale
    theta = np.asarray(theta0, dtype=float) + eps * np.asarray(direction)
    theta = _project_constraints(theta, constraints)
    traj = [theta.copy()]
    step = 1e-2

    def value(th):
        return df.density_from_realization(chart.realize(th))

    def grad(th):
        g = chart.C.T @ df.gradient_realization(chart.realize(th)).ravel()
        B = _constraint_basis(list(constraints), th, chart.n_params)
        if B is not None:
            g = B @ (B.T @ g)
        return g

    u = value(theta)
    for it in range(max_steps):
        g = grad(theta)
        gn = np.linalg.norm(g)
        if gn < 1e-13:
            break
        # backtracking line search on u
        t = step
        accepted = False
        for _ in range(40):
            cand = _project_constraints(theta - t * g / gn, constraints)
            uc = value(cand)
            if uc < u:
                theta, u = cand, uc
                step = min(t * 1.8, 1.0)
                accepted = True
                break
            t *= 0.5
        if not accepted:
            break
        if it % 50 == 0:
            traj.append(theta.copy())
        if _is_degenerate_realization(df, chart.realize(theta)):
            return None, traj, True
    traj.append(theta.copy())
    return theta, traj, False


def _project_constraints(theta: np.ndarray, constraints) -> np.ndarray:
    if not constraints:
        return theta
    th = theta.copy()
    n = th.size
    for _ in range(30):
        vals = np.array([c(th) for c in constraints])
        if np.max(np.abs(vals)) < 1e-12:
            break
        J = np.zeros((len(constraints), n))
        for l, c in enumerate(constraints):
            for k in range(n):
                J[l, k] = c.diff(k)(th)
        dx, *_ = np.linalg.lstsq(J, vals, rcond=None)
        th = th - dx
    return th


def _negative_directions(df: DensityFunction, chart: Chart,
                         p: CriticalPoint,
                         constraints: list[Poly] = ()) -> list[np.ndarray]:
    """Unit eigenvectors of the negative Hessian directions, ascending."""
    n = chart.n_params
    H = chart.C.T @ df.hessian_realization(p.V) @ chart.C
    if constraints:
        mult = (p.multipliers if p.multipliers is not None
                else np.zeros(len(constraints)))
        for lam, c in zip(mult, constraints):
            Hc = np.zeros((n, n))
            for a in range(n):
                da = c.diff(a)
                for b in range(a, n):
                    Hc[a, b] = Hc[b, a] = da.diff(b)(p.theta)
            H = H + lam * Hc
        B = _constraint_basis(constraints, p.theta, n)
        Hp = B.T @ H @ B
        w, vecs = np.linalg.eigh(Hp)
        vecs = B @ vecs
    else:
        w, vecs = np.linalg.eigh(H)
    tol = CLASSIFY_TOL * max(np.max(np.abs(w)), 1e-300)
    return [vecs[:, i] for i in range(len(w)) if w[i] < -tol]


def transition_graph(df: DensityFunction, chart: Chart, cs: CriticalSet,
                     constraints: list[Poly] = (),
                     match_tol: float | None = None) -> list[dict]:
    """Flows from every saddle's negative directions to reached minima.

    Each edge record is ``{saddle, direction, sign, target, degenerate}``
    where saddle/target are indices into ``cs.points`` (target None if the
    flow left the admissible region or did not land on a known point).
    """
    if match_tol is None:
        match_tol = 1e-5 * df.framework.mean_length()
    edges = []
    for si, p in enumerate(cs.points):
        if p.kind not in ("saddle", "maximum"):
            continue
        dirs = _negative_directions(df, chart, p, constraints)
        for di, vec in enumerate(dirs):
            for sign in (+1.0, -1.0):
                end, _, degen = descend_flow(df, chart, p.theta, sign * vec,
                                             constraints=constraints)
                target = None
                if end is not None:
                    for ti, q in enumerate(cs.points):
                        if np.max(np.abs(q.theta - end)) < match_tol:
                            target = ti
                            break
                edges.append({"saddle": si, "direction": di,
                              "sign": int(sign), "target": target,
                              "degenerate": degen})
    return edges


def transition_graph_dot(cs: CriticalSet, edges: list[dict]) -> str:
    lines = ["digraph transitions {"]
    for i, p in enumerate(cs.points):
        name = p.label or f"P{i}"
        shape = {"minimum": "ellipse", "saddle": "box",
                 "maximum": "diamond"}.get(p.kind, "plaintext")
        color = "green" if p.kind == "minimum" and p.u < 1e-12 else (
            "yellow" if p.kind == "minimum" else "red")
        lines.append(f'  "{name}" [shape={shape}, color={color}, '
                     f'label="{name}\\nu={p.u:.6g}"];')
    for e in edges:
        src = cs.points[e["saddle"]]
        sname = src.label or f'P{e["saddle"]}'
        if e["target"] is None:
            style = ', style=dotted' if e["degenerate"] else ', style=dashed'
            lines.append(f'  "{sname}" -> "lost_{e["saddle"]}_{e["direction"]}'
                         f'_{e["sign"]}" [label="{e["direction"] + 1}"{style}];')
            continue
        tgt = cs.points[e["target"]]
        tname = tgt.label or f'P{e["target"]}'
        style = ', style=dotted' if e["degenerate"] else ''
        lines.append(f'  "{sname}" -> "{tname}" '
                     f'[label="{e["direction"] + 1}"{style}];')
    lines.append("}")
    return "\n".join(lines)
