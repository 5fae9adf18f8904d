"""Numerical solvers for square polynomial systems.

Two engines are provided:

* ``solve_total_degree`` — a classical total-degree homotopy
  ``H(x,t) = (1-t) * gamma * G(x) + t * F(x)`` with start system
  ``G_i = x_i^{d_i} - 1``, tracked with an Euler predictor and a short
  Newton corrector, followed by an endpoint polish.
* ``solve_multistart`` — damped Newton from randomized seed points, as a
  fallback / alternative for systems whose Bezout number is impractical.

Both are deterministic for a fixed seed.  ``track_parameter_path`` follows
the solutions of a one-parameter family ``F(x) + t * (F1(x) - F(x))``
between two compiled systems, which is how deformation paths between
realization systems are traced.
"""

from __future__ import annotations

import dataclasses
import itertools
import json
from dataclasses import dataclass, field

import numpy as np

from .poly import CompiledSystem, Poly

__all__ = [
    "TrackerConfig",
    "Solution",
    "SolutionSet",
    "solve_total_degree",
    "solve_multistart",
    "track_parameter_path",
    "newton_polish",
]


@dataclass
class TrackerConfig:
    """Knobs for path tracking and solution post-processing."""

    step_init: float = 0.02
    step_min: float = 1e-10
    step_max: float = 0.1
    corrector_iters: int = 3
    corrector_tol: float = 1e-9     # relative Newton-step size for acceptance
    polish_iters: int = 60
    polish_tol: float = 1e-12
    real_tol: float = 1e-8          # |Im| < real_tol * (1 + |Re|)
    dedup_tol: float = 1e-7         # max-norm radius for merging solutions
    diverge_norm: float = 1e8
    seed: int = 0


@dataclass
class Solution:
    x: np.ndarray            # real or complex coordinates
    residual: float
    is_real: bool

    def to_json(self) -> dict:
        return {
            "re": np.real(self.x).tolist(),
            "im": np.imag(self.x).tolist(),
            "residual": self.residual,
            "is_real": self.is_real,
        }

    @classmethod
    def from_json(cls, d: dict) -> "Solution":
        x = np.array(d["re"], dtype=float) + 1j * np.array(d["im"], dtype=float)
        if d["is_real"]:
            x = np.real(x).astype(float)
        return cls(x=x, residual=float(d["residual"]), is_real=bool(d["is_real"]))


@dataclass
class SolutionSet:
    solutions: list[Solution] = field(default_factory=list)
    n_paths: int = 0
    n_diverged: int = 0
    engine: str = ""
    seed: int = 0

    @property
    def real(self) -> list[Solution]:
        return [s for s in self.solutions if s.is_real]

    def dump(self, path: str) -> None:
        with open(path, "w") as fh:
            json.dump({
                "engine": self.engine,
                "seed": self.seed,
                "n_paths": self.n_paths,
                "n_diverged": self.n_diverged,
                "solutions": [s.to_json() for s in self.solutions],
            }, fh, indent=2)

    @classmethod
    def load(cls, path: str) -> "SolutionSet":
        with open(path) as fh:
            d = json.load(fh)
        return cls(
            solutions=[Solution.from_json(s) for s in d["solutions"]],
            n_paths=int(d.get("n_paths", 0)),
            n_diverged=int(d.get("n_diverged", 0)),
            engine=d.get("engine", ""),
            seed=int(d.get("seed", 0)),
        )


# ---------------------------------------------------------------------------
# Newton iterations


def _newton_step(system: CompiledSystem, x: np.ndarray):
    vals, jac = system.eval_with_jac(x)
    try:
        dx = np.linalg.solve(jac, vals)
    except np.linalg.LinAlgError:
        dx, *_ = np.linalg.lstsq(jac, vals, rcond=None)
    return x - dx, float(np.max(np.abs(vals)))


def newton_polish(system: CompiledSystem, x: np.ndarray, iters: int = 60,
                  tol: float = 1e-12):
    """Newton with step-halving; returns (x, residual, converged)."""
    x = np.asarray(x)
    res = float(np.max(np.abs(system.eval(x))))
    for _ in range(iters):
        if res < tol:
            break
        xn, _ = _newton_step(system, x)
        rn = float(np.max(np.abs(system.eval(xn))))
        if rn > res:
            # damp if the full step made things worse
            step = xn - x
            ok = False
            lam = 0.5
            for _ in range(12):
                xt = x + lam * step
                rt = float(np.max(np.abs(system.eval(xt))))
                if rt < res:
                    xn, rn, ok = xt, rt, True
                    break
                lam *= 0.5
            if not ok:
                break
        x, res = xn, rn
    return x, res, res < tol


# ---------------------------------------------------------------------------
# Total-degree homotopy


def _track_homotopy(eval_H, x: np.ndarray, cfg: TrackerConfig):
    """Track H(x,t)=0 from t=0 to t=1. eval_H(x, t) -> (vals, jac_x, dH_dt).

    A predictor step is accepted only when the Newton corrector actually
    converges (relative step size below ``corrector_tol``); otherwise the
    step is halved.  This keeps paths from hopping onto a neighbor when
    two of them come close.
    """
    t = 0.0
    h = cfg.step_init
    x = x.astype(complex)
    while t < 1.0:
        h = min(h, 1.0 - t)
        vals, jac, dHdt = eval_H(x, t)
        try:
            dxdt = np.linalg.solve(jac, -dHdt)
        except np.linalg.LinAlgError:
            return None, "singular"
        xp = x + h * dxdt
        tp = t + h
        ok = False
        for _ in range(cfg.corrector_iters):
            vals, jac, _ = eval_H(xp, tp)
            try:
                dx = np.linalg.solve(jac, vals)
            except np.linalg.LinAlgError:
                break
            xp = xp - dx
            if np.max(np.abs(xp)) > cfg.diverge_norm:
                return None, "diverged"
            if np.max(np.abs(dx)) < cfg.corrector_tol * (1.0 + np.max(np.abs(xp))):
                ok = True
                break
        if ok:
            x, t = xp, tp
            h = min(h * 1.4, cfg.step_max)
        else:
            h *= 0.5
            if h < cfg.step_min:
                return None, "stalled"
        if np.max(np.abs(x)) > cfg.diverge_norm:
            return None, "diverged"
    return x, "ok"


def _classify_and_add(system: CompiledSystem, x: np.ndarray,
                      cfg: TrackerConfig, out: list[Solution]) -> None:
    x, res, conv = newton_polish_complex(system, x, cfg.polish_iters,
                                         cfg.polish_tol)
    if not conv and res > 1e-8:
        return
    im = np.abs(np.imag(x))
    re = np.abs(np.real(x))
    is_real = bool(np.all(im < cfg.real_tol * (1.0 + re)))
    if is_real:
        xr = np.real(x).copy()
        xr, rres, rconv = newton_polish(system, xr, cfg.polish_iters,
                                        cfg.polish_tol)
        if rconv or rres < 1e-8:
            x, res = xr, rres
        else:
            is_real = False
    for s in out:
        if np.max(np.abs(np.asarray(s.x, dtype=complex) -
                         np.asarray(x, dtype=complex))) < cfg.dedup_tol:
            return
    out.append(Solution(x=np.asarray(x), residual=res, is_real=is_real))


def newton_polish_complex(system: CompiledSystem, x: np.ndarray,
                          iters: int = 60, tol: float = 1e-12):
    x = np.asarray(x, dtype=complex)
    res = float(np.max(np.abs(system.eval(x))))
    for _ in range(iters):
        if res < tol:
            break
        vals, jac = system.eval_with_jac(x)
        try:
            dx = np.linalg.solve(jac, vals)
        except np.linalg.LinAlgError:
            break
        xn = x - dx
        rn = float(np.max(np.abs(system.eval(xn))))
        if rn >= res and res < 1e-6:
            break
        x, res = xn, rn
    return x, res, res < tol


def solve_total_degree(system: CompiledSystem,
                       cfg: TrackerConfig | None = None,
                       max_paths: int | None = None) -> SolutionSet:
    """All isolated solutions of a square system by total-degree homotopy.

    Returns None-diverged paths in the stats; raises ValueError if the
    Bezout number exceeds ``max_paths``.
    """
    cfg = cfg or TrackerConfig()
    n = system.nvars
    if system.n_eq != n:
        raise ValueError(f"system is not square ({system.n_eq} eqs, {n} vars)")
    degs = [max(int(d), 1) for d in system.degrees]
    bezout = int(np.prod(degs))
    if max_paths is not None and bezout > max_paths:
        raise ValueError(f"Bezout number {bezout} exceeds budget {max_paths}")

    rng = np.random.default_rng(cfg.seed)
    gamma = np.exp(1j * rng.uniform(0.1, 2 * np.pi - 0.1))

    exps = system.exps
    # normalize each equation to unit max coefficient so the target system
    # is on the same scale as the start system G_i = x_i^d - 1
    row_scale = np.abs(system.coeffs).max(axis=1)
    row_scale[row_scale == 0] = 1.0
    coeffs = system.coeffs / row_scale[:, None]
    jcoeffs = system.jac_coeffs / row_scale[None, :, None]
    maxdeg = int(exps.max(initial=0))
    cols = np.arange(n)

    def eval_F(x):
        pows = np.empty((n, maxdeg + 1), dtype=complex)
        pows[:, 0] = 1
        for k in range(1, maxdeg + 1):
            pows[:, k] = pows[:, k - 1] * x
        mono = np.prod(pows[cols[None, :], exps], axis=1)
        return coeffs @ mono, (jcoeffs @ mono).T

    dvec = np.array(degs)

    def eval_H(x, t):
        Fv, Fj = eval_F(x)
        Gv = x ** dvec - 1.0
        Gj = np.diag(dvec * x ** (dvec - 1))
        vals = (1 - t) * gamma * Gv + t * Fv
        jac = (1 - t) * gamma * Gj + t * Fj
        dHdt = Fv - gamma * Gv
        return vals, jac, dHdt

    # start solutions: roots of unity products
    roots = [np.exp(2j * np.pi * np.arange(d) / d) for d in degs]
    out: list[Solution] = []
    n_div = 0
    retry_cfg = dataclasses.replace(cfg, step_init=cfg.step_init / 10,
                                    step_max=cfg.step_max / 5)
    for combo in itertools.product(*roots):
        x0 = np.array(combo, dtype=complex)
        xe, why = _track_homotopy(eval_H, x0, cfg)
        if xe is None and why == "stalled":
            # one retry with a much more cautious step policy
            xe, why = _track_homotopy(eval_H, x0, retry_cfg)
        if xe is None:
            n_div += 1
            continue
        _classify_and_add(system, xe, cfg, out)
    return SolutionSet(solutions=out, n_paths=bezout, n_diverged=n_div,
                       engine="homotopy", seed=cfg.seed)


# ---------------------------------------------------------------------------
# Multistart Newton


def solve_multistart(system: CompiledSystem,
                     seeds: np.ndarray | None = None,
                     n_starts: int = 2000,
                     scale: float = 1.0,
                     center: np.ndarray | None = None,
                     cfg: TrackerConfig | None = None) -> SolutionSet:
    """Real solutions by damped Newton from randomized starts.

    ``seeds`` (if given) are tried first; random starts are drawn as
    ``center + scale * N(0, I)``.  Only real solutions are reported.
    """
    cfg = cfg or TrackerConfig()
    n = system.nvars
    rng = np.random.default_rng(cfg.seed)
    if center is None:
        center = np.zeros(n)
    starts = []
    if seeds is not None:
        starts.extend(np.atleast_2d(np.asarray(seeds, dtype=float)))
    for _ in range(n_starts):
        starts.append(center + scale * rng.standard_normal(n))
    out: list[Solution] = []
    n_div = 0
    # Stalled Newton runs are kept only when the residual is tiny relative
    # to the coefficient scale; on nearly flat systems an absolute cutoff
    # admits spurious points far from any root.
    loose_tol = 1e-12 * max(1.0, float(np.max(np.abs(system.coeffs))))
    for x0 in starts:
        x, res, conv = newton_polish(system, np.asarray(x0, dtype=float),
                                     cfg.polish_iters, cfg.polish_tol)
        if not (conv or res < loose_tol):
            n_div += 1
            continue
        if np.max(np.abs(x)) > cfg.diverge_norm:
            n_div += 1
            continue
        dup = False
        for s in out:
            if s.is_real and np.max(np.abs(s.x - x)) < cfg.dedup_tol:
                dup = True
                break
        if not dup:
            out.append(Solution(x=x, residual=res, is_real=True))
    return SolutionSet(solutions=out, n_paths=len(starts), n_diverged=n_div,
                       engine="multistart", seed=cfg.seed)


# ---------------------------------------------------------------------------
# Parameter continuation between two systems


def track_parameter_path(system0: CompiledSystem, system1: CompiledSystem,
                         x0: np.ndarray, cfg: TrackerConfig | None = None,
                         t_start: float = 0.0, t_end: float = 1.0):
    """Track a solution of ``(1-t)*F0 + t*F1 = 0`` from t_start to t_end.

    F0 and F1 must share nvars and be square.  Returns the endpoint (real
    array if the path stays essentially real) or None if tracking fails.
    """
    cfg = cfg or TrackerConfig()
    n = system0.nvars
    if system1.nvars != n or system0.n_eq != system1.n_eq:
        raise ValueError("incompatible systems")

    def eval_H(x, s):
        t = t_start + s * (t_end - t_start)
        v0, j0 = _eval_complex(system0, x)
        v1, j1 = _eval_complex(system1, x)
        vals = (1 - t) * v0 + t * v1
        jac = (1 - t) * j0 + t * j1
        dHdt = (v1 - v0) * (t_end - t_start)
        return vals, jac, dHdt

    xe, _why = _track_homotopy(eval_H, np.asarray(x0, dtype=complex), cfg)
    if xe is None:
        return None

    # polish on the endpoint system
    def endpoint_eval(x):
        t = t_end
        v0, j0 = _eval_complex(system0, x)
        v1, j1 = _eval_complex(system1, x)
        return (1 - t) * v0 + t * v1, (1 - t) * j0 + t * j1

    x = xe
    for _ in range(cfg.polish_iters):
        vals, jac = endpoint_eval(x)
        if np.max(np.abs(vals)) < cfg.polish_tol:
            break
        try:
            x = x - np.linalg.solve(jac, vals)
        except np.linalg.LinAlgError:
            break
    im = np.abs(np.imag(x))
    re = np.abs(np.real(x))
    if np.all(im < cfg.real_tol * (1.0 + re)):
        return np.real(x)
    return x


def _eval_complex(system: CompiledSystem, x: np.ndarray):
    n = system.nvars
    exps = system.exps
    maxdeg = int(exps.max(initial=0))
    pows = np.empty((n, maxdeg + 1), dtype=complex)
    pows[:, 0] = 1
    xv = np.asarray(x, dtype=complex)
    for k in range(1, maxdeg + 1):
        pows[:, k] = pows[:, k - 1] * xv
    cols = np.arange(n)
    mono = np.prod(pows[cols[None, :], exps], axis=1)
    return system.coeffs @ mono, (system.jac_coeffs @ mono).T
