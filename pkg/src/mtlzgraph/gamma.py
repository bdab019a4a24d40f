"""Numerical search for positive solutions of the multipath magnitude system.

Unknowns are ``x_e = sqrt|gamma_e| > 0`` per edge. Each distance-2 pair
``(a, b)`` contributes ``sum_c sigma_c x_ac x_bc = 0``. The system is
homogeneous of degree two, so solutions are reported with ``max x = 1``.

Solving happens in ``y = log x``: a damped Gauss-Newton (Levenberg-Marquardt)
iteration from many random starts, with scipy's trust-region least squares
as a fallback for starts where the hand-rolled iteration stalls.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np
from scipy.optimize import least_squares

from .graph import Graph
from .orientation import OrientationError, RVar, sigma_from_r

log = logging.getLogger(__name__)


class GammaStatus(str, enum.Enum):
    NONTRIVIAL = "nontrivial"
    TRIVIAL_ONLY = "trivial_only"
    NONE_FOUND = "none_found"


@dataclass(frozen=True)
class GammaEquation:
    pair: tuple[int, int]
    terms: tuple[tuple[int, int, int], ...]  # (sigma, edge index a-c, edge index b-c)


@dataclass(frozen=True)
class GammaSystem:
    edges: tuple[tuple[int, int], ...]
    equations: tuple[GammaEquation, ...]

    @property
    def num_vars(self) -> int:
        return len(self.edges)

    def _arrays(self):
        rows, sig, e1, e2 = [], [], [], []
        for i, eq in enumerate(self.equations):
            for s, p, q in eq.terms:
                rows.append(i)
                sig.append(s)
                e1.append(p)
                e2.append(q)
        return np.array(rows, int), np.array(sig, float), np.array(e1, int), np.array(e2, int)

    def residual(self, x: np.ndarray) -> np.ndarray:
        rows, sig, e1, e2 = self._arrays()
        out = np.zeros(len(self.equations))
        np.add.at(out, rows, sig * x[e1] * x[e2])
        return out

    def to_dict(self) -> dict:
        return {
            "edges": [list(e) for e in self.edges],
            "equations": [
                {"pair": list(eq.pair), "terms": [list(t) for t in eq.terms]} for eq in self.equations
            ],
        }


def build_gamma_system(g: Graph, r: Mapping[RVar, int]) -> GammaSystem:
    """One equation per distance-2 pair; sigma is read off r with the smallest path as +1."""
    edges = tuple(g.edges)
    eidx = {e: i for i, e in enumerate(edges)}

    def edge(u, v):
        return eidx[(min(u, v), max(u, v))]

    eqs = []
    for p in g.distance2_pairs():
        key = (p.a, p.b)
        if len(p.common) == 1:
            sig = {p.common[0]: 1}
        else:
            try:
                sig = sigma_from_r(p.common, key, r)
            except KeyError as exc:
                raise OrientationError(f"r assignment is missing a value for pair {key}") from exc
        terms = tuple((sig[c], edge(p.a, c), edge(p.b, c)) for c in p.common)
        eqs.append(GammaEquation(key, terms))
    return GammaSystem(edges, tuple(eqs))


@dataclass(frozen=True)
class GammaConfig:
    restarts: int = 1000
    tol_resid: float = 1e-10
    eps_trivial: float = 1e-6
    seed: int = 0
    max_iter: int = 200
    init_scale: float = 2.0
    max_step: float = 1.0
    fallback: bool = True
    stop_on_nontrivial: bool = True


@dataclass
class GammaSolution:
    status: GammaStatus
    x: dict[tuple[int, int], float] | None
    residual: float
    min_x: float
    restarts_used: int
    converged: int
    trivial: int
    seed: int
    best_restart: int | None = None
    fallback_used: int = 0

    def to_dict(self) -> dict:
        return {
            "status": self.status.value,
            "x": None if self.x is None else [[a, b, v] for (a, b), v in sorted(self.x.items())],
            "residual": self.residual,
            "min_x": self.min_x,
            "restarts_used": self.restarts_used,
            "converged": self.converged,
            "trivial": self.trivial,
            "seed": self.seed,
            "best_restart": self.best_restart,
            "fallback_used": self.fallback_used,
        }


class _Problem:
    """Residual and Jacobian of the system in log coordinates.

    With ``relative=True`` each equation is divided by the Euclidean norm
    of its terms. That map is scale-free and does not reward shrinking
    whole terms toward zero, which the plain residual does.
    """

    def __init__(self, system: GammaSystem, relative: bool = False):
        self.m = len(system.equations)
        self.n = system.num_vars
        self.rows, self.sig, self.e1, self.e2 = system._arrays()
        self.relative = relative

    def _terms(self, y):
        return self.sig * np.exp(y[self.e1] + y[self.e2])

    def residual(self, y: np.ndarray) -> np.ndarray:
        t = self._terms(y)
        out = np.zeros(self.m)
        np.add.at(out, self.rows, t)
        if self.relative:
            sq = np.zeros(self.m)
            np.add.at(sq, self.rows, t * t)
            out /= np.sqrt(sq)
        return out

    def jacobian(self, y: np.ndarray) -> np.ndarray:
        t = self._terms(y)
        jac = np.zeros((self.m, self.n))
        np.add.at(jac, (self.rows, self.e1), t)
        np.add.at(jac, (self.rows, self.e2), t)
        if not self.relative:
            return jac
        f = np.zeros(self.m)
        np.add.at(f, self.rows, t)
        sq = np.zeros(self.m)
        np.add.at(sq, self.rows, t * t)
        norm = np.sqrt(sq)
        dsq = np.zeros((self.m, self.n))  # d(norm)/dy * norm
        np.add.at(dsq, (self.rows, self.e1), t * t)
        np.add.at(dsq, (self.rows, self.e2), t * t)
        return jac / norm[:, None] - (f / norm**3)[:, None] * dsq

    def normalized(self, y: np.ndarray) -> tuple[np.ndarray, float]:
        """Shift so max y = 0 and return the max absolute plain residual there."""
        if not np.all(np.isfinite(y)):
            return y, float("inf")
        y = y - y.max()
        t = self._terms(y)
        out = np.zeros(self.m)
        np.add.at(out, self.rows, t)
        return y, float(np.max(np.abs(out))) if self.m else 0.0

    def merit(self, y: np.ndarray) -> float:
        if not self.relative:
            return self.normalized(y)[1]
        return float(np.max(np.abs(self.residual(y)))) if self.m else 0.0


def residual_jacobian(system: GammaSystem, y: np.ndarray, relative: bool = False) -> np.ndarray:
    """Analytic Jacobian of the residual map with respect to ``y = log x``."""
    return _Problem(system, relative).jacobian(np.asarray(y, float))


def residual_log(system: GammaSystem, y: np.ndarray, relative: bool = False) -> np.ndarray:
    return _Problem(system, relative).residual(np.asarray(y, float))


def _levenberg_marquardt(prob: _Problem, y: np.ndarray, cfg: GammaConfig, tol: float) -> np.ndarray:
    y, _ = prob.normalized(y)
    res = prob.merit(y)
    lam = 1e-3
    for _ in range(cfg.max_iter):
        if res <= tol:
            break
        # the largest coordinate is held at 0 so steps cannot just rescale x
        free = np.arange(prob.n) != int(np.argmax(y))
        f = prob.residual(y)
        jac = prob.jacobian(y)[:, free]
        jtj = jac.T @ jac
        grad = jac.T @ f
        diag = np.diag(jtj)
        top = diag.max() if diag.size else 0.0
        if not top > 0:
            break
        # scale-relative damping keeps steps alive as the residual shrinks
        damp = np.diag(np.maximum(diag, 1e-12 * top))
        improved = False
        for _ in range(30):
            try:
                step = np.linalg.solve(jtj + lam * damp, -grad)
            except np.linalg.LinAlgError:
                lam *= 4
                continue
            big = np.max(np.abs(step))
            if big > cfg.max_step:
                step *= cfg.max_step / big
            trial = y.copy()
            trial[free] += step
            y_new, _ = prob.normalized(trial)
            res_new = prob.merit(y_new)
            if np.isfinite(res_new) and res_new < res:
                y, res = y_new, res_new
                lam = max(lam / 3, 1e-12)
                improved = True
                break
            lam *= 4
        if not improved:
            break
    return y


def _scipy_polish(prob: _Problem, y: np.ndarray, cfg: GammaConfig) -> tuple[np.ndarray, float]:
    # pin the largest coordinate so the homogeneous scaling cannot drift to zero
    y0, _ = prob.normalized(y)
    pin = int(np.argmax(y0))
    free = [i for i in range(prob.n) if i != pin]

    def full(z):
        out = np.zeros(prob.n)
        out[free] = z
        return out

    def fun(z):
        return prob.residual(full(z))

    def jac(z):
        return prob.jacobian(full(z))[:, free]

    try:
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            sol = least_squares(
                fun, y0[free], jac=jac, method="trf", xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=500
            )
    except (ValueError, np.linalg.LinAlgError):  # pragma: no cover - defensive
        return y0, prob.normalized(y0)[1]
    return prob.normalized(full(sol.x))


def solve_gamma(system: GammaSystem, cfg: GammaConfig | None = None, *, scale: float = 1.0) -> GammaSolution:
    """Multi-start search. ``scale`` multiplies every starting point (a homogeneity check)."""
    cfg = cfg or GammaConfig()
    prob = _Problem(system)
    rel = _Problem(system, relative=True)
    rng = np.random.default_rng(cfg.seed)
    if prob.n == 0 or prob.m == 0:
        x = {e: 1.0 for e in system.edges}
        return GammaSolution(GammaStatus.NONTRIVIAL, x, 0.0, 1.0, 0, 0, 0, cfg.seed, None)

    best = None  # (rank, residual, restart, y)
    converged = trivial = fallback_used = 0
    used = 0
    for k in range(cfg.restarts):
        used = k + 1
        y0 = rng.uniform(-cfg.init_scale, cfg.init_scale, prob.n) + np.log(scale)
        # the scale-free phase steers away from vanishing terms; the plain
        # phase then finishes, and reaches trivial points when nothing else exists
        y = _levenberg_marquardt(rel, y0, cfg, 1e-3 * cfg.tol_resid)
        y, res = prob.normalized(y)
        if res > cfg.tol_resid:
            y = _levenberg_marquardt(prob, y, cfg, cfg.tol_resid)
            y, res = prob.normalized(y)
        if res > cfg.tol_resid and cfg.fallback:
            fallback_used += 1
            y2, res2 = _scipy_polish(prob, y, cfg)
            if res2 < res:
                y, res = y2, res2
        xmin = float(np.exp(y.min()))
        if res <= cfg.tol_resid:
            converged += 1
            if xmin >= cfg.eps_trivial:
                rank = 0
            else:
                trivial += 1
                rank = 1
        else:
            rank = 2
        cand = (rank, res, k, y)
        if best is None or cand[:3] < best[:3]:
            best = cand
        if rank == 0 and cfg.stop_on_nontrivial:
            break

    rank, res, k, y = best
    status = (GammaStatus.NONTRIVIAL, GammaStatus.TRIVIAL_ONLY, GammaStatus.NONE_FOUND)[rank]
    x = {e: float(v) for e, v in zip(system.edges, np.exp(y))}
    return GammaSolution(
        status=status,
        x=x,
        residual=float(res),
        min_x=float(np.exp(y.min())),
        restarts_used=used,
        converged=converged,
        trivial=trivial,
        seed=cfg.seed,
        best_restart=k,
        fallback_used=fallback_used,
    )


@dataclass
class GammaCheck:
    max_residual: float
    values: list[tuple[tuple[int, int], float]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"max_residual": self.max_residual, "values": [[list(p), v] for p, v in self.values]}


def verify_gamma_assignment(g: Graph, r: Mapping[RVar, int], x: Mapping[tuple[int, int], float]) -> GammaCheck:
    """Evaluate every equation at explicit edge magnitudes."""
    system = build_gamma_system(g, r)
    vec = np.zeros(system.num_vars)
    for i, e in enumerate(system.edges):
        val = x.get(e, x.get((e[1], e[0])))
        if val is None:
            raise ValueError(f"no magnitude given for edge {e}")
        if not val > 0:
            raise ValueError(f"magnitude on edge {e} must be positive")
        vec[i] = val
    res = system.residual(vec)
    values = [(eq.pair, float(v)) for eq, v in zip(system.equations, res)]
    return GammaCheck(float(np.max(np.abs(res))) if len(res) else 0.0, values)
