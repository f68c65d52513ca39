"""Riemannian descent of the fusion frame potential over products of Grassmannians.

Points are parametrized by orthonormal frames V (P = V V^T); the potential is
minimized with weights held fixed. Steps move along the horizontal gradient
and are retracted by QR.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .geometry import Projector, orthonormal_frame, projector_from_frame
from .potential import Configuration, ffp
from .zonal import lower_bound

log = logging.getLogger(__name__)


class NumericalFailure(RuntimeError):
    def __init__(self, message: str, iterate: Configuration | None = None):
        super().__init__(message)
        self.iterate = iterate


@dataclass
class OptimizerSettings:
    max_iter: int = 5000
    grad_tol: float = 1e-9
    initial_step: float = 1.0
    shrink: float = 0.5
    armijo: float = 1e-4
    seed: int = 0
    restarts: int = 1
    method: str = "gd"  # "gd" or "cg" (Polak-Ribiere+)
    hops: int = 20  # perturb-and-redescend attempts when stalled above the bound
    hop_scale: float = 0.5
    gap_tol: float = 1e-9

    def __post_init__(self):
        for name in ("max_iter", "grad_tol", "initial_step", "hop_scale"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if not 0 < self.shrink < 1:
            raise ValueError("shrink must lie in (0, 1)")
        if not 0 < self.armijo < 1:
            raise ValueError("armijo constant must lie in (0, 1)")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        for name in ("hops", "gap_tol"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")
        if self.method not in ("gd", "cg"):
            raise ValueError(f"unknown method {self.method!r}")


@dataclass
class OptimizationResult:
    config: Configuration
    trace: list[float]
    iterations: int
    converged: bool
    grad_norm: float
    seed: int | None = None
    steps: list[float] = field(default_factory=list)


def random_configuration(d: int, counts: Mapping[int, int], weights: Mapping[int, float], seed: int) -> Configuration:
    """Gaussian random frames, n_k of each rank k, weight ``weights[k]`` each."""
    rng = np.random.default_rng(seed)
    points: list[Projector] = []
    ws: list[float] = []
    for k in sorted(counts):
        if not 1 <= k <= d - 1:
            raise ValueError(f"rank {k} outside 1..{d - 1}")
        for _ in range(int(counts[k])):
            points.append(projector_from_frame(d, rng.standard_normal((d, k))))
            ws.append(float(weights[k]))
    return Configuration(points, ws, {"seed": seed})


def _projectors(frames: list[np.ndarray]) -> np.ndarray:
    return np.stack([V @ V.T for V in frames])


def _objective(frames, w, t) -> tuple[float, np.ndarray, np.ndarray]:
    P = _projectors(frames)
    n = len(frames)
    flat = P.reshape(n, -1)
    G = flat @ flat.T
    f = float(w @ (G**t) @ w)
    return f, P, G


def ambient_gradients(P: np.ndarray, G: np.ndarray, w: np.ndarray, t: int) -> np.ndarray:
    """Euclidean gradients 2 t w_i sum_j w_j <P_i,P_j>^{t-1} P_j, one per point."""
    coef = 2.0 * t * w[:, None] * w[None, :] * G ** (t - 1)
    return np.einsum("ij,jab->iab", coef, P)


def riemannian_gradients(frames: list[np.ndarray], w: np.ndarray, t: int) -> tuple[float, list[np.ndarray]]:
    """Potential value and horizontal frame gradients (I - V V^T) 2 G_i V."""
    f, P, G = _objective(frames, w, t)
    A = ambient_gradients(P, G, w, t)
    grads = []
    for V, Ai in zip(frames, A):
        g = 2.0 * Ai @ V
        grads.append(g - V @ (V.T @ g))
    return f, grads


def _inner(a: list[np.ndarray], b: list[np.ndarray]) -> float:
    return float(sum(np.sum(x * y) for x, y in zip(a, b)))


def _retract(frames, direction, step):
    return [orthonormal_frame(V + step * D) for V, D in zip(frames, direction)]


def _horizontal(frames, vecs):
    return [D - V @ (V.T @ D) for V, D in zip(frames, vecs)]


def _to_config(frames, template: Configuration) -> Configuration:
    pts = []
    for V, P0 in zip(frames, template.points):
        M = V @ V.T
        pts.append(Projector(0.5 * (M + M.T), P0.k))
    return Configuration(pts, template.weights, template.meta)


_ABORT_GRAD = 1e-5


def _descend(frames, w, t, s: OptimizerSettings, budget: int, template: Configuration,
             abort_above: float = np.inf, callback=None):
    """Monotone line-search descent from ``frames`` for at most ``budget`` steps.

    Gives up early once the gradient is small while the potential is still
    above ``abort_above`` (the run is settling into a basin no better than
    the incumbent).

    Returns (frames, f, grads, trace, steps, converged).
    """
    f, grad = riemannian_gradients(frames, w, t)
    if not np.isfinite(f):
        raise NumericalFailure("non-finite potential", _to_config(frames, template))
    trace = [f]
    steps: list[float] = []
    step = s.initial_step
    direction = [-g for g in grad]
    gnorm2 = _inner(grad, grad)
    for it in range(budget):
        gmax = max(np.linalg.norm(g) for g in grad)
        if gmax <= s.grad_tol or (gmax <= _ABORT_GRAD and f > abort_above):
            break
        slope = _inner(grad, direction)
        if slope >= 0:  # not a descent direction: restart along -grad
            direction = [-g for g in grad]
            slope = -gnorm2
        alpha = step
        accepted = False
        while alpha > 1e-20:
            trial = _retract(frames, direction, alpha)
            f_new, grad_new = riemannian_gradients(trial, w, t)
            if not np.isfinite(f_new):
                raise NumericalFailure(f"non-finite potential at step {it + 1}", _to_config(trial, template))
            if f_new <= f + s.armijo * alpha * slope:
                accepted = True
                break
            alpha *= s.shrink
        if not accepted or f_new > f:
            break  # no representable decrease left
        moved = _horizontal(trial, [alpha * D for D in direction])
        y = [gn - gp for gn, gp in zip(grad_new, _horizontal(trial, grad))]
        if s.method == "cg":
            transported = _horizontal(trial, direction)
            beta = max(0.0, _inner(grad_new, y) / gnorm2) if gnorm2 > 0 else 0.0
            direction = [-g + beta * D for g, D in zip(grad_new, transported)]
        else:
            direction = [-g for g in grad_new]
        sy = _inner(moved, y)
        step = _inner(moved, moved) / sy if sy > 0 else alpha / s.shrink
        step = float(np.clip(step, 1e-10, 1e10))
        frames, f, grad = trial, f_new, grad_new
        gnorm2 = _inner(grad, grad)
        trace.append(f)
        steps.append(alpha)
        if callback is not None:
            callback(_to_config(frames, template), f)
    converged = max(np.linalg.norm(g) for g in grad) <= s.grad_tol
    return frames, f, grad, trace, steps, converged


def _perturb(frames, rng: np.random.Generator, scale: float):
    out = []
    for V in frames:
        D = rng.standard_normal(V.shape)
        D -= V @ (V.T @ D)
        out.append(orthonormal_frame(V + scale * D / max(np.linalg.norm(D), 1e-300)))
    return out


def minimize_ffp(config: Configuration, t: int, settings: OptimizerSettings | None = None,
                 callback: Callable[[Configuration, float], None] | None = None) -> OptimizationResult:
    """Descend FFP_t from ``config`` with Armijo backtracking.

    The first trial step of each line search is a Barzilai-Borwein estimate.

    The lower bound of the induced measure tells a stalled run whether it sits
    at a cubature. If not, and ``settings.hops`` is positive, the iterate is
    perturbed and descended again; the result replaces the incumbent only if
    its potential is strictly lower, so the recorded trace never increases.
    All descents share the ``max_iter`` budget. ``callback(config, value)``
    sees every accepted iterate, including those of rejected excursions.
    """
    if t < 1:
        raise ValueError("t must be >= 1")
    s = settings or OptimizerSettings()
    w = config.weights.astype(float)
    frames = [P.frame() for P in config.points]
    frames, f, grad, trace, steps, converged = _descend(frames, w, t, s, s.max_iter, config, callback=callback)
    used = len(trace) - 1
    if s.hops > 0 and used < s.max_iter:
        bound = float(lower_bound(config.induced_measure(), t=t))
        rng = np.random.default_rng([s.seed, 0x5EED])
        for _ in range(s.hops):
            if f - bound <= s.gap_tol or used >= s.max_iter:
                break
            start = _perturb(frames, rng, s.hop_scale)
            cand = _descend(start, w, t, s, s.max_iter - used, config, abort_above=f - 1e-12,
                            callback=callback)
            used += len(cand[3]) - 1
            if cand[1] < f:
                frames, f, grad, _, _, converged = cand
                trace.append(f)
                steps.append(float("nan"))
                log.debug("hop accepted: ffp=%.16g gap=%.3g", f, f - bound)
    out = _to_config(frames, config) if used > 0 and len(trace) > 1 else config
    gmax = float(max(np.linalg.norm(g) for g in grad))
    return OptimizationResult(out, trace, used, converged, gmax, steps=steps)


def minimize_with_restarts(d: int, counts: Mapping[int, int], masses: Mapping[int, float], t: int,
                           settings: OptimizerSettings | None = None) -> tuple[OptimizationResult, list[OptimizationResult]]:
    """Run from ``settings.restarts`` random starts with seeds seed, seed+1, ...

    Returns the best result (lowest final potential, earliest restart on
    ties) and the list of all results. Weights are m_k / n_k.
    """
    s = settings or OptimizerSettings()
    weights = {k: float(masses[k]) / counts[k] for k in counts}
    results = []
    for i in range(s.restarts):
        start = random_configuration(d, counts, weights, s.seed + i)
        res = minimize_ffp(start, t, s)
        res.seed = s.seed + i
        log.info("restart %d: ffp=%.16g iters=%d converged=%s", i, res.trace[-1], res.iterations, res.converged)
        results.append(res)
    best = min(range(len(results)), key=lambda i: (results[i].trace[-1], i))
    return results[best], results


def potential(config: Configuration, t: int) -> float:
    return ffp(config, t)
