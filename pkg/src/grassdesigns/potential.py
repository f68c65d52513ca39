"""Fusion frame potential, worst-case cubature error and design certification."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .geometry import Projector
from .zonal import SignedMeasure, lower_bound, mean_inner_power, t_matrix

DEFAULT_TOL = 1e-8
DISTINCT_TOL = 1e-6


class EmptyConfigurationError(ValueError):
    pass


class Configuration:
    """Weighted finite set of projectors in a common ambient dimension."""

    def __init__(self, points: Sequence[Projector], weights: Iterable[float], meta: dict | None = None):
        points = list(points)
        weights = np.asarray(list(weights), dtype=float)
        if not points:
            raise EmptyConfigurationError("configuration needs at least one point")
        if len(points) != weights.size:
            raise ValueError(f"{len(points)} points but {weights.size} weights")
        d = points[0].d
        if any(P.d != d for P in points):
            raise ValueError("all points must share the ambient dimension")
        self.d = d
        self.points = points
        self.weights = weights
        self.meta = dict(meta or {})

    def __len__(self) -> int:
        return len(self.points)

    @property
    def ranks(self) -> np.ndarray:
        return np.array([P.k for P in self.points])

    def rank_set(self) -> tuple[int, ...]:
        return tuple(sorted(set(int(k) for k in self.ranks)))

    def induced_masses(self) -> dict[int, float]:
        out: dict[int, float] = {}
        for P, w in zip(self.points, self.weights):
            out[P.k] = out.get(P.k, 0.0) + float(w)
        return dict(sorted(out.items()))

    def rank_counts(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for P in self.points:
            out[P.k] = out.get(P.k, 0) + 1
        return dict(sorted(out.items()))

    def induced_measure(self) -> SignedMeasure:
        return SignedMeasure(self.d, self.induced_masses())

    def matrices(self) -> np.ndarray:
        return np.stack([P.mat for P in self.points])

    def gram(self) -> np.ndarray:
        """Matrix of trace inner products Tr(P_i P_j)."""
        M = self.matrices().reshape(len(self), -1)
        return M @ M.T

    def equal_weights_per_rank(self, rtol: float = 1e-9, atol: float = 1e-12) -> bool:
        ranks = self.ranks
        for k in set(ranks.tolist()):
            w = self.weights[ranks == k]
            if not np.allclose(w, w[0], rtol=rtol, atol=atol):
                return False
        return True

    def subset(self, mask) -> "Configuration":
        idx = np.flatnonzero(mask)
        if idx.size == 0:
            raise EmptyConfigurationError("selection is empty")
        return Configuration([self.points[i] for i in idx], self.weights[idx], self.meta)

    def conjugated(self, O: np.ndarray) -> "Configuration":
        from .geometry import conjugate_by

        return Configuration([conjugate_by(P, O) for P in self.points], self.weights, self.meta)

    def __repr__(self) -> str:
        return f"Configuration(d={self.d}, counts={self.rank_counts()})"


def ffp(config: Configuration, t: int) -> float:
    """t-fusion frame potential sum_{i,j} w_i w_j <P_i, P_j>^t (diagonal included)."""
    if t < 1:
        raise ValueError("t must be >= 1")
    w = config.weights
    terms = np.outer(w, w) * config.gram() ** t
    return math.fsum(terms.ravel())


def _exact_masses(masses: dict[int, float], max_den: int = 10**6) -> dict[int, Fraction] | None:
    out = {}
    for k, m in masses.items():
        f = Fraction(m).limit_denominator(max_den)
        if abs(float(f) - m) > 1e-12 * max(1.0, abs(m)):
            return None
        out[k] = f
    return out


def worst_case_error_sq(config: Configuration, measure: SignedMeasure, t: int, tol: float = DEFAULT_TOL) -> float:
    """Squared worst-case integration error in Hom_t with kernel <P, Q>^t."""
    if t < 1:
        raise ValueError("t must be >= 1")
    if measure.d != config.d:
        raise ValueError("measure and configuration live in different dimensions")
    ranks = sorted(set(config.rank_set()) | set(measure.ranks))
    cross = math.fsum(
        float(w) * float(m) * float(mean_inner_power(config.d, int(P.k), l, t))
        for P, w in zip(config.points, config.weights)
        for l, m in measure.masses.items()
    )
    bound = float(lower_bound(measure, ranks, t)) if measure.masses else 0.0
    val = ffp(config, t) - 2.0 * cross + bound
    if -tol <= val < 0:
        return 0.0
    return val


@dataclass
class CertificationReport:
    t: int
    ffp: float
    bound: float
    gap: float
    masses: dict[int, float]
    equal_weights_per_rank: bool
    verdict: str
    tol: float
    bound_exact: str | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def is_cubature(self) -> bool:
        return self.verdict in ("cubature", "design")

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "ffp": self.ffp,
            "bound": self.bound,
            "bound_exact": self.bound_exact,
            "gap": self.gap,
            "masses": {str(k): v for k, v in self.masses.items()},
            "equal_weights_per_rank": self.equal_weights_per_rank,
            "verdict": self.verdict,
            "tol": self.tol,
            "notes": list(self.notes),
        }


def certify(config: Configuration, t: int, tol: float = DEFAULT_TOL) -> CertificationReport:
    """Compare the potential with its lower bound for the induced measure.

    The gap is zero exactly for cubatures of strength t; a cubature whose
    weights are constant on each rank class is a design.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    masses = config.induced_masses()
    value = ffp(config, t)
    bound = float(lower_bound(SignedMeasure(config.d, masses), None, t))
    exact = _exact_masses(masses)
    bound_exact = None
    if exact is not None:
        bound_exact = str(lower_bound(SignedMeasure(config.d, exact), None, t))
    gap = value - bound
    equal = config.equal_weights_per_rank()
    if abs(gap) <= tol:
        verdict = "design" if equal else "cubature"
    else:
        verdict = "neither"
    notes = []
    if gap < -tol:
        notes.append("potential below lower bound: numerical trouble or invalid points")
    return CertificationReport(t, value, bound, gap, masses, equal, verdict, tol, bound_exact, notes)


def equivalent_measure_check(config: Configuration, t: int, c: SignedMeasure, tol: float = DEFAULT_TOL) -> bool:
    """Whether a cubature for its induced measure is also one for ``c``.

    Holds iff c - m lies in the kernel of T_{K,d}(t).
    """
    m = config.induced_masses()
    total_w = float(np.sum(config.weights))
    total_c = float(sum(float(x) for x in c.masses.values()))
    if abs(total_w - total_c) > tol * max(1.0, abs(total_w)):
        raise ValueError(f"mass mismatch: weights sum to {total_w}, measure has {total_c}")
    ranks = sorted(set(m) | set(c.ranks))
    T = t_matrix(config.d, ranks, t).to_numpy()
    diff = np.array([float(c.masses.get(k, 0)) - m.get(k, 0.0) for k in ranks])
    return bool(np.linalg.norm(T @ diff) <= tol * np.linalg.norm(T, 2))


def extract_marginal(config: Configuration, k: int) -> Configuration:
    """Points of rank k with their weights."""
    mask = config.ranks == k
    if not mask.any():
        raise EmptyConfigurationError(f"no points of rank {k}")
    return config.subset(mask)


def marginal_strength(t: int, n_ranks: int) -> int:
    return t - n_ranks + 1


def distinct_points(config: Configuration, tol: float = DISTINCT_TOL) -> list[int]:
    """Indices of a maximal set of pairwise distinct points (Frobenius distance > tol)."""
    keep: list[int] = []
    for i, P in enumerate(config.points):
        if all(P.k != config.points[j].k or np.linalg.norm(P.mat - config.points[j].mat) > tol for j in keep):
            keep.append(i)
    return keep


def merge_coincident(config: Configuration, tol: float = DISTINCT_TOL, drop_zero: bool = True) -> Configuration:
    """Merge coincident points by summing their weights."""
    pts: list[Projector] = []
    ws: list[float] = []
    for P, w in zip(config.points, config.weights):
        for i, Q in enumerate(pts):
            if Q.k == P.k and np.linalg.norm(Q.mat - P.mat) <= tol:
                ws[i] += float(w)
                break
        else:
            pts.append(P)
            ws.append(float(w))
    if drop_zero:
        keep = [i for i, w in enumerate(ws) if w != 0.0]
        pts, ws = [pts[i] for i in keep], [ws[i] for i in keep]
    return Configuration(pts, ws, config.meta)
