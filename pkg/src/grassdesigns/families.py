"""Explicit design families in unions of Grassmannians of lines and planes.

Every constructor returns ``(Configuration, SignedMeasure)``; the measure is
the one the configuration is a design for, with exact masses when the
parameter is given as an int or Fraction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .geometry import Projector, complement
from .potential import Configuration, certify, merge_coincident
from .zonal import SignedMeasure

ORBIT_CAP = 10_000
DEDUP_TOL = 1e-8


class NonFiniteOrbitError(RuntimeError):
    pass


class PreconditionError(ValueError):
    pass


@dataclass
class OrbitSpec:
    generators: list[np.ndarray]
    seed_projectors: list[Projector]
    dedup_tol: float = DEDUP_TOL
    cap: int = ORBIT_CAP

    def __post_init__(self):
        self.generators = [np.asarray(G, dtype=float) for G in self.generators]
        for G in self.generators:
            err = np.linalg.norm(G.T @ G - np.eye(G.shape[0]))
            if err > 1e-12:
                raise ValueError(f"generator is not orthogonal (||G^T G - I||_F = {err:.3g})")


def _find(items: list[np.ndarray], M: np.ndarray, tol: float) -> int:
    for i, X in enumerate(items):
        if np.linalg.norm(X - M) <= tol:
            return i
    return -1


def group_closure(generators: Sequence[np.ndarray], tol: float = DEDUP_TOL, cap: int = ORBIT_CAP) -> list[np.ndarray]:
    """Elements of the matrix group generated by ``generators`` (breadth first)."""
    gens = [np.asarray(G, dtype=float) for G in generators]
    d = gens[0].shape[0]
    elems = [np.eye(d)]
    frontier = [np.eye(d)]
    while frontier:
        nxt = []
        for X in frontier:
            for G in gens:
                Y = G @ X
                if _find(elems, Y, tol) < 0:
                    elems.append(Y)
                    nxt.append(Y)
                    if len(elems) > cap:
                        raise NonFiniteOrbitError(f"group closure exceeded {cap} elements")
        frontier = nxt
    return elems


def orbit(spec: OrbitSpec) -> list[Projector]:
    """Closure of the seed projectors under conjugation by the generators.

    Breadth first with generators applied in the given order, so the output
    order is deterministic; duplicates within ``dedup_tol`` (Frobenius) are
    dropped.
    """
    out: list[Projector] = []
    mats: list[np.ndarray] = []
    frontier: list[Projector] = []
    for P in spec.seed_projectors:
        if _find(mats, P.mat, spec.dedup_tol) < 0:
            out.append(P)
            mats.append(P.mat)
            frontier.append(P)
    while frontier:
        nxt = []
        for P in frontier:
            for G in spec.generators:
                M = G @ P.mat @ G.T
                M = 0.5 * (M + M.T)
                if _find(mats, M, spec.dedup_tol) < 0:
                    Q = Projector(M, P.k)
                    out.append(Q)
                    mats.append(M)
                    nxt.append(Q)
                    if len(out) > spec.cap:
                        raise NonFiniteOrbitError(f"orbit exceeded {spec.cap} elements")
        frontier = nxt
    return out


def _line(v) -> Projector:
    v = np.asarray(v, dtype=float)
    M = np.outer(v, v) / float(v @ v)
    return Projector(0.5 * (M + M.T), 1)


def _in_range(x, lo, hi, name: str) -> None:
    # float endpoints from linspace may overshoot by an ulp
    slack = 0 if isinstance(x, (int, Fraction)) else 1e-12
    if not lo - slack <= x <= hi + slack:
        raise ValueError(f"{name}={x} outside [{lo}, {hi}]")


def _exact(x):
    return x if isinstance(x, (int, Fraction)) else float(x)


def family_lines_hyperplane(d: int, m) -> tuple[Configuration, SignedMeasure]:
    """d lines and the hyperplane orthogonal to (1,...,1): a 1-design.

    Lines carry weight 1/d (mass 1), the hyperplane weight ``m``; valid for
    m in [-1/(d-1), 1].
    """
    if d < 2:
        raise ValueError("d must be >= 2")
    _in_range(m, Fraction(-1, d - 1), 1, "m")
    mf = float(m)
    e = np.ones(d)
    a = np.sqrt(1.0 - mf)
    b = (np.sqrt(1.0 + (d - 1) * mf) - a) / d
    points = [_line(a * np.eye(d)[i] + b * e) for i in range(d)]
    H = np.eye(d) - np.outer(e, e) / d
    points.append(Projector(H, d - 1))
    weights = [1.0 / d] * d + [mf]
    meta = {"family": "lines-hyperplane", "d": d, "m": str(m),
            "weight_convention": "lines weighted 1/d (line mass 1)"}
    masses = {1: 1, d - 1: _exact(m)} if d > 2 else {1: 1 + _exact(m)}
    return Configuration(points, weights, meta), SignedMeasure(d, masses)


def family_r4_1design(m1) -> tuple[Configuration, SignedMeasure]:
    """Two coordinate lines and two block-diagonal planes in R^4."""
    _in_range(m1, -2, 2, "m1")
    mf = float(m1)
    e = np.eye(4)
    points = [_line(e[0]), _line(e[2])]
    for sign in (1.0, -1.0):
        p = 0.5 * np.array([np.sqrt(2.0 - mf), sign * np.sqrt(2.0 + mf)])
        B = np.outer(p, p)
        M = np.zeros((4, 4))
        M[:2, :2] = B
        M[2:, 2:] = B
        points.append(Projector(M, 2))
    weights = [mf / 2, mf / 2, 0.5, 0.5]
    meta = {"family": "r4-1design", "m1": str(m1)}
    return Configuration(points, weights, meta), SignedMeasure(4, {1: _exact(m1), 2: 1})


def _cyclic_shift(d: int) -> np.ndarray:
    R = np.zeros((d, d))
    for i in range(d):
        R[(i + 1) % d, i] = 1.0
    return R


def _reflection(d: int) -> np.ndarray:
    R = np.eye(d)
    R[0, 0] = -1.0
    return R


def tetrahedral_generators() -> list[np.ndarray]:
    return [_cyclic_shift(3), _reflection(3)]


def family_r3_2design(m2) -> tuple[Configuration, SignedMeasure]:
    """6 lines and 4 planes in R^3 forming a 2-design for m2 in [-3/8, 3/2]."""
    _in_range(m2, Fraction(-3, 8), Fraction(3, 2), "m2")
    mf = float(m2)
    a = np.sqrt(max(0.0, (3.0 + 8.0 * mf) / 15.0))
    p1 = np.array([np.sqrt(max(0.0, 1.0 - a)), np.sqrt(1.0 + a), 0.0])
    gens = tetrahedral_generators()
    lines = orbit(OrbitSpec(gens, [Projector(0.5 * np.outer(p1, p1), 1)]))
    e = np.ones(3)
    planes = orbit(OrbitSpec(gens, [Projector(np.eye(3) - np.outer(e, e) / 3.0, 2)]))
    points = lines + planes
    weights = [1.0 / len(lines)] * len(lines) + [mf / len(planes)] * len(planes)
    meta = {"family": "r3-2design", "m2": str(m2)}
    return Configuration(points, weights, meta), SignedMeasure(3, {1: 1, 2: _exact(m2)})


def r4_line_generators() -> list[np.ndarray]:
    return [_cyclic_shift(4), _reflection(4)]


def r4_plane_generator() -> np.ndarray:
    return np.array([[0, 0, 1, 0], [0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, -1]], dtype=float)


def _r4_plane_seed(b: float, sign: float) -> np.ndarray:
    s = np.sqrt
    u = s(max(0.0, 1 - b * b))
    v = s(max(0.0, 2 - 3 * b + b * b))
    w = s(4 - b * b)
    z = s(2 + 3 * b + b * b)
    M = np.array([
        [3 - sign * u, v, sign * w, -sign * z],
        [v, 3 + sign * u, z, w],
        [sign * w, z, 3 - sign * u, -sign * v],
        [-sign * z, w, -sign * v, 3 + sign * u],
    ]) / 6.0
    return M


def family_r4_2design(m2) -> tuple[Configuration, SignedMeasure]:
    """8 lines and 8 planes in R^4 forming a 2-design for m2 in [3/4, 3/2]."""
    _in_range(m2, Fraction(3, 4), Fraction(3, 2), "m2")
    mf = float(m2)
    a = np.sqrt(max(0.0, (8.0 * mf - 3.0) / 9.0))
    p1 = np.array([np.sqrt(max(0.0, 1.0 - a)), np.sqrt(1.0 + a), 0.0, 0.0])
    lines = orbit(OrbitSpec(r4_line_generators(), [Projector(0.5 * np.outer(p1, p1), 1)]))
    b = np.sqrt(max(0.0, 2.0 - 3.0 / (2.0 * mf)))
    seeds = [Projector(_r4_plane_seed(b, s), 2) for s in (1.0, -1.0)]
    R3 = r4_plane_generator()
    planes: list[Projector] = []
    for seed in seeds:
        # each seed contributes its own cyclic orbit; coincidences across orbits are kept
        planes.extend(orbit(OrbitSpec([R3], [seed])))
    points = lines + planes
    weights = [1.0 / len(lines)] * len(lines) + [mf / len(planes)] * len(planes)
    meta = {"family": "r4-2design", "m2": str(m2)}
    return Configuration(points, weights, meta), SignedMeasure(4, {1: 1, 2: _exact(m2)})


def r5_generators() -> list[np.ndarray]:
    G1 = np.eye(5)
    G1[3:, 3:] = [[0, 1], [-1, 0]]
    G2 = np.eye(5)
    G2[:2, :2] = [[0, -1], [1, 0]]
    G2[4, 4] = -1.0
    return [G1, G2]


def r5_plane_seed() -> np.ndarray:
    s = np.sqrt
    r3 = s(3.0)
    x = s((9 + 5 * r3) / 6)
    y = s((9 - 5 * r3) / 6)
    lo = (3 - 5 * r3) / 6
    hi = (3 + 5 * r3) / 6
    M = np.array([
        [2, s(1.5), x, lo, s(2 / 3)],
        [s(1.5), 2, y, s(2 / 3), hi],
        [x, y, 2, -x, -y],
        [lo, s(2 / 3), -x, 2, s(1.5)],
        [s(2 / 3), hi, -y, s(1.5), 2],
    ]) / 5.0
    return 0.5 * (M + M.T)


def family_r5_2design() -> tuple[Configuration, SignedMeasure]:
    """5 coordinate lines and 16 planes in R^5: a 2-design for m1 = 1, m2 = 5/3."""
    lines = [_line(np.eye(5)[i]) for i in range(5)]
    planes = orbit(OrbitSpec(r5_generators(), [Projector(r5_plane_seed(), 2)]))
    m2 = Fraction(5, 3)
    points = lines + planes
    weights = [1.0 / 5] * 5 + [float(m2) / len(planes)] * len(planes)
    meta = {"family": "r5-2design"}
    return Configuration(points, weights, meta), SignedMeasure(5, {1: 1, 2: m2})


def double_design(config: Configuration, t: int, tol: float = 1e-8) -> tuple[Configuration, SignedMeasure]:
    """Adjoin complements I - P_j with weights (-1)^t w_j: strength t -> t + 1."""
    report = certify(config, t, tol)
    if not report.is_cubature:
        raise PreconditionError(f"input is not a strength-{t} cubature (gap {report.gap:.3g})")
    sign = -1.0 if t % 2 else 1.0
    points = list(config.points) + [complement(P) for P in config.points]
    weights = list(config.weights) + [sign * w for w in config.weights]
    masses: dict[int, float] = {}
    for k, m in config.induced_masses().items():
        masses[k] = masses.get(k, 0.0) + m
        masses[config.d - k] = masses.get(config.d - k, 0.0) + sign * m
    meta = dict(config.meta)
    meta["doubled_from_strength"] = t
    return Configuration(points, weights, meta), SignedMeasure(config.d, masses)


def icosahedral_lines() -> Configuration:
    """The 6 lines through antipodal icosahedron vertices, weight 1/6 each."""
    conf, _ = family_r3_2design(0)
    return conf.subset(conf.ranks == 1)


@dataclass
class Table1Row:
    t: int
    d: int
    n1: int
    n2: int
    m1: Fraction
    m2: Fraction
    source: str
    build: Callable[[], Configuration] = field(repr=False)


def _table_r4() -> Configuration:
    return merge_coincident(family_r4_1design(2)[0])


def _table_r3() -> Configuration:
    return merge_coincident(family_r3_2design(Fraction(3, 2))[0])


def _table_r4_2() -> Configuration:
    return merge_coincident(family_r4_2design(Fraction(3, 2))[0])


def _table_r5() -> Configuration:
    return merge_coincident(family_r5_2design()[0])


def _table_doubled() -> Configuration:
    return double_design(icosahedral_lines(), 2)[0]


def table1_fixtures() -> list[Table1Row]:
    """Rows (t, d, n1, n2, m1, m2) of the optimal-cardinality table with builders.

    Builders merge coincident points, so n1 and n2 count distinct lines and
    planes.
    """
    F = Fraction
    return [
        Table1Row(1, 4, 2, 1, F(2), F(1), "family_r4_1design(m1=2)", _table_r4),
        Table1Row(2, 3, 3, 4, F(1), F(3, 2), "family_r3_2design(m2=3/2)", _table_r3),
        Table1Row(2, 4, 4, 8, F(1), F(3, 2), "family_r4_2design(m2=3/2)", _table_r4_2),
        Table1Row(2, 5, 5, 16, F(1), F(5, 3), "family_r5_2design()", _table_r5),
        Table1Row(3, 3, 6, 6, F(1), F(1), "double_design(icosahedral lines, t=2)", _table_doubled),
    ]


FAMILIES = {
    "lines-hyperplane": family_lines_hyperplane,
    "r4-1design": family_r4_1design,
    "r3-2design": family_r3_2design,
    "r4-2design": family_r4_2design,
    "r5-2design": family_r5_2design,
}

FAMILY_STRENGTH = {
    "lines-hyperplane": 1,
    "r4-1design": 1,
    "r3-2design": 2,
    "r4-2design": 2,
    "r5-2design": 2,
}
