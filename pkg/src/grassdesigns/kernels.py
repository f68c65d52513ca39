"""Explicit zonal kernels of degree at most 2 and related test surfaces."""

from __future__ import annotations

import math

import numpy as np

from .geometry import Projector, inner
from .partitions import Partition, as_partition
from .potential import Configuration, certify
from .repdim import dim_irrep

KHOM_LABELS = (Partition(()), Partition((2,)), Partition((4,)), Partition((2, 2)))
P_LABELS = (Partition(()), Partition((1,)), Partition((2,)), Partition((1, 1)))


class PreconditionError(ValueError):
    pass


def _sym(X) -> np.ndarray:
    X = np.asarray(X.mat if isinstance(X, Projector) else X, dtype=float)
    if X.ndim != 2 or X.shape[0] != X.shape[1]:
        raise ValueError("expected a square matrix")
    nrm = np.linalg.norm(X)
    if np.linalg.norm(X - X.T) > 1e-12 * max(nrm, 1e-300):
        raise ValueError("matrix is not symmetric")
    return X


def _tr(A) -> float:
    return float(np.trace(A))


def k_hom(label, X, Y) -> float:
    """Reproducing kernel of the H_{2 pi} component of Hom_{|pi|} on symmetric matrices."""
    label = as_partition(label)
    X, Y = _sym(X), _sym(Y)
    d = X.shape[0]
    if Y.shape != X.shape:
        raise ValueError("dimension mismatch")
    if label == KHOM_LABELS[0]:
        return 1.0
    trX, trY = _tr(X), _tr(Y)
    XY = X @ Y
    trXY = _tr(XY)
    if label == KHOM_LABELS[1]:
        if d < 2:
            raise ValueError("K_(2) needs d >= 2")
        return trXY - trX * trY / d
    X2, Y2 = X @ X, Y @ Y
    trX2, trY2 = _tr(X2), _tr(Y2)
    trXYXY = _tr(XY @ XY)
    trXY2 = _tr(X @ Y2)
    trX2Y = _tr(X2 @ Y)
    trX2Y2 = _tr(X2 @ Y2)
    if label == KHOM_LABELS[2]:
        return (
            (trXY**2 + 2 * trXYXY) / 6
            + (trX**2 + 2 * trX2) * (trY**2 + 2 * trY2) / (6 * (d + 2) * (d + 4))
            - (trXY * trX * trY + 2 * trXY2 * trX + 2 * trX2Y * trY + 4 * trX2Y2) / (3 * (d + 4))
        )
    if label == KHOM_LABELS[3]:
        if d < 3:
            raise ValueError("K_(2,2) is only defined for d >= 3")
        return (
            (trXY**2 - trXYXY) / 3
            + (trX**2 - trX2) * (trY**2 - trY2) / (3 * (d - 1) * (d - 2))
            - (trXY * trX * trY - trXY2 * trX - trX2Y * trY + trX2Y2) / (3 * (d - 2) / 2)
        )
    raise ValueError(f"no closed form for label {label}")


def p_pi(pi, P: Projector, Q: Projector) -> float:
    """Zonal kernel p_pi on the union of Grassmannians, |pi| <= 2."""
    pi = as_partition(pi)
    if P.d != Q.d:
        raise ValueError("dimension mismatch")
    if pi == P_LABELS[0]:
        return 1.0
    if pi == P_LABELS[1]:
        return k_hom((2,), P.mat, Q.mat)
    if pi == P_LABELS[2]:
        return 2.0 * k_hom((4,), P.mat, Q.mat)
    if pi == P_LABELS[3]:
        return 2.0 * k_hom((2, 2), P.mat, Q.mat)
    raise ValueError(f"no closed form for p_{pi}")


def v_pi(pi, k: int, d: int) -> float:
    """Positive normalization factor v_pi^k."""
    pi = as_partition(pi)
    l = pi.length()
    if not l <= k <= d - l:
        raise ValueError(f"rank {k} outside [{l}, {d - l}] for {pi}")
    if pi == P_LABELS[0]:
        return 1.0
    if pi == P_LABELS[1]:
        return math.sqrt(2 * k * (d - k) / ((d - 1) * d * (d + 2)))
    if pi == P_LABELS[2]:
        return math.sqrt(
            8 * k * (k + 2) * (d - k) * (d - k + 2) / ((d - 1) * d * (d + 1) * (d + 2) * (d + 4) * (d + 6))
        )
    if pi == P_LABELS[3]:
        return math.sqrt(
            8 * (k - 1) * k * (d - k - 1) * (d - k) / ((d - 3) * (d - 2) * (d - 1) * d * (d + 1) * (d + 2))
        )
    raise ValueError(f"no closed form for v_{pi}")


def intertwining(pi, k: int, l: int, P: Projector, Q: Projector) -> float:
    """Intertwining function p_pi^{k,l}(P, Q) for P of rank k and Q of rank l."""
    if P.k != k or Q.k != l:
        raise ValueError(f"ranks ({P.k}, {Q.k}) do not match ({k}, {l})")
    return p_pi(pi, P, Q) / (v_pi(pi, k, P.d) * v_pi(pi, l, P.d))


def reproducing_kernel_poly(t: int, C: float, P: Projector, Q: Projector) -> float:
    """<P, Q>^t + C, reproducing for Hom_t (C = 0) or Pol_t (C > 0)."""
    if t < 0 or C < 0:
        raise ValueError("need t >= 0 and C >= 0")
    return inner(P, Q) ** t + C


def vanishing_kernel(X, Y) -> float:
    """Degree-3 kernel whose restriction to any Grassmannian is identically zero."""
    X, Y = _sym(X), _sym(Y)
    d = X.shape[0]
    if d < 2:
        raise ValueError("d must be >= 2")
    X2, Y2 = X @ X, Y @ Y
    trX, trY, trX2, trY2 = _tr(X), _tr(Y), _tr(X2), _tr(Y2)
    trXY = _tr(X @ Y)
    trX2Y2 = _tr(X2 @ Y2)
    trX2Y = _tr(X2 @ Y)
    trXY2 = _tr(X @ Y2)
    first = (trX2Y2 * trXY - trX2Y * trXY2) / (d + 2)
    second = (trX2Y2 * trX * trY - trX2Y * trX * trY2 - trXY2 * trX2 * trY + trXY * trX2 * trY2) / (
        (3 * d + 4) * (d + 2)
    )
    return first - second


def convolution_check(pi, k: int, m: int, l: int, cubature: Configuration, P: Projector, Q: Projector,
                      tol: float = 1e-8) -> tuple[float, float]:
    """Integrate p^{k,m}(P, .) p^{m,l}(., Q) over G_{m,d} with a design.

    Returns ``(lhs, rhs)`` where rhs is p^{k,l}(P, Q). The cubature must be
    supported on G_{m,d} and certify at strength 2|pi| (the degree of the
    integrand in the integration variable).
    """
    pi = as_partition(pi)
    if set(cubature.rank_set()) != {m}:
        raise PreconditionError(f"cubature must live on G_{{{m},{cubature.d}}}")
    strength = max(1, 2 * pi.size())
    report = certify(cubature, strength, tol)
    if not report.is_cubature:
        raise PreconditionError(f"cubature does not certify at strength {strength} (gap {report.gap:.3g})")
    lhs = math.fsum(
        w * intertwining(pi, k, m, P, R) * intertwining(pi, m, l, R, Q)
        for R, w in zip(cubature.points, cubature.weights)
    )
    return lhs, intertwining(pi, k, l, P, Q)


def kernel_dimension_check(pi, k: int, P: Projector) -> tuple[float, int]:
    """(p_pi^{k,k}(P, P), dim H_{2 pi}^d); the two agree for a correct normalization."""
    pi = as_partition(pi)
    return intertwining(pi, k, k, P, P), dim_irrep(P.d, pi.scaled(2))
