"""Orthogonal projectors as points of unions of Grassmannians."""

from __future__ import annotations

import numpy as np
import scipy.linalg

SYM_TOL = 0.0
IDEMPOTENT_TOL = 1e-10  # scaled by d
TRACE_TOL = 1e-8


class DegenerateFrameError(ValueError):
    pass


class Projector:
    """Symmetric idempotent d x d matrix of integer rank k.

    Use :func:`projector_from_frame` or :meth:`Projector.from_matrix` to build
    validated instances; the bare constructor stores the matrix as given.
    """

    __slots__ = ("d", "k", "mat")

    def __init__(self, mat, k: int | None = None):
        mat = np.asarray(mat, dtype=float)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError(f"projector matrix must be square, got shape {mat.shape}")
        mat = mat.copy()
        mat.setflags(write=False)
        self.mat = mat
        self.d = mat.shape[0]
        self.k = int(round(np.trace(mat))) if k is None else int(k)

    @classmethod
    def from_matrix(cls, mat, k: int | None = None, tol: float = 1e-8) -> "Projector":
        raw = np.asarray(mat, dtype=float)
        if raw.ndim != 2 or raw.shape[0] != raw.shape[1]:
            raise ValueError(f"projector matrix must be square, got shape {raw.shape}")
        asym = np.linalg.norm(raw - raw.T)
        if asym > tol:
            raise ValueError(f"matrix is not symmetric (||M - M^T||_F = {asym:.3g})")
        P = cls(0.5 * (raw + raw.T), k)
        problems = validate(P, tol)
        if problems:
            raise ValueError("; ".join(problems))
        return P

    def frame(self) -> np.ndarray:
        """Orthonormal d x k basis of the range (pivoted QR, no eigensolver)."""
        Q, _, _ = scipy.linalg.qr(self.mat, pivoting=True)
        return Q[:, : self.k].copy()

    def __repr__(self) -> str:
        return f"Projector(d={self.d}, k={self.k})"


def projector_from_frame(d: int, columns) -> Projector:
    """Projector onto the span of ``columns`` (a d x k array or list of d-vectors)."""
    A = np.asarray(columns, dtype=float)
    if A.ndim == 1:
        A = A[:, None]
    elif A.shape[0] != d and A.shape[1] == d:
        A = A.T
    if A.shape[0] != d:
        raise ValueError(f"frame vectors must have length {d}")
    k = A.shape[1]
    if not 1 <= k <= d - 1:
        raise ValueError(f"frame must have between 1 and {d - 1} columns, got {k}")
    Q, R = np.linalg.qr(A)
    diag = np.abs(np.diag(R))
    if diag.min() < 1e-10 * diag.max():
        raise DegenerateFrameError("frame columns are linearly dependent")
    P = Q @ Q.T
    return Projector(0.5 * (P + P.T), k)


def orthonormal_frame(V: np.ndarray) -> np.ndarray:
    """QR retraction onto the Stiefel manifold with a positive R diagonal."""
    Q, R = np.linalg.qr(V)
    s = np.sign(np.diag(R))
    s[s == 0] = 1.0
    return Q * s


def coordinate_projector(d: int, k: int) -> Projector:
    return Projector(np.diag([1.0] * k + [0.0] * (d - k)), k)


def complement(P: Projector) -> Projector:
    M = np.eye(P.d) - P.mat
    return Projector(0.5 * (M + M.T), P.d - P.k)


def inner(P: Projector, Q: Projector) -> float:
    """Trace inner product Tr(PQ)."""
    if P.d != Q.d:
        raise ValueError(f"dimension mismatch: {P.d} vs {Q.d}")
    return float(np.sum(P.mat * Q.mat))


def conjugate_by(P: Projector, O: np.ndarray) -> Projector:
    M = O @ P.mat @ O.T
    return Projector(0.5 * (M + M.T), P.k)


def validate(P: Projector, tol: float = 1e-8) -> list[str]:
    """List of violated projector invariants at tolerance ``tol`` (empty if valid)."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    M = P.mat
    out = []
    asym = np.linalg.norm(M - M.T)
    if asym > SYM_TOL:
        out.append(f"symmetry: ||M - M^T||_F = {asym:.3g}")
    idem = np.linalg.norm(M @ M - M)
    if idem > tol * P.d:
        out.append(f"idempotency: ||M^2 - M||_F = {idem:.3g} > {tol * P.d:.3g}")
    tr = np.trace(M)
    if abs(tr - P.k) > max(tol, TRACE_TOL):
        out.append(f"trace: Tr(M) = {tr:.12g} differs from rank {P.k}")
    if not 0 <= P.k <= P.d:
        out.append(f"rank {P.k} outside 0..{P.d}")
    return out


def random_orthogonal(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed orthogonal matrix (QR of a Gaussian, sign-corrected)."""
    return orthonormal_frame(rng.standard_normal((d, d)))


def random_projector(d: int, k: int, rng: np.random.Generator) -> Projector:
    return projector_from_frame(d, rng.standard_normal((d, k)))


def random_symmetric(d: int, rng: np.random.Generator) -> np.ndarray:
    A = rng.standard_normal((d, d))
    return 0.5 * (A + A.T)
