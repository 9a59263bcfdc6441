"""Dense symmetric matrix algebra and symplectic structure.

Conventions used throughout the package:

* phase-space ordering is ``(Q_1, ..., Q_N, P_1, ..., P_N)``;
* the symplectic form is ``sigma = [[0, 1], [-1, 0]]`` in ``N x N`` blocks;
* covariance matrices are normalised so that the vacuum is the identity,
  i.e. a physical CM satisfies ``Gamma >= i sigma`` and every symplectic
  eigenvalue is at least 1.

Symmetric matrices are plain ``numpy`` arrays; :func:`as_symmetric`
is the gatekeeper that rejects non-finite or asymmetric input and returns
an exactly mirrored copy.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import (
    ConvergenceError,
    InvalidCovarianceMatrix,
    NumericalInstabilityError,
    ParameterError,
    SingularMatrixError,
)

EPS = np.finfo(float).eps

#: Off-diagonal Frobenius threshold (relative) at which Jacobi stops.
JACOBI_TOL = 1e-12
#: Window (relative to the spectral radius) in which negative eigenvalues
#: are treated as roundoff and clamped to zero before a square root.
CLAMP_TOL = 1e-10
#: Symplectic eigenvalues below ``1 - CM_TOL`` violate ``Gamma >= i sigma``.
CM_TOL = 1e-8


def as_symmetric(M, atol=1e-12) -> np.ndarray:
    """Validate ``M`` as a finite real symmetric matrix.

    Returns the mirrored copy ``(M + M.T) / 2`` so that symmetry holds
    exactly afterwards.
    """
    M = np.array(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ParameterError(f"expected a square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ParameterError("matrix has non-finite entries")
    scale = 1.0 + np.abs(M).max(initial=0.0)
    if np.abs(M - M.T).max(initial=0.0) > atol * scale:
        raise ParameterError("matrix is not symmetric")
    return (M + M.T) / 2


@lru_cache(maxsize=64)
def _round_robin(n: int):
    """Pair schedule for parallel Jacobi: ``n - 1`` rounds of disjoint pairs.

    Odd ``n`` is padded with a dummy index that is dropped from each round.
    """
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        ps, qs = [], []
        for i in range(m // 2):
            a, b = players[i], players[m - 1 - i]
            if a < n and b < n:
                ps.append(min(a, b))
                qs.append(max(a, b))
        rounds.append((np.array(ps, dtype=int), np.array(qs, dtype=int)))
        players = [players[0], players[-1]] + players[1:-1]
    return tuple(rounds)


def sym_eig(M, max_sweeps: int = 60):
    """Eigen-decomposition of a real symmetric matrix by cyclic Jacobi sweeps.

    Each sweep visits every index pair once, in round-robin order, so the
    rotations of one round act on disjoint pairs and are applied together.

    Parameters
    ----------
    M : array_like, shape (n, n)
        Real symmetric matrix.
    max_sweeps : int
        Iteration cap.

    Returns
    -------
    eigenvalues : ndarray, shape (n,)
        Sorted in descending order.
    basis : ndarray, shape (n, n)
        Orthogonal matrix whose columns are the matching eigenvectors, so
        that ``M = basis @ diag(eigenvalues) @ basis.T``.

    Raises
    ------
    ConvergenceError
        If the off-diagonal norm is still above tolerance after
        ``max_sweeps`` sweeps. The residual is attached.
    """
    A = as_symmetric(M)
    n = A.shape[0]
    V = np.eye(n)
    norm = np.linalg.norm(A)
    if n == 1 or norm == 0.0:
        return np.diag(A).copy(), V

    def off_norm(B):
        return np.linalg.norm(B - np.diag(np.diag(B)))

    target = JACOBI_TOL * norm
    residual = off_norm(A)
    for _ in range(max_sweeps):
        if residual < target:
            break
        for P, Q in _round_robin(n):
            apq = A[P, Q]
            # entries this small cannot matter at the tolerance and would overflow theta
            active = np.abs(apq) > EPS * EPS * norm
            if not np.any(active):
                continue
            P, Q, apq = P[active], Q[active], apq[active]
            theta = (A[Q, Q] - A[P, P]) / (2.0 * apq)
            t = np.where(theta >= 0, 1.0, -1.0) / (np.abs(theta) + np.hypot(theta, 1.0))
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            # A <- J^T A J with J_pp = J_qq = c, J_pq = s, J_qp = -s
            rp, rq = A[P, :].copy(), A[Q, :].copy()
            A[P, :] = c[:, None] * rp - s[:, None] * rq
            A[Q, :] = s[:, None] * rp + c[:, None] * rq
            cp, cq = A[:, P].copy(), A[:, Q].copy()
            A[:, P] = cp * c - cq * s
            A[:, Q] = cp * s + cq * c
            A[P, Q] = 0.0
            A[Q, P] = 0.0
            vp, vq = V[:, P].copy(), V[:, Q].copy()
            V[:, P] = vp * c - vq * s
            V[:, Q] = vp * s + vq * c
        residual = off_norm(A)
    else:
        if residual >= target:
            raise ConvergenceError(
                f"Jacobi did not converge in {max_sweeps} sweeps "
                f"(off-diagonal norm {residual:.3e})",
                residual=residual,
            )

    w = np.diag(A).copy()
    order = np.argsort(-w, kind="stable")
    return w[order], V[:, order]


def _snap_tol(w: np.ndarray) -> float:
    # eigenvalues this small are indistinguishable from roundoff of an exact zero
    return 8 * len(w) * EPS * np.abs(w).max(initial=0.0)


def mat_func(M, func: str) -> np.ndarray:
    """Apply ``func`` (``"sqrt"``, ``"inv"`` or ``"inv_sqrt"``) spectrally.

    For ``sqrt``, eigenvalues in ``[-1e-10 ||M||, 0)`` are clamped to zero and
    eigenvalues at roundoff level are snapped to zero, so that exact kernels
    survive the square root. Inverses require the smallest eigenvalue to be
    above ``1e-10 ||M||``.
    """
    w, V = sym_eig(M)
    radius = np.abs(w).max(initial=0.0)
    tol = CLAMP_TOL * radius
    if func == "sqrt":
        if w.size and w[-1] < -tol:
            raise ParameterError(
                f"sqrt of a matrix with negative eigenvalue {w[-1]:.3e}"
            )
        w = np.where(np.abs(w) <= _snap_tol(w), 0.0, w)
        fw = np.sqrt(np.clip(w, 0.0, None))
    elif func in ("inv", "inv_sqrt"):
        if not w.size or w[-1] <= tol:
            lo = w[-1] if w.size else 0.0
            raise SingularMatrixError(f"singular matrix: eigenvalue {lo:.3e}", eigenvalue=lo)
        fw = 1.0 / w if func == "inv" else 1.0 / np.sqrt(w)
    else:
        raise ParameterError(f"unknown matrix function {func!r}")
    R = (V * fw) @ V.T
    return (R + R.T) / 2


def trace_norm(M) -> float:
    """Sum of the absolute eigenvalues of a symmetric matrix."""
    w, _ = sym_eig(M)
    return float(np.sum(np.abs(w)))


def commutator_norm(A, B) -> float:
    """Frobenius norm of ``AB - BA``."""
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    return float(np.linalg.norm(A @ B - B @ A))


@lru_cache(maxsize=32)
def _symplectic_form(n: int) -> np.ndarray:
    sigma = np.zeros((2 * n, 2 * n))
    sigma[:n, n:] = np.eye(n)
    sigma[n:, :n] = -np.eye(n)
    sigma.flags.writeable = False
    return sigma


def symplectic_form(n_modes: int) -> np.ndarray:
    """The ``2N x 2N`` form ``[[0, 1], [-1, 0]]`` (read-only)."""
    if n_modes < 1:
        raise ParameterError("number of modes must be positive")
    return _symplectic_form(int(n_modes))


def symplectic_eigenvalues(M) -> np.ndarray:
    """Symplectic eigenvalues of a positive semidefinite ``2N x 2N`` matrix.

    These are the ``d_i >= 0`` whose squares make up the spectrum of
    ``sigma M sigma^T M`` (each one twice). The similar symmetric matrix
    ``M^{1/2} sigma M sigma^T M^{1/2}`` is diagonalised instead.

    Returns the ``N`` values in descending order.
    """
    M = as_symmetric(M)
    if M.shape[0] % 2:
        raise ParameterError("symplectic eigenvalues need an even dimension")
    n = M.shape[0] // 2
    sigma = symplectic_form(n)
    R = mat_func(M, "sqrt")
    K = R @ sigma @ M @ sigma.T @ R
    w, _ = sym_eig((K + K.T) / 2)
    radius = np.abs(w).max(initial=0.0)
    if w.size and w[-1] < -CLAMP_TOL * max(radius, 1.0):
        raise NumericalInstabilityError(f"negative squared symplectic eigenvalue {w[-1]:.3e}")
    w = np.where(np.abs(w) <= _snap_tol(w), 0.0, w)
    w = np.clip(w, 0.0, None)
    # every value appears twice; average the pairs before taking the root
    d2 = 0.5 * (w[0::2] + w[1::2])
    return np.sqrt(d2)


@dataclass(frozen=True, eq=False)
class CovarianceMatrix:
    """Real symmetric ``2N x 2N`` covariance matrix in ``(Q..., P...)`` order.

    Construction only checks shape, finiteness and symmetry; physicality
    (``Gamma >= i sigma``) is checked by :func:`validate_cm`.
    """

    gamma: np.ndarray

    def __post_init__(self):
        try:
            g = as_symmetric(self.gamma, atol=1e-10)
        except ParameterError as exc:
            raise InvalidCovarianceMatrix(str(exc)) from exc
        if g.shape[0] % 2:
            raise InvalidCovarianceMatrix("covariance matrix must have even dimension")
        g.flags.writeable = False
        object.__setattr__(self, "gamma", g)

    @property
    def n_modes(self) -> int:
        return self.gamma.shape[0] // 2

    @property
    def qq(self) -> np.ndarray:
        n = self.n_modes
        return self.gamma[:n, :n]

    @property
    def pp(self) -> np.ndarray:
        n = self.n_modes
        return self.gamma[n:, n:]

    @property
    def qp(self) -> np.ndarray:
        n = self.n_modes
        return self.gamma[:n, n:]

    @classmethod
    def vacuum(cls, n_modes: int) -> "CovarianceMatrix":
        return cls(np.eye(2 * n_modes))

    @classmethod
    def from_blocks(cls, qq, pp, qp=None) -> "CovarianceMatrix":
        qq = np.asarray(qq, dtype=float)
        pp = np.asarray(pp, dtype=float)
        qp = np.zeros_like(qq) if qp is None else np.asarray(qp, dtype=float)
        return cls(np.block([[qq, qp], [qp.T, pp]]))

    def symplectic_eigenvalues(self) -> np.ndarray:
        return symplectic_eigenvalues(self.gamma)


@dataclass(frozen=True)
class CMReport:
    ok: bool
    min_symplectic_eigenvalue: float
    min_eigenvalue: float
    tolerance: float = CM_TOL

    def __bool__(self):
        return self.ok


def validate_cm(cm: CovarianceMatrix) -> CMReport:
    """Check ``Gamma >= i sigma`` via the smallest symplectic eigenvalue."""
    w, _ = sym_eig(cm.gamma)
    min_eig = float(w[-1])
    if min_eig <= 0.0:
        return CMReport(False, float("nan"), min_eig)
    nu = symplectic_eigenvalues(cm.gamma)
    nu_min = float(nu[-1])
    return CMReport(nu_min >= 1.0 - CM_TOL, nu_min, min_eig)
