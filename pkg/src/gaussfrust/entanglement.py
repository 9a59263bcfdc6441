"""Two-mode entanglement of symmetric Gaussian states.

The figure of merit is the EPR uncertainty ``Delta``: the smallest total
variance of a pair of EPR-type quadratures (after optimal rescaling). For
symmetric two-mode states the entanglement of formation is a decreasing
function of ``Delta`` alone, see :func:`eof_from_delta`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidCovarianceMatrix, ParameterError, SingularMatrixError
from .groups import invariance_residual
from .linalg import CovarianceMatrix, mat_func, validate_cm


def eof_from_delta(delta: float) -> float:
    """Entanglement of formation (ebits) of a symmetric two-mode state.

    ``c_pm = (delta**-0.5 pm delta**0.5)**2 / 4`` and
    ``E = c_+ log2 c_+ - c_- log2 c_-``. States with ``delta >= 1`` are
    separable and give 0.
    """
    if not delta > 0:
        raise ParameterError(f"EPR uncertainty must be positive, got {delta!r}")
    if delta >= 1.0:
        return 0.0
    # c_- = (1 - delta)^2 / (4 delta) and c_+ = 1 + c_-, without cancellation near delta = 1
    c_minus = (1.0 - delta) ** 2 / (4.0 * delta)
    c_plus = 1.0 + c_minus
    return (c_plus * math.log1p(c_minus) - c_minus * math.log(c_minus)) / math.log(2.0)


def reduce_two_mode(cm: CovarianceMatrix, k: int, l: int) -> CovarianceMatrix:
    """Reduced CM of modes ``k`` and ``l`` in ``(Q_A, Q_B, P_A, P_B)`` order."""
    n = cm.n_modes
    if k == l or not (0 <= k < n and 0 <= l < n):
        raise ParameterError(f"invalid mode pair ({k}, {l}) for {n} modes")
    idx = [k, l, n + k, n + l]
    return CovarianceMatrix(cm.gamma[np.ix_(idx, idx)])


@dataclass(frozen=True)
class TwoModeStandardForm:
    """Local symplectic invariants ``(n_A, n_B, k_q, k_p)`` of a two-mode CM.

    Canonical representative: ``k_q >= k_p`` and ``k_q + k_p >= 0``; the
    other sign choices are related by local symplectic maps.
    """

    n_a: float
    n_b: float
    k_q: float
    k_p: float

    def to_cm(self) -> CovarianceMatrix:
        qq = [[self.n_a, self.k_q], [self.k_q, self.n_b]]
        pp = [[self.n_a, self.k_p], [self.k_p, self.n_b]]
        return CovarianceMatrix.from_blocks(qq, pp)

    @property
    def symmetric(self) -> bool:
        return abs(self.n_a - self.n_b) <= 1e-8 * max(1.0, self.n_a, self.n_b)


def standard_form(gamma: CovarianceMatrix) -> TwoModeStandardForm:
    """Reduce a two-mode CM to its standard-form invariants.

    Each local block is first mapped to ``n * 1`` by the local symplectic
    ``sqrt(n) A^{-1/2}`` (so ``n_A = sqrt(det A)``); the transformed
    correlation block is then brought to signed-diagonal form by local
    rotations. The results satisfy ``k_q k_p = det C`` and
    ``det gamma = (n_A n_B - k_q^2)(n_A n_B - k_p^2)``, but avoid the
    cancellation of solving those determinant relations directly.
    """
    if gamma.n_modes != 2:
        raise ParameterError("standard form needs a two-mode covariance matrix")
    if not validate_cm(gamma).ok:
        raise InvalidCovarianceMatrix("two-mode CM violates the uncertainty relation")
    g = gamma.gamma
    a_idx, b_idx = [0, 2], [1, 3]
    A = g[np.ix_(a_idx, a_idx)]
    B = g[np.ix_(b_idx, b_idx)]
    C = g[np.ix_(a_idx, b_idx)]
    n_a = math.sqrt(np.linalg.det(A))
    n_b = math.sqrt(np.linalg.det(B))
    S_a = math.sqrt(n_a) * mat_func(A, "inv_sqrt")
    S_b = math.sqrt(n_b) * mat_func(B, "inv_sqrt")
    U, s, Vt = np.linalg.svd(S_a @ C @ S_b.T)
    s = s.copy()
    # restrict to proper rotations; the sign lands on the smaller value
    if np.linalg.det(U) < 0:
        s[1] = -s[1]
    if np.linalg.det(Vt) < 0:
        s[1] = -s[1]
    return TwoModeStandardForm(n_a, n_b, float(s[0]), float(s[1]))


def epr_uncertainty_local(sf: TwoModeStandardForm) -> float:
    """Minimal EPR uncertainty of a symmetric standard form.

    The infimum over the scale ``s`` of ``s a + b / s`` is ``2 sqrt(ab)``,
    which for the standard form gives ``sqrt((n + k_q)(n - k_p))``. Both
    EPR pairings are tried and the smaller value returned.
    """
    if not sf.symmetric:
        raise ParameterError(f"asymmetric reduction: n_A={sf.n_a!r}, n_B={sf.n_b!r}")
    n = 0.5 * (sf.n_a + sf.n_b)
    first = (n + sf.k_q) * (n - sf.k_p)
    second = (n - sf.k_q) * (n + sf.k_p)
    return math.sqrt(max(min(first, second), 0.0))


def epr_uncertainty_global(cm: CovarianceMatrix, hp, check: bool = True) -> float:
    """EPR uncertainty evaluated on the whole state.

    ``Delta = inf_s tr[Gamma (s H_+ (+) H_- / s)] = 2 sqrt(tr[Gamma_qq H_+] tr[Gamma_pp H_-])``.
    Equal to the two-mode value when ``Gamma`` is invariant under the
    symmetry group of ``hp``; with ``check`` this is verified on the
    stored generators.
    """
    if cm.n_modes != hp.n_modes:
        raise ParameterError("covariance matrix and Hamiltonian pair have different mode counts")
    if check and hp.generators:
        res = invariance_residual(cm.gamma, hp.generators)
        if res > 1e-8 * max(1.0, float(np.abs(cm.gamma).max())):
            raise ParameterError(f"covariance matrix is not group invariant (twirl residual {res:.2e})")
    a = float(np.sum(cm.qq * hp.plus))
    b = float(np.sum(cm.pp * hp.minus))
    return 2.0 * math.sqrt(max(a * b, 0.0))


def pure_cm_from_xy(X, Y=None) -> CovarianceMatrix:
    """Pure-state CM ``[[X, XY], [YX, YXY + X^-1]]`` for ``X > 0``, ``Y = Y^T``."""
    X = np.asarray(X, dtype=float)
    Y = np.zeros_like(X) if Y is None else np.asarray(Y, dtype=float)
    try:
        Xinv = mat_func(X, "inv")
    except SingularMatrixError as exc:
        raise ParameterError(f"X must be positive definite ({exc})") from exc
    if np.abs(Y - Y.T).max(initial=0.0) > 1e-12 * (1 + np.abs(Y).max(initial=0.0)):
        raise ParameterError("Y must be symmetric")
    XY = X @ Y
    return CovarianceMatrix(np.block([[X, XY], [XY.T, Y @ X @ Y + Xinv]]))
