"""Independent numerical checks of the optimal-entanglement construction.

Nothing in here reuses the eigen-solver or the ``E0`` formulas of
:mod:`gaussfrust.solver`: the brute-force minimiser works on its own
parameterisation with finite-difference gradients, and the pair it
minimises can be assembled directly from an edge list.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .errors import ParameterError
from .groups import commutant_blocks, cyclic_group, twirl
from .linalg import symplectic_eigenvalues
from .solver import HamiltonianPair, edge_terms

MAX_ORACLE_MODES = 8


def independent_pair(edges, n: int) -> HamiltonianPair:
    """``H_pm`` as averages of ``v v^T`` with ``v = (e_k pm e_l) / 2``."""
    plus = np.zeros((n, n))
    minus = np.zeros((n, n))
    for k, l in edges:
        v = np.zeros(n)
        w = np.zeros(n)
        v[k], v[l] = 0.5, 0.5
        w[k], w[l] = 0.5, -0.5
        plus += np.outer(v, v)
        minus += np.outer(w, w)
    return HamiltonianPair(plus / len(edges), minus / len(edges), "oracle")


def epr_objective(X, Y, hp: HamiltonianPair, s: float = 1.0) -> float:
    """``s tr[X H_+] + (1/s) tr[(X^{-1} + Y X Y) H_-]`` for a pure-state CM."""
    X = np.asarray(X, dtype=float)
    value = s * np.sum(X * hp.plus) + np.sum(np.linalg.inv(X) * hp.minus) / s
    if Y is not None:
        Y = np.asarray(Y, dtype=float)
        value += np.sum((Y @ X @ Y) * hp.minus) / s
    return float(value)


def _unpack(v, n):
    S = np.zeros((n, n))
    S[np.triu_indices(n)] = v
    return S + np.triu(S, 1).T


def _exp_pair(v, n):
    w, V = np.linalg.eigh(_unpack(v, n))
    return (V * np.exp(w)) @ V.T, (V * np.exp(-w)) @ V.T


def analytic_optimum(hp: HamiltonianPair, epsilon: float = 1e-13) -> np.ndarray:
    """Stationary point ``H_+^{-1/2} (H_+^{1/2} H_- H_+^{1/2})^{1/2} H_+^{-1/2}``.

    Singular blocks are shifted by ``epsilon``.
    """
    n = hp.n_modes

    def power(M, p):
        w, V = np.linalg.eigh(M)
        return (V * np.clip(w, 0, None) ** p) @ V.T

    plus = hp.plus + epsilon * np.eye(n)
    minus = hp.minus + epsilon * np.eye(n)
    r = power(plus, 0.5)
    ri = power(plus, -0.5)
    inner = r @ minus @ r
    X = ri @ power((inner + inner.T) / 2, 0.5) @ ri
    return (X + X.T) / 2


@dataclass(frozen=True)
class BruteForceResult:
    delta: float
    X: np.ndarray
    converged: bool
    analytic_delta: float
    restart_values: tuple


def bruteforce_min_delta(
    hp: HamiltonianPair,
    iterations: int = 3000,
    restarts: int = 8,
    seed: int = 0,
    step: float = 1e-5,
) -> BruteForceResult:
    """Minimise ``tr[X H_+] + tr[X^{-1} H_-]`` over ``X = exp(S) > 0``.

    BFGS on the independent entries of the symmetric ``S`` with central
    finite-difference gradients, from ``restarts`` random starting points.
    The analytic stationary point is also evaluated for comparison.
    """
    n = hp.n_modes
    if n > MAX_ORACLE_MODES:
        raise ParameterError(f"brute-force oracle is limited to {MAX_ORACLE_MODES} modes, got {n}")
    dim = n * (n + 1) // 2

    def f(v):
        X, Xinv = _exp_pair(v, n)
        return float(np.sum(X * hp.plus) + np.sum(Xinv * hp.minus))

    def grad(v):
        g = np.empty_like(v)
        for i in range(dim):
            e = np.zeros(dim)
            e[i] = step
            g[i] = (f(v + e) - f(v - e)) / (2 * step)
        return g

    rng = np.random.default_rng(seed)
    best = None
    values = []
    for _ in range(restarts):
        v0 = rng.normal(scale=0.3, size=dim)
        res = minimize(f, v0, jac=grad, method="BFGS", options={"gtol": 1e-12, "maxiter": iterations})
        values.append(float(res.fun))
        if best is None or res.fun < best.fun:
            best = res
    X, _ = _exp_pair(best.x, n)
    X_star = analytic_optimum(hp)
    return BruteForceResult(
        delta=float(best.fun),
        X=X,
        # status 2 is precision loss at a stationary point; only the iteration cap counts as failure
        converged=best.status != 1,
        analytic_delta=epr_objective(X_star, None, hp),
        restart_values=tuple(values),
    )


@dataclass(frozen=True)
class YProbeReport:
    min_gap: float
    trials: int
    ok: bool


def probe_y_nonzero(hp: HamiltonianPair, X=None, trials: int = 100, seed: int = 0, tol: float = 1e-10) -> YProbeReport:
    """Check that switching on ``Y`` never lowers the objective at fixed ``X``."""
    n = hp.n_modes
    if n > MAX_ORACLE_MODES:
        raise ParameterError(f"Y probe is limited to {MAX_ORACLE_MODES} modes, got {n}")
    if X is None:
        X = bruteforce_min_delta(hp).X
    base = epr_objective(X, None, hp)
    rng = np.random.default_rng(seed)
    gaps = []
    for _ in range(trials):
        Y = rng.normal(size=(n, n))
        Y = (Y + Y.T) / 2
        gaps.append(epr_objective(X, Y, hp) - base)
    min_gap = min(gaps) if gaps else 0.0
    return YProbeReport(min_gap, trials, min_gap >= -tol)


def rotated_pair_blocks(s: float, theta: float):
    """Blocks ``h_qq, h_qp, h_pp`` of ``s (Q_A+Q_B)^2 + (P_A-P_B)^2 / s`` after
    rotating mode A's phase space by ``theta``."""
    c, sn = math.cos(theta), math.sin(theta)
    h_qq = np.array([[s * c * c + sn * sn / s, s * c], [s * c, s]])
    h_qp = np.array([[(1 / s - s) * c * sn, -sn / s], [-s * sn, 0.0]])
    h_pp = np.array([[s * sn * sn + c * c / s, -c / s], [-c / s, 1 / s]])
    return h_qq, h_qp, h_pp


def _block_radicands(blocks, s, theta):
    """``b_qq b_pp - (Re b_qp)^2`` per spectral index for the rotated pair."""
    h_qq, h_qp, h_pp = rotated_pair_blocks(s, theta)
    lam = {
        (0, 0): blocks.lam00,
        (0, 1): blocks.lam01,
        (1, 0): np.conj(blocks.lam01),
        (1, 1): blocks.lam11,
    }
    b = {}
    for name, h in (("qq", h_qq), ("qp", h_qp), ("pp", h_pp)):
        b[name] = sum(h[i, j] * lam[i, j] for i in (0, 1) for j in (0, 1))
    rad = b["qq"].real * b["pp"].real - b["qp"].real ** 2
    scale = max(np.abs(b["qq"]).max(), np.abs(b["pp"]).max()) ** 2
    return np.where(np.abs(rad) <= 64 * len(rad) * np.finfo(float).eps * scale, 0.0, rad)


def _q_form_radicands(blocks, s, theta):
    lam_bar = np.stack([blocks.lam00, blocks.lam01_re, blocks.lam11])
    Q = np.array([[1.0, 0, 1], [0, -4, 0], [1, 0, 1]])
    Q = Q + math.sin(theta) ** 2 / 2 * (s - 1 / s) ** 2 * np.array([[0.0, 0, 1], [0, -2, 0], [1, 0, 0]])
    return np.einsum("im,ij,jm->m", lam_bar, Q, lam_bar)


@dataclass(frozen=True)
class AppendixReport:
    n: int
    thetas: np.ndarray
    s_values: np.ndarray
    objective: np.ndarray  # shape (len(s_values), len(thetas))
    reflection_delta: np.ndarray  # per s
    argmin_theta: np.ndarray  # per s
    min_minor: float
    theta_zero_residual: float
    q_form_residual: float
    theta_optimal: bool

    @property
    def ok(self) -> bool:
        return (
            self.theta_optimal
            and self.min_minor >= -1e-10
            and self.theta_zero_residual <= 1e-10
            and self.q_form_residual <= 1e-12
        )


def default_s_grid(points: int = 33) -> np.ndarray:
    return np.logspace(-3, 3, points, base=2.0)


def appendix_theta_scan(n: int, n_theta: int = 64, s_values=None) -> AppendixReport:
    """Scan the rotated two-mode coupling over ``(s, theta)`` for a ring of
    ``n`` sites with translation symmetry only.

    For each point the rotated blocks are averaged over the cyclic group,
    brought to ``2 x 2`` blocks ``B_mu`` in the Fourier basis, and the sum
    of symplectic eigenvalues ``sum_mu sqrt(b_qq b_pp - (Re b_qp)^2)`` is
    halved to give the EPR uncertainty for that orientation. The minimum
    over ``theta`` must sit at ``theta = 0 (mod pi)``.
    """
    if n < 2:
        raise ParameterError("ring needs at least 2 sites")
    s_values = default_s_grid() if s_values is None else np.asarray(s_values, dtype=float)
    thetas = 2 * np.pi * np.arange(n_theta) / n_theta
    G = cyclic_group(n)
    blocks = commutant_blocks(G, 0, 1)

    objective = np.empty((len(s_values), n_theta))
    q_residual = 0.0
    for a, s in enumerate(s_values):
        for b, theta in enumerate(thetas):
            rad = _block_radicands(blocks, s, theta)
            q_residual = max(q_residual, float(np.abs(rad - _q_form_radicands(blocks, s, theta)).max()))
            objective[a, b] = 0.5 * np.sum(np.sqrt(np.clip(rad, 0.0, None)))

    # same quantity from the reflection-symmetric pair, no Fourier blocks involved
    h_plus, h_minus = edge_terms(n, 0, 1)
    plus, minus = twirl(h_plus, G), twirl(h_minus, G)
    reflection = np.array([
        2.0 * np.sum(symplectic_eigenvalues(np.block([[s * plus, np.zeros((n, n))], [np.zeros((n, n)), minus / s]])))
        for s in s_values
    ])

    at_zero = objective[:, 0]
    ties = objective <= objective.min(axis=1, keepdims=True) + 1e-12
    # distance to the nearest multiple of pi; among tied minima report the closest
    off = np.abs(np.mod(thetas + np.pi / 2, np.pi) - np.pi / 2)
    argmin = thetas[np.argmin(np.where(ties, off[None, :], np.inf), axis=1)]
    optimal = bool(np.all(np.any(ties & (off[None, :] < 1e-12), axis=1)))
    optimal = optimal and bool(np.all(objective >= at_zero[:, None] - 1e-10))
    return AppendixReport(
        n=n,
        thetas=thetas,
        s_values=s_values,
        objective=objective,
        reflection_delta=reflection,
        argmin_theta=argmin,
        min_minor=float(blocks.minor().min()),
        theta_zero_residual=float(np.abs(at_zero - reflection).max()),
        q_form_residual=q_residual,
        theta_optimal=optimal,
    )
