"""Permutation groups acting on modes: closure, twirling, commutant blocks."""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import GroupTooLargeError, NonAbelianCommutantError, ParameterError
from .linalg import CovarianceMatrix

DEFAULT_CAP = 10**6


def default_cap() -> int:
    return int(os.environ.get("GF_MAX_GROUP", DEFAULT_CAP))


@dataclass(frozen=True, eq=False)
class PermGroup:
    """Explicit list of permutations of ``0..n-1``.

    ``elements[i]`` is the image array of element ``i``; element 0 is the
    identity. Permutation ``g`` acts on basis vectors as ``T_g|k> = |g(k)>``.
    """

    n: int
    elements: np.ndarray
    generators: tuple = ()

    @property
    def order(self) -> int:
        return len(self.elements)

    def swaps(self, k: int, l: int) -> bool:
        """True if some element maps ``k -> l`` and ``l -> k``."""
        e = self.elements
        return bool(np.any((e[:, k] == l) & (e[:, l] == k)))

    def permutation_matrix(self, i: int) -> np.ndarray:
        T = np.zeros((self.n, self.n))
        T[self.elements[i], np.arange(self.n)] = 1.0
        return T


def group_closure(generators, n: int | None = None, cap: int | None = None) -> PermGroup:
    """Close a set of generators under composition by breadth-first search.

    Raises :class:`GroupTooLargeError` once more than ``cap`` elements have
    been found (``cap`` defaults to ``$GF_MAX_GROUP`` or 10**6).
    """
    cap = default_cap() if cap is None else cap
    gens = [np.asarray(g, dtype=np.int64) for g in generators]
    if n is None:
        if not gens:
            raise ParameterError("degree n is required when there are no generators")
        n = len(gens[0])
    for g in gens:
        if g.shape != (n,) or not np.array_equal(np.sort(g), np.arange(n)):
            raise ParameterError(f"generator {g.tolist()} is not a permutation of 0..{n - 1}")
    identity = np.arange(n, dtype=np.int64)
    seen = {identity.tobytes()}
    elements = [identity]
    queue = deque([identity])
    while queue:
        e = queue.popleft()
        for g in gens:
            h = g[e]
            key = h.tobytes()
            if key not in seen:
                if len(seen) >= cap:
                    raise GroupTooLargeError(
                        f"group closure exceeds {cap} elements; "
                        "group too large, supply orbit certificates instead"
                    )
                seen.add(key)
                elements.append(h)
                queue.append(h)
    return PermGroup(n=n, elements=np.array(elements), generators=tuple(tuple(g.tolist()) for g in gens))


def cyclic_group(n: int) -> PermGroup:
    """Translations of a ring of ``n`` sites (no reflection)."""
    return group_closure([[(i + 1) % n for i in range(n)]], n=n)


def twirl(M, G: PermGroup) -> np.ndarray:
    """Group average ``(1/|G|) sum_g T_g M T_g^T`` of an ``n x n`` matrix."""
    M = np.asarray(M, dtype=float)
    if M.shape != (G.n, G.n):
        raise ParameterError(f"matrix shape {M.shape} does not match group degree {G.n}")
    out = np.zeros_like(M)
    for p in G.elements:
        # (T_g M T_g^T)[g(i), g(j)] = M[i, j]
        out[np.ix_(p, p)] += M
    return out / G.order


def twirl_circulant(M) -> np.ndarray:
    """Average of an ``n x n`` matrix over cyclic translations.

    Shortcut for the cyclic group: the result is the circulant whose
    entry ``(i, i + d)`` is the mean of the wrapped ``d``-th diagonal of ``M``.
    """
    M = np.asarray(M, dtype=float)
    n = M.shape[0]
    idx = np.arange(n)
    diag_means = np.array([M[idx, (idx + d) % n].mean() for d in range(n)])
    return diag_means[(idx[None, :] - idx[:, None]) % n]


def twirl_cm(cm: CovarianceMatrix, G: PermGroup) -> CovarianceMatrix:
    """Average a covariance matrix over ``T_g (+) T_g``."""
    return CovarianceMatrix(twirl_phase_space(cm.gamma, G))


def twirl_phase_space(M, G: PermGroup) -> np.ndarray:
    M = np.asarray(M, dtype=float)
    n = G.n
    if M.shape != (2 * n, 2 * n):
        raise ParameterError(f"expected a {2 * n}x{2 * n} matrix, got {M.shape}")
    out = np.zeros_like(M)
    for p in G.elements:
        pp = np.concatenate([p, p + n])
        out[np.ix_(pp, pp)] += M
    return out / G.order


def invariance_residual(M, generators) -> float:
    """Largest entry of ``T_g M T_g^T - M`` over the given permutations.

    Works for ``n x n`` matrices and for ``2n x 2n`` phase-space matrices
    (acted on by ``T_g (+) T_g``).
    """
    M = np.asarray(M, dtype=float)
    worst = 0.0
    for g in generators:
        p = np.asarray(g)
        if M.shape[0] == 2 * len(p):
            p = np.concatenate([p, p + len(p)])
        moved = np.empty_like(M)
        moved[np.ix_(p, p)] = M
        worst = max(worst, float(np.abs(moved - M).max(initial=0.0)))
    return worst


@dataclass(frozen=True)
class CommutantBlockData:
    """Simultaneous eigenvalues of the averaged matrices ``A_ij``.

    ``lam01_re``/``lam01_im`` hold the real and imaginary parts of
    ``lambda_01``; ``basis`` is the unitary whose columns diagonalise all
    four matrices.
    """

    lam00: np.ndarray
    lam01_re: np.ndarray
    lam01_im: np.ndarray
    lam11: np.ndarray
    basis: np.ndarray

    @property
    def lam01(self) -> np.ndarray:
        return self.lam01_re + 1j * self.lam01_im

    def minor(self) -> np.ndarray:
        """``lambda_00 lambda_11 - |lambda_01|^2`` per spectral index."""
        return self.lam00 * self.lam11 - (self.lam01_re**2 + self.lam01_im**2)


def averaged_pair_matrices(G: PermGroup, k: int, l: int):
    """``A_ij = (1/|G|) sum_g |g(i)><g(j)|`` for ``i, j`` in ``{k, l}``."""
    labels = {0: k, 1: l}
    out = {}
    for i in (0, 1):
        for j in (0, 1):
            A = np.zeros((G.n, G.n))
            np.add.at(A, (G.elements[:, labels[i]], G.elements[:, labels[j]]), 1.0)
            out[i, j] = A / G.order
    return out


def commutant_blocks(G: PermGroup, k: int = 0, l: int = 1, tol: float = 1e-10) -> CommutantBlockData:
    """Diagonalise the four averaged matrices ``A_ij`` simultaneously.

    The discrete Fourier basis is tried first (it works for every cyclic
    group); otherwise a generic Hermitian combination is diagonalised.
    """
    A = averaged_pair_matrices(G, k, l)
    mats = list(A.values())
    for a in range(4):
        for b in range(a + 1, 4):
            c = np.abs(mats[a] @ mats[b] - mats[b] @ mats[a]).max()
            if c > tol:
                raise NonAbelianCommutantError(
                    f"commutant not Abelian: averaged matrices fail to commute (residual {c:.2e})"
                )
    n = G.n
    j = np.arange(n)
    fourier = np.exp(-2j * np.pi * np.outer(j, j) / n) / np.sqrt(n)

    def diagonal_in(U):
        ds = []
        for M in mats:
            D = U.conj().T @ M @ U
            if np.abs(D - np.diag(np.diag(D))).max() > tol:
                return None
            ds.append(np.diag(D))
        return ds

    basis = fourier
    diags = diagonal_in(fourier)
    if diags is None:
        rng = np.random.default_rng(12345)
        c = rng.normal(size=3)
        herm = (
            c[0] * A[0, 0] + c[1] * A[1, 1]
            + c[2] * (A[0, 1] + A[1, 0])
            + 1j * np.sqrt(2) * (A[0, 1] - A[1, 0])
        )
        _, basis = np.linalg.eigh(herm)
        diags = diagonal_in(basis)
        if diags is None:
            raise NonAbelianCommutantError("could not diagonalise the averaged matrices simultaneously")
    d00, d01, _, d11 = diags
    return CommutantBlockData(
        lam00=d00.real.copy(),
        lam01_re=d01.real.copy(),
        lam01_im=d01.imag.copy(),
        lam11=d11.real.copy(),
        basis=basis,
    )
