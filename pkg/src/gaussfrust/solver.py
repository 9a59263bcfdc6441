"""Maximal two-mode entanglement under a permutation symmetry.

For a symmetric graph the optimal state is the ground state of the
quadratic Hamiltonian ``H = H_+ (+) H_-`` (QQ block and PP block) built from
EPR-type couplings ``(Q_k + Q_l)^2 + (P_k - P_l)^2`` averaged over the
edges. Its ground-state energy ``E0`` is the minimal EPR uncertainty, and
the maximal entanglement is ``eof_from_delta(E0)``.

``E0`` is available through several independent routes:

* ``ground_energy``: ``2 || (H_+^{1/2} H_- H_+^{1/2})^{1/2} ||_1``;
* ``commuting_spectral_energy``: ``2 sum_i sqrt(a_i b_i)`` over a joint
  eigenbasis of the commuting pair;
* ``adjacency_spectral_energy``: ``(1/N) sum_i sqrt(1 - (a_i/d)^2)``;
* ``closed_form_energy`` for rings, hypercubic tori and mean-field clusters;
* ``infinite_lattice_energy`` for infinite 2d/3d lattices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .entanglement import epr_uncertainty_global, eof_from_delta
from .errors import ConvergenceError, ParameterError, RouteMismatchError, SwapHypothesisError
from .graphs import Graph, GraphSpec, adjacency, build_graph, require_symmetric
from .groups import PermGroup, twirl
from .linalg import (
    EPS,
    CovarianceMatrix,
    commutator_norm,
    mat_func,
    sym_eig,
    trace_norm,
)

#: Routes must agree to this absolute tolerance.
ROUTE_TOL = 1e-10
#: Cross-check routes when the graph has at most this many vertices.
CROSS_CHECK_MAX_N = 64
#: Default regularisation schedule for ground-state CMs.
EPSILONS = tuple(10.0**-k for k in range(1, 9))


@dataclass(frozen=True, eq=False)
class HamiltonianPair:
    """QQ block ``plus`` and PP block ``minus`` of a quadratic Hamiltonian.

    ``generators`` lists permutations the pair is invariant under (used to
    check invariance of states); ``provenance`` records how it was built.
    """

    plus: np.ndarray
    minus: np.ndarray
    provenance: str = "direct"
    generators: tuple = ()

    @property
    def n_modes(self) -> int:
        return self.plus.shape[0]

    def matrix(self) -> np.ndarray:
        n = self.n_modes
        z = np.zeros((n, n))
        return np.block([[self.plus, z], [z, self.minus]])

    def commutator_norm(self) -> float:
        return commutator_norm(self.plus, self.minus)

    def scaled(self, s: float) -> "HamiltonianPair":
        """The pair ``(s H_+, H_- / s)``."""
        return HamiltonianPair(s * self.plus, self.minus / s, self.provenance, self.generators)


def edge_terms(n: int, k: int, l: int):
    """``h_pm = (|k><k| + |l><l| pm (|k><l| + |l><k|)) / 4`` as ``n x n`` arrays."""
    h_plus = np.zeros((n, n))
    h_plus[[k, l], [k, l]] = 0.25
    h_minus = h_plus.copy()
    h_plus[k, l] = h_plus[l, k] = 0.25
    h_minus[k, l] = h_minus[l, k] = -0.25
    return h_plus, h_minus


def build_pair_edges(g: Graph, check: bool = True) -> HamiltonianPair:
    """Edge-averaged pair ``H_pm = (1/|E|) sum_edges h_pm``.

    Also evaluated as ``(1/2N)(1 pm A/d)``; the two must agree to 1e-12.
    """
    if check:
        require_symmetric(g)
    n = g.n
    plus = np.zeros((n, n))
    minus = np.zeros((n, n))
    for k, l in g.edges:
        plus[[k, l], [k, l]] += 0.25
        minus[[k, l], [k, l]] += 0.25
        plus[k, l] += 0.25
        plus[l, k] += 0.25
        minus[k, l] -= 0.25
        minus[l, k] -= 0.25
    plus /= g.n_edges
    minus /= g.n_edges
    A = adjacency(g)
    eye = np.eye(n)
    regular_plus = (eye + A / g.degree) / (2 * n)
    regular_minus = (eye - A / g.degree) / (2 * n)
    gap = max(np.abs(plus - regular_plus).max(), np.abs(minus - regular_minus).max())
    if gap > 1e-12:
        raise RouteMismatchError(f"edge sum and regular-graph form of H_pm differ by {gap:.2e}")
    return HamiltonianPair(plus, minus, "edge-averaged", g.generators)


def build_pair_group(G: PermGroup, k: int, l: int) -> HamiltonianPair:
    """Group-twirled pair ``H_pm = (1/|G|) sum_g T_g h_pm T_g^T``."""
    if not G.swaps(k, l):
        raise SwapHypothesisError(f"swap hypothesis violated: no element exchanges {k} and {l}")
    h_plus, h_minus = edge_terms(G.n, k, l)
    return HamiltonianPair(twirl(h_plus, G), twirl(h_minus, G), "group-twirled", G.generators)


def _snap_zero(w, scale: float, count: int | None = None) -> np.ndarray:
    # roundoff-level values stand for exact zeros; keep them out of square roots
    w = np.asarray(w, dtype=float)
    count = max(len(w), 1) if count is None else count
    return np.where(np.abs(w) <= 8 * count * EPS * scale, 0.0, w)


def ground_energy(hp: HamiltonianPair) -> float:
    """``E0 = 2 || sqrt(H_+^{1/2} H_- H_+^{1/2}) ||_1`` (valid for any PSD pair)."""
    root_plus = mat_func(hp.plus, "sqrt")
    inner = root_plus @ hp.minus @ root_plus
    return 2.0 * trace_norm(mat_func((inner + inner.T) / 2, "sqrt"))


def joint_basis(hp: HamiltonianPair, tol: float = 1e-12):
    """Common eigenbasis ``V`` of a commuting pair plus both spectra.

    The basis diagonalises a generic combination of ``H_+`` and ``H_-``;
    it is checked to diagonalise each of them to 1e-9 relative to the
    largest entry.
    """
    c = hp.commutator_norm()
    if c > tol:
        raise ParameterError(f"H_+ and H_- do not commute (commutator norm {c:.2e})")
    mix = hp.plus + (math.sqrt(5.0) - 1.0) / 2.0 * hp.minus
    _, V = sym_eig(mix)
    Dp = V.T @ hp.plus @ V
    Dm = V.T @ hp.minus @ V
    scale = max(np.abs(hp.plus).max(), np.abs(hp.minus).max(), 1e-300)
    residual = max(np.abs(Dp - np.diag(np.diag(Dp))).max(), np.abs(Dm - np.diag(np.diag(Dm))).max())
    if residual > 1e-9 * scale:
        raise ParameterError(f"no common eigenbasis found (off-diagonal residual {residual:.2e})")
    return V, np.diag(Dp).copy(), np.diag(Dm).copy()


def joint_spectrum(hp: HamiltonianPair, tol: float = 1e-12):
    """Eigenvalues of ``H_+`` and ``H_-`` in a common eigenbasis (``[H_+, H_-] = 0``)."""
    _, a, b = joint_basis(hp, tol)
    return a, b


def commuting_spectral_energy(hp: HamiltonianPair) -> float:
    """``E0 = 2 sum_i sqrt(a_i b_i)`` for commuting ``H_pm``."""
    a, b = joint_spectrum(hp)
    scale = max(np.abs(a).max(), np.abs(b).max())
    a = np.clip(_snap_zero(a, scale), 0.0, None)
    b = np.clip(_snap_zero(b, scale), 0.0, None)
    return 2.0 * float(np.sum(np.sqrt(a * b)))


def adjacency_spectral_energy(g: Graph) -> float:
    """``E0 = (1/N) sum_i sqrt((1 - a_i/d)(1 + a_i/d))`` over adjacency eigenvalues."""
    w, _ = sym_eig(adjacency(g))
    x = w / g.degree
    lo = np.clip(_snap_zero(1.0 - x, 1.0), 0.0, None)
    hi = np.clip(_snap_zero(1.0 + x, 1.0), 0.0, None)
    return float(np.sum(np.sqrt(lo * hi))) / g.n


def ring_sine_sum(n: int) -> float:
    """``(1/N) sum_l |sin(2 pi l / N)|``, the ring energy before summation."""
    l = np.arange(n)
    return float(np.sum(np.abs(np.sin(2 * np.pi * l / n)))) / n


def ring_energy_branches(n: float):
    """Even and odd closed-form branches evaluated at (possibly real) ``n``."""
    even = 2.0 / n / math.tan(math.pi / n)
    odd = 1.0 / n / math.tan(math.pi / (2 * n))
    return even, odd


def torus_energy_sum(n: int, dim: int) -> float:
    """Finite Brillouin-zone sum for the periodic ``n^dim`` hypercubic lattice."""
    cos = np.cos(2 * np.pi * np.arange(n) / n)
    # sum_k cos(2 pi l_k / n) for every l, built one axis at a time
    values = np.zeros(1)
    for _ in range(dim):
        values = (values[:, None] + cos[None, :]).ravel()
    x = values / dim
    radicand = np.clip(_snap_zero((1.0 - x) * (1.0 + x), 1.0, count=dim), 0.0, None)
    return float(np.sum(np.sqrt(radicand))) / n**dim


def closed_form_energy(family: str, n: float, dim: int = 1) -> float:
    """Closed-form ground energies.

    ``ring``: ``(2/N) cot(pi/N)`` for even and ``(1/N) cot(pi/2N)`` for odd
    ``N``; ``N = inf`` gives the limit ``2/pi``. ``torus``: the finite
    Brillouin-zone sum. ``meanfield``/``complete``: ``sqrt((N-2)/N)``.
    """
    if family == "ring" and math.isinf(n):
        return 2.0 / math.pi
    if n < 3 or int(n) != n:
        raise ParameterError(f"closed forms need an integer N >= 3, got {n!r}")
    n = int(n)
    if family == "ring":
        even, odd = ring_energy_branches(n)
        return even if n % 2 == 0 else odd
    if family == "torus":
        if dim < 1:
            raise ParameterError("torus dimension must be >= 1")
        return torus_energy_sum(n, dim)
    if family in ("meanfield", "complete"):
        return math.sqrt((n - 2) / n)
    raise ParameterError(f"no closed form for family {family!r}")


def _grid(r: int) -> np.ndarray:
    return (np.arange(r) + 0.5) * (2 * np.pi / r)


def _square(r):
    c = np.cos(_grid(r))
    x = (c[:, None] + c[None, :]) / 2
    return np.sum(np.sqrt(np.clip((1 - x) * (1 + x), 0, None))) / r**2


def _triangular(r):
    k = _grid(r)
    x = (np.cos(k)[:, None] + np.cos(k)[None, :] + np.cos(k[:, None] + k[None, :])) / 3
    return np.sum(np.sqrt(np.clip((1 - x) * (1 + x), 0, None))) / r**2


def _honeycomb(r):
    k = _grid(r)
    # both bands +-|f|/3 give the same integrand
    f2 = np.abs(1 + np.exp(1j * k)[:, None] + np.exp(1j * k)[None, :]) ** 2 / 9
    return np.sum(np.sqrt(np.clip(1 - f2, 0, None))) / r**2


def _cubic(r):
    c = np.cos(_grid(r))
    plane = c[:, None] + c[None, :]
    total = 0.0
    for cz in c:  # slice by slice keeps memory at O(r^2)
        x = (plane + cz) / 3
        total += np.sum(np.sqrt(np.clip((1 - x) * (1 + x), 0, None)))
    return total / r**3


LATTICES = {
    "honeycomb": (_honeycomb, 2, 3),
    "square": (_square, 2, 4),
    "triangular": (_triangular, 2, 6),
    "cubic": (_cubic, 3, 6),
}


def lattice_energy_at(kind: str, resolution: int) -> float:
    """One Richardson step combining the ``resolution/2`` and ``resolution`` grids."""
    if kind not in LATTICES:
        raise ParameterError(f"unknown lattice {kind!r}; choose from {sorted(LATTICES)}")
    if resolution < 8 or resolution % 2:
        raise ParameterError(f"resolution must be an even integer >= 8, got {resolution!r}")
    integrate, dim, _ = LATTICES[kind]
    factor = 2.0 ** (dim + 1)
    return float((factor * integrate(resolution) - integrate(resolution // 2)) / (factor - 1))


def infinite_lattice_energy(kind: str, resolution: int = 32, tol: float = 1e-7, max_resolution: int | None = None) -> float:
    """Brillouin-zone average of ``sqrt(1 - lambda(k)^2)`` for an infinite lattice.

    ``lambda(k)`` is the adjacency dispersion divided by the coordination
    number. The midpoint rule on an ``r^dim`` grid has error ``O(r^-(dim+1))``
    (the integrand has conical zeros), so successive grids are combined by
    Richardson extrapolation and ``r`` is doubled until two extrapolated
    values differ by less than ``tol``.
    """
    if kind not in LATTICES:
        raise ParameterError(f"unknown lattice {kind!r}; choose from {sorted(LATTICES)}")
    if resolution < 32:
        raise ParameterError("resolution must be at least 32")
    integrate, dim, _ = LATTICES[kind]
    if max_resolution is None:
        max_resolution = 4096 if dim == 2 else 512
    factor = 2.0 ** (dim + 1)
    r = resolution
    coarse = integrate(r)
    previous = None
    while 2 * r <= max_resolution:
        r *= 2
        fine = integrate(r)
        estimate = (factor * fine - coarse) / (factor - 1)
        if previous is not None and abs(estimate - previous) < tol:
            return float(estimate)
        previous, coarse = estimate, fine
    raise ConvergenceError(
        f"{kind} lattice integral not converged at resolution {r}",
        residual=(previous, coarse),
    )


def ground_cm(hp: HamiltonianPair, epsilon: float) -> CovarianceMatrix:
    """Regularised ground-state CM ``sqrt(H_-' H_+'^{-1}) (+) sqrt(H_+' H_-'^{-1})``.

    ``H_pm' = H_pm + epsilon * 1``. Only the commuting case is supported,
    where ``H_-' H_+'^{-1}`` is symmetric positive definite.
    """
    if not epsilon > 0:
        raise ParameterError(f"epsilon must be positive, got {epsilon!r}")
    c = hp.commutator_norm()
    if c > 1e-10:
        raise ParameterError(f"ground_cm needs commuting H_pm (commutator norm {c:.2e})")
    # in the joint eigenbasis both blocks are scalar ratios, which avoids the
    # O(1/eps) conditioning of forming H_-' H_+'^{-1} as a matrix
    V, a, b = joint_basis(hp, tol=1e-10)
    a = np.clip(_snap_zero(a, np.abs(a).max()), 0.0, None) + epsilon
    b = np.clip(_snap_zero(b, np.abs(b).max()), 0.0, None) + epsilon
    r = np.sqrt(b / a)
    qq = (V * r) @ V.T
    pp = (V / r) @ V.T
    return CovarianceMatrix.from_blocks((qq + qq.T) / 2, (pp + pp.T) / 2)


@dataclass(frozen=True)
class EpsilonSweep:
    epsilons: tuple
    deltas: tuple
    extrapolated: float

    @property
    def monotone(self) -> bool:
        """Delta strictly decreases as epsilon decreases."""
        d = self.deltas
        return all(a > b for a, b in zip(d, d[1:]))


def extrapolate_sqrt_eps(epsilons, deltas) -> float:
    """Richardson step in ``sqrt(eps)`` using the two smallest epsilons."""
    order = np.argsort(epsilons)
    e1, e2 = epsilons[order[1]], epsilons[order[0]]
    d1, d2 = deltas[order[1]], deltas[order[0]]
    ratio = math.sqrt(e1 / e2)
    return (ratio * d2 - d1) / (ratio - 1.0)


def epsilon_sweep(hp: HamiltonianPair, epsilons=EPSILONS) -> EpsilonSweep:
    """EPR uncertainty of ``ground_cm(hp, eps)`` over a decreasing schedule."""
    eps = tuple(sorted(epsilons, reverse=True))
    deltas = tuple(epr_uncertainty_global(ground_cm(hp, e), hp) for e in eps)
    return EpsilonSweep(eps, deltas, extrapolate_sqrt_eps(eps, deltas))


@dataclass(frozen=True)
class FrustrationResult:
    """Minimal EPR uncertainty ``e0`` and maximal entanglement ``emax`` (ebits)."""

    e0: float
    emax: float
    family: str
    n: int
    degree: int
    method: str
    unbounded: bool = False
    routes: dict = field(default_factory=dict)


def result_from_energy(e0, family, n, degree, method, routes=None) -> FrustrationResult:
    if e0 > 1.0 + 1e-12:
        raise RouteMismatchError(f"E0 = {e0!r} exceeds the vacuum value 1")
    unbounded = e0 <= 1e-12
    emax = math.inf if unbounded else eof_from_delta(e0)
    return FrustrationResult(e0, emax, family, n, degree, method, unbounded, dict(routes or {}))


def emax_for_pair(hp: HamiltonianPair, family: str = "custom", degree: int = 0) -> FrustrationResult:
    """Maximal entanglement for an explicit Hamiltonian pair (trace-norm route)."""
    e0 = ground_energy(hp)
    return result_from_energy(e0, family, hp.n_modes, degree, "trace_norm", {"trace_norm": e0})


def _check_agreement(routes: dict, tol: float = ROUTE_TOL):
    values = list(routes.items())
    ref_name, ref = values[0]
    for name, value in values[1:]:
        if abs(value - ref) > tol:
            raise RouteMismatchError(
                f"E0 routes disagree: {ref_name}={ref!r}, {name}={value!r} (|diff| = {abs(value - ref):.2e})"
            )


def emax_for_graph(spec, cross_check: bool = True) -> FrustrationResult:
    """Maximal nearest-neighbour entanglement for a symmetric graph.

    ``spec`` is a :class:`GraphSpec` or an already built :class:`Graph`.
    The cheapest exact route is used (closed form, then adjacency
    spectrum, then trace norm); with ``cross_check`` and at most 64
    vertices the trace-norm and commuting-spectrum routes are evaluated as
    well and must agree to 1e-10.
    """
    if isinstance(spec, Graph):
        graph = spec
        require_symmetric(graph)
        family, n, degree = graph.family, graph.n, graph.degree
        routes = {"spectral": adjacency_spectral_energy(graph)}
        method = "spectral"
    else:
        if not isinstance(spec, GraphSpec):
            raise ParameterError(f"expected GraphSpec or Graph, got {type(spec).__name__}")
        graph = None
        family, n, degree = spec.family, spec.n_vertices, spec.degree
        if family == "ring":
            routes = {"closed_form": closed_form_energy("ring", spec.n)}
        elif family == "complete":
            routes = {"closed_form": closed_form_energy("meanfield", spec.n)}
        elif family == "torus":
            routes = {"closed_form": closed_form_energy("torus", spec.n, spec.dim)}
        else:
            graph = build_graph(spec)
            routes = {"spectral": adjacency_spectral_energy(graph)}
        method = next(iter(routes))
    if cross_check and n <= CROSS_CHECK_MAX_N:
        if graph is None:
            graph = build_graph(spec)
        hp = build_pair_edges(graph)
        routes.setdefault("spectral", adjacency_spectral_energy(graph))
        routes["commuting"] = commuting_spectral_energy(hp)
        routes["trace_norm"] = ground_energy(hp)
        _check_agreement(routes)
    name = spec.descriptor if isinstance(spec, GraphSpec) else graph.name
    return result_from_energy(routes[method], name, n, degree, method, routes)
