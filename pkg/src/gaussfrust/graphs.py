"""Catalog of symmetric (vertex- and edge-transitive) graphs.

Every catalog graph carries a short list of vertex permutations that
generate a symmetry group acting transitively on vertices and on directed
edges. Generators are stored rather than discovered.

Families
--------
``ring(N)``               cycle on N vertices, dihedral generators
``torus(N, d)``           N^d sites, periodic hypercubic lattice
``complete(N)``           mean-field cluster, adjacent transpositions
``honeycomb_torus(L)``    2 L^2 sites, coordination 3
``triangular_torus(L)``   L^2 sites, coordination 6
``platonic(name)``        the five platonic solids, rotation-group generators
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .errors import NotSymmetricGraphError, ParameterError

PLATONIC_NAMES = ("tetrahedron", "cube", "octahedron", "dodecahedron", "icosahedron")
FAMILIES = ("ring", "torus", "complete", "honeycomb_torus", "triangular_torus", "platonic")

# Vertex-indexed edge lists; two generators of the rotation group each.
# The second generator is a half turn exchanging vertices 0 and 1.
_PLATONIC = {
    "tetrahedron": (
        [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
        [[0, 2, 3, 1], [1, 0, 3, 2]],
    ),
    "cube": (
        [(0, 1), (0, 2), (0, 4), (1, 3), (1, 5), (2, 3), (2, 6), (3, 7),
         (4, 5), (4, 6), (5, 7), (6, 7)],
        [[0, 4, 1, 5, 2, 6, 3, 7], [1, 0, 5, 4, 3, 2, 7, 6]],
    ),
    "octahedron": (
        [(0, 2), (0, 3), (0, 4), (0, 5), (1, 2), (1, 3), (1, 4), (1, 5),
         (2, 4), (2, 5), (3, 4), (3, 5)],
        # vertex 1 is antipodal to 0; the half turn maps edge (0, 2) onto (2, 0)
        [[0, 1, 4, 5, 3, 2], [2, 3, 0, 1, 5, 4]],
    ),
    "icosahedron": (
        [(0, 1), (0, 2), (0, 3), (0, 4), (0, 6), (1, 2), (1, 3), (1, 5),
         (1, 7), (2, 4), (2, 5), (2, 8), (3, 6), (3, 7), (3, 9), (4, 6),
         (4, 8), (4, 10), (5, 7), (5, 8), (5, 11), (6, 9), (6, 10), (7, 9),
         (7, 11), (8, 10), (8, 11), (9, 10), (9, 11), (10, 11)],
        [[0, 2, 4, 1, 6, 8, 3, 5, 10, 7, 9, 11],
         [1, 0, 3, 2, 7, 6, 5, 4, 9, 8, 11, 10]],
    ),
    "dodecahedron": (
        [(0, 1), (0, 2), (0, 4), (1, 3), (1, 5), (2, 6), (2, 8), (3, 6),
         (3, 9), (4, 7), (4, 10), (5, 7), (5, 11), (6, 12), (7, 13), (8, 10),
         (8, 14), (9, 11), (9, 15), (10, 16), (11, 17), (12, 14), (12, 15),
         (13, 16), (13, 17), (14, 18), (15, 19), (16, 18), (17, 19), (18, 19)],
        [[0, 2, 4, 8, 1, 6, 10, 3, 7, 14, 5, 12, 16, 9, 13, 18, 11, 15, 17, 19],
         [1, 0, 5, 4, 3, 2, 7, 6, 11, 10, 9, 8, 13, 12, 17, 16, 15, 14, 19, 18]],
    ),
}


@dataclass(frozen=True)
class GraphSpec:
    """Family tag plus parameters; validated on construction."""

    family: str
    n: int | None = None
    dim: int | None = None
    size: int | None = None
    name: str | None = None

    def __post_init__(self):
        fam = self.family
        if fam == "meanfield":
            object.__setattr__(self, "family", "complete")
            fam = "complete"
        if fam not in FAMILIES:
            raise ParameterError(f"unknown graph family {self.family!r}")
        if fam in ("ring", "complete"):
            _need(self.n, "n", 3, fam)
        elif fam == "torus":
            _need(self.n, "n", 3, fam)
            _need(self.dim, "dim", 1, fam)
        elif fam in ("honeycomb_torus", "triangular_torus"):
            _need(self.size, "size", 3, fam)
        elif self.name not in PLATONIC_NAMES:
            raise ParameterError(
                f"platonic solid must be one of {', '.join(PLATONIC_NAMES)}, got {self.name!r}"
            )

    @property
    def descriptor(self) -> str:
        fam = self.family
        if fam in ("ring", "complete"):
            return f"{fam}({self.n})"
        if fam == "torus":
            return f"torus({self.n},{self.dim})"
        if fam == "platonic":
            return f"platonic:{self.name}"
        return f"{fam}({self.size})"

    @property
    def n_vertices(self) -> int:
        fam = self.family
        if fam in ("ring", "complete"):
            return self.n
        if fam == "torus":
            return self.n**self.dim
        if fam == "honeycomb_torus":
            return 2 * self.size**2
        if fam == "triangular_torus":
            return self.size**2
        return len({v for e in _PLATONIC[self.name][0] for v in e})

    @property
    def degree(self) -> int:
        fam = self.family
        if fam == "ring":
            return 2
        if fam == "complete":
            return self.n - 1
        if fam == "torus":
            return 2 * self.dim
        if fam == "honeycomb_torus":
            return 3
        if fam == "triangular_torus":
            return 6
        edges = _PLATONIC[self.name][0]
        return 2 * len(edges) // self.n_vertices


def _need(value, label, lower, family):
    if value is None or int(value) != value or value < lower:
        raise ParameterError(f"{family} requires integer {label} >= {lower}, got {value!r}")


@dataclass(frozen=True)
class Graph:
    """Simple undirected regular graph with stored symmetry generators.

    ``edges`` are sorted pairs ``(k, l)`` with ``k < l``; the first edge is
    the designated pair whose entanglement is optimised.
    """

    n: int
    edges: tuple
    generators: tuple = ()
    name: str = "custom"
    family: str = "custom"
    degree: int = field(init=False)

    def __post_init__(self):
        edges = []
        for k, l in self.edges:
            k, l = int(k), int(l)
            if k == l:
                raise ParameterError(f"self-loop at vertex {k}")
            if not (0 <= k < self.n and 0 <= l < self.n):
                raise ParameterError(f"edge ({k}, {l}) out of range for n={self.n}")
            edges.append((min(k, l), max(k, l)))
        if len(set(edges)) != len(edges):
            raise ParameterError("duplicate edges")
        edges = tuple(sorted(edges))
        counts = np.bincount(np.array(edges, dtype=int).ravel(), minlength=self.n) if edges else np.zeros(self.n, int)
        if self.n and not np.all(counts == counts[0]):
            raise ParameterError("graph is not regular")
        degree = int(counts[0]) if self.n else 0
        gens = tuple(tuple(int(x) for x in g) for g in self.generators)
        A = _adjacency_int(self.n, edges)
        for g in gens:
            if sorted(g) != list(range(self.n)):
                raise ParameterError(f"generator {g} is not a permutation of 0..{self.n - 1}")
            p = np.array(g)
            # [A, T_g] = 0  <=>  A[g(i), g(j)] = A[i, j]
            if not np.array_equal(A[np.ix_(p, p)], A):
                raise ParameterError(f"generator {g} does not commute with the adjacency matrix")
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "degree", degree)

    @property
    def designated_edge(self) -> tuple:
        return self.edges[0]

    @property
    def n_edges(self) -> int:
        return len(self.edges)


def _adjacency_int(n, edges):
    A = np.zeros((n, n), dtype=np.int64)
    for k, l in edges:
        A[k, l] = A[l, k] = 1
    return A


def adjacency(g: Graph) -> np.ndarray:
    """0/1 symmetric adjacency matrix with zero diagonal (float)."""
    return _adjacency_int(g.n, g.edges).astype(float)


def _edges_from_neighbors(n, neighbor_fn):
    edges = set()
    for v in range(n):
        for w in neighbor_fn(v):
            if w != v:
                edges.add((min(v, w), max(v, w)))
    return sorted(edges)


def _ring(n):
    edges = [(i, (i + 1) % n) for i in range(n)]
    rotation = [(i + 1) % n for i in range(n)]
    reflection = [(1 - i) % n for i in range(n)]  # exchanges 0 and 1
    return edges, [rotation, reflection]


def _torus(n, d):
    shape = (n,) * d
    coords = np.array(list(np.ndindex(*shape)))
    idx = lambda c: np.ravel_multi_index(tuple((c % n).T), shape)  # noqa: E731
    edges = set()
    for a in range(d):
        step = np.zeros(d, dtype=int)
        step[a] = 1
        for v, w in zip(idx(coords), idx(coords + step)):
            edges.add((int(min(v, w)), int(max(v, w))))
    gens = []
    for a in range(d):
        shifted = coords.copy()
        shifted[:, a] += 1
        gens.append(idx(shifted).tolist())
        mirrored = coords.copy()
        # reflection about the midpoint of the first bond along the last axis
        mirrored[:, a] = (1 - mirrored[:, a]) if a == d - 1 else -mirrored[:, a]
        gens.append(idx(mirrored).tolist())
    for a in range(d - 1):
        swapped = coords.copy()
        swapped[:, [a, a + 1]] = swapped[:, [a + 1, a]]
        gens.append(idx(swapped).tolist())
    return sorted(edges), gens


def _complete(n):
    edges = list(itertools.combinations(range(n), 2))
    gens = []
    for i in range(n - 1):
        p = list(range(n))
        p[i], p[i + 1] = p[i + 1], p[i]
        gens.append(p)
    return edges, gens


def _honeycomb(L):
    # site (x, y, s): s = 0 for the A sublattice, 1 for B; B(x, y) sits at A(x, y) + (a1 + a2) / 3
    def index(x, y, s):
        return 2 * ((x % L) * L + (y % L)) + s

    def neighbors(v):
        cell, s = divmod(v, 2)
        x, y = divmod(cell, L)
        if s == 0:
            return [index(x, y, 1), index(x - 1, y, 1), index(x, y - 1, 1)]
        return [index(x, y, 0), index(x + 1, y, 0), index(x, y + 1, 0)]

    n = 2 * L * L
    edges = _edges_from_neighbors(n, neighbors)
    sites = [(x, y, s) for x in range(L) for y in range(L) for s in (0, 1)]
    tx = [index(x + 1, y, s) for x, y, s in sites]
    ty = [index(x, y + 1, s) for x, y, s in sites]
    # 120 degree rotation about A(0, 0): (x, y) -> (-x - y, x), B picks up a shift
    c3 = [index(-x - y, x, 0) if s == 0 else index(-x - y - 1, x, 1) for x, y, s in sites]
    # inversion through the midpoint of the bond A(0,0)-B(0,0)
    inv = [index(-x, -y, 1 - s) for x, y, s in sites]
    return edges, [tx, ty, c3, inv]


def _triangular(L):
    def index(x, y):
        return (x % L) * L + (y % L)

    steps = [(1, 0), (0, 1), (1, 1), (-1, 0), (0, -1), (-1, -1)]

    def neighbors(v):
        x, y = divmod(v, L)
        return [index(x + dx, y + dy) for dx, dy in steps]

    n = L * L
    edges = _edges_from_neighbors(n, neighbors)
    sites = [(x, y) for x in range(L) for y in range(L)]
    tx = [index(x + 1, y) for x, y in sites]
    ty = [index(x, y + 1) for x, y in sites]
    c6 = [index(x - y, x) for x, y in sites]
    # point reflection about the midpoint of bond (0,0)-(0,1)
    inv = [index(-x, 1 - y) for x, y in sites]
    return edges, [tx, ty, c6, inv]


def build_graph(spec: GraphSpec) -> Graph:
    """Construct the catalog graph described by ``spec``."""
    fam = spec.family
    if fam == "ring":
        edges, gens = _ring(spec.n)
    elif fam == "torus":
        edges, gens = _torus(spec.n, spec.dim)
    elif fam == "complete":
        edges, gens = _complete(spec.n)
    elif fam == "honeycomb_torus":
        edges, gens = _honeycomb(spec.size)
    elif fam == "triangular_torus":
        edges, gens = _triangular(spec.size)
    else:
        edges, gens = _PLATONIC[spec.name]
    return Graph(
        n=spec.n_vertices,
        edges=tuple(edges),
        generators=tuple(tuple(g) for g in gens),
        name=spec.descriptor,
        family=fam,
    )


@dataclass(frozen=True)
class SymmetryReport:
    ok: bool
    vertex_transitive: bool
    edge_transitive: bool
    swap_available: bool
    group_order: int | None = None
    reasons: tuple = ()

    def __bool__(self):
        return self.ok


def _orbit(start, generators, act):
    seen = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for g in generators:
            y = act(g, x)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


def check_symmetric_graph(g: Graph, edge=None, order=False, cap=None) -> SymmetryReport:
    """Certify that the stored generators make ``g`` a symmetric graph.

    Transitivity is decided from orbits under the generators: the orbit of
    vertex 0 must be every vertex, the orbit of the designated edge every
    edge, and the orbit of the directed edge ``(k, l)`` must contain
    ``(l, k)``, which is equivalent to some group element swapping ``k``
    and ``l``. Orbits are exact and never enumerate the group, so large
    groups (e.g. the symmetric group of a big mean-field cluster) are fine.

    With ``order=True`` the group is also closed explicitly (see
    :func:`gaussfrust.groups.group_closure`) to report its order; this can
    raise :class:`~gaussfrust.errors.GroupTooLargeError`.
    """
    reasons = []
    gens = [tuple(p) for p in g.generators]
    if not g.edges:
        return SymmetryReport(False, False, False, False, reasons=("graph has no edges",))
    if not gens:
        reasons.append("no symmetry generators stored")
    k, l = g.designated_edge if edge is None else edge
    if (min(k, l), max(k, l)) not in set(g.edges):
        raise ParameterError(f"({k}, {l}) is not an edge")

    vertices = _orbit(0, gens, lambda p, v: p[v])
    vt = len(vertices) == g.n
    if not vt:
        reasons.append(f"vertex orbits split: orbit of 0 has {len(vertices)} of {g.n} vertices")

    def act_edge(p, e):
        a, b = p[e[0]], p[e[1]]
        return (a, b) if a < b else (b, a)

    edges = _orbit((min(k, l), max(k, l)), gens, act_edge)
    et = len(edges) == len(g.edges)
    if not et:
        reasons.append(f"edge orbits split: orbit of ({k}, {l}) has {len(edges)} of {len(g.edges)} edges")

    arcs = _orbit((k, l), gens, lambda p, e: (p[e[0]], p[e[1]]))
    swap = (l, k) in arcs
    if not swap:
        reasons.append(f"no symmetry exchanges {k} and {l}")

    group_order = None
    if order:
        from .groups import group_closure

        group_order = group_closure(gens, n=g.n, cap=cap).order
    return SymmetryReport(vt and et and swap, vt, et, swap, group_order, tuple(reasons))


def require_symmetric(g: Graph) -> None:
    report = check_symmetric_graph(g)
    if not report.ok:
        raise NotSymmetricGraphError(f"{g.name} is not a symmetric graph: " + "; ".join(report.reasons))


def parse_graph(text: str, name: str = "custom") -> Graph:
    """Read the plain-text graph format.

    One directive per line: ``n <N>``, ``e <k> <l>`` (0-based) and
    ``g <image of 0> ... <image of N-1>``. Blank lines and ``#`` comments
    are ignored. The graph is rejected unless it is symmetric.
    """
    n = None
    edges, gens = [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tag, *rest = line.split()
        try:
            values = [int(x) for x in rest]
        except ValueError:
            raise ParameterError(f"line {lineno}: non-integer field in {raw!r}") from None
        if tag == "n" and len(values) == 1:
            n = values[0]
        elif tag == "e" and len(values) == 2:
            edges.append(tuple(values))
        elif tag == "g":
            gens.append(values)
        else:
            raise ParameterError(f"line {lineno}: cannot parse {raw!r}")
    if n is None or n < 1:
        raise ParameterError("missing or invalid 'n' line")
    g = Graph(n=n, edges=tuple(edges), generators=tuple(gens), name=name)
    require_symmetric(g)
    return g


def format_graph(g: Graph) -> str:
    lines = [f"n {g.n}"]
    lines += [f"e {k} {l}" for k, l in g.edges]
    lines += ["g " + " ".join(map(str, p)) for p in g.generators]
    return "\n".join(lines) + "\n"
