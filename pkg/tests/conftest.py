import numpy as np
import pytest

from gaussfrust.graphs import PLATONIC_NAMES, GraphSpec


def catalog_specs(max_n=64):
    """Every catalog family at a few sizes, restricted to ``max_n`` vertices."""
    specs = [GraphSpec("ring", n=n) for n in range(3, 17)]
    specs += [GraphSpec("complete", n=n) for n in range(3, 11)]
    specs += [GraphSpec("torus", n=n, dim=2) for n in (3, 4, 5, 6, 8)]
    specs += [GraphSpec("torus", n=n, dim=3) for n in (3, 4)]
    specs += [GraphSpec("honeycomb_torus", size=L) for L in (3, 4, 5)]
    specs += [GraphSpec("triangular_torus", size=L) for L in (3, 4, 5, 6)]
    specs += [GraphSpec("platonic", name=name) for name in PLATONIC_NAMES]
    return [s for s in specs if s.n_vertices <= max_n]


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)
