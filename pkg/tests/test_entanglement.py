import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gaussfrust.entanglement import (
    TwoModeStandardForm,
    eof_from_delta,
    epr_uncertainty_global,
    epr_uncertainty_local,
    pure_cm_from_xy,
    reduce_two_mode,
    standard_form,
)
from gaussfrust.errors import InvalidCovarianceMatrix, ParameterError
from gaussfrust.graphs import GraphSpec, build_graph
from gaussfrust.groups import group_closure, twirl_phase_space
from gaussfrust.linalg import CovarianceMatrix, validate_cm
from gaussfrust.oracle import analytic_optimum
from gaussfrust.solver import build_pair_edges, ground_cm

from conftest import catalog_specs


def two_mode_squeezed(r):
    c, s = math.cosh(2 * r), math.sinh(2 * r)
    return CovarianceMatrix.from_blocks([[c, s], [s, c]], [[c, -s], [-s, c]])


def pair(family, **kw):
    return build_pair_edges(build_graph(GraphSpec(family, **kw)))


class TestEoF:
    def test_separable(self):
        assert eof_from_delta(1.0) == 0.0
        assert eof_from_delta(3.0) == 0.0

    def test_known_values(self):
        assert eof_from_delta(1 / math.sqrt(2)) == pytest.approx(0.19737, abs=5e-6)
        assert eof_from_delta(2 / math.pi) == pytest.approx(0.2981, abs=5e-5)

    def test_agrees_with_textbook_form(self):
        for d in np.linspace(0.01, 0.99, 50):
            r = math.sqrt(d)
            cp, cm = (1 / r + r) ** 2 / 4, (1 / r - r) ** 2 / 4
            assert eof_from_delta(d) == pytest.approx(cp * math.log2(cp) - cm * math.log2(cm), rel=1e-12)

    def test_domain(self):
        for bad in (0.0, -1.0, float("nan")):
            with pytest.raises(ParameterError):
                eof_from_delta(bad)

    def test_strictly_decreasing(self):
        grid = np.linspace(1e-3, 1.0, 1000)
        values = np.array([eof_from_delta(d) for d in grid])
        assert np.all(np.diff(values) < 0)

    def test_diverges_at_zero(self):
        assert eof_from_delta(1e-12) > 15


class TestStandardForm:
    def test_vacuum(self):
        sf = standard_form(CovarianceMatrix.vacuum(2))
        assert (sf.n_a, sf.n_b, sf.k_q, sf.k_p) == pytest.approx((1, 1, 0, 0), abs=1e-12)

    def test_two_mode_squeezed(self):
        sf = standard_form(two_mode_squeezed(0.5))
        c, s = math.cosh(1), math.sinh(1)
        assert (sf.n_a, sf.n_b) == pytest.approx((c, c), rel=1e-12)
        assert sorted([sf.k_q, sf.k_p]) == pytest.approx([-s, s], rel=1e-12)
        assert sf.k_q >= sf.k_p
        assert epr_uncertainty_local(sf) == pytest.approx(math.exp(-1), rel=1e-12)

    def test_invariant_under_local_symplectic(self, rng):
        gamma = two_mode_squeezed(0.3).gamma
        phi, r = rng.uniform(0, 2 * np.pi, 2), rng.normal(size=2)
        S = np.zeros((4, 4))
        for mode in range(2):
            c, s = math.cos(phi[mode]), math.sin(phi[mode])
            block = np.array([[c, s], [-s, c]]) @ np.diag([math.exp(r[mode]), math.exp(-r[mode])])
            idx = [mode, mode + 2]
            S[np.ix_(idx, idx)] = block
        a = standard_form(CovarianceMatrix(gamma))
        b = standard_form(CovarianceMatrix(S @ gamma @ S.T))
        assert (b.n_a, b.n_b, b.k_q, b.k_p) == pytest.approx((a.n_a, a.n_b, a.k_q, a.k_p), abs=1e-10)

    def test_determinant_invariants(self, rng):
        cm = reduce_two_mode(ground_cm(pair("platonic", name="octahedron"), 1e-3), 0, 1)
        sf = standard_form(cm)
        g = cm.gamma
        C = g[np.ix_([0, 2], [1, 3])]
        assert sf.k_q * sf.k_p == pytest.approx(np.linalg.det(C), rel=1e-9)
        expected = (sf.n_a * sf.n_b - sf.k_q**2) * (sf.n_a * sf.n_b - sf.k_p**2)
        assert expected == pytest.approx(np.linalg.det(g), rel=1e-9)

    @settings(max_examples=50, deadline=None)
    @given(
        n=st.floats(1.0, 20.0),
        x=st.floats(-0.95, 0.95),
        y=st.floats(-0.95, 0.95),
    )
    def test_roundtrip(self, n, x, y):
        # |k| <= n - 1 keeps (n - |k_q|)(n - |k_p|) >= 1, so the state is physical
        kq, kp = max(x, y) * (n - 1), min(x, y) * (n - 1)
        if kq + kp < 0:
            kq, kp = -kp, -kq
        sf = TwoModeStandardForm(n, n, kq, kp)
        back = standard_form(sf.to_cm())
        assert (back.n_a, back.n_b, back.k_q, back.k_p) == pytest.approx((n, n, kq, kp), abs=1e-10 * n)

    def test_reconstruction_valid(self):
        assert validate_cm(TwoModeStandardForm(2.0, 2.0, 1.5, -1.0).to_cm()).ok

    def test_rejects_invalid(self):
        with pytest.raises(InvalidCovarianceMatrix):
            standard_form(CovarianceMatrix(0.5 * np.eye(4)))
        with pytest.raises(ParameterError):
            standard_form(CovarianceMatrix.vacuum(3))


class TestLocalUncertainty:
    def test_vacuum(self):
        d = epr_uncertainty_local(TwoModeStandardForm(1, 1, 0, 0))
        assert d == 1.0 and eof_from_delta(d) == 0.0

    def test_asymmetric_rejected(self):
        with pytest.raises(ParameterError, match="asymmetric"):
            epr_uncertainty_local(TwoModeStandardForm(1.0, 2.0, 0.5, 0.0))

    def test_matches_dense_s_grid(self):
        # inf_s tr[gamma (s h_+ (+) h_- / s)] with h_pm the EPR couplings, both pairings
        sf = TwoModeStandardForm(1.7, 1.7, 0.9, -1.1)
        g = sf.to_cm()
        hp = np.array([[1, 1], [1, 1]]) / 4
        hm = np.array([[1, -1], [-1, 1]]) / 4
        s = np.logspace(-4, 4, 200001)
        best = np.inf
        for a_mat, b_mat in ((hp, hm), (hm, hp)):
            a = np.sum(g.qq * a_mat)
            b = np.sum(g.pp * b_mat)
            best = min(best, np.min(s * a + b / s))
        assert epr_uncertainty_local(sf) == pytest.approx(best, rel=1e-7)

    def test_tetrahedron_ground_state(self):
        hp = pair("platonic", name="tetrahedron")
        deltas = [epr_uncertainty_local(standard_form(reduce_two_mode(ground_cm(hp, e), 0, 1))) for e in (1e-6, 1e-7)]
        ratio = math.sqrt(10)
        extrapolated = (ratio * deltas[1] - deltas[0]) / (ratio - 1)
        assert extrapolated == pytest.approx(1 / math.sqrt(2), abs=1e-6)


class TestReduction:
    def test_vacuum(self):
        np.testing.assert_array_equal(reduce_two_mode(CovarianceMatrix.vacuum(5), 1, 3).gamma, np.eye(4))

    def test_index_errors(self):
        for k, l in ((0, 0), (0, 5), (-1, 2)):
            with pytest.raises(ParameterError):
                reduce_two_mode(CovarianceMatrix.vacuum(5), k, l)

    def test_ring4_symmetric_and_edge_transitive(self):
        cm = ground_cm(pair("ring", n=4), 1e-4)
        a = standard_form(reduce_two_mode(cm, 0, 1))
        b = standard_form(reduce_two_mode(cm, 1, 2))
        assert a.n_a == pytest.approx(a.n_b, abs=1e-8)
        assert (a.n_a, a.k_q, a.k_p) == pytest.approx((b.n_a, b.k_q, b.k_p), abs=1e-8)
        assert validate_cm(reduce_two_mode(cm, 0, 1)).ok

    def test_ring3_against_analytic_regularised_value(self):
        # ring(3): H_+ spectrum (1/3, 1/12, 1/12), H_- spectrum (0, 1/4, 1/4)
        eps = 1e-5
        lp, lm = np.array([1 / 3, 1 / 12, 1 / 12]), np.array([0, 0.25, 0.25])
        a = np.sum(lp * np.sqrt((lm + eps) / (lp + eps)))
        b = np.sum(lm * np.sqrt((lp + eps) / (lm + eps)))
        sf = standard_form(reduce_two_mode(ground_cm(pair("ring", n=3), eps), 0, 1))
        assert sf.symmetric
        assert epr_uncertainty_local(sf) == pytest.approx(2 * math.sqrt(a * b), abs=1e-9)
        # the finite-eps gap is O(sqrt(eps)), here about 1.8e-3
        assert 0 < epr_uncertainty_local(sf) - math.sqrt(3) / 3 < 0.6 * math.sqrt(eps)


class TestGlobalUncertainty:
    def test_vacuum_gives_one(self):
        for spec in catalog_specs(20)[:10]:
            g = build_graph(spec)
            assert epr_uncertainty_global(CovarianceMatrix.vacuum(g.n), build_pair_edges(g)) == pytest.approx(1.0)

    def test_ring4_epsilon_scaling(self):
        # ring(4) has Delta(eps) = 1/2 + sqrt(eps / (1 + 4 eps)) in closed form
        hp = pair("ring", n=4)
        for eps in (1e-3, 1e-4, 1e-6):
            delta = epr_uncertainty_global(ground_cm(hp, eps), hp)
            assert delta == pytest.approx(0.5 + math.sqrt(eps / (1 + 4 * eps)), abs=1e-12)
        assert 0.5 < epr_uncertainty_global(ground_cm(hp, 1e-3), hp) < 0.55

    def test_noise_increases(self):
        hp = pair("ring", n=4)
        cm = ground_cm(hp, 1e-6)
        noisy = CovarianceMatrix(cm.gamma + 0.5 * np.eye(8))
        assert epr_uncertainty_global(noisy, hp) > epr_uncertainty_global(cm, hp)

    def test_rejects_non_invariant(self):
        hp = pair("ring", n=4)
        gamma = np.eye(8)
        gamma[0, 0] = 2.0
        with pytest.raises(ParameterError, match="twirl residual"):
            epr_uncertainty_global(CovarianceMatrix(gamma), hp)

    def test_mode_mismatch(self):
        with pytest.raises(ParameterError):
            epr_uncertainty_global(CovarianceMatrix.vacuum(3), pair("ring", n=4))

    @pytest.mark.parametrize("spec", catalog_specs(20), ids=lambda s: s.descriptor)
    def test_consistency_with_local(self, spec):
        g = build_graph(spec)
        hp = build_pair_edges(g)
        cm = ground_cm(hp, 1e-6)
        k, l = g.designated_edge
        local = epr_uncertainty_local(standard_form(reduce_two_mode(cm, k, l)))
        assert epr_uncertainty_global(cm, hp) == pytest.approx(local, abs=1e-7)

    @pytest.mark.parametrize("family,kw", [("ring", dict(n=5)), ("platonic", dict(name="octahedron")), ("torus", dict(n=3, dim=2))])
    def test_noise_monotonicity(self, family, kw, rng):
        g = build_graph(GraphSpec(family, **kw))
        hp = build_pair_edges(g)
        cm = ground_cm(hp, 1e-6)
        base = epr_uncertainty_global(cm, hp)
        G = group_closure(g.generators)
        for _ in range(20):
            B = rng.normal(size=(2 * g.n, 2 * g.n))
            M = B @ B.T
            M /= np.linalg.norm(M, 2)
            noisy = CovarianceMatrix(cm.gamma + twirl_phase_space(M, G))
            assert epr_uncertainty_global(noisy, hp) >= base - 1e-10


class TestPureState:
    def test_vacuum(self):
        np.testing.assert_array_equal(pure_cm_from_xy(np.eye(3)).gamma, np.eye(6))

    def test_squeezed_product(self):
        cm = pure_cm_from_xy(np.diag([math.e**2, math.e**-2]))
        np.testing.assert_allclose(cm.symplectic_eigenvalues(), [1, 1], atol=1e-8)

    def test_random_pure_states(self, rng):
        for n in (2, 4, 6):
            B = rng.normal(size=(n, n))
            Y = rng.normal(size=(n, n))
            cm = pure_cm_from_xy(B @ B.T + 0.1 * np.eye(n), (Y + Y.T) / 2)
            np.testing.assert_allclose(cm.symplectic_eigenvalues(), np.ones(n), atol=1e-8)

    def test_ring3_optimum(self):
        hp = pair("ring", n=3)
        cm = pure_cm_from_xy(analytic_optimum(hp))
        assert epr_uncertainty_global(cm, hp, check=False) == pytest.approx(math.sqrt(3) / 3, abs=1e-6)

    def test_rejects_bad_input(self):
        with pytest.raises(ParameterError):
            pure_cm_from_xy(np.diag([1.0, -1.0]))
        with pytest.raises(ParameterError):
            pure_cm_from_xy(np.eye(2), np.array([[0.0, 1.0], [0.0, 0.0]]))
