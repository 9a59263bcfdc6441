import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from gaussfrust.errors import ConvergenceError, InvalidCovarianceMatrix, ParameterError, SingularMatrixError
from gaussfrust.linalg import (
    CovarianceMatrix,
    mat_func,
    sym_eig,
    symplectic_eigenvalues,
    symplectic_form,
    trace_norm,
    validate_cm,
)

RING3 = np.ones((3, 3)) - np.eye(3)


def random_symmetric(rng, n, scale=1.0):
    M = rng.normal(scale=scale, size=(n, n))
    return (M + M.T) / 2


def random_symplectic(rng, n):
    """Product of one-mode squeezers, phase rotations and passive mixers."""
    S = np.eye(2 * n)
    for _ in range(3):
        r = rng.normal(size=n)
        squeeze = np.diag(np.concatenate([np.exp(r), np.exp(-r)]))
        phi = rng.uniform(0, 2 * np.pi, size=n)
        c, s = np.diag(np.cos(phi)), np.diag(np.sin(phi))
        rotate = np.block([[c, s], [-s, c]])
        O, _ = np.linalg.qr(rng.normal(size=(n, n)))
        mix = np.block([[O, np.zeros((n, n))], [np.zeros((n, n)), O]])
        S = S @ squeeze @ rotate @ mix
    return S


class TestSymEig:
    def test_identity(self):
        w, V = sym_eig(np.eye(3))
        np.testing.assert_allclose(w, [1, 1, 1])
        np.testing.assert_allclose(V.T @ V, np.eye(3), atol=1e-12)

    def test_ring3_adjacency(self):
        w, _ = sym_eig(RING3)
        np.testing.assert_allclose(w, [2, -1, -1], atol=1e-12)

    def test_diagonal_gives_permutation_basis(self):
        w, V = sym_eig(np.diag([2.0, 5.0, -1.0]))
        np.testing.assert_allclose(w, [5, 2, -1])
        np.testing.assert_allclose(np.abs(V), [[0, 1, 0], [1, 0, 0], [0, 0, 1]])

    def test_descending_and_orthogonal(self, rng):
        M = random_symmetric(rng, 40)
        w, V = sym_eig(M)
        assert np.all(np.diff(w) <= 0)
        np.testing.assert_allclose(V.T @ V, np.eye(40), atol=1e-10)
        np.testing.assert_allclose(V @ np.diag(w) @ V.T, M, atol=1e-10 * np.linalg.norm(M))

    def test_matches_lapack(self, rng):
        M = random_symmetric(rng, 25)
        np.testing.assert_allclose(sym_eig(M)[0], np.linalg.eigvalsh(M)[::-1], atol=1e-12)

    def test_rejects_asymmetric_and_nonfinite(self):
        with pytest.raises(ParameterError):
            sym_eig([[1.0, 2.0], [0.0, 1.0]])
        with pytest.raises(ParameterError):
            sym_eig([[np.nan, 0.0], [0.0, 1.0]])

    def test_iteration_cap_reports_residual(self, rng):
        with pytest.raises(ConvergenceError) as info:
            sym_eig(random_symmetric(rng, 12), max_sweeps=1)
        assert info.value.residual > 0

    def test_tiny_off_diagonal_entries(self):
        M = np.diag([1.0, 2.0, 3.0])
        M[0, 1] = M[1, 0] = 1e-300
        with np.errstate(all="raise"):
            w, _ = sym_eig(M)
        np.testing.assert_allclose(w, [3, 2, 1])

    @settings(max_examples=40, deadline=None)
    @given(arrays(np.float64, (6, 6), elements=st.floats(-1e3, 1e3)))
    def test_reconstruction_property(self, A):
        M = (A + A.T) / 2
        w, V = sym_eig(M)
        np.testing.assert_allclose(V @ np.diag(w) @ V.T, M, atol=1e-9 * (1 + np.linalg.norm(M)))


class TestMatFunc:
    def test_sqrt_identity(self):
        np.testing.assert_allclose(mat_func(np.eye(4), "sqrt"), np.eye(4))

    def test_sqrt_diagonal(self):
        np.testing.assert_allclose(mat_func(np.diag([4.0, 9.0]), "sqrt"), np.diag([2.0, 3.0]), atol=1e-14)

    def test_inverse_of_ring3_plus(self):
        plus = (2 * np.eye(3) + RING3) / 12
        inv = mat_func(plus, "inv")
        np.testing.assert_allclose(np.sort(np.linalg.eigvalsh(inv)), [3, 12, 12], atol=1e-10)
        np.testing.assert_allclose(inv @ plus, np.eye(3), atol=1e-12)

    def test_singular_inverse_names_eigenvalue(self):
        with pytest.raises(SingularMatrixError) as info:
            mat_func(np.diag([1.0, 0.0]), "inv_sqrt")
        assert info.value.eigenvalue == pytest.approx(0.0)
        assert "singular matrix" in str(info.value)

    def test_sqrt_clamps_roundoff_negatives(self):
        R = mat_func(np.diag([1.0, -1e-13]), "sqrt")
        np.testing.assert_allclose(R, np.diag([1.0, 0.0]))

    def test_sqrt_rejects_negative_definite(self):
        with pytest.raises(ParameterError):
            mat_func(np.diag([1.0, -0.5]), "sqrt")

    def test_unknown_function(self):
        with pytest.raises(ParameterError):
            mat_func(np.eye(2), "log")

    def test_sqrt_squared(self, rng):
        B = rng.normal(size=(10, 10))
        M = B @ B.T
        R = mat_func(M, "sqrt")
        np.testing.assert_allclose(R @ R, M, atol=1e-9 * np.linalg.norm(M))

    def test_inv_sqrt_consistent(self, rng):
        B = rng.normal(size=(8, 8))
        M = B @ B.T + np.eye(8)
        S = mat_func(M, "inv_sqrt")
        np.testing.assert_allclose(S @ M @ S, np.eye(8), atol=1e-10)


class TestTraceNorm:
    def test_diagonal(self):
        assert trace_norm(np.diag([1.0, -2.0, 3.0])) == pytest.approx(6.0)

    def test_identity(self):
        assert trace_norm(np.eye(5)) == pytest.approx(5.0)

    def test_ring3_root(self):
        plus = (2 * np.eye(3) + RING3) / 12
        minus = (2 * np.eye(3) - RING3) / 12
        r = mat_func(plus, "sqrt")
        assert trace_norm(mat_func(r @ minus @ r, "sqrt")) == pytest.approx(np.sqrt(3) / 6, abs=1e-14)

    def test_commuting_bridge(self, rng):
        O, _ = np.linalg.qr(rng.normal(size=(7, 7)))
        a, b = rng.uniform(0, 2, 7), rng.uniform(0, 2, 7)
        A, B = O @ np.diag(a) @ O.T, O @ np.diag(b) @ O.T
        r = mat_func(A, "sqrt")
        assert trace_norm(mat_func(r @ B @ r, "sqrt")) == pytest.approx(np.sum(np.sqrt(a * b)), abs=1e-9)


class TestSymplectic:
    def test_form(self):
        s = symplectic_form(3)
        np.testing.assert_array_equal(s.T, -s)
        np.testing.assert_array_equal(s @ s.T, np.eye(6))
        assert not s.flags.writeable

    def test_identity(self):
        np.testing.assert_allclose(symplectic_eigenvalues(np.eye(8)), np.ones(4))

    def test_single_mode_diagonal(self):
        np.testing.assert_allclose(symplectic_eigenvalues(np.diag([2.0, 8.0])), [4.0])

    def test_ring4_pair(self):
        A = np.roll(np.eye(4), 1, axis=1)
        A = A + A.T
        plus = (np.eye(4) + A / 2) / 8
        minus = (np.eye(4) - A / 2) / 8
        d = symplectic_eigenvalues(np.block([[plus, np.zeros((4, 4))], [np.zeros((4, 4)), minus]]))
        np.testing.assert_allclose(d, [1 / 8, 1 / 8, 0, 0], atol=1e-14)
        assert 2 * d.sum() == pytest.approx(0.5)

    def test_odd_dimension(self):
        with pytest.raises(ParameterError):
            symplectic_eigenvalues(np.eye(3))

    def test_invariant_under_symplectic_congruence(self, rng):
        for n in (1, 2, 4):
            S = random_symplectic(rng, n)
            sigma = symplectic_form(n)
            np.testing.assert_allclose(S @ sigma @ S.T, sigma, atol=1e-9 * np.linalg.norm(S) ** 2)
            B = rng.normal(size=(2 * n, 2 * n))
            M = B @ B.T + 0.1 * np.eye(2 * n)
            before = symplectic_eigenvalues(M)
            after = symplectic_eigenvalues(S.T @ M @ S)
            np.testing.assert_allclose(after, before, rtol=1e-8)


class TestCovarianceMatrix:
    def test_vacuum_valid(self):
        report = validate_cm(CovarianceMatrix.vacuum(3))
        assert report.ok
        assert report.min_symplectic_eigenvalue == pytest.approx(1.0)

    def test_scaled_vacuum_invalid(self):
        report = validate_cm(CovarianceMatrix(0.5 * np.eye(4)))
        assert not report
        assert report.min_symplectic_eigenvalue == pytest.approx(0.5)

    def test_indefinite_invalid(self):
        assert not validate_cm(CovarianceMatrix(np.diag([1.0, -1.0])))

    def test_rejects_asymmetric(self):
        with pytest.raises(InvalidCovarianceMatrix):
            CovarianceMatrix(np.array([[1.0, 0.5], [0.0, 1.0]]))

    def test_rejects_odd_dimension(self):
        with pytest.raises(InvalidCovarianceMatrix):
            CovarianceMatrix(np.eye(3))

    def test_blocks(self):
        qq, pp, qp = np.diag([1.0, 2.0]), np.diag([3.0, 4.0]), np.array([[0.1, 0.2], [0.3, 0.4]])
        cm = CovarianceMatrix.from_blocks(qq, pp, qp)
        np.testing.assert_array_equal(cm.qq, qq)
        np.testing.assert_array_equal(cm.pp, pp)
        np.testing.assert_array_equal(cm.qp, qp)
        assert cm.n_modes == 2

    def test_immutable(self):
        cm = CovarianceMatrix.vacuum(1)
        with pytest.raises(ValueError):
            cm.gamma[0, 0] = 2.0

    def test_random_pure_state_valid(self, rng):
        S = random_symplectic(rng, 3)
        assert validate_cm(CovarianceMatrix(S @ S.T)).ok
