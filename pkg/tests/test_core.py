import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from states import random_density_matrix

from qcorrdyn.core import (
    DensityMatrix,
    apply_local_projectors,
    bloch_projectors,
    classical_example,
    hermitian_eigensystem,
    hermitian_eigenvalues,
    ket,
    maximally_mixed,
    mutual_information,
    partial_trace,
    quantum_example,
    shannon_entropy,
    singlet,
    validate_density_matrix,
    validate_reduced_state,
    von_neumann_entropy,
)
from qcorrdyn.errors import (
    IncompleteProjectorSet,
    InvalidStateError,
    NotHermitian,
    NotPositive,
    TraceNotOne,
)


class TestValidation:
    def test_accepts_valid_state(self):
        rho = validate_density_matrix(np.eye(4) / 4)
        assert isinstance(rho, DensityMatrix)
        assert not rho.entries.flags.writeable

    def test_not_hermitian(self):
        m = np.eye(4, dtype=complex) / 4
        m[0, 1] = 1e-6
        with pytest.raises(NotHermitian) as info:
            validate_density_matrix(m)
        assert info.value.magnitude == pytest.approx(1e-6)

    def test_trace(self):
        with pytest.raises(TraceNotOne):
            validate_density_matrix(np.eye(4) / 2)

    def test_not_positive(self):
        with pytest.raises(NotPositive) as info:
            validate_density_matrix(np.diag([0.6, 0.5, 0.0, -0.1]))
        assert info.value.magnitude == pytest.approx(0.1)

    def test_errors_share_base(self):
        for exc in (NotHermitian, TraceNotOne, NotPositive):
            assert issubclass(exc, InvalidStateError)
            assert issubclass(exc, ValueError)

    def test_roundoff_negative_is_clamped(self):
        rho = validate_density_matrix(np.diag([0.5 + 5e-11, 0.5, 0.0, -5e-11]))
        w = np.linalg.eigvalsh(rho.entries)
        assert w.min() >= 0.0
        assert np.trace(rho.entries).real == pytest.approx(1.0, abs=1e-14)

    def test_non_finite(self):
        m = np.eye(4) / 4
        m[0, 0] = np.nan
        with pytest.raises(NotHermitian):
            validate_density_matrix(m)

    def test_shape(self):
        with pytest.raises(ValueError):
            validate_density_matrix(np.eye(2) / 2)

    def test_reduced_state(self):
        r = validate_reduced_state(np.eye(2) / 2, "A")
        assert r.subsystem == "A"


class TestEigensystem:
    def test_two_by_two_example(self):
        m = np.array([[0.75, 0.25], [0.25, 0.25]])
        w = hermitian_eigenvalues(m)
        # roots of x^2 - x + 1/8
        expected = [(1 + 1 / math.sqrt(2)) / 2, (1 - 1 / math.sqrt(2)) / 2]
        assert np.allclose(w, expected, atol=1e-14)

    def test_diagonal_input(self):
        w = hermitian_eigenvalues(np.diag([0.1, 0.4, 0.2, 0.3]))
        assert np.allclose(w, [0.4, 0.3, 0.2, 0.1])

    def test_random_hermitian(self, rng):
        for _ in range(200):
            g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
            h = g + g.conj().T
            w, v = hermitian_eigensystem(h)
            assert np.all(np.diff(w) <= 0)
            assert np.allclose(v.conj().T @ v, np.eye(4), atol=1e-12)
            assert np.max(np.abs(h @ v - v * w)) < 1e-12 * max(1.0, np.linalg.norm(h))
            assert np.allclose(w, np.sort(np.linalg.eigvalsh(h))[::-1], atol=1e-12)

    def test_degenerate(self):
        w, v = hermitian_eigensystem(np.eye(4))
        assert np.allclose(w, 1.0)
        assert np.allclose(v.conj().T @ v, np.eye(4))


class TestEntropy:
    def test_pure_and_mixed(self):
        assert von_neumann_entropy(singlet()) == pytest.approx(0.0, abs=1e-12)
        assert von_neumann_entropy(maximally_mixed()) == pytest.approx(2.0, abs=1e-12)

    def test_shannon(self):
        assert shannon_entropy([0.5, 0.5]) == pytest.approx(1.0)
        assert shannon_entropy([1.0, 0.0]) == 0.0

    def test_bounds(self, rng, make_state):
        for _ in range(100):
            s = von_neumann_entropy(make_state(rng))
            assert 0.0 <= s <= 2.0


class TestPartialTrace:
    def test_product_state(self):
        psi = np.kron(ket("e"), ket("+"))
        rho = np.outer(psi, psi.conj())
        ra = partial_trace(rho, "A").entries
        rb = partial_trace(rho, "B").entries
        assert np.allclose(ra, np.diag([1, 0]))
        assert np.allclose(rb, np.full((2, 2), 0.5))

    def test_singlet_marginals(self):
        for side in "AB":
            assert np.allclose(partial_trace(singlet(), side).entries, np.eye(2) / 2)

    def test_against_reshape(self, rng, make_state):
        rho = make_state(rng)
        t = rho.reshape(2, 2, 2, 2)
        assert np.allclose(partial_trace(rho, "A").entries, np.trace(t, axis1=1, axis2=3))
        assert np.allclose(partial_trace(rho, "B").entries, np.trace(t, axis1=0, axis2=2))

    def test_bad_side(self):
        with pytest.raises(ValueError):
            partial_trace(np.eye(4) / 4, "C")


class TestMutualInformation:
    def test_examples(self):
        assert mutual_information(singlet()) == pytest.approx(2.0, abs=1e-12)
        assert mutual_information(maximally_mixed()) == pytest.approx(0.0, abs=1e-12)
        assert mutual_information(classical_example()) == pytest.approx(1.0, abs=1e-12)

    def test_non_negative_and_bounded(self, rng, make_state, make_pure):
        for k in range(1000):
            rho = make_pure(rng) if k % 4 == 0 else make_state(rng, rank=1 + k % 4)
            i = mutual_information(rho)
            assert -1e-12 <= i <= 2.0 + 1e-12


angles = st.tuples(st.floats(0, math.pi), st.floats(0, 2 * math.pi))


class TestProjectors:
    @given(angles)
    def test_pair_is_complete_and_orthogonal(self, ang):
        p0, p1 = bloch_projectors(*ang)
        assert np.allclose(p0 + p1, np.eye(2), atol=1e-14)
        assert np.allclose(p0 @ p0, p0, atol=1e-14)
        assert np.allclose(p0 @ p1, 0, atol=1e-14)

    def test_incomplete_pair(self):
        with pytest.raises(IncompleteProjectorSet):
            apply_local_projectors(np.eye(4) / 4, pa=(np.diag([1, 0]), np.diag([0, 0])))

    def test_classical_state_is_unchanged(self):
        rho = classical_example()
        z = (np.diag([1.0, 0.0]), np.diag([0.0, 1.0]))
        x = bloch_projectors(math.pi / 2, 0.0)
        out = apply_local_projectors(rho, pa=z, pb=x)
        assert np.allclose(out.entries, rho.entries, atol=1e-14)

    def test_quantum_example_is_disturbed_by_b_measurement(self):
        rho = quantum_example()
        for theta in np.linspace(0, math.pi, 7):
            out = apply_local_projectors(rho, pb=bloch_projectors(theta, 0.3))
            assert np.max(np.abs(out.entries - rho.entries)) > 1e-3

    @settings(max_examples=50, deadline=None)
    @given(angles, angles, st.integers(0, 2**31))
    def test_entropy_does_not_decrease(self, ang_a, ang_b, seed):
        m = random_density_matrix(np.random.default_rng(seed))
        out = apply_local_projectors(m, pa=bloch_projectors(*ang_a), pb=bloch_projectors(*ang_b))
        assert von_neumann_entropy(out) >= von_neumann_entropy(m) - 1e-10
