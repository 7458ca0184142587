"""
Unit tests for the parametrized orthonormal bases
"""

import cmath
import math

import numpy as np
import pytest
from pydantic import ValidationError

from src.evaluation.verification import explicit_basis_2, explicit_basis_3
from src.jcwitness.basis import (
    BasisParams,
    build_basis,
    complement_coefficients,
    complement_vectors,
    head_coefficients,
    head_vector,
    level_frames,
    su_constraint,
    unitary_of,
)
from src.jcwitness.linalg_core import Ket
from src.utils.checks import validate_orthonormal


class TestBasisParams:
    """Test cases for BasisParams"""

    def test_counts(self):
        params = BasisParams.identity(4)
        assert params.angle_count == 6
        assert params.phase_count == 10
        assert [len(level) for level in params.angles] == [3, 2, 1, 0]
        assert [len(level) for level in params.phases] == [4, 3, 2, 1]

    def test_wrong_counts_rejected(self):
        with pytest.raises(ValidationError):
            BasisParams(n=2, angles=((0.1, 0.2), ()), phases=((0.0, 0.0), (0.0,)))
        with pytest.raises(ValidationError):
            BasisParams(n=2, angles=((0.1,), ()), phases=((0.0,), (0.0,)))
        with pytest.raises(ValueError):
            BasisParams.from_vector(3, [0.0] * 8)

    def test_angles_reduced_mod_two_pi(self):
        params = BasisParams(n=2, angles=((2 * math.pi + 0.5,), ()), phases=((0.0, 0.0), (0.0,)))
        assert params.angles[0][0] == pytest.approx(0.5)

    def test_vector_layout(self):
        values = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9]
        params = BasisParams.from_vector(3, values)
        assert params.angles == ((0.1, 0.2), (0.6,), ())
        assert params.phases == ((0.3, 0.4, 0.5), (0.7, 0.8), (0.9,))
        np.testing.assert_allclose(params.to_vector(), values)

    def test_frozen(self):
        params = BasisParams.identity(2)
        with pytest.raises(ValidationError):
            params.n = 3


class TestLevelVectors:
    """Test cases for head_vector and complement_vectors"""

    def setup_method(self):
        self.rng = np.random.default_rng(3)

    def test_head_norm_and_single_vector_level(self):
        coefficients = head_coefficients([0.3, 1.1], [0.2, 0.4, 0.9])
        assert np.sum(np.abs(coefficients) ** 2) == pytest.approx(1.0)
        single = head_vector([Ket.basis(2, 1)], [], [0.7])
        np.testing.assert_allclose(single.amplitudes, [0.0, cmath.exp(0.7j)])

    def test_complement_spans_orthogonal_space(self):
        for d in range(2, 7):
            theta = self.rng.uniform(0, math.pi, d - 1)
            phi = self.rng.uniform(0, 2 * math.pi, d)
            rows = np.vstack([head_coefficients(theta, phi), complement_coefficients(theta, phi)])
            assert validate_orthonormal(rows)

    def test_complement_in_given_level_basis(self):
        level = [Ket(np.array([1, 1, 0]) / math.sqrt(2)), Ket(np.array([1, -1, 0]) / math.sqrt(2))]
        head = head_vector(level, [0.4], [0.1, 0.2])
        others = complement_vectors(level, [0.4], [0.1, 0.2])
        assert len(others) == 1
        assert abs(head.inner(others[0])) < 1e-12
        assert abs(others[0].amplitudes[2]) < 1e-15

    def test_complement_needs_two_vectors(self):
        with pytest.raises(ValueError):
            complement_vectors([Ket.basis(2, 0)], [], [0.0])

    def test_parameter_count_mismatch(self):
        with pytest.raises(ValueError):
            head_vector(np.eye(3), [0.1], [0.0, 0.0, 0.0])
        with pytest.raises(ValueError):
            head_vector(np.eye(3), [0.1, 0.2], [0.0, 0.0])

    def test_derivative_rule(self):
        step = 1e-5
        for d in range(2, 7):
            theta = self.rng.uniform(0, math.pi, d - 1)
            phi = self.rng.uniform(0, 2 * math.pi, d)
            analytic = complement_coefficients(theta, phi)
            for k in range(1, d):
                pinned = theta.copy()
                pinned[:k - 1] = math.pi / 2
                plus, minus = pinned.copy(), pinned.copy()
                plus[k - 1] += step
                minus[k - 1] -= step
                numeric = (head_coefficients(plus, phi) - head_coefficients(minus, phi)) / (2 * step)
                np.testing.assert_allclose(numeric, analytic[k - 1], atol=1e-6)


class TestBuildBasis:
    """Test cases for build_basis and unitary_of"""

    def setup_method(self):
        self.rng = np.random.default_rng(7)

    def test_identity_parameters(self):
        for n in range(1, 6):
            np.testing.assert_array_equal(unitary_of(BasisParams.identity(n)), np.eye(n))

    def test_unitary_and_complete(self):
        for n in range(2, 9):
            for _ in range(20):
                u = unitary_of(BasisParams.random(n, self.rng))
                assert np.max(np.abs(u.conj().T @ u - np.eye(n))) < 1e-10
                projector_sum = sum(np.outer(row, row.conj()) for row in u)
                assert np.max(np.abs(projector_sum - np.eye(n))) < 1e-10

    def test_closed_form_n2(self):
        for _ in range(20):
            x = self.rng.uniform(0, 2 * math.pi, 4)
            np.testing.assert_allclose(unitary_of(BasisParams.from_vector(2, x)), explicit_basis_2(*x), atol=1e-12)

    def test_closed_form_n3(self):
        for _ in range(20):
            theta1, theta2, phi0, phi1, phi2, eta1, xi0, xi1, zeta0 = self.rng.uniform(0, 2 * math.pi, 9)
            params = BasisParams(
                n=3,
                angles=((theta1, theta2), (eta1,), ()),
                phases=((phi0, phi1, phi2), (xi0, xi1), (zeta0,)),
            )
            expected = explicit_basis_3(theta1, theta2, phi0, phi1, phi2, eta1, xi0, xi1, zeta0)
            np.testing.assert_allclose(unitary_of(params), expected, atol=1e-12)

    def test_determinant_law(self):
        for n in range(2, 7):
            params = BasisParams.random(n, self.rng)
            det = np.linalg.det(unitary_of(params))
            assert abs(det - cmath.exp(1j * params.determinant_phase())) < 1e-10

    def test_level_frames(self):
        params = BasisParams.random(4, self.rng)
        frames = level_frames(params)
        assert [len(frame.complement) for frame in frames] == [3, 2, 1, 0]
        heads = build_basis(params)
        for m, frame in enumerate(frames):
            for vector in frame.complement:
                for earlier in heads[:m + 1]:
                    assert abs(earlier.inner(vector)) < 1e-12


class TestSUConstraint:
    """Test cases for su_constraint"""

    def setup_method(self):
        self.rng = np.random.default_rng(13)

    def test_determinant_one(self):
        for n in range(1, 7):
            special = su_constraint(BasisParams.random(n, self.rng))
            assert abs(np.linalg.det(unitary_of(special)) - 1.0) < 1e-10

    def test_only_last_phase_changes(self):
        params = BasisParams.random(3, self.rng)
        special = su_constraint(params)
        assert special.angles == params.angles
        assert special.phases[:2] == params.phases[:2]

    def test_already_special_unchanged(self):
        params = BasisParams.identity(3)
        assert su_constraint(params) is params
