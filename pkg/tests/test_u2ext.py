"""U(2) extension machinery: decomposition, residuals, spectral condition."""

import cmath
import math

import numpy as np
import pytest

from singular_sae.errors import NotUnitaryError
from singular_sae.u2ext import (
    SIGMA_1,
    BoundaryPair,
    ExtensionSpec,
    connection_residual,
    decompose,
    is_separated,
    matrix_from_json,
    matrix_to_json,
    named_extension,
    recompose,
    scale_of,
    scale_params,
    spectral_condition,
    validate_unitary,
)

PI = math.pi


def random_spec(rng, L0=1.0):
    return ExtensionSpec(rng.uniform(0, 2 * PI), rng.uniform(0, 2 * PI),
                         rng.uniform(0, PI), rng.uniform(0, 2 * PI), L0)


class TestDecompose:
    def test_minus_identity(self):
        spec = decompose(-np.eye(2, dtype=complex))
        assert spec.theta_plus == pytest.approx(PI, abs=1e-14)
        assert spec.theta_minus == pytest.approx(PI, abs=1e-14)
        assert spec.mu == 0.0 and spec.nu == 0.0

    def test_diag_one_minus_one(self):
        spec = decompose(np.diag([1.0, -1.0]).astype(complex))
        assert spec.theta_plus == pytest.approx(0.0, abs=1e-14)
        assert spec.theta_minus == pytest.approx(PI, abs=1e-14)
        assert spec.mu == pytest.approx(0.0, abs=1e-13)

    def test_sigma1(self):
        # hand eigenproblem: sigma_1 has phases (0, pi), +1-eigenvector
        # (1, 1)/sqrt(2), so mu = pi/2
        spec = decompose(SIGMA_1)
        assert spec.theta_plus == pytest.approx(0.0, abs=1e-14)
        assert spec.theta_minus == pytest.approx(PI, abs=1e-14)
        assert spec.mu == pytest.approx(PI / 2, abs=1e-12)

    def test_not_unitary(self):
        with pytest.raises(NotUnitaryError):
            decompose(np.array([[1.0, 0.1], [0.0, 1.0]], dtype=complex))
        with pytest.raises(NotUnitaryError):
            validate_unitary(np.eye(3, dtype=complex))


class TestRecompose:
    def test_identity_and_minus(self):
        assert np.allclose(recompose(ExtensionSpec(0, 0, 0.3, 0.7)), np.eye(2),
                           atol=1e-15)
        assert np.allclose(recompose(ExtensionSpec(PI, PI, 1.1, 0.2)),
                           -np.eye(2), atol=1e-14)

    def test_sigma1(self):
        u = recompose(ExtensionSpec(0.0, PI, PI / 2, 0.0))
        assert np.max(np.abs(u - SIGMA_1)) < 1e-14

    def test_roundtrip_property(self):
        rng = np.random.default_rng(42)
        worst = 0.0
        for _ in range(100):
            u = recompose(random_spec(rng))
            u2 = recompose(decompose(u))
            worst = max(worst, float(np.max(np.abs(u - u2))))
        assert worst < 1e-10


class TestScaleParams:
    def test_theta_pi_gives_zero(self):
        sp = scale_params(ExtensionSpec(PI, PI, 0, 0, L0=1.0))
        assert sp.l_plus == 0.0 and sp.l_minus == 0.0

    def test_quarter_turn(self):
        assert scale_of(PI / 2, 1.0) == pytest.approx(1.0, abs=1e-15)

    def test_oracle_value(self):
        theta = 2 * PI * 0.9
        expected = 2.0 * math.cos(theta / 2) / math.sin(theta / 2)
        assert scale_of(theta, 2.0) == pytest.approx(expected, rel=1e-14)
        assert expected == pytest.approx(-6.155367074350508, rel=1e-10)

    def test_theta_zero_infinite(self):
        assert math.isinf(scale_of(0.0, 1.0))


class TestConnectionResidual:
    def test_minus_identity_kills_psi_prime(self):
        bp = BoundaryPair(np.zeros(2), np.array([3.0 + 1j, -2.0]))
        res = connection_residual(-np.eye(2), bp, 0.7)
        assert np.max(np.abs(res)) == 0.0

    def test_identity_kills_psi(self):
        bp = BoundaryPair(np.array([1.0, 2.0 - 1j]), np.zeros(2))
        res = connection_residual(np.eye(2), bp, 0.7)
        assert np.max(np.abs(res)) == 0.0

    def test_sigma1_symmetric_states(self):
        for c in (0.0, 1.3, -2.0 + 0.4j):
            bp = BoundaryPair(np.array([1.0, 1.0]), np.array([c, -c]))
            res = connection_residual(SIGMA_1, bp, 1.0)
            assert np.max(np.abs(res)) < 1e-14

    def test_linearity(self):
        rng = np.random.default_rng(9)
        u = recompose(random_spec(rng))
        p1 = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        q1 = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        p2 = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        q2 = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        a, b = 1.7 - 0.3j, -0.8 + 2.1j
        lhs = connection_residual(u, BoundaryPair(a * p1 + b * p2, a * q1 + b * q2), 1.0)
        rhs = a * connection_residual(u, BoundaryPair(p1, q1), 1.0) \
            + b * connection_residual(u, BoundaryPair(p2, q2), 1.0)
        assert np.max(np.abs(lhs - rhs)) < 1e-12


class TestSpectralCondition:
    def test_theta_pi(self):
        for xi in (-5.0, 0.0, 7.3):
            assert spectral_condition(PI, 1.0, xi) == pytest.approx(1.0, abs=1e-15)

    def test_theta_zero(self):
        assert spectral_condition(0.0, 2.0, 0.5) == pytest.approx(1.0, abs=1e-15)
        assert spectral_condition(0.0, 2.0, 0.0) == 0.0

    def test_quarter_turn_root(self):
        assert spectral_condition(PI / 2, 1.0, -1.0) == pytest.approx(0.0, abs=1e-15)

    def test_equivalence_with_scale_form(self):
        # w = 0 with finite xi implies xi = -1/L away from theta in {0, pi}
        rng = np.random.default_rng(17)
        for _ in range(50):
            theta = rng.uniform(0.1, 2 * PI - 0.1)
            if abs(theta - PI) < 0.1:
                continue
            L0 = rng.uniform(0.2, 3.0)
            ell = scale_of(theta, L0)
            xi = -1.0 / ell
            assert abs(spectral_condition(theta, L0, xi)) < 1e-9
            assert abs(xi + 1.0 / (L0 / math.tan(theta / 2))) < 1e-9


class TestSeparated:
    def test_diagonal(self):
        u = np.diag([cmath.exp(0.3j), cmath.exp(1.2j)])
        assert is_separated(u)

    def test_sigma1(self):
        assert not is_separated(SIGMA_1)

    def test_small_mu(self):
        u = recompose(ExtensionSpec(0.1, 2.0, 1e-9, 0.0))
        assert is_separated(u, tol=1e-6)


class TestNormEquality:
    def test_condition_satisfying_pairs(self):
        rng = np.random.default_rng(123)
        for _ in range(100):
            spec = random_spec(rng)
            u = recompose(spec)
            psi_plus = rng.standard_normal(2) + 1j * rng.standard_normal(2)
            psi_minus = u @ psi_plus
            assert abs(np.linalg.norm(psi_plus) - np.linalg.norm(psi_minus)) < 1e-12
            # and the residual of the reconstructed boundary pair vanishes
            L0 = spec.L0
            psi = (psi_plus + psi_minus) / 2.0
            psi_pr = (psi_plus - psi_minus) / (2j * L0)
            res = connection_residual(u, BoundaryPair(psi, psi_pr), L0)
            assert np.max(np.abs(res)) < 1e-11


class TestSerialization:
    def test_spec_json_roundtrip(self):
        spec = ExtensionSpec(0.4, 5.1, 2.2, 3.3, 1.7)
        assert ExtensionSpec.from_json(spec.to_json()) == spec

    def test_matrix_json_roundtrip(self):
        rng = np.random.default_rng(3)
        u = recompose(random_spec(rng))
        u2 = matrix_from_json(matrix_to_json(u))
        assert np.max(np.abs(u - u2)) == 0.0

    def test_named_extensions(self):
        assert np.allclose(recompose(named_extension("I")), np.eye(2))
        assert np.allclose(recompose(named_extension("-I")), -np.eye(2))
        assert np.allclose(recompose(named_extension("sx")), SIGMA_1)
        u = recompose(named_extension("diag:2.0,0.5"))
        assert np.allclose(u, np.diag([cmath.exp(2j), cmath.exp(0.5j)]))
        with pytest.raises(ValueError):
            named_extension("bogus")


def test_boundary_pair_requires_finite():
    with pytest.raises(ValueError):
        BoundaryPair(np.array([np.inf, 0.0]), np.zeros(2))
