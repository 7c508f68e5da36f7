import math

import numpy as np
import pytest

from sqatoms import (
    AtomParams,
    BathParams,
    DensityMatrix,
    IntegratorConfig,
    StepUnderflowError,
    build_generator,
    evolve_to_stationary,
    fidelity_antisymmetric,
    integrate,
    propagate_expm,
    trajectory,
    two_atom_squeezed_state,
    unique_asymptotic,
)
from sqatoms.evolve import _integrate_adaptive, default_t_max, dp45_step
from sqatoms.liouvillian import make_collective_rhs
from sqatoms.model import COLLECTIVE, KET_A, KET_E, KET_G, KET_S

from conftest import random_atoms, random_bath, random_density


class TestIntegratorConfig:
    def test_rejects_nonpositive_fields(self):
        with pytest.raises(ValueError):
            IntegratorConfig(step=0.0)
        with pytest.raises(ValueError):
            IntegratorConfig(abs_tol=-1.0)
        with pytest.raises(ValueError):
            IntegratorConfig(t_max=0.0)

    def test_rejects_too_small_rel_tol(self):
        with pytest.raises(ValueError):
            IntegratorConfig(rel_tol=1e-15)


class TestIntegrate:
    def test_stationary_state_is_fixed(self):
        bath = BathParams(1.0, math.sqrt(2.0))
        atoms = AtomParams(gamma_hat=0.85, delta=0.5)
        rho_u = unique_asymptotic(bath, atoms)
        out = integrate(rho_u, bath, atoms, 5.0)
        assert np.max(np.abs(out.state.matrix - rho_u.matrix)) < 1e-9

    def test_vacuum_single_atom_exponential_decay(self):
        bath, atoms = BathParams(0.0), AtomParams(gamma_hat=0.0)
        out = integrate(DensityMatrix.from_pure(KET_E), bath, atoms, 1.0)
        assert out.state.matrix[0, 0].real == pytest.approx(math.exp(-2.0), abs=1e-8)

    def test_trace_and_hermiticity_preserved(self, rng):
        for _ in range(50):
            bath, atoms = random_bath(rng), random_atoms(rng, gh_hi=1.0)
            out = integrate(DensityMatrix(random_density(rng)), bath, atoms, 20.0)
            m = out.state.matrix
            assert abs(m.trace() - 1.0) < 1e-10
            assert np.max(np.abs(m - m.conj().T)) < 1e-10
            assert out.correction < 1e-10

    def test_agrees_with_matrix_exponential(self, rng):
        for _ in range(5):
            bath, atoms = random_bath(rng), random_atoms(rng)
            rho0 = DensityMatrix(random_density(rng))
            via_rk = integrate(rho0, bath, atoms, 3.0).state.matrix
            via_exp = propagate_expm(rho0, bath, atoms, 3.0).matrix
            assert np.max(np.abs(via_rk - via_exp)) < 1e-10

    def test_rejects_negative_duration(self):
        with pytest.raises(ValueError):
            integrate(DensityMatrix.from_pure(KET_G), BathParams(0.0),
                      AtomParams(gamma_hat=0.5), -1.0)


class TestStepper:
    def test_local_error_scales_at_nominal_order(self):
        bath = BathParams(0.7, 0.5, 1.1)
        atoms = AtomParams(gamma_hat=0.6, delta=-0.4, omega_dd=0.3)
        f = make_collective_rhs(bath, atoms)
        rho0 = DensityMatrix.from_pure((KET_G + KET_S) / math.sqrt(2.0))
        y0 = rho0.in_basis(COLLECTIVE).matrix

        def step_error(h):
            y5, _ = dp45_step(f, y0, h)
            ref = propagate_expm(rho0, bath, atoms, h).in_basis(COLLECTIVE).matrix
            y5 = (y5 + y5.conj().T) / 2.0
            y5 /= y5.trace().real
            return np.max(np.abs(y5 - ref))

        e1, e2 = step_error(0.2), step_error(0.1)
        rate = math.log2(e1 / e2)
        # fifth-order update: local error O(h^6)
        assert 4.5 < rate < 7.5

    def test_step_underflow_on_stiff_problem(self):
        f = lambda y: -1e18 * y
        with pytest.raises(StepUnderflowError):
            _integrate_adaptive(f, np.ones((4, 4), dtype=complex), 1.0, IntegratorConfig())


class TestEvolveToStationary:
    def test_separated_regime_reaches_unique_state(self):
        bath = BathParams(1.0, math.sqrt(2.0))
        atoms = AtomParams(gamma_hat=0.85)
        res = evolve_to_stationary(DensityMatrix.from_pure(KET_G), bath, atoms)
        assert res.converged
        assert np.max(np.abs(res.state.matrix - unique_asymptotic(bath, atoms).matrix)) < 1e-8

    def test_dicke_zero_fidelity_reaches_squeezed_state(self):
        bath = BathParams.minimum_uncertainty(1.0)
        atoms = AtomParams(gamma_hat=1.0)
        res = evolve_to_stationary(DensityMatrix.from_pure(KET_G), bath, atoms)
        psi = two_atom_squeezed_state(1.0, math.pi)
        assert res.converged
        assert np.max(np.abs(res.state.matrix - np.outer(psi, psi.conj()))) < 1e-8

    def test_antisymmetric_state_is_left_alone(self):
        bath = BathParams(2.0, 1.3, 0.9)
        atoms = AtomParams(gamma_hat=1.0, delta=0.4)
        res = evolve_to_stationary(DensityMatrix.from_pure(KET_A), bath, atoms)
        assert res.converged
        assert np.max(np.abs(res.state.matrix - np.outer(KET_A, KET_A.conj()))) < 1e-10

    def test_not_converged_flag_on_short_horizon(self):
        bath = BathParams(1.0, math.sqrt(2.0))
        atoms = AtomParams(gamma_hat=0.85)
        res = evolve_to_stationary(
            DensityMatrix.from_pure(KET_G), bath, atoms, IntegratorConfig(t_max=0.5)
        )
        assert not res.converged
        assert res.residual > 1e-10
        assert res.state.matrix.trace().real == pytest.approx(1.0, abs=1e-12)

    def test_dicke_fidelity_conserved_along_trajectory(self):
        bath = BathParams.minimum_uncertainty(1.5, 0.7)
        atoms = AtomParams(gamma_hat=1.0, delta=0.3)
        v = KET_G + 0.6 * KET_A + 0.3 * KET_S
        rho0 = DensityMatrix.from_pure(v / np.linalg.norm(v))
        f0 = fidelity_antisymmetric(rho0)
        times = np.linspace(0.0, 15.0, 16)
        for state in trajectory(rho0, bath, atoms, times):
            assert abs(fidelity_antisymmetric(state) - f0) < 1e-9

    def test_monotone_approach_bounded_by_spectral_gap(self):
        bath = BathParams(1.0, 0.8, 0.4)
        atoms = AtomParams(gamma_hat=0.7, delta=0.3)
        gen = build_generator(bath, atoms)
        rates = -np.linalg.eigvals(gen.matrix).real
        gap = rates[rates > 1e-9].min()
        rho_inf = unique_asymptotic(bath, atoms).matrix
        rho0 = DensityMatrix.from_pure(KET_E)
        d0 = np.linalg.norm(rho0.matrix - rho_inf)
        for t in (1.0, 2.0, 4.0, 8.0):
            dist = np.linalg.norm(integrate(rho0, bath, atoms, t).state.matrix - rho_inf)
            assert dist <= 2.0 * d0 * math.exp(-gap * t)

    def test_trajectory_requires_sorted_times(self):
        with pytest.raises(ValueError):
            trajectory(DensityMatrix.from_pure(KET_G), BathParams(0.0),
                       AtomParams(gamma_hat=0.5), [1.0, 0.5])


class TestDefaultHorizon:
    def test_scales_with_slowest_mode_in_separated_regime(self):
        bath = BathParams(1.0, 0.5)
        short = default_t_max(bath, AtomParams(gamma_hat=0.2))
        long = default_t_max(bath, AtomParams(gamma_hat=0.99))
        assert long > short

    def test_finite_in_dicke_limit(self):
        assert default_t_max(BathParams(1.0, math.sqrt(2.0)), AtomParams(gamma_hat=1.0)) < 1e4
