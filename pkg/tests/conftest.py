"""Shared draw helpers for randomized checks (seeded, not hypothesis-based)."""
import numpy as np
import pytest

from sqatoms import AtomParams, BathParams


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)


def random_density(rng, dim: int = 4) -> np.ndarray:
    """Random full-rank density matrix (Ginibre construction)."""
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = g @ g.conj().T
    return rho / rho.trace()


def random_pure(rng, dim: int = 4) -> np.ndarray:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_bath(rng, n_lo: float = 0.05, n_hi: float = 3.0,
                frac_hi: float = 1.0) -> BathParams:
    n = rng.uniform(n_lo, n_hi)
    frac = rng.uniform(0.0, frac_hi)
    return BathParams(n, frac * np.sqrt(n * (n + 1.0)), rng.uniform(0.0, 2.0 * np.pi))


def random_atoms(rng, gamma_hat: float | None = None, gh_hi: float = 0.97,
                 with_omega: bool = True) -> AtomParams:
    gh = rng.uniform(0.0, gh_hi) if gamma_hat is None else gamma_hat
    return AtomParams(
        gamma_hat=gh,
        delta=rng.uniform(-2.0, 2.0),
        omega_dd=rng.uniform(-1.0, 1.0) if with_omega else 0.0,
    )


def random_x_state(rng) -> np.ndarray:
    """Random physical X-form density matrix."""
    pops = rng.dirichlet(np.ones(4))
    r14 = rng.uniform(0.0, 1.0) * np.sqrt(pops[0] * pops[3])
    r23 = rng.uniform(0.0, 1.0) * np.sqrt(pops[1] * pops[2])
    ph14 = np.exp(1j * rng.uniform(0.0, 2.0 * np.pi))
    ph23 = np.exp(1j * rng.uniform(0.0, 2.0 * np.pi))
    rho = np.diag(pops).astype(complex)
    rho[0, 3] = r14 * ph14
    rho[3, 0] = np.conj(rho[0, 3])
    rho[1, 2] = r23 * ph23
    rho[2, 1] = np.conj(rho[1, 2])
    return rho
