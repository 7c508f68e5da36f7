"""Acceptance suite: one test per release criterion, each printing a
PASS line with the measured worst case (run with -s or -v to see them)."""
import math
import re
from pathlib import Path

import numpy as np

from sqatoms import (
    AtomParams,
    BathParams,
    DensityMatrix,
    build_generator,
    concurrence,
    concurrence_unique,
    concurrence_x,
    decompose,
    dicke_asymptotic,
    critical_fidelity,
    evolve_to_stationary,
    fidelity_antisymmetric,
    stationary_space,
    thresholds,
    trajectory,
    unique_asymptotic,
)
from sqatoms.cli import main
from sqatoms.model import KET_G

from conftest import random_atoms, random_bath, random_density, random_x_state

DATA = Path(__file__).parent / "data"


def report(label, value, bound):
    print(f"PASS {label}: worst {value:.3e} (bound {bound:.1e})")


def test_criterion_1_closed_forms_are_stationary(rng):
    worst_sep = 0.0
    for _ in range(200):
        bath, atoms = random_bath(rng), random_atoms(rng)
        gen = build_generator(bath, atoms)
        resid = np.max(np.abs(gen.apply(unique_asymptotic(bath, atoms))))
        worst_sep = max(worst_sep, resid)
    assert worst_sep <= 1e-10
    worst_dic = 0.0
    for _ in range(200):
        bath = random_bath(rng)
        atoms = AtomParams(gamma_hat=1.0, delta=rng.uniform(-2, 2),
                           omega_dd=rng.uniform(-1, 1))
        gen = build_generator(bath, atoms)
        rho = dicke_asymptotic(bath, atoms, rng.uniform(0, 1))
        worst_dic = max(worst_dic, np.max(np.abs(gen.apply(rho))))
    assert worst_dic <= 1e-10
    report("criterion 1 stationarity (separated)", worst_sep, 1e-10)
    report("criterion 1 stationarity (Dicke)", worst_dic, 1e-10)


def test_criterion_2_nullspace_oracle(rng):
    worst = 0.0
    for _ in range(25):
        bath, atoms = random_bath(rng), random_atoms(rng, gh_hi=0.95)
        res = stationary_space(build_generator(bath, atoms))
        assert res.dimension == 1
        diff = np.max(np.abs(res.states[0].matrix - unique_asymptotic(bath, atoms).matrix))
        worst = max(worst, diff)
    assert worst <= 1e-9
    for _ in range(25):
        bath = random_bath(rng)
        atoms = AtomParams(gamma_hat=1.0, delta=rng.uniform(0.05, 2.0) * rng.choice([-1, 1]))
        res = stationary_space(build_generator(bath, atoms))
        assert res.dimension == 2
    report("criterion 2 nullspace state match", worst, 1e-9)


def test_criterion_3_dynamics_reach_the_closed_forms(rng):
    worst = 0.0
    worst_drift = 0.0
    for k in range(20):
        bath = random_bath(rng, frac_hi=0.95)
        rho0 = DensityMatrix(random_density(rng))
        if k % 2 == 0:
            atoms = random_atoms(rng, gh_hi=0.9, with_omega=False)
            target = unique_asymptotic(bath, atoms)
        else:
            atoms = AtomParams(gamma_hat=1.0, delta=rng.uniform(-1.5, 1.5))
            target = dicke_asymptotic(bath, atoms, fidelity_antisymmetric(rho0))
            f0 = fidelity_antisymmetric(rho0)
            for state in trajectory(rho0, bath, atoms, np.linspace(0.0, 8.0, 5)):
                worst_drift = max(worst_drift, abs(fidelity_antisymmetric(state) - f0))
        res = evolve_to_stationary(rho0, bath, atoms)
        assert res.converged, (bath, atoms)
        worst = max(worst, np.max(np.abs(res.state.matrix - target.matrix)))
    assert worst <= 1e-7
    assert worst_drift <= 1e-9
    report("criterion 3 relaxation vs closed form", worst, 1e-7)
    report("criterion 3 Dicke fidelity drift", worst_drift, 1e-9)


def test_criterion_4_concurrence_oracles(rng):
    worst_x = 0.0
    for _ in range(500):
        rho = random_x_state(rng)
        worst_x = max(worst_x, abs(concurrence_x(rho) - concurrence(rho)))
    assert worst_x <= 1e-10
    worst_u = 0.0
    for _ in range(100):
        bath, atoms = random_bath(rng), random_atoms(rng)
        diff = abs(concurrence_unique(bath, atoms) - concurrence(unique_asymptotic(bath, atoms)))
        worst_u = max(worst_u, diff)
    assert worst_u <= 1e-9
    report("criterion 4 X-formula vs eigenvalues", worst_x, 1e-10)
    report("criterion 4 closed form vs constructive", worst_u, 1e-9)


def test_criterion_5_threshold_identities(rng):
    for _ in range(1000):
        bath = random_bath(rng, n_lo=0.0)
        atoms = AtomParams(gamma_hat=1.0, delta=rng.uniform(-2, 2))
        thr = thresholds(bath, atoms)
        assert thr.f2 >= thr.f_cr - 1e-12
        assert thr.f1 <= thr.f2 + 1e-12
    vac = thresholds(BathParams(0.0), AtomParams(gamma_hat=1.0))
    assert vac.f2 == 0.0
    for n in (0.4, 1.0, 2.6):
        th = thresholds(BathParams(n), AtomParams(gamma_hat=1.0, delta=0.5))
        assert th.f1 == 0.0 and th.f2 > 0.0
    worst = 0.0
    for n in (0.2, 1.0, 3.0):
        thr = thresholds(BathParams.minimum_uncertainty(n), AtomParams(gamma_hat=1.0))
        expected = 2 * math.sqrt(n * (n + 1)) / (2 * math.sqrt(n * (n + 1)) + 1 + 2 * n)
        worst = max(worst, abs(thr.f1 - expected), abs(thr.f2 - expected))
    assert worst <= 1e-12
    report("criterion 5 min-uncertainty threshold", worst, 1e-12)


def test_criterion_6_zero_fidelity_entanglement():
    c0 = 2.0 * math.sqrt(2.0) / 3.0
    bath = BathParams.minimum_uncertainty(1.0)
    atoms = AtomParams(gamma_hat=1.0)
    res = evolve_to_stationary(DensityMatrix.from_pure(KET_G), bath, atoms)
    assert res.converged
    got = concurrence(res.state)
    assert abs(got - c0) <= 1e-7
    res_th = evolve_to_stationary(DensityMatrix.from_pure(KET_G), BathParams(1.0), atoms)
    assert concurrence(res_th.state) == 0.0
    report("criterion 6 squeezed-bath concurrence", abs(got - c0), 1e-7)


def _load_csv(path):
    lines = path.read_text().strip().splitlines()
    meta = [re.sub(r"v\d+\.\d+\.\d+", "vX", ln) for ln in lines if ln.startswith("#")]
    body = [ln for ln in lines if not ln.startswith("#")]
    rows = np.array([[float(v) for v in ln.split(",")] for ln in body[1:]])
    return meta, body[0], rows


def test_criterion_7_figure_snapshots(tmp_path, capsys):
    jobs = [
        ("fig1", ["fig1", "--points", "61"]),
        ("fig2", ["fig2", "--points", "51"]),
        ("fig3", ["fig3", "--points", "61"]),
    ]
    worst = 0.0
    for name, argv in jobs:
        out = tmp_path / f"{name}.csv"
        assert main(argv + ["--out", str(out)]) == 0
        meta, header, rows = _load_csv(out)
        meta_ref, header_ref, rows_ref = _load_csv(DATA / f"{name}_snapshot.csv")
        assert meta == meta_ref
        assert header == header_ref
        assert rows.shape == rows_ref.shape
        worst = max(worst, float(np.max(np.abs(rows - rows_ref))))
    assert worst <= 1e-10
    report("criterion 7 figure snapshot drift", worst, 1e-10)


def test_criterion_7_figure_shapes(rng):
    # unique-state scan: interior maxima, detuning ordering
    ns = np.linspace(0.0, 3.0, 301)
    curves = []
    for delta in (0.0, 0.5, 1.0):
        atoms = AtomParams(gamma_hat=0.85, delta=delta)
        curves.append(np.array([
            concurrence_unique(BathParams.minimum_uncertainty(n), atoms) for n in ns
        ]))
    for c in curves:
        imax = int(c.argmax())
        assert 0 < imax < len(ns) - 1 and c[imax] > 0.0
        # single interior maximum: rises to the peak, then falls away
        assert np.all(np.diff(c[: imax + 1]) >= -1e-12)
        assert np.all(np.diff(c[imax:]) <= 1e-12)
    assert np.all(curves[0] >= curves[1] - 1e-12) and np.all(curves[1] >= curves[2] - 1e-12)

    # fidelity scan at N = 1, delta = 0.8: affine outside [F1, F2], zero inside
    from sqatoms import asymptotic_concurrence

    bath = BathParams.minimum_uncertainty(1.0)
    atoms = AtomParams(gamma_hat=1.0, delta=0.8)
    thr = thresholds(bath, atoms)
    fs = np.linspace(0.0, 1.0, 401)
    cs = np.array([asymptotic_concurrence(bath, atoms, f) for f in fs])
    assert cs[-1] == 1.0
    inside = (fs > thr.f1 + 1e-9) & (fs < thr.f2 - 1e-9)
    assert np.all(cs[inside] == 0.0)
    for seg in (fs < thr.f1 - 1e-9, fs > thr.f2 + 1e-9):
        assert np.max(np.abs(np.diff(cs[seg], n=2))) < 1e-10

    # zero-fidelity scan: detuning ordering and saturation toward 1
    ns = np.linspace(0.0, 6.0, 121)
    cols = {}
    for delta in (0.0, 0.8, 2.0):
        atoms = AtomParams(gamma_hat=1.0, delta=delta)
        cols[delta] = np.array([
            asymptotic_concurrence(BathParams.minimum_uncertainty(n), atoms, 0.0) for n in ns
        ])
    assert np.all(cols[0.0] >= cols[0.8] - 1e-12)
    assert np.all(cols[0.8] >= cols[2.0] - 1e-12)
    assert cols[0.0][-1] > 0.97 and np.all(np.diff(cols[0.0]) >= -1e-12)
    print("PASS criterion 7 figure shape properties")


def test_criterion_8_mixture_reconstruction(rng):
    worst = 0.0
    for _ in range(200):
        bath = random_bath(rng)
        atoms = AtomParams(gamma_hat=1.0, delta=rng.uniform(-2, 2))
        f_cr = critical_fidelity(bath, atoms)
        f = rng.uniform(f_cr, 1.0)
        mix = decompose(bath, atoms, f)
        assert -1e-12 <= mix.p <= 1.0 + 1e-12
        assert -1e-12 <= mix.q <= 1.0 + 1e-12
        target = dicke_asymptotic(bath, atoms, f)
        worst = max(worst, np.max(np.abs(mix.reconstruction().matrix - target.matrix)))
    assert worst <= 1e-10
    report("criterion 8 reconstruction residual", worst, 1e-10)
