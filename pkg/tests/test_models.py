import math

import numpy as np
import pytest

from minact.models import (
    DegenerateGroundStateWarning,
    FullyConnected,
    IsingChain,
    LandauZener,
    fc_hamiltonian,
    fc_thermodynamic_gap,
    fully_connected,
    ground_state,
    lz_gap,
    lz_hamiltonian,
    subspace_gap,
    subspace_hamiltonian,
    tfim_subspaces,
    timescales,
)


def test_lz_hamiltonian_eigenvalues():
    vals = np.linalg.eigvalsh(lz_hamiltonian(0.0, 1.0))
    assert vals == pytest.approx([-1.0, 1.0], abs=1e-14)
    vals = np.linalg.eigvalsh(lz_hamiltonian(10.0, 1.0))
    assert vals[1] - vals[0] == pytest.approx(2.0 * math.sqrt(101.0), rel=1e-14)


def test_lz_drive_norm_is_two():
    # || dH/dg ||_F^2 = ||sigma_z||_F^2 = 2
    dh = lz_hamiltonian(1.0, 1.0) - lz_hamiltonian(0.0, 1.0)
    assert np.sum(np.abs(dh) ** 2) == pytest.approx(2.0, abs=1e-14)


def test_lz_gap_values():
    assert lz_gap(0.0, 1.0) == pytest.approx(2.0)
    assert lz_gap(-10.0, 1.0) == pytest.approx(2.0 * math.sqrt(101.0), rel=1e-14)


def test_lz_gap_matches_eigensplitting():
    rng = np.random.default_rng(0)
    for g in rng.uniform(-20.0, 20.0, size=100):
        vals = np.linalg.eigvalsh(lz_hamiltonian(g, 1.3))
        assert abs((vals[1] - vals[0]) - lz_gap(g, 1.3)) < 1e-12


def test_lz_rejects_bad_delta():
    with pytest.raises(ValueError):
        lz_hamiltonian(0.0, -1.0)
    with pytest.raises(ValueError):
        LandauZener(delta=0.0)


def test_subspace_momenta():
    assert [m.k for m in tfim_subspaces(IsingChain(N=4))] == pytest.approx(
        [math.pi / 4, 3 * math.pi / 4]
    )
    modes = tfim_subspaces(IsingChain(N=20))
    assert len(modes) == 10
    assert modes[0].k == pytest.approx(math.pi / 20)


@pytest.mark.parametrize("n", range(4, 62, 2))
def test_subspace_count(n):
    assert len(tfim_subspaces(IsingChain(N=n))) == n // 2


def test_ising_chain_rejects_odd_or_tiny_n():
    for bad in (5, 2, 0, -4):
        with pytest.raises(ValueError):
            IsingChain(N=bad)


def test_subspace_splitting_matches_gap():
    k = math.pi / 20
    vals = np.linalg.eigvalsh(subspace_hamiltonian(k, 1.0, 1.0))
    # frozen: 8 sin(pi/40)
    assert vals[1] - vals[0] == pytest.approx(0.6276727658227596, rel=1e-12)
    assert vals[1] - vals[0] == pytest.approx(subspace_gap(k, 1.0, 1.0), rel=1e-12)
    vals = np.linalg.eigvalsh(subspace_hamiltonian(math.pi / 2, 0.0, 1.0))
    assert vals[1] - vals[0] == pytest.approx(4.0, rel=1e-14)


def test_subspace_gap_matches_eigensplitting_random():
    rng = np.random.default_rng(1)
    for _ in range(1000):
        n = int(rng.integers(2, 31)) * 2
        mode = tfim_subspaces(IsingChain(N=n))[int(rng.integers(0, n // 2))]
        g = float(rng.uniform(0.0, 2.0))
        vals = np.linalg.eigvalsh(mode.hamiltonian(g))
        assert abs((vals[1] - vals[0]) - mode.gap(g)) < 1e-12


def test_subspace_gap_minimum_location():
    # gap minimum over g sits at g* = cos k with value 4 omega sin k
    for k in (math.pi / 20, math.pi / 7, 2.0):
        g = np.linspace(-1.5, 2.5, 40001)
        gaps = subspace_gap(k, g, 1.0)
        i = int(np.argmin(gaps))
        assert g[i] == pytest.approx(math.cos(k), abs=1e-3)
        assert gaps[i] == pytest.approx(4.0 * math.sin(k), abs=1e-6)


def test_hermiticity():
    rng = np.random.default_rng(2)
    model = FullyConnected(eta=100.0, n_max=160)
    for g in rng.uniform(0.0, 0.95, size=10):
        for H in (
            lz_hamiltonian(g, 1.0),
            subspace_hamiltonian(math.pi / 10, g, 1.0),
            fc_hamiltonian(g, model),
        ):
            assert np.max(np.abs(H - H.conj().T)) < 1e-14


def test_fc_vacuum_limit():
    model = FullyConnected(eta=100.0, n_max=40)
    H = fc_hamiltonian(0.0, model)
    e, v = ground_state(H)
    assert e == pytest.approx(0.0, abs=1e-14)
    assert abs(v[0]) ** 2 == pytest.approx(1.0, abs=1e-14)
    # harmonic spectrum on the even sector: 0, 2, 4, ...
    vals = np.linalg.eigvalsh(H)
    assert vals[:3] == pytest.approx([0.0, 2.0, 4.0], abs=1e-12)


def test_fc_bandwidth():
    model = FullyConnected(eta=10.0, n_max=60)
    H = fc_hamiltonian(0.7, model)
    d = H.shape[0]
    for i in range(d):
        for j in range(d):
            if abs(i - j) > 2:
                assert H[i, j] == 0.0


def test_fc_rejects_out_of_range_g():
    model = FullyConnected(eta=10.0, n_max=40)
    with pytest.raises(ValueError):
        fc_hamiltonian(1.0, model)
    with pytest.raises(ValueError):
        fc_hamiltonian(-0.1, model)


def test_fc_truncation_ground_energy_converged():
    e160, _ = ground_state(fc_hamiltonian(0.9, FullyConnected(eta=100.0, n_max=160)))
    e240, _ = ground_state(fc_hamiltonian(0.9, FullyConnected(eta=100.0, n_max=240)))
    assert abs(e160 - e240) < 1e-10


def test_fully_connected_auto_truncation():
    model = fully_connected(eta=100.0, g_max=0.9, n_max=160)
    _, v = ground_state(fc_hamiltonian(0.9, model))
    assert float(np.sum(np.abs(v[-2:]) ** 2)) < 1e-10


def test_fc_gap_approaches_thermodynamic_limit():
    g = np.linspace(0.1, 0.9, 17)
    errs = {}
    for eta in (10.0, 100.0):
        model = fully_connected(eta=eta)
        diffs = []
        for gi in g:
            vals = np.linalg.eigvalsh(fc_hamiltonian(float(gi), model))
            diffs.append(abs((vals[1] - vals[0]) - fc_thermodynamic_gap(gi)))
        errs[eta] = np.mean(diffs)
    assert errs[100.0] < errs[10.0]


def test_ground_state_lz_sigma_x():
    e, v = ground_state(lz_hamiltonian(0.0, 1.0))
    assert e == pytest.approx(-1.0, rel=1e-14)
    ref = np.array([1.0, -1.0]) / math.sqrt(2.0)
    assert abs(abs(np.vdot(ref, v)) - 1.0) < 1e-12
    # phase convention: largest-magnitude amplitude real positive
    assert v[int(np.argmax(np.abs(v)))].real > 0


def test_ground_state_residual_random_hermitian():
    rng = np.random.default_rng(3)
    for _ in range(20):
        n = int(rng.integers(2, 12))
        A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        H = A + A.conj().T
        e, v = ground_state(H)
        assert np.linalg.norm(H @ v - e * v) < 1e-10


def test_ground_state_flags_degeneracy():
    with pytest.warns(DegenerateGroundStateWarning):
        ground_state(np.eye(2))


def test_ground_state_rejects_non_hermitian():
    with pytest.raises(ValueError):
        ground_state(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_timescales():
    assert timescales(LandauZener(delta=1.0)).tau_a == pytest.approx(1.0)
    ts = timescales(IsingChain(N=20))
    assert ts.tau_l == pytest.approx(5.0)
    assert ts.tau_a == pytest.approx(1.5981133053749154, rel=1e-12)
    ts = timescales(FullyConnected(eta=100.0), g_max=0.9)
    assert ts.tau_a == pytest.approx(1.5811388300841898, rel=1e-12)
    assert ts.tau_l is None
    with pytest.raises(ValueError):
        timescales(FullyConnected(eta=100.0))
