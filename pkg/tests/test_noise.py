import math

import numpy as np
import pytest

from grade import NotFoundError, ValidationError
from grade import noise
from grade.grover import SearchSpec, build_grover_circuit
from grade.noise import NoiseProfile, get_profile, load_profiles, preset_profiles, run_noisy
from grade.scoring import ScoreParams, compute_score, counts_to_distribution
from grade.statevector import Circuit, sample_counts, simulate

from conftest import I2, X2, Z2, dense_gate, random_circuit

Y2 = np.array([[0, -1j], [1j, 0]])


def test_presets():
    names = [p.name for p in preset_profiles()]
    assert names[:4] == ["noiseless", "nisq-low", "nisq-medium", "nisq-high"]
    quiet = get_profile("noiseless")
    assert (quiet.p1, quiet.p2, quiet.p_readout) == (0, 0, 0)
    med = get_profile("nisq-medium")
    assert (med.p1, med.p2, med.p_readout) == (0.001, 0.02, 0.02)
    assert get_profile("nisq-low").p2 == 0.005
    assert get_profile("nisq-high").p_readout == 0.05


def test_unknown_profile():
    with pytest.raises(NotFoundError):
        get_profile("ibm-fake")


@pytest.mark.parametrize("field", ["p1", "p2", "p_readout"])
@pytest.mark.parametrize("value", [-0.1, 1.5])
def test_profile_rates_validated(field, value):
    with pytest.raises(ValidationError):
        NoiseProfile("bad", **{field: value})


def test_profile_name_required():
    with pytest.raises(ValidationError):
        NoiseProfile("  ")


def test_mcx_cost_model():
    p = NoiseProfile("p")
    assert [p.mcx_cost(c) for c in (1, 2, 5)] == [1, 3, 9]
    assert NoiseProfile("q", mcx_cost_slope=0, mcx_cost_offset=0).mcx_cost(4) == 1


def test_noise_slots_count():
    circ = Circuit(3).h(0).mcx([0, 1], 2).x(2)
    ops, qubits, probs = noise._noise_slots(circ, NoiseProfile("p", p1=0.1, p2=0.2))
    # h: 1 slot, mcx: 3 qubits x (2*2-1) = 9 slots, x: 1 slot
    assert len(ops) == 11
    assert list(ops).count(1) == 9
    assert sorted(set(qubits[ops == 1])) == [0, 1, 2]
    assert set(probs[ops == 1]) == {0.2}


def test_load_profiles_from_yaml(tmp_path):
    path = tmp_path / "cfg.yaml"
    path.write_text(
        "profiles:\n"
        "  - {name: flaky, p1: 0.01, p2: 0.1, p_readout: 0.03}\n"
        "  - {name: nisq-low, p1: 0.0, p2: 0.001, p_readout: 0.0, mcx_cost_slope: 1, mcx_cost_offset: 0}\n"
    )
    reg = load_profiles(path)
    assert reg["flaky"].p2 == 0.1
    assert reg["nisq-low"].p2 == 0.001
    assert "nisq-high" in reg


@pytest.mark.parametrize(
    "entries",
    [
        [{"name": "a"}, {"name": "a"}],
        [{"p1": 0.1}],
        [{"name": "a", "bogus": 1}],
        [{"name": "a", "p2": 2}],
        "not-a-list",
    ],
)
def test_load_profiles_rejects(entries):
    with pytest.raises(ValidationError):
        load_profiles({"profiles": entries})


def test_zero_noise_equivalence(backend):
    rng = np.random.default_rng(5)
    for seed in range(5):
        circ = random_circuit(4, 30, rng)
        assert run_noisy(circ, get_profile("noiseless"), 500, seed) == sample_counts(simulate(circ), 500, seed)


def test_certain_readout_flip(backend):
    counts = run_noisy(Circuit(2), NoiseProfile("flip", p_readout=1.0), 100, 0)
    assert counts.counts == {"11": 100}


def test_determinism(backend):
    plan = build_grover_circuit(SearchSpec(3, ("101",)))
    prof = get_profile("nisq-medium")
    assert run_noisy(plan.full_circuit, prof, 400, 9) == run_noisy(plan.full_circuit, prof, 400, 9)
    assert run_noisy(plan.full_circuit, prof, 400, 9) != run_noisy(plan.full_circuit, prof, 400, 10)


def test_rejects_zero_shots():
    with pytest.raises(ValidationError):
        run_noisy(Circuit(1), get_profile("noiseless"), 0, 0)


def test_checkpoint_stride_does_not_change_results(monkeypatch):
    plan = build_grover_circuit(SearchSpec(4, ("0110",)))
    prof = NoiseProfile("p", p1=0.01, p2=0.02, p_readout=0.01)
    ref = run_noisy(plan.full_circuit, prof, 300, 2)
    monkeypatch.setattr(noise, "CHECKPOINT_BUDGET", 50)
    assert run_noisy(plan.full_circuit, prof, 300, 2) == ref


def test_chunking_does_not_change_results(monkeypatch):
    plan = build_grover_circuit(SearchSpec(3, ("011",)))
    prof = NoiseProfile("p", p1=0.01, p2=0.05)
    ref = run_noisy(plan.full_circuit, prof, 300, 4)
    monkeypatch.setattr(noise, "DRAW_BUDGET", 200)
    assert run_noisy(plan.full_circuit, prof, 300, 4) == ref


def _target_mass(counts, targets):
    return compute_score(counts_to_distribution(counts), targets, ScoreParams(0, 0)).p_target


def test_high_noise_lowers_target_mass():
    spec = SearchSpec(3, ("110",))
    circ = build_grover_circuit(spec).full_circuit
    low = np.mean([_target_mass(run_noisy(circ, get_profile("nisq-low"), 1000, s), spec.targets) for s in range(10)])
    high = np.mean([_target_mass(run_noisy(circ, get_profile("nisq-high"), 1000, s), spec.targets) for s in range(10)])
    assert high < low


@pytest.mark.parametrize("q", [0.05, 0.2])
def test_readout_marginality(q):
    n, shots = 3, 20000
    circ = Circuit(n).x(0).x(2)
    counts = run_noisy(circ, NoiseProfile("ro", p_readout=q), shots, 8)
    expected = (1 - q) ** n
    sigma = math.sqrt(expected * (1 - expected) / shots)
    assert abs(counts.counts["101"] / shots - expected) <= 3 * sigma


def _pauli_on(pauli, q, n):
    m = np.array([[1.0 + 0j]])
    for k in reversed(range(n)):
        m = np.kron(m, pauli if k == q else I2)
    return m


def density_matrix_distribution(circ, profile):
    """Exact output distribution of the depolarizing model by density-matrix evolution."""
    n = circ.num_qubits
    dim = 1 << n
    rho = np.zeros((dim, dim), dtype=complex)
    rho[0, 0] = 1
    paulis = [[_pauli_on(P, q, n) for P in (X2, Y2, Z2)] for q in range(n)]
    for op in circ.ops:
        u = dense_gate(op, n)
        rho = u @ rho @ u.conj().T
        p, mult = (profile.p2, profile.mcx_cost(len(op.controls))) if op.controls else (profile.p1, 1)
        for q in op.qubits:
            for _ in range(mult):
                rho = (1 - p) * rho + (p / 3) * sum(P @ rho @ P.conj().T for P in paulis[q])
    probs = np.real(np.diag(rho))
    # independent readout flips per bit
    for q in range(n):
        flipped = probs[np.arange(dim) ^ (1 << q)]
        probs = (1 - profile.p_readout) * probs + profile.p_readout * flipped
    return probs


@pytest.mark.parametrize("seed", [0, 1])
def test_trajectories_match_density_matrix(seed):
    plan = build_grover_circuit(SearchSpec(3, ("100",)))
    profile = NoiseProfile("dm", p1=0.02, p2=0.04, p_readout=0.03)
    exact = density_matrix_distribution(plan.full_circuit, profile)
    shots = 20000
    counts = run_noisy(plan.full_circuit, profile, shots, seed)
    emp = np.zeros(8)
    for k, v in counts.counts.items():
        emp[int(k, 2)] = v / shots
    tv = 0.5 * np.abs(emp - exact).sum()
    assert tv < 0.02
