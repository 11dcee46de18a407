"""The compiled kernels and the numpy fallback must agree bit for bit."""
import numpy as np
import pytest

from grade import kernels
from grade.grover import build_grover_circuit, generate_space_explicit
from grade.noise import NoiseProfile, run_noisy

from conftest import random_circuit, random_state

needs_compiled = pytest.mark.skipif("cython" not in kernels.BACKENDS, reason="extension not built")


def test_backend_selected():
    assert kernels.BACKEND in kernels.BACKENDS
    assert kernels.apply_ops is kernels.BACKENDS[kernels.BACKEND].apply_ops


@needs_compiled
@pytest.mark.parametrize("n", [1, 2, 4, 6])
def test_apply_ops_bitwise_parity(n):
    rng = np.random.default_rng(n)
    for _ in range(10):
        circ = random_circuit(n, 40, rng)
        enc = circ.encode()
        a = random_state(n, rng).amps
        b = a.copy()
        kernels.BACKENDS["cython"].apply_ops(a, *enc)
        kernels.BACKENDS["python"].apply_ops(b, *enc)
        assert a.tobytes() == b.tobytes()


@needs_compiled
@pytest.mark.parametrize("N, M", [(8, 1), (32, 3)])
def test_trajectory_parity(monkeypatch, N, M):
    plan = build_grover_circuit(generate_space_explicit(N, M, 4))
    profile = NoiseProfile("p", p1=0.01, p2=0.03, p_readout=0.02)
    results = {}
    for name, mod in kernels.BACKENDS.items():
        monkeypatch.setattr(kernels, "apply_ops", mod.apply_ops)
        monkeypatch.setattr(kernels, "run_trajectories", mod.run_trajectories)
        results[name] = run_noisy(plan.full_circuit, profile, 300, 17)
    assert results["cython"] == results["python"]


@needs_compiled
def test_trajectory_parity_with_checkpoint_stride(monkeypatch):
    from grade import noise

    monkeypatch.setattr(noise, "CHECKPOINT_BUDGET", 64)
    plan = build_grover_circuit(generate_space_explicit(16, 1, 4))
    profile = NoiseProfile("p", p1=0.02, p2=0.02)
    results = {}
    for name, mod in kernels.BACKENDS.items():
        monkeypatch.setattr(kernels, "apply_ops", mod.apply_ops)
        monkeypatch.setattr(kernels, "run_trajectories", mod.run_trajectories)
        results[name] = run_noisy(plan.full_circuit, profile, 200, 3)
    assert results["cython"] == results["python"]
