import numpy as np
import pytest

from grade import kernels
from grade.statevector import GateKind, GateOp, Circuit, Statevector

I2 = np.eye(2)
H2 = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
X2 = np.array([[0, 1], [1, 0]])
Z2 = np.diag([1, -1])


def dense_gate(op: GateOp, n: int) -> np.ndarray:
    """Explicit 2^n x 2^n matrix, built without the simulator's kernels."""
    if not op.controls:
        single = {GateKind.H: H2, GateKind.X: X2, GateKind.Z: Z2}[op.kind]
        m = np.array([[1.0]])
        # qubit 0 is least significant, so it is the rightmost kron factor
        for q in reversed(range(n)):
            m = np.kron(m, single if q == op.target else I2)
        return m.astype(complex)
    dim = 1 << n
    m = np.zeros((dim, dim), dtype=complex)
    for j in range(dim):
        bits = [(j >> q) & 1 for q in range(n)]
        on = all(bits[c] for c in op.controls)
        if op.kind is GateKind.MCX:
            i = j ^ (1 << op.target) if on else j
            m[i, j] = 1
        else:
            m[j, j] = -1 if on and bits[op.target] else 1
    return m


def dense_circuit(circuit: Circuit) -> np.ndarray:
    dim = 1 << circuit.num_qubits
    u = np.eye(dim, dtype=complex)
    for op in circuit.ops:
        u = dense_gate(op, circuit.num_qubits) @ u
    return u


def random_state(n: int, rng: np.random.Generator) -> Statevector:
    v = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return Statevector(n, v / np.linalg.norm(v))


def random_op(n: int, rng: np.random.Generator) -> GateOp:
    kinds = [GateKind.H, GateKind.X, GateKind.Z] + ([GateKind.MCX, GateKind.MCZ] if n > 1 else [])
    kind = kinds[rng.integers(len(kinds))]
    target = int(rng.integers(n))
    if kind in (GateKind.MCX, GateKind.MCZ):
        others = [q for q in range(n) if q != target]
        k = int(rng.integers(1, len(others) + 1))
        controls = tuple(int(c) for c in rng.choice(others, size=k, replace=False))
        return GateOp(kind, target, controls)
    return GateOp(kind, target)


def random_circuit(n: int, n_ops: int, rng: np.random.Generator) -> Circuit:
    return Circuit(n, [random_op(n, rng) for _ in range(n_ops)])


def fidelity(a: np.ndarray, b: np.ndarray) -> float:
    return abs(np.vdot(a, b)) ** 2


@pytest.fixture(params=sorted(kernels.BACKENDS))
def backend(request, monkeypatch):
    """Run a test once per available kernel backend."""
    mod = kernels.BACKENDS[request.param]
    monkeypatch.setattr(kernels, "apply_ops", mod.apply_ops)
    monkeypatch.setattr(kernels, "run_trajectories", mod.run_trajectories)
    return request.param


ACCEPTANCE_RESULTS: list[tuple[str, bool, str]] = []


def record_criterion(label: str, passed: bool, detail: str = "") -> None:
    """Log an acceptance criterion outcome; printed in the terminal summary."""
    ACCEPTANCE_RESULTS.append((label, bool(passed), detail))
    assert passed, f"{label}: {detail}"


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for label, passed, detail in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] {label}  {detail}")
