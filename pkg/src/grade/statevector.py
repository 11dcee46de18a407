"""Dense statevector simulation of the Grover gate set.

Basis index ``i`` is the state whose qubit ``q`` equals bit ``q`` of ``i``
(qubit 0 is least significant). Bitstrings are rendered with the highest
qubit first, so qubit 0 is the rightmost character.
"""
from __future__ import annotations

import enum
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import CapacityError, ValidationError
from .scoring import ProbabilityDistribution

MAX_QUBITS = 20
NORM_TOL = 1e-10


class GateKind(str, enum.Enum):
    H = "h"
    X = "x"
    Z = "z"
    MCX = "mcx"
    MCZ = "mcz"

    @property
    def multi(self) -> bool:
        return self in (GateKind.MCX, GateKind.MCZ)


_KIND_CODE = {
    GateKind.H: kernels.OP_H,
    GateKind.X: kernels.OP_X,
    GateKind.Z: kernels.OP_Z,
    GateKind.MCX: kernels.OP_MCX,
    GateKind.MCZ: kernels.OP_MCZ,
}


def bitstring(index: int, num_qubits: int) -> str:
    return format(index, f"0{num_qubits}b")


def is_bitstring(s: object, num_qubits: int) -> bool:
    return isinstance(s, str) and len(s) == num_qubits and all(c in "01" for c in s)


@dataclass(frozen=True)
class GateOp:
    """One gate. ``controls`` is normalized to an ascending tuple."""

    kind: GateKind
    target: int
    controls: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        try:
            kind = GateKind(self.kind)
        except ValueError:
            raise ValidationError(f"unknown gate kind {self.kind!r}") from None
        controls = tuple(sorted(int(c) for c in self.controls))
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "controls", controls)
        if kind.multi and not controls:
            raise ValidationError(f"{kind.value} needs at least one control")
        if not kind.multi and controls:
            raise ValidationError(f"{kind.value} takes no controls")
        if len(set(controls)) != len(controls):
            raise ValidationError(f"duplicate control qubits {controls}")
        if self.target in controls:
            raise ValidationError(f"qubit {self.target} is both control and target")
        if self.target < 0 or (controls and controls[0] < 0):
            raise ValidationError("qubit indices must be non-negative")

    @property
    def qubits(self) -> tuple[int, ...]:
        return self.controls + (self.target,)

    def check(self, num_qubits: int) -> None:
        if max(self.qubits) >= num_qubits:
            raise ValidationError(
                f"{self.kind.value} on qubits {self.qubits} exceeds {num_qubits}-qubit register"
            )


@dataclass
class Circuit:
    num_qubits: int
    ops: list[GateOp] = field(default_factory=list)
    name: str | None = None

    def __post_init__(self) -> None:
        if not isinstance(self.num_qubits, int) or self.num_qubits < 1:
            raise ValidationError(f"num_qubits must be a positive integer, got {self.num_qubits!r}")
        self.ops = list(self.ops)
        for op in self.ops:
            op.check(self.num_qubits)

    def __len__(self) -> int:
        return len(self.ops)

    def append(self, op: GateOp) -> Circuit:
        op.check(self.num_qubits)
        self.ops.append(op)
        return self

    def extend(self, ops: Iterable[GateOp]) -> Circuit:
        for op in ops:
            self.append(op)
        return self

    def h(self, q: int) -> Circuit:
        return self.append(GateOp(GateKind.H, q))

    def x(self, q: int) -> Circuit:
        return self.append(GateOp(GateKind.X, q))

    def z(self, q: int) -> Circuit:
        return self.append(GateOp(GateKind.Z, q))

    def mcx(self, controls: Sequence[int], target: int) -> Circuit:
        return self.append(GateOp(GateKind.MCX, target, tuple(controls)))

    def mcz(self, controls: Sequence[int], target: int) -> Circuit:
        return self.append(GateOp(GateKind.MCZ, target, tuple(controls)))

    def gate_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for op in self.ops:
            counts[op.kind.value] = counts.get(op.kind.value, 0) + 1
        return dict(sorted(counts.items()))

    def depth(self) -> int:
        level = [0] * self.num_qubits
        for op in self.ops:
            d = max(level[q] for q in op.qubits) + 1
            for q in op.qubits:
                level[q] = d
        return max(level, default=0)

    def encode(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Kernel encoding: (kind codes, control bitmasks, targets)."""
        kinds = np.fromiter((_KIND_CODE[op.kind] for op in self.ops), dtype=np.int64, count=len(self.ops))
        cmasks = np.fromiter(
            (sum(1 << c for c in op.controls) for op in self.ops), dtype=np.uint64, count=len(self.ops)
        )
        targets = np.fromiter((op.target for op in self.ops), dtype=np.int64, count=len(self.ops))
        return kinds, cmasks, targets


@dataclass(eq=False)
class Statevector:
    num_qubits: int
    amps: np.ndarray

    def __post_init__(self) -> None:
        _check_qubits(self.num_qubits)
        amps = np.ascontiguousarray(self.amps, dtype=np.complex128)
        if amps.shape != (1 << self.num_qubits,):
            raise ValidationError(
                f"expected {1 << self.num_qubits} amplitudes for {self.num_qubits} qubits, got shape {amps.shape}"
            )
        if not np.all(np.isfinite(amps)):
            raise ValidationError("amplitudes must be finite")
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValidationError(f"state is not normalized (squared norm {norm!r})")
        self.amps = amps

    @property
    def dim(self) -> int:
        return 1 << self.num_qubits

    def copy(self) -> Statevector:
        return Statevector(self.num_qubits, self.amps.copy())

    def norm_sq(self) -> float:
        return float(np.vdot(self.amps, self.amps).real)


@dataclass
class CountsMap:
    """Measurement histogram keyed by bitstring (qubit 0 rightmost)."""

    num_qubits: int
    counts: dict[str, int]
    shots: int

    def __post_init__(self) -> None:
        if not isinstance(self.num_qubits, int) or self.num_qubits < 1:
            raise ValidationError(f"num_qubits must be a positive integer, got {self.num_qubits!r}")
        if not isinstance(self.shots, int) or self.shots < 1:
            raise ValidationError(f"shots must be a positive integer, got {self.shots!r}")
        for key, value in self.counts.items():
            if not is_bitstring(key, self.num_qubits):
                raise ValidationError(f"bad bitstring {key!r} for {self.num_qubits} qubits")
            if not isinstance(value, int) or isinstance(value, bool) or value < 0:
                raise ValidationError(f"count for {key!r} must be a non-negative integer")
        total = sum(self.counts.values())
        if total != self.shots:
            raise ValidationError(f"counts sum to {total}, expected shots={self.shots}")
        self.counts = dict(sorted(self.counts.items()))

    @classmethod
    def from_indices(cls, indices: np.ndarray, num_qubits: int) -> CountsMap:
        hist = np.bincount(indices, minlength=1 << num_qubits)
        nz = np.flatnonzero(hist)
        counts = {bitstring(int(i), num_qubits): int(hist[i]) for i in nz}
        return cls(num_qubits, counts, int(indices.shape[0]))


def _check_qubits(num_qubits: int) -> None:
    if not isinstance(num_qubits, (int, np.integer)) or not 1 <= num_qubits <= MAX_QUBITS:
        raise CapacityError(f"num_qubits must be in [1, {MAX_QUBITS}], got {num_qubits!r}")


def new_zero_state(num_qubits: int) -> Statevector:
    _check_qubits(num_qubits)
    amps = np.zeros(1 << num_qubits, dtype=np.complex128)
    amps[0] = 1.0
    return Statevector(int(num_qubits), amps)


def apply_gate(state: Statevector, gate: GateOp) -> Statevector:
    gate.check(state.num_qubits)
    return apply_circuit(state, Circuit(state.num_qubits, [gate]))


def apply_circuit(state: Statevector, circuit: Circuit) -> Statevector:
    if circuit.num_qubits != state.num_qubits:
        raise ValidationError(
            f"circuit has {circuit.num_qubits} qubits but state has {state.num_qubits}"
        )
    psi = state.amps.copy()
    kernels.apply_ops(psi, *circuit.encode())
    out = Statevector.__new__(Statevector)
    out.num_qubits = state.num_qubits
    out.amps = psi
    return out


def probability_vector(state: Statevector) -> np.ndarray:
    v = state.amps.view(np.float64).reshape(-1, 2)
    return v[:, 0] * v[:, 0] + v[:, 1] * v[:, 1]


def probabilities(state: Statevector) -> ProbabilityDistribution:
    p = probability_vector(state)
    n = state.num_qubits
    return ProbabilityDistribution(n, {bitstring(i, n): float(p[i]) for i in range(p.shape[0])})


def draw_indices(state: Statevector, u: np.ndarray) -> np.ndarray:
    """Inverse-CDF sampling, identical to the kernels' per-shot draw."""
    cdf = np.cumsum(probability_vector(state))
    idx = np.searchsorted(cdf, u * cdf[-1], side="right")
    return np.minimum(idx, state.dim - 1)


def sample_counts(state: Statevector, shots: int, rng_seed: int) -> CountsMap:
    if not isinstance(shots, (int, np.integer)) or shots < 1:
        raise ValidationError(f"shots must be >= 1, got {shots!r}")
    rng = np.random.default_rng(rng_seed)
    return CountsMap.from_indices(draw_indices(state, rng.random(int(shots))), state.num_qubits)


def simulate(circuit: Circuit) -> Statevector:
    """Noiseless output state of ``circuit`` applied to |0...0>."""
    return apply_circuit(new_zero_state(circuit.num_qubits), circuit)
