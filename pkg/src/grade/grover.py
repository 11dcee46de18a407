"""Search-space generation, phase oracle, diffusion and full Grover circuits."""
from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, ValidationError
from .statevector import MAX_QUBITS, Circuit, bitstring, is_bitstring

MAX_COUNT_TARGETS = 10
ORIGINS = ("by-count", "by-list", "explicit")


@dataclass(frozen=True)
class SearchSpec:
    num_qubits: int
    targets: tuple[str, ...]
    origin: str = "explicit"

    def __post_init__(self) -> None:
        n = self.num_qubits
        if not isinstance(n, int) or not 1 <= n <= MAX_QUBITS:
            raise CapacityError(f"num_qubits must be in [1, {MAX_QUBITS}], got {n!r}")
        if self.origin not in ORIGINS:
            raise ValidationError(f"unknown origin {self.origin!r}")
        targets = tuple(self.targets)
        object.__setattr__(self, "targets", targets)
        if not targets:
            raise ValidationError("a search needs at least one target")
        for t in targets:
            if not is_bitstring(t, n):
                raise ValidationError(f"target {t!r} is not a {n}-bit string")
        if len(set(targets)) != len(targets):
            raise ValidationError(f"duplicate targets in {list(targets)}")
        if len(targets) >= 1 << n:
            raise ValidationError(
                f"{len(targets)} targets leave no unmarked state in a space of {1 << n}"
            )

    @property
    def space_size(self) -> int:
        return 1 << self.num_qubits

    @property
    def num_targets(self) -> int:
        return len(self.targets)

    def as_dict(self) -> dict:
        return {
            "num_qubits": self.num_qubits,
            "space_size": self.space_size,
            "targets": list(self.targets),
            "origin": self.origin,
        }


@dataclass
class GroverPlan:
    spec: SearchSpec
    iterations: int
    oracle: Circuit
    diffusion: Circuit
    full_circuit: Circuit


def _draw_targets(space_size: int, num_targets: int, rng_seed: int) -> list[int]:
    rng = np.random.default_rng(rng_seed)
    return sorted(int(v) for v in rng.choice(space_size, size=num_targets, replace=False))


def generate_space_by_num_targets(num_targets: int, rng_seed: int) -> SearchSpec:
    """Default space of 2**num_targets states with random distinct targets."""
    if not isinstance(num_targets, int) or not 1 <= num_targets <= MAX_COUNT_TARGETS:
        raise ValidationError(f"num_targets must be in [1, {MAX_COUNT_TARGETS}], got {num_targets!r}")
    n = num_targets
    values = _draw_targets(1 << n, num_targets, rng_seed)
    return SearchSpec(n, tuple(bitstring(v, n) for v in values), "by-count")


def generate_space_for_target_list(target_list: Sequence[int]) -> SearchSpec:
    """Smallest space containing every listed target, with room for one unmarked state."""
    values = list(target_list)
    if not values:
        raise ValidationError("target list is empty")
    for v in values:
        if not isinstance(v, (int, np.integer)) or isinstance(v, bool) or v < 0:
            raise ValidationError(f"targets must be non-negative integers, got {v!r}")
    if len(set(values)) != len(values):
        raise ValidationError(f"duplicate targets in {values}")
    # bit_length(m) == ceil(log2(m + 1)) exactly, without float rounding
    n = max(1, int(max(values)).bit_length())
    if len(values) >= 1 << n:
        n += 1
    if n > MAX_QUBITS:
        raise CapacityError(f"targets need {n} qubits, cap is {MAX_QUBITS}")
    return SearchSpec(n, tuple(bitstring(int(v), n) for v in values), "by-list")


def generate_space_explicit(space_size: int, num_targets: int, rng_seed: int) -> SearchSpec:
    if not isinstance(space_size, int) or space_size < 2 or space_size & (space_size - 1):
        raise ValidationError(f"space_size must be a power of two >= 2, got {space_size!r}")
    n = space_size.bit_length() - 1
    if n > MAX_QUBITS:
        raise CapacityError(f"space_size {space_size} exceeds the {MAX_QUBITS}-qubit cap")
    if not isinstance(num_targets, int) or not 1 <= num_targets < space_size:
        raise ValidationError(
            f"num_targets must satisfy 1 <= M < N={space_size}, got {num_targets!r}"
        )
    values = _draw_targets(space_size, num_targets, rng_seed)
    return SearchSpec(n, tuple(bitstring(v, n) for v in values), "explicit")


def construct_oracle(targets: Iterable[str], num_qubits: int) -> Circuit:
    """Phase oracle flipping the sign of every target basis state."""
    targets = list(targets)
    for t in targets:
        if not is_bitstring(t, num_qubits):
            raise ValidationError(f"target {t!r} is not a {num_qubits}-bit string")
    if len(set(targets)) != len(targets):
        raise ValidationError(f"duplicate targets in {targets}")
    qc = Circuit(num_qubits, name="oracle")
    top = num_qubits - 1
    for t in targets:
        zeros = [q for q in range(num_qubits) if t[top - q] == "0"]
        for q in zeros:
            qc.x(q)
        if num_qubits == 1:
            # no control available for H-MCX-H
            qc.z(0)
        else:
            qc.h(top)
            qc.mcx(range(top), top)
            qc.h(top)
        for q in zeros:
            qc.x(q)
    return qc


def construct_diffusion(num_qubits: int) -> Circuit:
    """Reflection about the uniform superposition, up to a global phase."""
    qc = Circuit(num_qubits, name="diffusion")
    top = num_qubits - 1
    for q in range(num_qubits):
        qc.h(q)
    for q in range(num_qubits):
        qc.x(q)
    if num_qubits == 1:
        qc.z(0)
    else:
        qc.h(top)
        qc.mcx(range(top), top)
        qc.h(top)
    for q in range(num_qubits):
        qc.x(q)
    for q in range(num_qubits):
        qc.h(q)
    return qc


def optimal_iterations(space_size: int, num_targets: int) -> int:
    if not 1 <= num_targets < space_size:
        raise ValidationError(
            f"need 1 <= M < N for amplification, got N={space_size}, M={num_targets}"
        )
    theta = math.asin(math.sqrt(num_targets / space_size))
    return max(1, math.floor(math.pi / (4 * theta)))


def success_probability(space_size: int, num_targets: int, iterations: int) -> float:
    """Closed-form noiseless target mass after ``iterations`` rounds."""
    theta = math.asin(math.sqrt(num_targets / space_size))
    return math.sin((2 * iterations + 1) * theta) ** 2


def build_grover_circuit(spec: SearchSpec, iterations: int | None = None) -> GroverPlan:
    n = spec.num_qubits
    k = optimal_iterations(spec.space_size, spec.num_targets) if iterations is None else iterations
    if not isinstance(k, int) or k < 1:
        raise ValidationError(f"iterations must be a positive integer, got {k!r}")
    oracle = construct_oracle(spec.targets, n)
    diffusion = construct_diffusion(n)
    full = Circuit(n, name=f"grover-n{n}-m{spec.num_targets}-k{k}")
    for q in range(n):
        full.h(q)
    for _ in range(k):
        full.extend(oracle.ops)
        full.extend(diffusion.ops)
    return GroverPlan(spec, k, oracle, diffusion, full)
