"""Stochastic Pauli-trajectory noise and readout flips for emulated backends.

Random numbers come from one generator seeded by the caller, consumed in a
fixed order: one measurement uniform per shot, then one uniform per
(shot, noise slot) in shot-major chunks, then one uniform per
(shot, qubit) for readout. A slot fires when its uniform ``u`` is below the
slot probability ``p``; the Pauli is then ``floor(3 * u / p)`` (X, Y, Z),
which reuses the conditionally uniform ``u / p`` instead of a second draw.
"""
from __future__ import annotations

import math
import os
from collections.abc import Iterable, Mapping
from dataclasses import asdict, dataclass

import numpy as np
import yaml

from . import kernels
from .errors import NotFoundError, ValidationError
from .statevector import Circuit, CountsMap, new_zero_state

# amplitudes kept as ideal-prefix checkpoints per run
CHECKPOINT_BUDGET = 1 << 22
# noise uniforms drawn per chunk
DRAW_BUDGET = 1 << 21


@dataclass(frozen=True)
class NoiseProfile:
    """Named error-rate bundle.

    A gate with ``c >= 1`` controls charges ``max(1, mcx_cost_slope * c +
    mcx_cost_offset)`` independent ``p2`` events to every qubit it touches;
    the default gives ``2c - 1``. Single-qubit gates charge one ``p1`` event.
    """

    name: str
    p1: float = 0.0
    p2: float = 0.0
    p_readout: float = 0.0
    mcx_cost_slope: int = 2
    mcx_cost_offset: int = -1

    def __post_init__(self) -> None:
        if not isinstance(self.name, str) or not self.name.strip():
            raise ValidationError("profile name must be a non-empty string")
        for field_name in ("p1", "p2", "p_readout"):
            value = getattr(self, field_name)
            if isinstance(value, bool) or not isinstance(value, (int, float)) or not 0.0 <= value <= 1.0:
                raise ValidationError(f"{self.name}: {field_name} must be in [0, 1], got {value!r}")
            object.__setattr__(self, field_name, float(value))
        for field_name in ("mcx_cost_slope", "mcx_cost_offset"):
            if not isinstance(getattr(self, field_name), int):
                raise ValidationError(f"{self.name}: {field_name} must be an integer")

    def mcx_cost(self, num_controls: int) -> int:
        return max(1, self.mcx_cost_slope * num_controls + self.mcx_cost_offset)

    @property
    def is_noiseless(self) -> bool:
        return self.p1 == 0.0 and self.p2 == 0.0 and self.p_readout == 0.0

    def as_dict(self) -> dict:
        return asdict(self)


_PRESETS = (
    NoiseProfile("noiseless", 0.0, 0.0, 0.0),
    NoiseProfile("nisq-low", 0.0005, 0.005, 0.01),
    NoiseProfile("nisq-medium", 0.001, 0.02, 0.02),
    NoiseProfile("nisq-high", 0.005, 0.05, 0.05),
)


def preset_profiles() -> list[NoiseProfile]:
    return list(_PRESETS)


def _profile_from_mapping(entry: Mapping) -> NoiseProfile:
    if not isinstance(entry, Mapping):
        raise ValidationError(f"profile entry must be a mapping, got {entry!r}")
    allowed = {"name", "p1", "p2", "p_readout", "mcx_cost_slope", "mcx_cost_offset"}
    unknown = set(entry) - allowed
    if unknown:
        raise ValidationError(f"unknown profile fields {sorted(unknown)}")
    if "name" not in entry:
        raise ValidationError("profile entry is missing 'name'")
    return NoiseProfile(**entry)


def load_profiles(source: str | os.PathLike | Mapping | None = None) -> dict[str, NoiseProfile]:
    """Registry of presets plus the ``profiles`` section of a config.

    ``source`` is a YAML/JSON file path or an already-parsed config mapping.
    Config entries replace presets of the same name.
    """
    registry = {p.name: p for p in _PRESETS}
    if source is None:
        return registry
    if isinstance(source, Mapping):
        config = source
    else:
        with open(source, encoding="utf-8") as fh:
            config = yaml.safe_load(fh) or {}
        if not isinstance(config, Mapping):
            raise ValidationError(f"{source}: top level must be a mapping")
    entries = config.get("profiles") or []
    if not isinstance(entries, list):
        raise ValidationError("'profiles' must be a list of mappings")
    seen: set[str] = set()
    for entry in entries:
        profile = _profile_from_mapping(entry)
        if profile.name in seen:
            raise ValidationError(f"duplicate profile name {profile.name!r}")
        seen.add(profile.name)
        registry[profile.name] = profile
    return registry


def get_profile(name: str, registry: Mapping[str, NoiseProfile] | None = None) -> NoiseProfile:
    registry = load_profiles() if registry is None else registry
    try:
        return registry[name]
    except KeyError:
        raise NotFoundError(f"unknown noise profile {name!r}; known: {', '.join(sorted(registry))}") from None


def _noise_slots(circuit: Circuit, profile: NoiseProfile) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    ops_, qubits_, probs_ = [], [], []
    for j, op in enumerate(circuit.ops):
        if op.controls:
            p, mult = profile.p2, profile.mcx_cost(len(op.controls))
        else:
            p, mult = profile.p1, 1
        if p <= 0.0:
            continue
        for q in op.qubits:
            ops_.extend([j] * mult)
            qubits_.extend([q] * mult)
            probs_.extend([p] * mult)
    return (
        np.asarray(ops_, dtype=np.int64),
        np.asarray(qubits_, dtype=np.int64),
        np.asarray(probs_, dtype=np.float64),
    )


def _ideal_checkpoints(circuit: Circuit, encoded) -> tuple[np.ndarray, int, np.ndarray]:
    kinds, cmasks, targets = encoded
    n_ops = len(circuit.ops)
    dim = 1 << circuit.num_qubits
    stride = max(1, math.ceil((n_ops + 1) * dim / CHECKPOINT_BUDGET))
    rows = max(1, math.ceil(n_ops / stride))
    checkpoints = np.empty((rows, dim), dtype=np.complex128)
    psi = new_zero_state(circuit.num_qubits).amps.copy()
    for r in range(rows):
        checkpoints[r] = psi
        lo, hi = r * stride, min(n_ops, (r + 1) * stride)
        kernels.apply_ops(psi, kinds[lo:hi], cmasks[lo:hi], targets[lo:hi])
    return checkpoints, stride, psi


def _events(u: np.ndarray, slot_op, slot_qubit, slot_p):
    fired_shot, fired_slot = np.nonzero(u < slot_p)
    p = slot_p[fired_slot]
    pauli = np.minimum((3.0 * u[fired_shot, fired_slot] / p).astype(np.int64), 2)
    shot_ptr = np.zeros(u.shape[0] + 1, dtype=np.int64)
    np.cumsum(np.bincount(fired_shot, minlength=u.shape[0]), out=shot_ptr[1:])
    return shot_ptr, slot_op[fired_slot], slot_qubit[fired_slot], pauli


def run_noisy(circuit: Circuit, profile: NoiseProfile, shots: int, rng_seed: int) -> CountsMap:
    """Sample ``shots`` measurements of ``circuit`` on |0...0> under ``profile``."""
    if not isinstance(shots, (int, np.integer)) or shots < 1:
        raise ValidationError(f"shots must be >= 1, got {shots!r}")
    shots = int(shots)
    n = circuit.num_qubits
    rng = np.random.default_rng(rng_seed)
    u_meas = rng.random(shots)

    encoded = circuit.encode()
    checkpoints, stride, final = _ideal_checkpoints(circuit, encoded)
    slot_op, slot_qubit, slot_p = _noise_slots(circuit, profile)
    n_slots = slot_p.shape[0]
    empty = np.zeros(0, dtype=np.int64)

    chunk = shots if n_slots == 0 else max(1, min(shots, DRAW_BUDGET // n_slots))
    outcomes = np.empty(shots, dtype=np.int64)
    for start in range(0, shots, chunk):
        stop = min(shots, start + chunk)
        if n_slots:
            u = rng.random((stop - start, n_slots))
            shot_ptr, ev_op, ev_qubit, ev_pauli = _events(u, slot_op, slot_qubit, slot_p)
        else:
            shot_ptr = np.zeros(stop - start + 1, dtype=np.int64)
            ev_op = ev_qubit = ev_pauli = empty
        outcomes[start:stop] = kernels.run_trajectories(
            checkpoints, stride, final, *encoded,
            shot_ptr, ev_op, ev_qubit, ev_pauli, u_meas[start:stop],
        )

    if profile.p_readout > 0.0:
        flips = rng.random((shots, n)) < profile.p_readout
        weights = np.left_shift(np.int64(1), np.arange(n, dtype=np.int64))
        outcomes ^= flips.astype(np.int64) @ weights
    return CountsMap.from_indices(outcomes, n)


def profile_names(registry: Iterable[NoiseProfile] | Mapping[str, NoiseProfile]) -> list[str]:
    if isinstance(registry, Mapping):
        return list(registry)
    return [p.name for p in registry]
