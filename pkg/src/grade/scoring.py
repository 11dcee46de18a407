"""GRADE score: reward target mass, penalize target spread and leaked mass."""
from __future__ import annotations

import math
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ValidationError

SUM_TOL = 1e-9


def _valid_key(s: object, n: int) -> bool:
    return isinstance(s, str) and len(s) == n and all(c in "01" for c in s)


@dataclass
class ProbabilityDistribution:
    """Bitstring -> probability; absent basis states have probability 0.

    ``exact`` holds the rational values when the distribution came from
    counts, so callers can inspect them before float rounding.
    """

    num_qubits: int
    probs: dict[str, float]
    exact: dict[str, Fraction] | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        for key, value in self.probs.items():
            if not _valid_key(key, self.num_qubits):
                raise ValidationError(f"bad bitstring {key!r} for {self.num_qubits} qubits")
            if not 0.0 <= value <= 1.0 + SUM_TOL:
                raise ValidationError(f"probability for {key!r} out of range: {value!r}")
        if self.exact is not None:
            if sum(self.exact.values()) != 1:
                raise ValidationError("exact probabilities do not sum to 1")
        elif abs(math.fsum(self.probs.values()) - 1.0) > SUM_TOL:
            raise ValidationError("probabilities do not sum to 1")

    def __getitem__(self, key: str) -> float:
        return self.probs.get(key, 0.0)

    def get(self, key: str, default: float = 0.0) -> float:
        return self.probs.get(key, default)


@dataclass(frozen=True)
class ScoreParams:
    lam: float = 1.0
    mu: float = 1.0

    def __post_init__(self) -> None:
        for name, value in (("lambda", self.lam), ("mu", self.mu)):
            if not isinstance(value, (int, float)) or not math.isfinite(value) or value < 0:
                raise ValidationError(f"{name} must be a finite non-negative number, got {value!r}")


@dataclass(frozen=True)
class ScoreBreakdown:
    p_target: float
    sigma_target: float
    p_nontarget: float
    raw: float
    final: float

    def as_dict(self) -> dict[str, float]:
        return {
            "p_target": self.p_target,
            "sigma_target": self.sigma_target,
            "p_nontarget": self.p_nontarget,
            "raw": self.raw,
            "final": self.final,
        }


def counts_to_distribution(counts) -> ProbabilityDistribution:
    """Normalize a ``CountsMap`` into probabilities count/shots."""
    shots = counts.shots
    if not isinstance(shots, int) or shots < 1:
        raise ValidationError(f"cannot normalize counts with shots={shots!r}")
    exact = {k: Fraction(v, shots) for k, v in counts.counts.items()}
    return ProbabilityDistribution(
        counts.num_qubits, {k: float(f) for k, f in exact.items()}, exact=exact
    )


def validate_targets(targets: Iterable[str], num_qubits: int) -> list[str]:
    targets = list(targets)
    if not targets:
        raise ValidationError("target set is empty")
    for t in targets:
        if not _valid_key(t, num_qubits):
            raise ValidationError(f"target {t!r} is not a {num_qubits}-bit string")
    if len(set(targets)) != len(targets):
        raise ValidationError(f"duplicate targets in {targets}")
    if len(targets) >= 1 << num_qubits:
        raise ValidationError("target set covers the whole search space")
    return targets


def compute_score(
    dist: ProbabilityDistribution | Mapping[str, float],
    targets: Iterable[str],
    params: ScoreParams = ScoreParams(),
    num_qubits: int | None = None,
) -> ScoreBreakdown:
    if isinstance(dist, ProbabilityDistribution):
        n = dist.num_qubits
        probs = dist.probs
    else:
        probs = dict(dist)
        n = num_qubits if num_qubits is not None else len(next(iter(probs)))
    targets = validate_targets(targets, n)
    m = len(targets)
    tp = [probs.get(t, 0.0) for t in targets]
    p_target = math.fsum(tp)
    mean = p_target / m
    sigma = math.sqrt(math.fsum((p - mean) ** 2 for p in tp) / m)
    p_non = 1.0 - p_target
    raw = p_target - params.lam * sigma - params.mu * p_non
    final = min(1.0, max(0.0, raw))
    return ScoreBreakdown(p_target, sigma, p_non, raw, final)
