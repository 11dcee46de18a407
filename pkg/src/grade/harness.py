"""Benchmark orchestration: single runs, sweeps and offline scoring."""
from __future__ import annotations

import csv
import io
import itertools
import json
import math
import time
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .errors import ValidationError
from .grover import (
    SearchSpec,
    build_grover_circuit,
    generate_space_by_num_targets,
    generate_space_explicit,
    generate_space_for_target_list,
)
from .noise import NoiseProfile, get_profile, load_profiles, run_noisy
from .scoring import (
    ProbabilityDistribution,
    ScoreBreakdown,
    ScoreParams,
    compute_score,
    counts_to_distribution,
)
from .statevector import Circuit, CountsMap, probabilities, simulate

DEFAULT_SHOTS = 1000
DIMENSIONS = ("profile", "space_size", "num_targets", "lambda", "mu")


@dataclass(frozen=True)
class BenchmarkSpec:
    """One benchmark request.

    Search mode is chosen by which fields are set: ``target_list`` alone,
    ``num_targets`` alone (space of ``2**num_targets``), or ``space_size``
    together with ``num_targets``.
    """

    backend: str = "noiseless"
    num_targets: int | None = None
    target_list: tuple[int, ...] | None = None
    space_size: int | None = None
    iterations: int | None = None
    params: ScoreParams = ScoreParams()
    shots: int = DEFAULT_SHOTS
    seed: int = 0
    exact: bool = False

    def __post_init__(self) -> None:
        if self.target_list is not None:
            object.__setattr__(self, "target_list", tuple(self.target_list))
        self.mode  # validates the field combination
        if not isinstance(self.shots, int) or self.shots < 1:
            raise ValidationError(f"shots must be >= 1, got {self.shots!r}")
        if self.iterations is not None and (not isinstance(self.iterations, int) or self.iterations < 1):
            raise ValidationError(f"iterations must be a positive integer, got {self.iterations!r}")

    @property
    def mode(self) -> str:
        if self.target_list is not None:
            if self.num_targets is not None or self.space_size is not None:
                raise ValidationError("target_list cannot be combined with num_targets or space_size")
            return "by-list"
        if self.num_targets is None:
            raise ValidationError("set num_targets, target_list, or space_size with num_targets")
        return "by-count" if self.space_size is None else "explicit"

    def resolve_search(self) -> SearchSpec:
        mode = self.mode
        if mode == "by-list":
            return generate_space_for_target_list(list(self.target_list))
        if mode == "by-count":
            return generate_space_by_num_targets(self.num_targets, self.seed)
        return generate_space_explicit(self.space_size, self.num_targets, self.seed)

    def as_dict(self) -> dict:
        return {
            "mode": self.mode,
            "backend": self.backend,
            "num_targets": self.num_targets,
            "target_list": list(self.target_list) if self.target_list is not None else None,
            "space_size": self.space_size,
            "iterations": self.iterations,
            "lambda": self.params.lam,
            "mu": self.params.mu,
            "shots": self.shots,
            "seed": self.seed,
            "exact": self.exact,
        }


@dataclass
class ScoreReport:
    spec: dict
    search: SearchSpec
    iterations: int | None
    counts: CountsMap | None
    distribution: ProbabilityDistribution
    params: ScoreParams
    breakdown: ScoreBreakdown
    circuit_stats: dict | None
    profile: dict | None
    elapsed_ms: float = 0.0
    version: str = __version__

    def dimension(self, name: str):
        if name == "profile":
            return self.profile["name"] if self.profile else "external"
        if name == "space_size":
            return self.search.space_size
        if name == "num_targets":
            return self.search.num_targets
        if name == "lambda":
            return self.params.lam
        if name == "mu":
            return self.params.mu
        raise ValidationError(f"unknown dimension {name!r}; choose from {', '.join(DIMENSIONS)}")

    def to_dict(self, include_elapsed: bool = True) -> dict:
        doc = {
            "toolkit_version": self.version,
            "spec": self.spec,
            "search": self.search.as_dict(),
            "iterations": self.iterations,
            "profile": self.profile,
            "params": {"lambda": self.params.lam, "mu": self.params.mu},
            "counts": None
            if self.counts is None
            else {"num_qubits": self.counts.num_qubits, "shots": self.counts.shots, "counts": self.counts.counts},
            "distribution": self.distribution.probs,
            "score": self.breakdown.as_dict(),
            "circuit": self.circuit_stats,
        }
        if include_elapsed:
            doc["elapsed_ms"] = self.elapsed_ms
        return doc

    def to_json(self, include_elapsed: bool = True) -> str:
        return json.dumps(self.to_dict(include_elapsed), indent=2, sort_keys=True) + "\n"


def verify_report(doc: Mapping) -> bool:
    """Recompute the score from a serialized report's own distribution and targets."""
    params = ScoreParams(doc["params"]["lambda"], doc["params"]["mu"])
    dist = ProbabilityDistribution(doc["search"]["num_qubits"], dict(doc["distribution"]))
    again = compute_score(dist, doc["search"]["targets"], params)
    return abs(again.final - doc["score"]["final"]) <= 1e-12


def strip_elapsed(doc: Mapping) -> dict:
    return {k: v for k, v in doc.items() if k != "elapsed_ms"}


def circuit_stats(circuit: Circuit) -> dict:
    return {
        "num_qubits": circuit.num_qubits,
        "depth": circuit.depth(),
        "size": len(circuit),
        "gate_counts": circuit.gate_counts(),
    }


def _execute(plan_circuit: Circuit, profile: NoiseProfile, shots: int, seed: int, exact: bool):
    if exact:
        if not profile.is_noiseless:
            raise ValidationError("exact mode needs the noiseless profile")
        return None, probabilities(simulate(plan_circuit))
    counts = run_noisy(plan_circuit, profile, shots, seed)
    return counts, counts_to_distribution(counts)


def run_single(spec: BenchmarkSpec, registry: Mapping[str, NoiseProfile] | None = None) -> ScoreReport:
    start = time.perf_counter()
    profile = get_profile(spec.backend, registry)
    search = spec.resolve_search()
    plan = build_grover_circuit(search, spec.iterations)
    counts, dist = _execute(plan.full_circuit, profile, spec.shots, spec.seed, spec.exact)
    breakdown = compute_score(dist, search.targets, spec.params)
    return ScoreReport(
        spec=spec.as_dict(),
        search=search,
        iterations=plan.iterations,
        counts=counts,
        distribution=dist,
        params=spec.params,
        breakdown=breakdown,
        circuit_stats=circuit_stats(plan.full_circuit),
        profile=profile.as_dict(),
        elapsed_ms=(time.perf_counter() - start) * 1e3,
    )


def score_external(
    counts: CountsMap,
    targets: Sequence[str],
    params: ScoreParams = ScoreParams(),
    metadata: Mapping | None = None,
) -> ScoreReport:
    """Score counts produced elsewhere (e.g. on hardware) with the standard pipeline."""
    start = time.perf_counter()
    targets = list(targets)
    for t in targets:
        if not isinstance(t, str) or len(t) != counts.num_qubits:
            raise ValidationError(
                f"target {t!r} does not match the counts file's {counts.num_qubits} qubits"
            )
    search = SearchSpec(counts.num_qubits, tuple(targets), "explicit")
    dist = counts_to_distribution(counts)
    return ScoreReport(
        spec={"mode": "external", "metadata": dict(metadata or {}), "lambda": params.lam, "mu": params.mu},
        search=search,
        iterations=None,
        counts=counts,
        distribution=dist,
        params=params,
        breakdown=compute_score(dist, search.targets, params),
        circuit_stats=None,
        profile=None,
        elapsed_ms=(time.perf_counter() - start) * 1e3,
    )


@dataclass
class SweepSpec:
    space_sizes: list[int]
    target_counts: list[int] = field(default_factory=lambda: [1])
    lambdas: list[float] = field(default_factory=lambda: [1.0])
    mus: list[float] = field(default_factory=lambda: [1.0])
    profiles: list[str] = field(default_factory=lambda: ["noiseless"])
    shots: int = DEFAULT_SHOTS
    seed: int = 0
    repetitions: int = 1
    exact: bool = False
    iterations: int | None = None

    def __post_init__(self) -> None:
        for name in ("space_sizes", "target_counts", "lambdas", "mus", "profiles"):
            values = list(getattr(self, name))
            if not values:
                raise ValidationError(f"sweep grid '{name}' is empty")
            if len(set(values)) != len(values):
                raise ValidationError(f"sweep grid '{name}' has duplicate values")
            setattr(self, name, values)
        if not isinstance(self.repetitions, int) or self.repetitions < 1:
            raise ValidationError("repetitions must be a positive integer")
        if not isinstance(self.shots, int) or self.shots < 1:
            raise ValidationError("shots must be a positive integer")
        for lam, mu in itertools.product(self.lambdas, self.mus):
            ScoreParams(lam, mu)

    @classmethod
    def from_mapping(cls, data: Mapping) -> SweepSpec:
        allowed = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - allowed - {"heatmap"}
        if unknown:
            raise ValidationError(f"unknown sweep fields {sorted(unknown)}")
        if "space_sizes" not in data:
            raise ValidationError("sweep needs 'space_sizes'")
        return cls(**{k: v for k, v in data.items() if k in allowed})


def cell_seed(base_seed: int, space_size: int, num_targets: int, repetition: int) -> int:
    """Per-cell seed shared across profiles and score weights (common random numbers)."""
    ss = np.random.SeedSequence([base_seed, space_size, num_targets, repetition])
    return int(ss.generate_state(1, dtype=np.uint64)[0] >> np.uint64(1))


@dataclass
class SweepResult:
    reports: list[ScoreReport]
    aggregate: list[dict]
    skipped: list[dict]

    def aggregate_csv(self) -> str:
        buf = io.StringIO()
        cols = ["profile", "space_size", "num_targets", "lambda", "mu", "repetitions", "mean", "min", "max"]
        writer = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        writer.writeheader()
        for row in self.aggregate:
            writer.writerow({k: (repr(row[k]) if isinstance(row[k], float) else row[k]) for k in cols})
        return buf.getvalue()


def run_sweep(sweep: SweepSpec, registry: Mapping[str, NoiseProfile] | None = None) -> SweepResult:
    registry = load_profiles() if registry is None else registry
    profiles = [get_profile(name, registry) for name in sweep.profiles]
    reports: list[ScoreReport] = []
    aggregate: list[dict] = []
    skipped: list[dict] = []
    grid_params = [ScoreParams(lam, mu) for lam, mu in itertools.product(sweep.lambdas, sweep.mus)]
    for profile, n_space, m in itertools.product(profiles, sweep.space_sizes, sweep.target_counts):
        if not 1 <= m < n_space:
            skipped.append({
                "profile": profile.name, "space_size": n_space, "num_targets": m,
                "reason": f"infeasible cell: need 1 <= M < N, got N={n_space}, M={m}",
            })
            continue
        cell: dict[ScoreParams, list[ScoreReport]] = {p: [] for p in grid_params}
        for rep in range(sweep.repetitions):
            start = time.perf_counter()
            seed = cell_seed(sweep.seed, n_space, m, rep)
            search = generate_space_explicit(n_space, m, seed)
            plan = build_grover_circuit(search, sweep.iterations)
            counts, dist = _execute(plan.full_circuit, profile, sweep.shots, seed, sweep.exact)
            stats = circuit_stats(plan.full_circuit)
            elapsed = (time.perf_counter() - start) * 1e3
            for params in grid_params:
                spec = {
                    "mode": "sweep", "backend": profile.name, "space_size": n_space, "num_targets": m,
                    "iterations": sweep.iterations, "lambda": params.lam, "mu": params.mu,
                    "shots": sweep.shots, "seed": seed, "repetition": rep, "exact": sweep.exact,
                }
                cell[params].append(ScoreReport(
                    spec=spec, search=search, iterations=plan.iterations, counts=counts,
                    distribution=dist, params=params,
                    breakdown=compute_score(dist, search.targets, params),
                    circuit_stats=stats, profile=profile.as_dict(), elapsed_ms=elapsed,
                ))
        for params in grid_params:
            finals = [r.breakdown.final for r in cell[params]]
            reports.extend(cell[params])
            aggregate.append({
                "profile": profile.name, "space_size": n_space, "num_targets": m,
                "lambda": params.lam, "mu": params.mu, "repetitions": len(finals),
                "mean": math.fsum(finals) / len(finals), "min": min(finals), "max": max(finals),
            })
    return SweepResult(reports, aggregate, skipped)


def group_reports(reports: Iterable[ScoreReport], fixed: Sequence[str]) -> dict[tuple, list[ScoreReport]]:
    """Partition reports by the values of the ``fixed`` dimensions, in first-seen order."""
    groups: dict[tuple, list[ScoreReport]] = {}
    for r in reports:
        groups.setdefault(tuple(r.dimension(d) for d in fixed), []).append(r)
    return groups
