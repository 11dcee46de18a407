"""Exit criteria for the toolkit; each test records one PASS/FAIL line."""
import itertools
import json
import math

import numpy as np

from grade.circuit_io import dumps_counts, loads_counts, parse_circuit, render_circuit
from grade.cli import main
from grade.grover import SearchSpec, build_grover_circuit, construct_oracle
from grade.harness import BenchmarkSpec, SweepSpec, run_single, run_sweep, score_external, strip_elapsed
from grade.noise import NoiseProfile
from grade.scoring import ProbabilityDistribution, ScoreParams, compute_score
from grade.statevector import CountsMap, Statevector, apply_circuit, probabilities, sample_counts, simulate

from conftest import random_circuit, random_state, record_criterion


def closed_form(N, M):
    theta = math.asin(math.sqrt(M / N))
    k = max(1, math.floor(math.pi / (4 * theta)))
    return math.sin((2 * k + 1) * theta) ** 2


def test_ac01_noiseless_single_target_accuracy():
    expected = {4: 1.0, 8: 0.94534, 16: 0.96132, 32: 0.99918, 64: 0.99658}
    worst = 0.0
    ok = True
    for N, quoted in expected.items():
        spec = BenchmarkSpec(space_size=N, num_targets=1, params=ScoreParams(0, 0), exact=True, seed=N)
        score = run_single(spec).breakdown.final
        worst = max(worst, abs(score - closed_form(N, 1)))
        # quoted literals are rounded; 0.94534 is really 0.9453125
        ok &= abs(score - quoted) <= 1e-4 and score >= 0.94
    record_criterion("AC1 noiseless single-target accuracy", ok and worst <= 1e-9, f"max |err|={worst:.1e}")


def test_ac02_multi_target_noiseless():
    res = run_sweep(SweepSpec(space_sizes=[8], target_counts=[1, 2, 3, 4], lambdas=[1], mus=[1], exact=True))
    by_m = {r.search.num_targets: r.breakdown.final for r in res.reports}
    ok = (
        abs(by_m[1] - 0.8907) <= 1e-3
        and abs(by_m[2] - 1.0) <= 1e-9
        and abs(by_m[4] - 0.0) <= 1e-9
        and len(res.reports) == 4
    )
    detail = ", ".join(f"M={m}: {v:.6f}" for m, v in sorted(by_m.items()))
    record_criterion("AC2 multi-target noiseless scores", ok, detail)


def test_ac03_clamp_rule():
    uniform = ProbabilityDistribution(3, {format(i, "03b"): 0.125 for i in range(8)})
    direct = compute_score(uniform, ["110"], ScoreParams(1, 1)).final
    counts = CountsMap(3, {format(i, "03b"): 125 for i in range(8)}, 1000)
    external = score_external(counts, ["110"], ScoreParams(1, 1)).breakdown.final
    record_criterion("AC3 clamp rule", direct == 0.0 and external == 0.0, f"scores {direct}, {external}")


def test_ac04_scoring_oracle_equivalence():
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(1000):
        n = int(rng.integers(1, 6))
        N = 1 << n
        p = rng.dirichlet(np.full(N, float(rng.uniform(0.1, 3))))
        keys = [format(i, f"0{n}b") for i in range(N)]
        m = int(rng.integers(1, N))
        targets = [keys[i] for i in rng.choice(N, size=m, replace=False)]
        lam, mu = float(rng.uniform(0, 2)), float(rng.uniform(0, 2))
        dist = ProbabilityDistribution(n, dict(zip(keys, p.tolist())))
        # straight-line evaluation
        pt = 0.0
        for s in targets:
            pt += dist.probs[s]
        mean = pt / m
        var = 0.0
        for s in targets:
            var += (dist.probs[s] - mean) ** 2
        sigma = math.sqrt(var / m)
        ref = max(0.0, pt - lam * sigma - mu * (1 - pt))
        got = compute_score(dist, targets, ScoreParams(lam, mu)).final
        worst = max(worst, abs(got - ref))
    record_criterion("AC4 scoring oracle equivalence", worst <= 1e-12, f"max |diff|={worst:.1e} over 1000 cases")


def _oracle_flips_exactly(targets, n):
    oracle = construct_oracle(targets, n)
    marked = {int(t, 2) for t in targets}
    dim = 1 << n
    for i in range(dim):
        v = np.zeros(dim, dtype=complex)
        v[i] = 1
        out = apply_circuit(Statevector(n, v), oracle).amps
        expected = np.zeros(dim, dtype=complex)
        expected[i] = -1 if i in marked else 1
        if np.max(np.abs(out - expected)) > 1e-12:
            return False
    return True


def test_ac05_oracle_brute_force():
    checked = 0
    ok = True
    for n in (2, 3):
        states = [format(i, f"0{n}b") for i in range(1 << n)]
        for r in range(1, len(states)):
            for subset in itertools.combinations(states, r):
                ok &= _oracle_flips_exactly(list(subset), n)
                checked += 1
    rng = np.random.default_rng(55)
    for n in (4, 5):
        for _ in range(200):
            m = int(rng.integers(1, 1 << n))
            picks = rng.choice(1 << n, size=m, replace=False)
            ok &= _oracle_flips_exactly([format(int(i), f"0{n}b") for i in picks], n)
            checked += 1
    record_criterion("AC5 oracle brute-force correctness", ok and checked == 14 + 254 + 400, f"{checked} subsets")


def test_ac06_fig2_decline():
    base = dict(space_sizes=[8, 64], lambdas=[0], mus=[0], shots=1000, seed=2, repetitions=10)
    noisy = run_sweep(SweepSpec(profiles=["nisq-medium"], **base))
    clean = run_sweep(SweepSpec(profiles=["noiseless"], **base))
    mean = {(row["profile"], row["space_size"]): row["mean"] for row in noisy.aggregate + clean.aggregate}
    drop = mean["nisq-medium", 8] - mean["nisq-medium", 64]
    clean_min = min(mean["noiseless", 8], mean["noiseless", 64])
    record_criterion(
        "AC6 qualitative decline with search-space size",
        drop >= 0.05 and clean_min >= 0.94,
        f"nisq-medium N=8 {mean['nisq-medium', 8]:.4f} -> N=64 {mean['nisq-medium', 64]:.4f}; noiseless min {clean_min:.4f}",
    )


def test_ac07_noise_monotonicity():
    p2_values = [0.0, 0.01, 0.03, 0.05]
    profiles = {f"p2-{p}": NoiseProfile(f"p2-{p}", p2=p) for p in p2_values}
    res = run_sweep(
        SweepSpec(space_sizes=[8], lambdas=[0], mus=[0], profiles=list(profiles), shots=1000, seed=3, repetitions=10),
        registry=profiles,
    )
    means = [row["mean"] for row in res.aggregate]
    rises = [b - a for a, b in zip(means, means[1:]) if b > a]
    ok = len(rises) == 0 or (len(rises) == 1 and rises[0] <= 0.01)
    record_criterion("AC7 score non-increasing in p2", ok, " > ".join(f"{m:.4f}" for m in means))


def test_ac08_sampling_soundness():
    plan = build_grover_circuit(SearchSpec(3, ("101",)))
    state = simulate(plan.full_circuit)
    exact = probabilities(state).probs
    counts = sample_counts(state, 10000, 8)
    tv = 0.5 * sum(abs(counts.counts.get(k, 0) / 10000 - p) for k, p in exact.items())
    record_criterion("AC8 sampling soundness", tv <= 0.05, f"TV={tv:.4f}")


SWEEP_CFG = """\
sweep:
  space_sizes: [8, 16]
  lambdas: [1]
  mus: [0, 1]
  profiles: [nisq-low]
  shots: 500
  seed: 9
  repetitions: 3
"""


def test_ac09_cli_determinism(tmp_path):
    args = ["run", "--space-size", "16", "--num-targets", "3", "--backend", "nisq-medium",
            "--lambda", "1", "--mu", "1", "--shots", "1000", "--seed", "42"]
    docs = []
    for name in ("a.json", "b.json"):
        assert main(args + ["--out", str(tmp_path / name)]) == 0
        docs.append(strip_elapsed(json.loads((tmp_path / name).read_text())))
    cfg = tmp_path / "sweep.yaml"
    cfg.write_text(SWEEP_CFG)
    csvs = []
    for out in ("s1", "s2"):
        assert main(["sweep", "--config", str(cfg), "--out", str(tmp_path / out)]) == 0
        csvs.append({p.name: p.read_text() for p in sorted((tmp_path / out).glob("*.csv"))})
    ok = docs[0] == docs[1] and csvs[0] == csvs[1] and "heatmap.csv" in csvs[0]
    record_criterion("AC9 CLI determinism", ok, f"{len(csvs[0])} CSV files compared")


def test_ac10_round_trips(tmp_path, capsys):
    rng = np.random.default_rng(10)
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(1, 6))
        circ = random_circuit(n, int(rng.integers(0, 41)), rng)
        back = parse_circuit(render_circuit(circ))
        for _ in range(10):
            psi = random_state(n, rng)
            a, b = apply_circuit(psi, circ).amps, apply_circuit(psi, back).amps
            worst = max(worst, abs(1 - abs(np.vdot(a, b)) ** 2))

    counts = CountsMap(3, {"101": 940, "010": 60}, 1000)
    text = dumps_counts(counts, {"backend": "hw"})
    back_counts, meta = loads_counts(text)
    lossless = back_counts == counts and dumps_counts(back_counts, meta) == text

    hand = tmp_path / "hand.json"
    hand.write_text(dumps_counts(CountsMap(3, {"101": 940, "000": 20, "011": 20, "111": 20}, 1000)))
    capsys.readouterr()
    assert main(["score", "--counts", str(hand), "--targets", "101", "--lambda", "1", "--mu", "1"]) == 0
    score = json.loads(capsys.readouterr().out)["score"]["final"]

    ok = worst <= 1e-12 and lossless and abs(score - 0.88) <= 1e-12
    record_criterion("AC10 circuit/counts round trips and offline score", ok,
                     f"max infidelity {worst:.1e}; score {score:.12f}")
