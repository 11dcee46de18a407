"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_backends.py [--repeat 3] [--json out.json]

Both backends run identical inputs; outputs are compared bit for bit.
"""
from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from grade import kernels
from grade.grover import build_grover_circuit, generate_space_explicit
from grade.noise import get_profile, run_noisy
from grade.statevector import Circuit, GateKind, GateOp, new_zero_state


def random_circuit(n: int, n_ops: int, seed: int) -> Circuit:
    rng = np.random.default_rng(seed)
    circ = Circuit(n)
    for _ in range(n_ops):
        kind = list(GateKind)[rng.integers(5)]
        target = int(rng.integers(n))
        controls = ()
        if kind.multi:
            others = [q for q in range(n) if q != target]
            controls = tuple(int(c) for c in rng.choice(others, size=int(rng.integers(1, 4)), replace=False))
        circ.append(GateOp(kind, target, controls))
    return circ


def best_of(fn, repeat):
    times, out = [], None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def use_backend(name):
    mod = kernels.BACKENDS[name]
    kernels.apply_ops = mod.apply_ops
    kernels.run_trajectories = mod.run_trajectories


def bench_apply(n, n_ops, repeat):
    circ = random_circuit(n, n_ops, seed=n)
    encoded = circ.encode()
    results = {}
    for name in sorted(kernels.BACKENDS):
        mod = kernels.BACKENDS[name]

        def run():
            psi = new_zero_state(n).amps.copy()
            mod.apply_ops(psi, *encoded)
            return psi

        results[name] = best_of(run, repeat)
    return f"apply_ops n={n} ops={n_ops}", results


def bench_noisy(N, profile, shots, repeat):
    circ = build_grover_circuit(generate_space_explicit(N, 1, rng_seed=1)).full_circuit
    prof = get_profile(profile)
    results = {}
    for name in sorted(kernels.BACKENDS):
        use_backend(name)
        results[name] = best_of(lambda: run_noisy(circ, prof, shots, 5).counts, repeat)
    return f"run_noisy N={N} {profile} shots={shots}", results


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", help="also write results to this file")
    args = ap.parse_args(argv)

    default = kernels.BACKEND
    if "cython" not in kernels.BACKENDS:
        print("compiled extension not available; timing the fallback only", file=sys.stderr)
    cases = [
        bench_apply(12, 2000, args.repeat),
        bench_apply(18, 200, args.repeat),
        bench_noisy(8, "nisq-medium", 2000, args.repeat),
        bench_noisy(64, "nisq-medium", 2000, args.repeat),
        bench_noisy(256, "nisq-low", 500, args.repeat),
    ]
    use_backend(default)

    rows = []
    print(f"{'case':44} {'python s':>10} {'cython s':>10} {'speedup':>8}  match")
    for label, res in cases:
        py_t, py_out = res["python"]
        cy_t, cy_out = res.get("cython", (float("nan"), None))
        if cy_out is None:
            match = None
        elif isinstance(py_out, np.ndarray):
            match = bool(np.array_equal(py_out, cy_out))
        else:
            match = py_out == cy_out
        rows.append({"case": label, "python_s": py_t, "cython_s": cy_t, "identical": match})
        print(f"{label:44} {py_t:10.4f} {cy_t:10.4f} {py_t / cy_t:8.1f}  {match}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)
    return 0 if all(r["identical"] is not False for r in rows) else 1


if __name__ == "__main__":
    sys.exit(main())
