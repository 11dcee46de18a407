"""Command-line entry point: ``grade run|sweep|score|export|profiles``.

Exit codes: 0 success, 2 validation error, 3 I/O error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import yaml

from .circuit_io import read_counts, render_circuit
from .errors import GradeError, NotFoundError, ValidationError
from .grover import build_grover_circuit
from .harness import BenchmarkSpec, SweepSpec, group_reports, run_single, run_sweep, score_external
from .heatmap import emit_heatmap
from .noise import load_profiles
from .scoring import ScoreParams

EXIT_OK, EXIT_VALIDATION, EXIT_IO = 0, 2, 3

log = logging.getLogger("grade")


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _str_list(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def _add_search_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--space-size", type=int, help="search space size N (power of two)")
    p.add_argument("--num-targets", type=int, help="number of random targets M")
    p.add_argument("--target-list", type=_int_list, help="explicit targets as integers, e.g. 3,7")
    p.add_argument("--iterations", type=int, help="override the Grover iteration count")
    p.add_argument("--seed", type=int, default=0)


def _add_weight_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--lambda", dest="lam", type=float, default=1.0, help="target-spread weight")
    p.add_argument("--mu", type=float, default=1.0, help="non-target mass weight")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="grade", description="Grover-based backend reliability benchmark")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one benchmark and print its score report")
    _add_search_flags(run)
    _add_weight_flags(run)
    run.add_argument("--backend", default="noiseless", help="noise profile name")
    run.add_argument("--shots", type=int, default=1000)
    run.add_argument("--exact", action="store_true", help="score exact probabilities instead of samples")
    run.add_argument("--config", help="config file whose 'profiles' section extends the presets")
    run.add_argument("--out", help="write the JSON report here instead of stdout")

    sweep = sub.add_parser("sweep", help="run a parameter sweep from a config file")
    sweep.add_argument("--config", required=True)
    sweep.add_argument("--out", required=True, help="output directory")

    score = sub.add_parser("score", help="score an externally produced counts file")
    score.add_argument("--counts", required=True)
    score.add_argument("--targets", required=True, type=_str_list, help="target bitstrings, e.g. 101,010")
    _add_weight_flags(score)
    score.add_argument("--out")

    export = sub.add_parser("export", help="write the Grover circuit in text form")
    _add_search_flags(export)
    export.add_argument("--out", help="circuit file (stdout if omitted)")

    profiles = sub.add_parser("profiles", help="inspect noise profiles")
    profiles.add_argument("action", choices=["list"])
    profiles.add_argument("--config")
    return parser


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    Path(out).write_text(text, encoding="utf-8")


def _search_spec(args, **extra) -> BenchmarkSpec:
    return BenchmarkSpec(
        num_targets=args.num_targets,
        target_list=args.target_list,
        space_size=args.space_size,
        iterations=args.iterations,
        seed=args.seed,
        **extra,
    )


def _cmd_run(args) -> None:
    registry = load_profiles(args.config)
    spec = _search_spec(
        args,
        backend=args.backend,
        params=ScoreParams(args.lam, args.mu),
        shots=args.shots,
        exact=args.exact,
    )
    report = run_single(spec, registry)
    _write(report.to_json(), args.out)


def _load_config(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        config = yaml.safe_load(fh) or {}
    if not isinstance(config, dict):
        raise ValidationError(f"{path}: top level must be a mapping")
    return config


def _cmd_sweep(args) -> None:
    config = _load_config(args.config)
    section = config.get("sweep")
    if not isinstance(section, dict):
        raise ValidationError(f"{args.config}: missing 'sweep' section")
    sweep = SweepSpec.from_mapping(section)
    heat = section.get("heatmap") or {}
    axes = (heat.get("rows", "mu"), heat.get("cols", "space_size"))
    result = run_sweep(sweep, load_profiles(config))

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    docs = [r.to_dict() for r in result.reports]
    (out / "reports.json").write_text(json.dumps(docs, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    (out / "aggregate.csv").write_text(result.aggregate_csv(), encoding="utf-8")
    (out / "skipped.json").write_text(json.dumps(result.skipped, indent=2) + "\n", encoding="utf-8")

    fixed = [d for d in ("profile", "space_size", "num_targets", "lambda", "mu") if d not in axes]
    varying = [d for d in fixed if len({r.dimension(d) for r in result.reports}) > 1]
    for key, group in group_reports(result.reports, varying).items():
        suffix = "".join(f"_{d}-{v}" for d, v in zip(varying, key))
        title = ", ".join(f"{d}={v}" for d, v in zip(varying, key)) or "GRADE score"
        try:
            hm = emit_heatmap(group, axes, title=title)
        except ValidationError as exc:
            log.warning("heatmap%s skipped: %s", suffix, exc)
            continue
        (out / f"heatmap{suffix}.csv").write_text(hm.to_csv(), encoding="utf-8")
        (out / f"heatmap{suffix}.svg").write_text(hm.to_svg(), encoding="utf-8")
    print(f"{len(result.reports)} reports, {len(result.skipped)} skipped cells -> {out}")


def _cmd_score(args) -> None:
    counts, metadata = read_counts(args.counts)
    report = score_external(counts, args.targets, ScoreParams(args.lam, args.mu), metadata)
    _write(report.to_json(), args.out)


def _cmd_export(args) -> None:
    spec = _search_spec(args)
    plan = build_grover_circuit(spec.resolve_search(), spec.iterations)
    header = (
        f"# grover search over N={plan.spec.space_size}, targets {','.join(plan.spec.targets)}, "
        f"{plan.iterations} iteration(s)\n"
    )
    _write(header + render_circuit(plan.full_circuit), args.out)


def _cmd_profiles(args) -> None:
    for p in load_profiles(args.config).values():
        print(f"{p.name:<14} p1={p.p1:<8g} p2={p.p2:<8g} p_readout={p.p_readout:<8g} "
              f"mcx_cost={p.mcx_cost_slope}c{p.mcx_cost_offset:+d}")


_COMMANDS = {
    "run": _cmd_run,
    "sweep": _cmd_sweep,
    "score": _cmd_score,
    "export": _cmd_export,
    "profiles": _cmd_profiles,
}


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        _COMMANDS[args.command](args)
    except (ValidationError, NotFoundError, GradeError, yaml.YAMLError) as exc:
        print(f"grade: error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"grade: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
