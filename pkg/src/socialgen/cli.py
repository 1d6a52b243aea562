"""Command-line entry point: ``socialgen <fit|generate|rewire|metrics|simulate|pipeline>``."""

from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path

from . import io
from .degrees import DegreeModelError, fit_degree_model
from .graph import GraphError
from .metrics import ASPL_SAMPLE_CAP, SPECTRUM_CAP, MetricsError, connected_components, laplacian_spectrum, stats_report
from .pipeline import RunConfig, generate, rewire, run_pipeline, simulate_seed, stage_rng
from .processes import PUSH_PULL, SIR, SpreadSpec, SpreadSummary, run_experiment
from .rewire import RewireConfig

log = logging.getLogger("socialgen")

DEFAULT_PS = (0.1, 0.05, 0.01)


class _Outputs:
    """Files written by a command, removed again if the command fails."""

    def __init__(self):
        self.paths: list[Path] = []
        self.dirs: list[Path] = []

    def file(self, path) -> Path:
        p = Path(path)
        self.paths.append(p)
        return p

    def directory(self, path) -> Path:
        p = Path(path)
        if not p.exists():
            p.mkdir(parents=True)
            self.dirs.append(p)
        return p

    def cleanup(self) -> None:
        for p in self.paths:
            for q in (p, p.with_name(p.name + ".tmp")):
                if q.exists():
                    q.unlink()
        for d in reversed(self.dirs):
            if d.exists() and not any(d.iterdir()):
                d.rmdir()


def _rewire_config(args) -> RewireConfig:
    return RewireConfig(
        degree_percentile=args.percentile,
        pair_fraction=args.pair_fraction,
        attempts=args.attempts,
    )


def _spread_specs(args, master_seed: int) -> list[SpreadSpec]:
    processes = [PUSH_PULL, SIR] if args.process == "both" else [args.process]
    specs = []
    for proc in processes:
        for p in (args.p if proc == SIR else [0.0]):
            specs.append(
                SpreadSpec(
                    process=proc,
                    p=p,
                    repetitions=args.reps,
                    seed=simulate_seed(master_seed, len(specs)),
                )
            )
    return specs


def _spread_record(specs: list[SpreadSpec], summaries: list[SpreadSummary]) -> dict:
    rec: dict[str, object] = {}
    for spec, summary in zip(specs, summaries):
        prefix = PUSH_PULL if spec.process == PUSH_PULL else f"sir_p{spec.p!r}"
        rec[f"{prefix}_seed"] = spec.seed
        for key, value in summary.as_dict().items():
            if key != "process":
                rec[f"{prefix}_{key}"] = value
    return rec


def _echo(args) -> dict:
    skip = {"func", "log_level"}
    return {f"param_{k}": (",".join(map(repr, v)) if isinstance(v, list) else v)
            for k, v in sorted(vars(args).items()) if k not in skip}


# ---------------------------------------------------------------------------
# subcommands


def cmd_fit(args, out: _Outputs) -> None:
    g = io.read_edge_list(args.edges)
    model = fit_degree_model(g)
    io.write_model(out.file(args.out), model, {"master_seed": args.seed, **_echo(args)})


def cmd_generate(args, out: _Outputs) -> None:
    model = io.read_model(args.config)
    t0 = time.perf_counter()
    g, _ = generate(model, args.seed)
    log.info("stage generate took %.2fs", time.perf_counter() - t0)
    io.write_edge_list(g, out.file(args.out), {"master_seed": args.seed, "stage": "generate"})


def cmd_rewire(args, out: _Outputs) -> None:
    g = io.read_edge_list(args.edges)
    t0 = time.perf_counter()
    report = rewire(g, _rewire_config(args), args.seed)
    elapsed = time.perf_counter() - t0
    log.info("stage rewire took %.2fs", elapsed)
    io.write_edge_list(g, out.file(args.out), {"master_seed": args.seed, "stage": "rewire"})
    rec = {"master_seed": args.seed, **_echo(args), **report.as_dict(), "runtime_rewire": elapsed}
    io.write_record(out.file(args.out + ".report"), rec, "rewire report")


def cmd_metrics(args, out: _Outputs) -> None:
    g = io.read_edge_list(args.edges)
    t0 = time.perf_counter()
    seed = int(stage_rng(args.seed, "metrics").integers(2**63))
    stats = stats_report(g, aspl_sample_cap=args.aspl_sample_cap, seed=seed)
    log.info("stage metrics took %.2fs", time.perf_counter() - t0)
    io.write_record(out.file(args.out), {**stats.as_dict(), "master_seed": args.seed, **_echo(args)}, "graph stats")
    if args.spectrum:
        _, lwcc = connected_components(g)
        spec = laplacian_spectrum(g, lwcc, cap=args.spectrum_cap)
        io.write_histogram(out.file(args.spectrum), *spec.histogram())


def cmd_simulate(args, out: _Outputs) -> None:
    g = io.read_edge_list(args.edges)
    specs = _spread_specs(args, args.seed)
    t0 = time.perf_counter()
    summaries = [run_experiment(g, s) for s in specs]
    log.info("stage simulate took %.2fs", time.perf_counter() - t0)
    rec = {"master_seed": args.seed, **_echo(args), **_spread_record(specs, summaries)}
    io.write_record(out.file(args.out), rec, "spreading results")


def cmd_pipeline(args, out: _Outputs) -> None:
    if (args.config is None) == (args.graph is None):
        raise ValueError("pipeline needs exactly one of --config or --graph")
    outdir = out.directory(args.out)
    if args.graph is not None:
        model = fit_degree_model(io.read_edge_list(args.graph))
    else:
        model = io.read_model(args.config)
    io.write_model(out.file(outdir / "model.txt"), model, {"master_seed": args.seed})

    specs = _spread_specs(args, args.seed) if args.reps > 0 else []
    cfg = RunConfig(
        master_seed=args.seed,
        skip_rewiring=args.skip_rewiring,
        rewire=_rewire_config(args),
        spreads=specs,
        aspl_sample_cap=args.aspl_sample_cap,
        spectrum_cap=args.spectrum_cap,
    )
    result = run_pipeline(model, cfg)
    g = result.graph
    stage = "generate" if args.skip_rewiring else "rewire"
    io.write_edge_list(g, out.file(outdir / "graph.tsv"), {"master_seed": args.seed, "stage": stage})
    io.write_record(out.file(outdir / "stats.txt"), {**result.stats.as_dict(), "master_seed": args.seed}, "graph stats")
    if specs:
        rec = {"master_seed": args.seed, **_spread_record(specs, result.spreads)}
        io.write_record(out.file(outdir / "results.txt"), rec, "spreading results")
    if args.spectrum:
        _, lwcc = connected_components(g)
        spectrum = laplacian_spectrum(g, lwcc, cap=args.spectrum_cap)
        io.write_histogram(out.file(outdir / "spectrum.tsv"), *spectrum.histogram())

    runlog: dict[str, object] = {"master_seed": args.seed, **_echo(args)}
    runlog.update({f"runtime_{k}": v for k, v in result.timings.items()})
    if result.rewire is not None:
        runlog.update({f"rewire_{k}": v for k, v in result.rewire.as_dict().items()})
    io.write_record(out.file(outdir / "run.log"), runlog, "pipeline run")


# ---------------------------------------------------------------------------
# parser


def _add_rewire_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--percentile", type=float, default=95.0, help="upper total-degree percentile admitted to rewiring")
    p.add_argument("--pair-fraction", type=float, default=0.6, help="share of neighbour pairs for above-median nodes")
    p.add_argument("--attempts", type=int, default=10, help="second-degree sampling retries")


def _add_spread_flags(p: argparse.ArgumentParser, default_reps: int) -> None:
    p.add_argument("--process", choices=[PUSH_PULL, SIR, "both"], default="both")
    p.add_argument("--p", type=float, nargs="+", default=list(DEFAULT_PS), help="SIR infection probabilities")
    p.add_argument("--reps", type=int, default=default_reps, help="repetitions per experiment")


def _add_metric_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--aspl-sample-cap", type=int, default=ASPL_SAMPLE_CAP)
    p.add_argument("--spectrum-cap", type=int, default=SPECTRUM_CAP)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="socialgen", description="Directed social-graph generator and evaluator.")
    parser.add_argument("--log-level", default="INFO")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--seed", type=int, default=0, help="master seed")
        p.set_defaults(func=func)
        return p

    p = command("fit", cmd_fit, "fit a degree model to an edge list")
    p.add_argument("edges")
    p.add_argument("--out", required=True)

    p = command("generate", cmd_generate, "sample an intermediary graph from a model config")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)

    p = command("rewire", cmd_rewire, "rewire an edge list to raise clustering")
    p.add_argument("edges")
    p.add_argument("--out", required=True)
    _add_rewire_flags(p)

    p = command("metrics", cmd_metrics, "topological features of an edge list")
    p.add_argument("edges")
    p.add_argument("--out", required=True)
    p.add_argument("--spectrum", help="also write the LWCC Laplacian histogram here")
    _add_metric_flags(p)

    p = command("simulate", cmd_simulate, "push-pull / SIR experiments on an edge list")
    p.add_argument("edges")
    p.add_argument("--out", required=True)
    _add_spread_flags(p, default_reps=100)

    p = command("pipeline", cmd_pipeline, "fit-or-config through simulate in one run")
    p.add_argument("--config", help="model config file")
    p.add_argument("--graph", help="edge list to fit the model from")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--skip-rewiring", action="store_true", help="stop at the intermediary graph")
    p.add_argument("--spectrum", action="store_true", help="write the LWCC Laplacian histogram")
    _add_rewire_flags(p)
    _add_metric_flags(p)
    _add_spread_flags(p, default_reps=0)
    return parser


def dispatch(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=args.log_level.upper(), format="%(asctime)s %(name)s %(levelname)s %(message)s")
    out = _Outputs()
    try:
        args.func(args, out)
    except (GraphError, DegreeModelError, MetricsError, io.FormatError, ValueError, OSError) as exc:
        out.cleanup()
        print(f"socialgen {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
