"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 data error (unreadable or
malformed input), 3 infeasible LFR generation.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .experiment import (
    DEFAULT_GRIDS,
    DatasetSpec,
    ExperimentSpec,
    default_budget,
    parse_grid,
    rows_to_csv,
    rows_to_text,
    run_experiment,
    stability_histogram,
)
from .graph import GraphFormatError, load_edge_list, write_edge_list, write_labels
from .lfr import LfrGenerationError, generate_lfr
from .louvain import detect
from .objectives import ALGORITHMS, Objective
from .powerlaw import LfrParams, estimate_community_params, estimate_graph_params
from .tuner import _DEFAULT, TuneConfig, TuningError, seed_for, tune_many

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_INFEASIBLE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(text: str, args, filename: str) -> None:
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / filename).write_text(text, encoding="utf-8")
    sys.stdout.write(text)


def _csv(pairs) -> str:
    return "".join(f"{k},{v}\n" for k, v in pairs)


def _budget(args, n: int) -> tuple[int, int]:
    g, r, _ = default_budget(n)
    return args.n_graphs or g, args.n_runs or r


def _grid(args) -> list[float]:
    try:
        return parse_grid(args.grid or DEFAULT_GRIDS[args.algorithm])
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_detect(args) -> int:
    graph = load_edge_list(args.edges)
    obj = Objective.for_algorithm(args.algorithm, args.param)
    res = detect(graph, obj, args.seed)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        with open(out / f"{Path(args.edges).stem}.labels", "w", encoding="utf-8") as fh:
            write_labels(res.partition, fh)
    else:
        write_labels(res.partition, sys.stdout)
    summary = [("objective", obj), ("value", f"{res.objective_value:.10g}"), ("communities", res.partition.n_communities)]
    if args.format == "csv":
        sys.stderr.write(_csv(summary))
    else:
        sys.stderr.write("".join(f"{k}: {v}\n" for k, v in summary))
    return EXIT_OK


def _tune(args, metrics):
    graph = load_edge_list(args.edges)
    n_graphs, n_runs = _budget(args, graph.n)
    default = ALGORITHMS[args.algorithm][2] if args.param is None else args.param
    config = TuneConfig(_grid(args), default, metrics[0], n_graphs, n_runs, args.seed, args.workers)
    return tune_many(graph, args.algorithm, config, metrics)


def cmd_tune(args) -> int:
    report = _tune(args, (args.metric,))[args.metric]
    stem = Path(args.edges).stem
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"{stem}.tune.json").write_text(json.dumps(report.to_dict(), indent=2) + "\n", encoding="utf-8")
    if args.format == "csv":
        pairs = [("chosen", f"{report.chosen:g}"), ("default", f"{report.default:g}"), ("metric", report.quality)]
        if report.params is not None:
            pairs += [(f"lfr.{k}", f"{v:.6g}" if isinstance(v, float) else v) for k, v in report.params.as_dict().items()]
        pairs += [(f"graph.{g}", f"{b:g}") for g, b in enumerate(report.per_graph_best)]
        _emit(_csv(pairs), args, f"{stem}.tune.csv")
    else:
        _emit(report.to_text(), args, f"{stem}.tune.txt")
    return EXIT_OK


def cmd_stability(args) -> int:
    report = _tune(args, (args.metric,))[args.metric]
    hist = stability_histogram(report.per_graph_best, report.candidates)
    if args.format == "csv":
        text = "theta,frequency\n" + "".join(f"{t:g},{c}\n" for t, c in hist)
    else:
        text = "".join(f"{t:>8g} {c:>6d} {'#' * c}\n" for t, c in hist)
    _emit(text, args, f"{Path(args.edges).stem}.stability.{args.format}")
    return EXIT_OK


def cmd_experiment(args) -> int:
    if args.spec:
        spec = ExperimentSpec.from_file(args.spec)
    elif args.dataset:
        datasets = []
        for item in args.dataset:
            parts = item.split(",")
            if len(parts) != 2:
                raise UsageError(f"--dataset expects EDGES,LABELS, got {item!r}")
            datasets.append(DatasetSpec(Path(parts[0]).stem, parts[0], parts[1]))
        spec = ExperimentSpec(datasets, args.algorithm, args.param, _grid(args) if args.grid else None)
    else:
        raise UsageError("experiment needs a spec file or at least one --dataset")
    for name in ("n_graphs", "n_runs", "n_runs_eval"):
        if getattr(args, name):
            setattr(spec, name, getattr(args, name))
    if args.seed is not None:
        spec.master_seed = args.seed
    rows = run_experiment(spec)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "results.csv").write_text(rows_to_csv(rows), encoding="utf-8")
        (out / "results.txt").write_text(rows_to_text(rows), encoding="utf-8")
    sys.stdout.write(rows_to_csv(rows) if args.format == "csv" else rows_to_text(rows))
    return EXIT_OK


def _params_from_args(args) -> LfrParams:
    if args.edges:
        graph = load_edge_list(args.edges)
        c0 = detect(graph, Objective.for_algorithm(args.algorithm, args.param), seed_for(args.seed, _DEFAULT)).partition
        return LfrParams.from_parts(estimate_graph_params(graph), estimate_community_params(graph, c0))
    fields = ("n", "mean_degree", "d_max", "degree_exponent", "mixing", "size_exponent", "c_min", "c_max")
    missing = [f for f in fields if getattr(args, f) is None]
    if missing:
        raise UsageError("give an edge file or all of " + ", ".join("--" + f.replace("_", "-") for f in missing))
    try:
        return LfrParams(**{f: getattr(args, f) for f in fields})
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_estimate(args) -> int:
    params = _params_from_args(args)
    pairs = [(k, f"{v:.6g}" if isinstance(v, float) else v) for k, v in params.as_dict().items()]
    text = _csv(pairs) if args.format == "csv" else "".join(f"{k}: {v}\n" for k, v in pairs)
    _emit(text, args, f"lfr_params.{args.format}")
    return EXIT_OK


def cmd_generate(args) -> int:
    params = _params_from_args(args)
    inst = generate_lfr(params, args.seed)
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    name = args.name
    with open(out / f"{name}.edges", "w", encoding="utf-8") as fh:
        write_edge_list(inst.graph, fh)
    with open(out / f"{name}.labels", "w", encoding="utf-8") as fh:
        write_labels(inst.ground_truth, fh)
    sys.stdout.write(
        f"wrote {out / name}.edges and .labels: n={inst.graph.n} m={inst.graph.m} "
        f"communities={inst.ground_truth.n_communities} mixing={inst.achieved_mixing:.6g}\n"
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="commtune", description="Community detection with label-free hyperparameter tuning.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, edges=True, tuning=False):
        if edges:
            sp.add_argument("edges", help="edge-list file")
        sp.add_argument("--algorithm", choices=sorted(ALGORITHMS), default="louvain")
        sp.add_argument("--param", type=float, default=None, help="default resolution (gamma) or mixing (mu)")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out", default=None, help="output directory")
        sp.add_argument("--format", choices=("text", "csv"), default="text")
        if tuning:
            sp.add_argument("--grid", default=None, help="preset name or start:stop:step")
            sp.add_argument("--metric", choices=("rand", "jaccard", "nmi"), default="nmi")
            sp.add_argument("--n-graphs", type=int, default=None)
            sp.add_argument("--n-runs", type=int, default=None)
            sp.add_argument("--workers", type=int, default=1)

    common(sub.add_parser("detect", help="cluster a graph and write labels"))
    common(sub.add_parser("tune", help="pick a parameter without ground truth"), tuning=True)
    common(sub.add_parser("stability", help="histogram of per-graph best parameters"), tuning=True)

    ex = sub.add_parser("experiment", help="default vs tuned on labeled datasets")
    ex.add_argument("spec", nargs="?", help="JSON experiment spec")
    ex.add_argument("--dataset", action="append", help="EDGES,LABELS (repeatable) instead of a spec")
    common(ex, edges=False, tuning=True)
    ex.set_defaults(seed=None)
    ex.add_argument("--n-runs-eval", type=int, default=None)

    for name, helptext in (("estimate", "print fitted LFR parameters"), ("generate", "write an LFR instance")):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("edges", nargs="?", help="fit parameters to this graph instead of giving them")
        common(sp, edges=False)
        for f, typ in (("n", int), ("mean-degree", float), ("d-max", int), ("degree-exponent", float),
                       ("mixing", float), ("size-exponent", float), ("c-min", int), ("c-max", int)):
            sp.add_argument(f"--{f}", type=typ, default=None)
        if name == "generate":
            sp.add_argument("--name", default="lfr", help="output file stem")
    return p


COMMANDS = {
    "detect": cmd_detect,
    "tune": cmd_tune,
    "stability": cmd_stability,
    "experiment": cmd_experiment,
    "estimate": cmd_estimate,
    "generate": cmd_generate,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"commtune {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except LfrGenerationError as exc:
        print(f"commtune {args.command}: infeasible generation: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except TuningError as exc:
        code = EXIT_INFEASIBLE if isinstance(exc.__cause__, LfrGenerationError) else EXIT_DATA
        print(f"commtune {args.command}: {exc}", file=sys.stderr)
        return code
    except (GraphFormatError, OSError, KeyError, ValueError, json.JSONDecodeError) as exc:
        print(f"commtune {args.command}: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
