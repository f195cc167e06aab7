"""Command-line interface.

Subcommands cover the full pipeline: synth (build + sample an oracle
world), contingency, sample, fit, project, edit, eval, sweep, report.
Exit codes: 0 success, 1 usage error, 2 data/file error.  Every random
step takes --seed (default 0); under --strict an omitted --seed is a
usage error.  Identical invocations produce byte-identical outputs.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

import numpy as np

from . import __version__
from .contingency import build_contingency, imbalance_stats, write_contingency_csv
from .core import LatentDataset
from .dataio import LatdFormatError, atomic_write_text, read_dataset, write_dataset
from .directions import (conditional_project, edit_latent, load_direction,
                         save_direction)
from .evaluation import (_eval_latents, fit_directions, rescore, save_rescore,
                         sweep_regularization, sweep_sample_size, sweep_to_csv)
from .oracle import default_world, load_world, make_world, sample_world, save_world
from .sampler import (SamplePlan, balanced_subsample, read_subsample_indices,
                      uniform_subsample, write_subsample)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors by default; this tool reserves 2 for data errors
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_seed(p: argparse.ArgumentParser):
    p.add_argument("--seed", type=int, default=None,
                   help="RNG seed (default 0; required with --strict)")


def _resolve_seed(args) -> int:
    if args.seed is None:
        if args.strict:
            raise _UsageError("--seed is required in --strict mode")
        return 0
    return args.seed


def _parse_floats(text: str) -> list[float]:
    return [float(t) for t in text.split(",") if t.strip()]


def _parse_ints(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t.strip()]


def build_parser() -> _Parser:
    parser = _Parser(prog="latbal",
                     description="Balanced sampling and attribute-direction "
                                 "estimation for labeled latent datasets.")
    parser.add_argument("--version", action="version", version=f"latbal {__version__}")
    parser.add_argument("--strict", action="store_true",
                        help="fail (exit 1) when a random step runs without --seed")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("synth",
                       help="build an oracle world and sample a labeled dataset")
    p.add_argument("--out", required=True, help="output dataset path base")
    p.add_argument("--world-out", default=None, help="world JSON path (default <out>.world.json)")
    p.add_argument("--n", type=int, default=10000, help="number of latent codes")
    p.add_argument("--dim", type=int, default=None)
    p.add_argument("--names", default=None, help="comma-separated attribute names")
    p.add_argument("--rates", default=None, help="comma-separated positive rates")
    p.add_argument("--corr", action="append", default=None, metavar="I,J,RHO",
                   help="pairwise cosine between planted vectors (repeatable)")
    p.add_argument("--sharpness", type=float, default=None, help="logistic slope")
    _add_seed(p)

    p = sub.add_parser("contingency",
                       help="build the label contingency table")
    p.add_argument("--data", required=True, help="dataset path base")
    p.add_argument("--out", required=True, help="output CSV path")
    p.add_argument("--stats", default=None, help="optional JSON path for imbalance stats")

    p = sub.add_parser("sample", help="subsample a dataset")
    p.add_argument("--data", required=True)
    p.add_argument("--mode", choices=("balanced", "uniform"), default="balanced")
    p.add_argument("--n0", type=int, default=1000)
    p.add_argument("--policy", choices=("skip", "oversample"), default="skip")
    p.add_argument("--out", required=True, help="output path base (.csv + .json)")
    _add_seed(p)

    p = sub.add_parser("fit", help="fit one direction per attribute")
    p.add_argument("--data", required=True)
    p.add_argument("--subsample", default=None, help="subsample CSV restricting the fit rows")
    p.add_argument("--method", choices=("centroid", "svm"), default="centroid")
    p.add_argument("--c", type=float, default=1.0, help="SVM regularization")
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--max-iter", type=int, default=1000)
    p.add_argument("--out-dir", required=True)
    _add_seed(p)

    p = sub.add_parser("project",
                       help="project a direction off the span of others")
    p.add_argument("--target", required=True)
    p.add_argument("--others", nargs="+", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("edit", help="translate all codes along a direction")
    p.add_argument("--data", required=True)
    p.add_argument("--direction", required=True)
    p.add_argument("--alpha", type=float, default=0.2)
    p.add_argument("--out", required=True, help="output dataset path base")

    p = sub.add_parser("eval",
                       help="re-score directions against an oracle world")
    p.add_argument("--world", required=True)
    p.add_argument("--directions", nargs="+", required=True)
    p.add_argument("--alpha", type=float, default=0.2)
    p.add_argument("--n", type=int, default=2000, help="evaluation codes")
    p.add_argument("--out", required=True, help="output path base (.csv + .json)")
    _add_seed(p)

    p = sub.add_parser("sweep",
                       help="sample-size or regularization sweep")
    p.add_argument("--data", required=True)
    p.add_argument("--world", required=True)
    p.add_argument("--sizes", default=None, help="comma-separated N0 grid")
    p.add_argument("--c-grid", default=None, help="comma-separated C grid")
    p.add_argument("--methods", default="centroid", help="comma-separated: centroid,svm")
    p.add_argument("--policies", default="skip",
                   help="comma-separated: skip,oversample,uniform")
    p.add_argument("--n0", type=int, default=1000, help="subsample size for --c-grid")
    p.add_argument("--c", type=float, default=1.0, help="SVM C for --sizes sweeps")
    p.add_argument("--runs", type=int, default=5)
    p.add_argument("--alpha", type=float, default=0.2)
    p.add_argument("--n-eval", type=int, default=2000)
    p.add_argument("--out", required=True, help="output CSV path")
    _add_seed(p)

    p = sub.add_parser("report", help="merge sweep/rescore CSVs")
    p.add_argument("--inputs", nargs="+", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    return parser


def _cmd_synth(args) -> int:
    seed = _resolve_seed(args)
    custom = any(v is not None for v in
                 (args.dim, args.names, args.rates, args.corr, args.sharpness))
    if not custom:
        world = default_world(seed=seed)
    else:
        names = tuple(args.names.split(",")) if args.names else None
        rates = _parse_floats(args.rates) if args.rates else None
        m = len(names) if names else (len(rates) if rates else 4)
        if names is None:
            names = tuple(f"attr{k}" for k in range(m))
        if rates is None:
            rates = [0.5] * m
        dim = args.dim if args.dim is not None else 64
        gram = np.eye(m)
        for spec in args.corr or []:
            parts = spec.split(",")
            if len(parts) != 3:
                raise _UsageError(f"--corr expects I,J,RHO, got {spec!r}")
            i, j, rho = int(parts[0]), int(parts[1]), float(parts[2])
            gram[i, j] = gram[j, i] = rho
        world = make_world(dim=dim, m=m, gram=gram, positive_rates=rates,
                           sharpness=args.sharpness if args.sharpness is not None else 1.0,
                           seed=seed, names=names)
    dataset = sample_world(world, args.n, seed=seed)
    write_dataset(dataset, args.out)
    save_world(world, args.world_out or args.out + ".world.json")
    print(f"wrote {args.out}.latd ({dataset.n} codes, dim {dataset.dim}, "
          f"{dataset.m} attributes)")
    return 0


def _cmd_contingency(args) -> int:
    dataset = read_dataset(args.data)
    table = build_contingency(dataset)
    write_contingency_csv(table, args.out)
    stats = imbalance_stats(table)
    payload = {
        "min_cell": stats.min_cell, "max_cell": stats.max_cell,
        "nonempty_cells": stats.nonempty_cells,
        "max_min_ratio": stats.max_min_ratio,
        "chi_square_vs_uniform": stats.chi_square_vs_uniform,
    }
    if args.stats:
        atomic_write_text(args.stats, json.dumps(payload, indent=2) + "\n")
    print(json.dumps(payload))
    return 0


def _cmd_sample(args) -> int:
    seed = _resolve_seed(args)
    dataset = read_dataset(args.data)
    if args.mode == "uniform":
        result = uniform_subsample(dataset, args.n0, seed)
    else:
        table = build_contingency(dataset)
        result = balanced_subsample(dataset, table,
                                    SamplePlan(n0=args.n0, policy=args.policy, seed=seed))
    write_subsample(result, args.out)
    print(f"wrote {args.out}.csv ({result.size} draws, "
          f"{result.skipped_iterations} skipped)")
    return 0


def _cmd_fit(args) -> int:
    seed = _resolve_seed(args)
    dataset = read_dataset(args.data)
    if args.subsample:
        dataset = dataset.select(read_subsample_indices(args.subsample))
    dirs = fit_directions(dataset, args.method, c=args.c, tol=args.tol,
                          max_iter=args.max_iter, seed=seed)
    os.makedirs(args.out_dir, exist_ok=True)
    for direction in dirs:
        name = dataset.schema.names[direction.attribute]
        path = os.path.join(args.out_dir, f"{name}.json")
        save_direction(direction, path)
        print(f"wrote {path}")
    return 0


def _cmd_project(args) -> int:
    target = load_direction(args.target)
    others = [load_direction(p) for p in args.others]
    save_direction(conditional_project(target, others), args.out)
    print(f"wrote {args.out}")
    return 0


def _cmd_edit(args) -> int:
    dataset = read_dataset(args.data)
    direction = load_direction(args.direction)
    edited = edit_latent(dataset.codes, direction, args.alpha)
    out = LatentDataset(dim=dataset.dim, codes=edited, labels=dataset.labels,
                        schema=dataset.schema, confidences=dataset.confidences)
    write_dataset(out, args.out)
    print(f"wrote {args.out}.latd")
    return 0


def _cmd_eval(args) -> int:
    seed = _resolve_seed(args)
    world = load_world(args.world)
    dirs = [load_direction(p) for p in args.directions]
    latents = _eval_latents(world.dim, args.n, seed, 0)
    matrix = rescore(world.score, dirs, latents, args.alpha)
    save_rescore(matrix, args.out, names=world.names)
    print(f"wrote {args.out}.csv")
    return 0


def _cmd_sweep(args) -> int:
    seed = _resolve_seed(args)
    if (args.sizes is None) == (args.c_grid is None):
        raise _UsageError("exactly one of --sizes or --c-grid is required")
    dataset = read_dataset(args.data)
    world = load_world(args.world)
    if args.sizes is not None:
        report = sweep_sample_size(
            dataset, world.score, _parse_ints(args.sizes),
            methods=tuple(args.methods.split(",")),
            policies=tuple(args.policies.split(",")),
            runs=args.runs, alpha=args.alpha, n_eval=args.n_eval,
            c=args.c, seed=seed)
    else:
        report = sweep_regularization(
            dataset, world.score, _parse_floats(args.c_grid), n0=args.n0,
            runs=args.runs, alpha=args.alpha, n_eval=args.n_eval, seed=seed)
    atomic_write_text(args.out, sweep_to_csv(report))
    print(f"wrote {args.out} ({len(report.rows)} rows)")
    return 0


def _cmd_report(args) -> int:
    header = None
    rows = []
    for path in args.inputs:
        with open(path, newline="") as f:
            reader = csv.reader(f)
            try:
                head = next(reader)
            except StopIteration:
                raise LatdFormatError(f"{path}: empty CSV") from None
            if header is None:
                header = head
            elif head != header:
                raise LatdFormatError(f"{path}: header {head} does not match {header}")
            rows.extend(list(reader))
    if args.format == "csv":
        out = ",".join(header) + "\n" + "\n".join(",".join(r) for r in rows)
        atomic_write_text(args.out, out + "\n")
    else:
        payload = [dict(zip(header, r)) for r in rows]
        atomic_write_text(args.out, json.dumps(payload, indent=2) + "\n")
    print(f"wrote {args.out} ({len(rows)} rows)")
    return 0


_COMMANDS = {
    "synth": _cmd_synth,
    "contingency": _cmd_contingency,
    "sample": _cmd_sample,
    "fit": _cmd_fit,
    "project": _cmd_project,
    "edit": _cmd_edit,
    "eval": _cmd_eval,
    "sweep": _cmd_sweep,
    "report": _cmd_report,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"latbal {args.command}: error: {exc}", file=sys.stderr)
        return 1
    except (LatdFormatError, ValueError, IndexError, OSError,
            json.JSONDecodeError) as exc:
        print(f"latbal {args.command}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
