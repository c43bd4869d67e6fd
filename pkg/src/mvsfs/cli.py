"""Command-line front end.

    mvsfs gain --data FILE
    mvsfs search --data FILE --attribute N [--log PATH]
    mvsfs rank --data FILE --method {id3,mvs}
    mvsfs reproduce {iris,vehicle}
    mvsfs samples --data FILE

Options may also come from ``--config FILE`` holding ``key=value`` lines named
like the long flags (``seed=7``, ``code-parity=true``); flags win over the
file and ``MVS_SEED`` wins over both for the seed.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .anneal import AnnealSchedule, SeedStreamSpec, format_run_log, mvs_search
from .data import DiscretizationSpec, discretize, load_csv, split_train_test
from .errors import InputError, MVSError
from .harness import (
    ExperimentConfig,
    export_samples,
    rank_by_id3_gain,
    rank_by_mvs_gain,
    reproduce_experiment,
)
from .infogain import DEFAULT_MAX_R, best_singleton_gain, exhaustive_best_partition, id3_gain

DISCRETIZE_ALIASES = {
    "identity": "identity",
    "width": "equal_width",
    "freq": "equal_frequency",
    "equal_width": "equal_width",
    "equal_frequency": "equal_frequency",
}

# option name -> (type, default)
OPTIONS = {
    "data": (str, None),
    "header": (bool, False),
    "discretize": (str, "identity"),
    "bins": (int, 10),
    "ratio": (float, 0.7),
    "seed": (int, 1),
    "t0": (float, 1000.0),
    "tend": (float, 1.0),
    "cool": (float, 0.90),
    "lb": (int, 2),
    "restarts": (int, 1),
    "code-parity": (bool, False),
    "out": (str, None),
    "format": (str, "tsv"),
    "max-r": (int, DEFAULT_MAX_R),
}


@dataclass(frozen=True)
class RunConfig:
    data_path: str | None
    has_header: bool
    discretization: DiscretizationSpec
    split_ratio: float
    master_seed: int
    schedule: AnnealSchedule
    restarts: int
    code_parity: bool
    output_path: str | None
    output_format: str
    max_r: int

    def experiment(self) -> ExperimentConfig:
        return ExperimentConfig(
            ratio=self.split_ratio,
            seed=self.master_seed,
            discretization=self.discretization,
            schedule=self.schedule,
            restarts=self.restarts,
            code_parity=self.code_parity,
        )


def _parse_bool(text: str) -> bool:
    value = text.strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise InputError(f"not a boolean: {text!r}")


def read_config_file(path) -> dict:
    path = Path(path)
    if not path.is_file():
        raise InputError(f"config file not found: {path}")
    values = {}
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise InputError(f"{path}:{lineno}: expected key=value")
        key, raw = (s.strip() for s in line.split("=", 1))
        key = key.replace("_", "-")
        if key not in OPTIONS:
            raise InputError(f"{path}:{lineno}: unknown key {key!r}")
        kind = OPTIONS[key][0]
        try:
            values[key] = _parse_bool(raw) if kind is bool else kind(raw)
        except ValueError:
            raise InputError(f"{path}:{lineno}: bad value for {key}: {raw!r}") from None
    return values


def build_config(args: argparse.Namespace, environ=None) -> RunConfig:
    environ = os.environ if environ is None else environ
    merged = {k: default for k, (_, default) in OPTIONS.items()}
    if getattr(args, "config", None):
        merged.update(read_config_file(args.config))
    for key in OPTIONS:
        value = getattr(args, key.replace("-", "_"), None)
        if value is not None:
            merged[key] = value
    if environ.get("MVS_SEED"):
        try:
            merged["seed"] = int(environ["MVS_SEED"])
        except ValueError:
            raise InputError(f"MVS_SEED is not an integer: {environ['MVS_SEED']!r}") from None

    if merged["discretize"] not in DISCRETIZE_ALIASES:
        raise InputError(f"unknown discretization {merged['discretize']!r}")
    if merged["format"] not in ("tsv", "jsonl"):
        raise InputError(f"unknown output format {merged['format']!r}")
    if merged["seed"] < 0:
        raise InputError("seed must be non-negative")
    if merged["restarts"] < 1:
        raise InputError("restarts must be >= 1")
    if not 0 < merged["ratio"] < 1:
        raise InputError("ratio must lie in (0, 1)")

    return RunConfig(
        data_path=merged["data"],
        has_header=merged["header"],
        discretization=DiscretizationSpec(DISCRETIZE_ALIASES[merged["discretize"]], merged["bins"]),
        split_ratio=merged["ratio"],
        master_seed=merged["seed"],
        schedule=AnnealSchedule(merged["t0"], merged["tend"], merged["cool"], merged["lb"]),
        restarts=merged["restarts"],
        code_parity=merged["code-parity"],
        output_path=merged["out"],
        output_format=merged["format"],
        max_r=merged["max-r"],
    )


def render_table(columns, rows, fmt: str, header_lines=()) -> str:
    if fmt == "jsonl":
        return "".join(json.dumps(dict(zip(columns, r))) + "\n" for r in rows)
    lines = [f"# {h}" for h in header_lines]
    lines.append("\t".join(columns))
    lines += ["\t".join(str(v) for v in r) for r in rows]
    return "\n".join(lines) + "\n"


def _emit(text: str, config: RunConfig):
    if config.output_path:
        Path(config.output_path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _load(config: RunConfig):
    if not config.data_path:
        raise InputError("--data is required for this command")
    return discretize(load_csv(config.data_path, config.has_header), config.discretization)


def _attribute_index(ds, number: int) -> int:
    if not 1 <= number <= ds.attribute_count:
        raise InputError(f"attribute must lie in 1..{ds.attribute_count}, got {number}")
    return number - 1


def cmd_gain(args, config: RunConfig) -> int:
    ds = _load(config)
    rows = []
    for a in range(ds.attribute_count):
        _, single = best_singleton_gain(ds, a)
        if ds.unique_counts[a] <= config.max_r:
            _, best = exhaustive_best_partition(ds, a, config.max_r)
            mvs = f"{best.gain:.4f}"
        else:
            mvs = "-"
        rows.append([ds.attribute_names[a], ds.unique_counts[a], f"{id3_gain(ds, a).gain:.4f}",
                     f"{single.gain:.4f}", mvs])
    columns = ["attribute", "unique_values", "id3_gain", "gid3_best_singleton", "mvs_exhaustive"]
    _emit(render_table(columns, rows, config.output_format), config)
    return 0


def cmd_search(args, config: RunConfig) -> int:
    ds = _load(config)
    a = _attribute_index(ds, args.attribute)
    outcome = mvs_search(ds, a, config.schedule, SeedStreamSpec(config.master_seed, a),
                         code_parity=config.code_parity)
    summary = [
        ("attribute", ds.attribute_names[a]),
        ("unique_values", ds.unique_counts[a]),
        ("best_gain", f"{outcome.best_value:.6f}"),
        ("subset", ",".join(map(str, outcome.best_mask.symbols)) or "-"),
        ("subset_size", outcome.subset_size),
        ("evaluations", outcome.evaluations),
        ("temperature_levels", outcome.levels),
        ("f_high", f"{outcome.f_high:.6f}"),
        ("f_low", f"{outcome.f_low:.6f}"),
        ("master_seed", config.master_seed),
        ("stream_id", a),
    ]
    if ds.unique_counts[a] <= config.max_r:
        _, oracle = exhaustive_best_partition(ds, a, config.max_r)
        summary.append(("exhaustive_gain", f"{oracle.gain:.6f}"))
        summary.append(("attains_optimum", int(abs(oracle.gain - outcome.best_value) <= 1e-9)))
    _emit(render_table(["key", "value"], summary, config.output_format), config)
    if args.log:
        Path(args.log).write_text(format_run_log(outcome), encoding="utf-8")
    return 0


def cmd_rank(args, config: RunConfig) -> int:
    ds = _load(config)
    train = split_train_test(ds, config.split_ratio, config.master_seed).train
    if args.method == "id3":
        report = rank_by_id3_gain(train)
    else:
        report = rank_by_mvs_gain(train, config.schedule, config.master_seed, config.restarts,
                                  config.code_parity)
    rows = []
    for i, a in enumerate(report.order, start=1):
        subset = ",".join(map(str, report.masks[a].symbols)) if a in report.masks else "-"
        rows.append([i, a + 1, ds.attribute_names[a], f"{report.gains[a]:.6f}", subset])
    header = [
        f"method: {report.method}",
        f"order: {' '.join(str(a + 1) for a in report.order)}",
        f"split: ratio={config.split_ratio:g} seed={config.master_seed}",
        f"discretization: {config.discretization.describe()}",
        f"schedule: {config.schedule.describe()}",
    ]
    columns = ["rank", "attribute", "name", "gain", "subset"]
    _emit(render_table(columns, rows, config.output_format, header), config)
    return 0


def cmd_reproduce(args, config: RunConfig) -> int:
    report = reproduce_experiment(args.dataset, config.experiment(), config.data_path, config.has_header)
    _emit(report.render(config.output_format), config)
    return 0


def cmd_samples(args, config: RunConfig) -> int:
    ds = _load(config)
    attributes = None
    if args.attribute is not None:
        attributes = [_attribute_index(ds, args.attribute)]
    export = export_samples(ds, config.schedule, config.master_seed, config.restarts, attributes,
                            config.code_parity)
    if config.output_format == "jsonl":
        text = "".join(
            json.dumps({"attribute": s.attribute + 1, "restart": s.restart,
                        "master_seed": s.seed.master_seed, "stream_id": s.seed.stream_id,
                        "gains": list(s.gains), "sizes": list(s.sizes)}) + "\n"
            for s in export.series
        )
    else:
        text = export.to_tsv()
    _emit(text, config)
    return 0


def _common_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("run configuration")
    g.add_argument("--config", metavar="FILE", help="key=value file; flags override it")
    g.add_argument("--data", metavar="PATH")
    g.add_argument("--header", action="store_const", const=True, default=None,
                   help="first line of the CSV is a header")
    g.add_argument("--discretize", choices=sorted(DISCRETIZE_ALIASES))
    g.add_argument("--bins", type=int, metavar="N")
    g.add_argument("--ratio", type=float, metavar="F", help="training fraction (default 0.7)")
    g.add_argument("--seed", type=int, metavar="N", help="master seed (default 1; MVS_SEED overrides)")
    g.add_argument("--t0", type=float, metavar="F")
    g.add_argument("--tend", type=float, metavar="F")
    g.add_argument("--cool", type=float, metavar="F")
    g.add_argument("--lb", type=int, metavar="N")
    g.add_argument("--restarts", type=int, metavar="N")
    g.add_argument("--code-parity", action="store_const", const=True, default=None,
                   help="end a temperature level on the first rejected move")
    g.add_argument("--max-r", type=int, metavar="N", help="largest r enumerated exhaustively")
    g.add_argument("--out", metavar="PATH")
    g.add_argument("--format", choices=("tsv", "jsonl"))
    g.add_argument("-v", "--verbose", action="store_true")
    return p


def make_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(prog="mvsfs", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gain", parents=[common], help="per-attribute ID3, GID3 and exhaustive MVS gains")
    p.set_defaults(func=cmd_gain)

    p = sub.add_parser("search", parents=[common], help="anneal one attribute's best subset")
    p.add_argument("--attribute", type=int, required=True, metavar="N", help="1-based attribute number")
    p.add_argument("--log", metavar="PATH", help="write the per-evaluation run log here")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("rank", parents=[common], help="rank attributes on the training split")
    p.add_argument("--method", choices=("id3", "mvs"), default="id3")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("reproduce", parents=[common], help="full ranking + prefix-error report")
    p.add_argument("dataset", choices=("iris", "vehicle"))
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("samples", parents=[common], help="export annealing gain/size samples")
    p.add_argument("--attribute", type=int, metavar="N")
    p.set_defaults(func=cmd_samples)
    return parser


def main(argv=None, environ=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        config = build_config(args, environ)
        return args.func(args, config)
    except InputError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except (MVSError, AssertionError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
