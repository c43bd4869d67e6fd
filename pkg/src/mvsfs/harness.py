"""Experiment driver: gain rankings, prefix-subset ID3 evaluation, reports."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .anneal import AnnealOutcome, AnnealSchedule, SeedStreamSpec, mvs_search
from .data import (
    DiscretizationSpec,
    SplitPair,
    SymbolicDataset,
    bundled_dataset_path,
    discretize,
    load_csv,
    split_train_test,
)
from .errors import InputError
from .id3 import ErrorReport, error_rate, induce
from .infogain import GAIN_TOL, PartitionMask, id3_gain

DATASETS = ("iris", "vehicle")


@dataclass(frozen=True)
class RankingReport:
    method: str
    order: tuple[int, ...]  # 0-based attribute indices, best first
    gains: tuple[float, ...]  # indexed by attribute
    seed: int | None = None
    masks: dict[int, PartitionMask] = field(default_factory=dict, hash=False)
    outcomes: dict[int, AnnealOutcome] = field(default_factory=dict, hash=False, repr=False)

    def ranked_gains(self) -> list[float]:
        return [self.gains[a] for a in self.order]


@dataclass(frozen=True)
class PrefixEvaluation:
    rows: tuple[tuple[tuple[int, ...], ErrorReport], ...]
    classifier: str = "ID3"

    def errors(self) -> dict[int, float]:
        """k -> error rate."""
        return {len(prefix): rep.error_rate for prefix, rep in self.rows}


@dataclass(frozen=True)
class SampleSeries:
    attribute: int
    restart: int
    seed: SeedStreamSpec
    gains: tuple[float, ...]
    sizes: tuple[int, ...]


@dataclass(frozen=True)
class SampleExport:
    series: tuple[SampleSeries, ...]

    def for_attribute(self, attribute: int) -> list[SampleSeries]:
        return [s for s in self.series if s.attribute == attribute]

    def to_tsv(self) -> str:
        lines = ["attribute\trestart\tmaster_seed\tstream_id\tevaluation\tgain\tsubset_size"]
        for s in self.series:
            for i, (g, k) in enumerate(zip(s.gains, s.sizes)):
                lines.append(
                    f"{s.attribute + 1}\t{s.restart}\t{s.seed.master_seed}\t{s.seed.stream_id}\t{i}\t{g:.12f}\t{k}"
                )
        return "\n".join(lines) + "\n"


def _rank(gains) -> tuple[int, ...]:
    """Descending gain; equal gains keep ascending attribute order."""
    return tuple(sorted(range(len(gains)), key=lambda a: (-gains[a], a)))


def rank_by_id3_gain(ds: SymbolicDataset) -> RankingReport:
    if ds.attribute_count < 1:
        raise InputError("dataset has no attributes")
    gains = tuple(id3_gain(ds, a).gain for a in range(ds.attribute_count))
    return RankingReport("id3", _rank(gains), gains)


def stream_id(attribute: int, restart: int, n_attributes: int) -> int:
    return restart * n_attributes + attribute


def rank_by_mvs_gain(
    ds: SymbolicDataset,
    schedule: AnnealSchedule | None = None,
    master_seed: int = 1,
    restarts: int = 1,
    code_parity: bool = False,
) -> RankingReport:
    """Rank attributes by the best binary-partition gain found by annealing.

    Each attribute gets its own random stream; with ``restarts > 1`` the best
    outcome over the restarts is kept.
    """
    if ds.attribute_count < 1:
        raise InputError("dataset has no attributes")
    if restarts < 1:
        raise InputError("restarts must be >= 1")
    schedule = schedule or AnnealSchedule()
    outcomes = {}
    for a in range(ds.attribute_count):
        best = None
        for k in range(restarts):
            stream = SeedStreamSpec(master_seed, stream_id(a, k, ds.attribute_count))
            out = mvs_search(ds, a, schedule, stream, code_parity=code_parity)
            if best is None or out.best_value > best.best_value + GAIN_TOL:
                best = out
        outcomes[a] = best
    gains = tuple(outcomes[a].best_value for a in range(ds.attribute_count))
    masks = {a: o.best_mask for a, o in outcomes.items()}
    return RankingReport("mvs", _rank(gains), gains, master_seed, masks, outcomes)


def evaluate_prefixes(split: SplitPair, order) -> PrefixEvaluation:
    rows = []
    for k in range(len(order), 0, -1):
        prefix = tuple(order[:k])
        tree = induce(split.train, prefix)
        rows.append((prefix, error_rate(tree, split.test, prefix)))
    return PrefixEvaluation(tuple(rows))


def prefix_subset_evaluation(
    ds: SymbolicDataset, ranking: RankingReport, ratio: float = 0.7, seed: int = 1
) -> PrefixEvaluation:
    if sorted(ranking.order) != list(range(ds.attribute_count)):
        raise InputError("ranking must cover every attribute exactly once")
    return evaluate_prefixes(split_train_test(ds, ratio, seed), ranking.order)


def export_samples(
    ds: SymbolicDataset,
    schedule: AnnealSchedule | None = None,
    master_seed: int = 1,
    restarts: int = 1,
    attributes=None,
    code_parity: bool = False,
) -> SampleExport:
    """Per-evaluation gain and subset-size series, for external normality tests."""
    if restarts < 1:
        raise InputError("restarts must be >= 1")
    schedule = schedule or AnnealSchedule()
    attributes = range(ds.attribute_count) if attributes is None else attributes
    series = []
    for a in attributes:
        for k in range(restarts):
            stream = SeedStreamSpec(master_seed, stream_id(a, k, ds.attribute_count))
            out = mvs_search(ds, a, schedule, stream, code_parity=code_parity)
            series.append(SampleSeries(a, k, stream, out.gain_samples, out.size_samples))
    return SampleExport(tuple(series))


# --- full experiment -------------------------------------------------------


@dataclass(frozen=True)
class ExperimentConfig:
    ratio: float = 0.7
    seed: int = 1
    discretization: DiscretizationSpec = DiscretizationSpec()
    schedule: AnnealSchedule = AnnealSchedule()
    restarts: int = 1
    code_parity: bool = False


@dataclass(frozen=True)
class ExperimentReport:
    dataset: str
    source: str
    config: ExperimentConfig
    data: SymbolicDataset
    split: SplitPair
    rankings: dict[str, RankingReport]
    prefixes: dict[str, PrefixEvaluation]

    def provenance(self) -> list[tuple[str, str]]:
        c = self.config
        return [
            ("dataset", self.dataset),
            ("source", self.source),
            ("rows", str(self.data.n_rows)),
            ("attributes", str(self.data.attribute_count)),
            ("classes", str(self.data.n_classes)),
            ("unique_values", ",".join(map(str, self.data.unique_counts))),
            ("discretization", c.discretization.describe()),
            ("split", f"ratio={c.ratio:g} seed={c.seed} train={self.split.train.n_rows} test={self.split.test.n_rows}"),
            ("master_seed", str(c.seed)),
            ("schedule", c.schedule.describe()),
            ("restarts", str(c.restarts)),
            ("acceptance", "code-parity" if c.code_parity else "metropolis"),
            ("gains_on", "training split"),
            ("attribute_numbering", "1-based"),
        ]

    def to_tsv(self) -> str:
        out = [f"# {k}: {v}" for k, v in self.provenance()]
        for method, rk in self.rankings.items():
            out += ["", f"# table: ranking {method}", "rank\tattribute\tgain\tsubset"]
            for i, a in enumerate(rk.order, start=1):
                subset = ",".join(str(s) for s in rk.masks[a].symbols) if a in rk.masks else "-"
                out.append(f"{i}\t{a + 1}\t{rk.gains[a]:.6f}\t{subset}")
        for method, pe in self.prefixes.items():
            out += ["", f"# table: prefix {method}", "attribute_set\tclassifier\terror_percent\tmisclassified\ttotal"]
            for prefix, rep in pe.rows:
                out.append(
                    f"{_fmt_set(prefix)}\t{pe.classifier}\t{rep.percent:.2f}\t{rep.misclassified}\t{rep.total}"
                )
        for method, pe in self.prefixes.items():
            out += ["", f"# series: {method}", "k\terror_percent"]
            for prefix, rep in pe.rows:
                out.append(f"{len(prefix)}\t{rep.percent:.2f}")
        return "\n".join(out) + "\n"

    def to_jsonl(self) -> str:
        records = [{"type": "provenance", **dict(self.provenance())}]
        for method, rk in self.rankings.items():
            for i, a in enumerate(rk.order, start=1):
                rec = {"type": "ranking", "method": method, "rank": i, "attribute": a + 1,
                       "gain": round(rk.gains[a], 12)}
                if a in rk.masks:
                    rec["subset"] = list(rk.masks[a].symbols)
                records.append(rec)
        for method, pe in self.prefixes.items():
            for prefix, rep in pe.rows:
                records.append({
                    "type": "prefix", "method": method, "k": len(prefix),
                    "attribute_set": [a + 1 for a in prefix], "classifier": pe.classifier,
                    "error_percent": round(rep.percent, 2), "misclassified": rep.misclassified,
                    "total": rep.total,
                })
        return "".join(json.dumps(r, sort_keys=True) + "\n" for r in records)

    def render(self, fmt: str = "tsv") -> str:
        return self.to_jsonl() if fmt == "jsonl" else self.to_tsv()


def _fmt_set(prefix) -> str:
    return ",".join(str(a + 1) for a in prefix)


def resolve_dataset(dataset: str, data_path=None) -> Path:
    if data_path is not None:
        return Path(data_path)
    if dataset not in DATASETS:
        raise InputError(f"unknown dataset {dataset!r}; choose from {', '.join(DATASETS)}")
    return bundled_dataset_path(dataset)


def run_experiment(
    ds: SymbolicDataset, config: ExperimentConfig, dataset: str = "custom", source: str = "-"
) -> ExperimentReport:
    split = split_train_test(ds, config.ratio, config.seed)
    rankings = {
        "id3": rank_by_id3_gain(split.train),
        "mvs": rank_by_mvs_gain(split.train, config.schedule, config.seed, config.restarts, config.code_parity),
    }
    prefixes = {m: evaluate_prefixes(split, rk.order) for m, rk in rankings.items()}
    return ExperimentReport(dataset, source, config, ds, split, rankings, prefixes)


def reproduce_experiment(
    dataset: str,
    config: ExperimentConfig | None = None,
    data_path=None,
    has_header: bool = False,
) -> ExperimentReport:
    config = config or ExperimentConfig()
    path = resolve_dataset(dataset, data_path)
    raw = load_csv(path, has_header)
    ds = discretize(raw, config.discretization)
    return run_experiment(ds, config, dataset, path.name)
