"""Loading, discretization and train/test splitting of class-labelled tables."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import DatasetMissing, EmptyFile, InputError, MalformedRow, SingleClass

DISCRETIZE_MODES = ("identity", "equal_width", "equal_frequency")


@dataclass(frozen=True)
class RawDataset:
    """Real-valued attribute matrix plus one class label per row.

    ``targets`` holds class indices into ``class_labels`` (first-occurrence
    order).
    """

    values: np.ndarray
    targets: np.ndarray
    class_labels: tuple[str, ...]
    attribute_names: tuple[str, ...] = ()

    def __post_init__(self):
        n, a = self.values.shape
        if n < 2:
            raise InputError("a dataset needs at least 2 rows")
        if len(self.targets) != n:
            raise InputError("targets and values disagree on row count")
        if len(self.class_labels) < 2:
            raise SingleClass("fewer than 2 distinct class labels")
        if not self.attribute_names:
            object.__setattr__(self, "attribute_names", tuple(str(j + 1) for j in range(a)))

    @property
    def n_rows(self) -> int:
        return self.values.shape[0]

    @property
    def attribute_count(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class DiscretizationSpec:
    mode: str = "identity"
    bins: int = 10

    def __post_init__(self):
        if self.mode not in DISCRETIZE_MODES:
            raise InputError(f"unknown discretization mode {self.mode!r}")
        if self.mode != "identity" and self.bins < 2:
            raise InputError("bins must be >= 2 for binned discretization")

    def describe(self) -> str:
        return self.mode if self.mode == "identity" else f"{self.mode}(bins={self.bins})"


@dataclass(frozen=True)
class SymbolicDataset:
    """Dense symbol indices per attribute (``symbols[:, j]`` in ``[0, r_j)``)."""

    symbols: np.ndarray
    classes: np.ndarray
    unique_counts: tuple[int, ...]
    n_classes: int
    attribute_names: tuple[str, ...] = ()
    class_labels: tuple[str, ...] = ()

    def __post_init__(self):
        if self.symbols.ndim != 2 or self.symbols.shape[0] != len(self.classes):
            raise InputError("symbol matrix and class vector disagree on row count")
        if len(self.unique_counts) != self.symbols.shape[1]:
            raise InputError("unique_counts length differs from attribute count")
        if not self.attribute_names:
            names = tuple(str(j + 1) for j in range(self.symbols.shape[1]))
            object.__setattr__(self, "attribute_names", names)
        self.symbols.setflags(write=False)
        self.classes.setflags(write=False)

    @property
    def n_rows(self) -> int:
        return self.symbols.shape[0]

    @property
    def attribute_count(self) -> int:
        return self.symbols.shape[1]

    def column(self, attribute: int) -> np.ndarray:
        return self.symbols[:, attribute]

    def take(self, rows) -> SymbolicDataset:
        """Row subset that keeps the full-dataset symbol vocabularies."""
        rows = np.asarray(rows, dtype=np.intp)
        return SymbolicDataset(
            symbols=self.symbols[rows].copy(),
            classes=self.classes[rows].copy(),
            unique_counts=self.unique_counts,
            n_classes=self.n_classes,
            attribute_names=self.attribute_names,
            class_labels=self.class_labels,
        )

    def to_tsv(self) -> str:
        lines = [
            "\t".join(map(str, row)) + f"\t{c}"
            for row, c in zip(self.symbols.tolist(), self.classes.tolist())
        ]
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class SplitPair:
    train: SymbolicDataset
    test: SymbolicDataset
    seed: int
    ratio: float
    train_rows: np.ndarray = field(repr=False)
    test_rows: np.ndarray = field(repr=False)


def load_csv(path, has_header: bool = False) -> RawDataset:
    path = Path(path)
    if not path.is_file():
        raise DatasetMissing(f"no such data file: {path}")
    text = path.read_text(encoding="utf-8")

    names: tuple[str, ...] = ()
    rows: list[list[float]] = []
    labels: list[str] = []
    width = None
    header_pending = has_header
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        fields = [f.strip() for f in line.split(",")]
        if header_pending:
            header_pending = False
            names = tuple(fields[:-1])
            width = len(fields)
            continue
        if width is None:
            width = len(fields)
        if len(fields) != width:
            raise MalformedRow(lineno, f"expected {width} fields, found {len(fields)}")
        if width < 2:
            raise MalformedRow(lineno, "need at least one attribute and a class field")
        try:
            values = [float(f) for f in fields[:-1]]
        except ValueError:
            raise MalformedRow(lineno, "attribute field is not a number") from None
        if not all(math.isfinite(v) for v in values):
            raise MalformedRow(lineno, "missing or non-finite value")
        if not fields[-1]:
            raise MalformedRow(lineno, "empty class label")
        rows.append(values)
        labels.append(fields[-1])

    if not rows:
        raise EmptyFile(f"{path} holds no data rows")
    class_labels = tuple(dict.fromkeys(labels))
    if len(class_labels) < 2:
        raise SingleClass(f"{path} has a single class label {class_labels[0]!r}")
    index = {label: i for i, label in enumerate(class_labels)}
    return RawDataset(
        values=np.asarray(rows, dtype=float),
        targets=np.array([index[t] for t in labels], dtype=np.intp),
        class_labels=class_labels,
        attribute_names=names,
    )


def bundled_dataset_path(name: str) -> Path:
    """Path of a dataset shipped inside the package (only ``iris``)."""
    ref = resources.files("mvsfs") / "datasets" / f"{name}.csv"
    if not ref.is_file():
        raise DatasetMissing(f"no bundled copy of dataset {name!r}; pass --data")
    return Path(str(ref))


def _densify(codes: np.ndarray) -> np.ndarray:
    _, dense = np.unique(codes, return_inverse=True)
    return dense.astype(np.intp)


def discretize_column(values: np.ndarray, spec: DiscretizationSpec) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    if spec.mode == "identity":
        return _densify(values)

    if spec.mode == "equal_width":
        lo, hi = values.min(), values.max()
        if hi == lo:
            return np.zeros(len(values), dtype=np.intp)
        width = (hi - lo) / spec.bins
        codes = np.floor((values - lo) / width).astype(np.intp)
        return _densify(np.clip(codes, 0, spec.bins - 1))

    # equal_frequency: assign by rank, then pull every tied value into the
    # bin of its lowest-ranked occurrence
    n = len(values)
    order = np.argsort(values, kind="stable")
    codes = np.empty(n, dtype=np.intp)
    codes[order] = (np.arange(n) * spec.bins) // n
    uniq, inverse = np.unique(values, return_inverse=True)
    first_bin = np.full(len(uniq), spec.bins, dtype=np.intp)
    np.minimum.at(first_bin, inverse, codes)
    return _densify(first_bin[inverse])


def discretize(raw: RawDataset, spec: DiscretizationSpec | None = None) -> SymbolicDataset:
    spec = spec or DiscretizationSpec()
    columns = [discretize_column(raw.values[:, j], spec) for j in range(raw.attribute_count)]
    symbols = np.column_stack(columns) if columns else np.empty((raw.n_rows, 0), dtype=np.intp)
    return SymbolicDataset(
        symbols=symbols,
        classes=raw.targets.copy(),
        unique_counts=tuple(int(c.max()) + 1 for c in columns),
        n_classes=len(raw.class_labels),
        attribute_names=raw.attribute_names,
        class_labels=raw.class_labels,
    )


def train_size(n_rows: int, ratio: float) -> int:
    # round half up
    return int(math.floor(ratio * n_rows + 0.5))


def split_train_test(ds: SymbolicDataset, ratio: float = 0.7, seed: int = 1) -> SplitPair:
    if not 0.0 < ratio < 1.0:
        raise InputError(f"split ratio must lie in (0, 1), got {ratio}")
    if ds.n_rows < 2:
        raise InputError("need at least 2 rows to split")
    rng = np.random.Generator(np.random.MT19937(seed))
    perm = rng.permutation(ds.n_rows)
    k = train_size(ds.n_rows, ratio)
    train_rows = np.sort(perm[:k])
    test_rows = np.sort(perm[k:])
    return SplitPair(
        train=ds.take(train_rows),
        test=ds.take(test_rows),
        seed=seed,
        ratio=ratio,
        train_rows=train_rows,
        test_rows=test_rows,
    )
