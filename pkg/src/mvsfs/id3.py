"""Unpruned ID3 decision trees over symbolic attributes."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .data import SymbolicDataset
from .errors import EmptyTestSet, EmptyTrainingSet, InputError
from .infogain import GAIN_TOL, id3_gain


@dataclass(frozen=True)
class Leaf:
    label: int


@dataclass(frozen=True)
class Internal:
    attribute: int
    children: dict = field(hash=False)  # symbol -> node
    majority: int


TreeNode = Leaf | Internal


@dataclass(frozen=True)
class ErrorReport:
    misclassified: int
    total: int
    feature_set: tuple[int, ...] = ()

    @property
    def error_rate(self) -> float:
        return self.misclassified / self.total

    @property
    def percent(self) -> float:
        return 100.0 * self.error_rate


def _majority(classes: np.ndarray, n_classes: int) -> int:
    # argmax returns the first maximum, i.e. the lowest class index on ties
    return int(np.argmax(np.bincount(classes, minlength=n_classes)))


def induce(train: SymbolicDataset, feature_set) -> TreeNode:
    """Grow an ID3 tree on ``train`` using only the attributes in ``feature_set``.

    At each node the remaining attribute with the highest gain on the node's
    rows is tested (lowest index wins ties). Growth stops on a pure node or
    when the features run out; zero-gain splits are still taken.
    """
    features = tuple(int(f) for f in feature_set)
    if not features:
        raise InputError("feature set is empty")
    if len(set(features)) != len(features):
        raise InputError("feature set has duplicates")
    if any(not 0 <= f < train.attribute_count for f in features):
        raise InputError("feature index out of range")
    if train.n_rows == 0:
        raise EmptyTrainingSet("cannot induce a tree from zero rows")
    return _grow(train, np.arange(train.n_rows), tuple(sorted(features)))


def _grow(ds: SymbolicDataset, rows: np.ndarray, remaining: tuple[int, ...]) -> TreeNode:
    classes = ds.classes[rows]
    majority = _majority(classes, ds.n_classes)
    if not remaining or np.all(classes == classes[0]):
        return Leaf(majority)

    subset = ds.take(rows)
    best, best_gain = remaining[0], -1.0
    for a in remaining:
        g = id3_gain(subset, a).gain
        if g > best_gain + GAIN_TOL:
            best, best_gain = a, g

    rest = tuple(a for a in remaining if a != best)
    column = ds.symbols[rows, best]
    children = {
        int(s): _grow(ds, rows[column == s], rest) for s in np.unique(column)
    }
    return Internal(best, children, majority)


def classify(tree: TreeNode, row) -> int:
    node = tree
    while isinstance(node, Internal):
        child = node.children.get(int(row[node.attribute]))
        if child is None:
            return node.majority
        node = child
    return node.label


def error_rate(tree: TreeNode, test: SymbolicDataset, feature_set=()) -> ErrorReport:
    if test.n_rows == 0:
        raise EmptyTestSet("cannot score a tree on zero rows")
    predicted = np.array([classify(tree, row) for row in test.symbols])
    wrong = int(np.count_nonzero(predicted != test.classes))
    return ErrorReport(wrong, test.n_rows, tuple(feature_set))


def depth(tree: TreeNode) -> int:
    if isinstance(tree, Leaf):
        return 0
    return 1 + max(depth(c) for c in tree.children.values())


def dump(tree: TreeNode, names=None, indent: str = "  ") -> str:
    """Indented text rendering, one node per line."""
    lines: list[str] = []

    def walk(node, level, prefix):
        pad = indent * level
        if isinstance(node, Leaf):
            lines.append(f"{pad}{prefix}leaf={node.label}")
            return
        label = names[node.attribute] if names else node.attribute
        lines.append(f"{pad}{prefix}attr={label}")
        for s, child in sorted(node.children.items()):
            walk(child, level + 1, f"sym={s} ")

    walk(tree, 0, "")
    return "\n".join(lines) + "\n"
