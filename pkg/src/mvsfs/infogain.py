"""Entropy and information-gain kernels.

All gains are in bits. Binary partitions of an attribute's symbols are scored
through the 2 x C class-count matrix (CQI) of the two sides of the split.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import SymbolicDataset
from .errors import EmptyDistribution, LengthMismatch, SearchSpaceTooLarge, SymbolOutOfRange

GAIN_TOL = 1e-12
DEFAULT_MAX_R = 20


@dataclass(frozen=True)
class PartitionMask:
    """One side of a binary split: ``bits[s]`` is True when symbol ``s`` is in the subset."""

    bits: tuple[bool, ...]
    attribute: int = 0

    @classmethod
    def from_symbols(cls, symbols, r: int, attribute: int = 0) -> PartitionMask:
        chosen = set(symbols)
        return cls(tuple(s in chosen for s in range(r)), attribute)

    @classmethod
    def from_array(cls, bits, attribute: int = 0) -> PartitionMask:
        return cls(tuple(bool(b) for b in bits), attribute)

    @classmethod
    def from_int(cls, value: int, r: int, attribute: int = 0) -> PartitionMask:
        return cls(tuple(bool(value >> s & 1) for s in range(r)), attribute)

    def __len__(self):
        return len(self.bits)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.bits, dtype=bool)

    @property
    def symbols(self) -> tuple[int, ...]:
        return tuple(s for s, b in enumerate(self.bits) if b)

    @property
    def popcount(self) -> int:
        return sum(self.bits)

    @property
    def is_trivial(self) -> bool:
        return all(self.bits) or not any(self.bits)

    def complement(self) -> PartitionMask:
        return PartitionMask(tuple(not b for b in self.bits), self.attribute)

    def as_int(self) -> int:
        return sum(1 << s for s, b in enumerate(self.bits) if b)

    def canonical_int(self) -> int:
        return canonical_int(self.bits)


def canonical_int(bits) -> int:
    """Integer code of the complement-class representative whose top symbol is out."""
    bits = [bool(b) for b in bits]
    if bits and bits[-1]:
        bits = [not b for b in bits]
    return sum(1 << s for s, b in enumerate(bits) if b)


@dataclass(frozen=True)
class GainValue:
    gain: float
    h_class: float
    h_conditional: float

    def __float__(self):
        return self.gain


@dataclass(frozen=True)
class CQIMatrix:
    cells: np.ndarray  # shape (2, C); row 0 = in-mask side

    @property
    def row_totals(self) -> np.ndarray:
        return self.cells.sum(axis=1)

    @property
    def total(self) -> int:
        return int(self.cells.sum())


def class_entropy(counts) -> float:
    counts = np.asarray(counts, dtype=float)
    total = counts.sum()
    if total <= 0:
        raise EmptyDistribution("entropy of an empty distribution")
    p = counts[counts > 0] / total
    return float(-(p * np.log2(p)).sum())


def _weighted_row_entropy(table: np.ndarray) -> float:
    """Sum over rows of (row_total / N) * entropy(row); empty rows contribute 0."""
    table = np.asarray(table, dtype=float)
    n = table.sum()
    totals = table.sum(axis=1)
    h = 0.0
    for row, t in zip(table, totals):
        if t > 0:
            p = row[row > 0] / t
            h += (t / n) * float(-(p * np.log2(p)).sum())
    return h


def contingency(ds: SymbolicDataset, attribute: int) -> np.ndarray:
    """Symbol x class count table, shape ``(r_a, C)``."""
    r = ds.unique_counts[attribute]
    flat = ds.column(attribute) * ds.n_classes + ds.classes
    return np.bincount(flat, minlength=r * ds.n_classes).reshape(r, ds.n_classes)


def _check_mask(ds: SymbolicDataset, mask: PartitionMask):
    r = ds.unique_counts[mask.attribute]
    if len(mask) != r:
        raise LengthMismatch(f"mask has {len(mask)} bits, attribute {mask.attribute} has {r} symbols")


def build_cqi(ds: SymbolicDataset, mask: PartitionMask) -> CQIMatrix:
    _check_mask(ds, mask)
    table = contingency(ds, mask.attribute)
    inside = table[mask.array].sum(axis=0)
    total = np.bincount(ds.classes, minlength=ds.n_classes)
    return CQIMatrix(np.vstack([inside, total - inside]))


def gain_from_table(table: np.ndarray, bits) -> GainValue:
    """Binary-split gain from a precomputed contingency table.

    The split is oriented so that the top symbol falls on the complement side
    before summing, which makes a mask and its complement score bit-identically.
    """
    bits = np.asarray(bits, dtype=bool)
    class_totals = table.sum(axis=0)
    h = class_entropy(class_totals)
    if bits.all() or not bits.any():
        return GainValue(0.0, h, h)
    if bits[-1]:
        bits = ~bits
    inside = table[bits].sum(axis=0)
    h_cond = _weighted_row_entropy(np.vstack([inside, class_totals - inside]))
    return _gain(h, h_cond)


def _gain(h: float, h_cond: float) -> GainValue:
    h, h_cond = float(h), float(h_cond)
    return GainValue(min(max(h - h_cond, 0.0), h), h, h_cond)


def partition_gain(ds: SymbolicDataset, mask: PartitionMask) -> GainValue:
    _check_mask(ds, mask)
    return gain_from_table(contingency(ds, mask.attribute), mask.array)


def id3_gain(ds: SymbolicDataset, attribute: int) -> GainValue:
    table = contingency(ds, attribute)
    h = class_entropy(table.sum(axis=0))
    if np.count_nonzero(table.sum(axis=1)) <= 1:
        return GainValue(0.0, h, h)
    return _gain(h, _weighted_row_entropy(table))


def gid3_singleton_gain(ds: SymbolicDataset, attribute: int, symbol: int) -> GainValue:
    r = ds.unique_counts[attribute]
    if not 0 <= symbol < r:
        raise SymbolOutOfRange(f"symbol {symbol} not in [0, {r})")
    return partition_gain(ds, PartitionMask.from_symbols([symbol], r, attribute))


def best_singleton_gain(ds: SymbolicDataset, attribute: int) -> tuple[int, GainValue]:
    """Highest single-value (GID3-style) gain; ties go to the lowest symbol."""
    best = None
    for s in range(ds.unique_counts[attribute]):
        g = gid3_singleton_gain(ds, attribute, s)
        if best is None or g.gain > best[1].gain + GAIN_TOL:
            best = (s, g)
    return best


def exhaustive_best_partition(
    ds: SymbolicDataset, attribute: int, max_r: int = DEFAULT_MAX_R, chunk: int = 1 << 16
) -> tuple[PartitionMask, GainValue]:
    """Brute-force optimum over all nontrivial splits, one per complement pair.

    Candidates are the integers ``1 .. 2**(r-1) - 1`` (bit ``s`` = symbol ``s``;
    the top symbol always on the complement side). Gains within ``GAIN_TOL`` of
    the maximum tie, and the smallest integer among them wins.
    """
    r = ds.unique_counts[attribute]
    if r > max_r:
        raise SearchSpaceTooLarge(f"attribute {attribute} has {r} symbols (> {max_r})")
    table = contingency(ds, attribute)
    h = class_entropy(table.sum(axis=0))
    if r < 2:
        return PartitionMask((False,) * r, attribute), GainValue(0.0, h, h)

    n = table.sum()
    class_totals = table.sum(axis=0).astype(float)
    shifts = np.arange(r - 1)
    gains = np.empty(2 ** (r - 1) - 1)
    for start in range(1, 2 ** (r - 1), chunk):
        codes = np.arange(start, min(start + chunk, 2 ** (r - 1)))
        bits = (codes[:, None] >> shifts) & 1
        inside = bits @ table[:-1]
        outside = class_totals - inside
        h_cond = np.zeros(len(codes))
        for side in (inside, outside):
            t = side.sum(axis=1)
            with np.errstate(divide="ignore", invalid="ignore"):
                p = side / t[:, None]
                terms = np.where(side > 0, p * np.log2(np.where(side > 0, p, 1.0)), 0.0)
            h_cond += (t / n) * -terms.sum(axis=1)
        gains[start - 1 : start - 1 + len(codes)] = h - h_cond

    top = gains.max()
    code = int(np.flatnonzero(gains >= top - GAIN_TOL)[0]) + 1
    mask = PartitionMask.from_int(code, r, attribute)
    # re-score through the scalar path so the reported value matches partition_gain
    return mask, partition_gain(ds, mask)
