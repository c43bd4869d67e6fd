"""Adaptive simulated annealing over binary partitions of an attribute's symbols.

The inner loop length at each temperature level is ``L_b + I`` where the
increment ``I = L_b * (1 - exp(-(F_h - F_l) / F_h))`` is recomputed from the
spread between the highest and lowest objective values seen so far.

Every proposal draws from its own Mersenne Twister stream seeded by
``(master_seed, stream_id, proposal_index)``, so a run is a pure function of
its inputs and independent runs can execute in any order.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Callable, NamedTuple

import numpy as np

from .data import SymbolicDataset
from .errors import InputError
from .infogain import GAIN_TOL, GainValue, PartitionMask, canonical_int, contingency, gain_from_table

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class AnnealSchedule:
    t_initial: float = 1000.0
    t_end: float = 1.0
    cooling_factor: float = 0.90
    base_transition_length: int = 2

    def __post_init__(self):
        if not self.t_initial > self.t_end > 0:
            raise InputError("schedule needs t_initial > t_end > 0")
        if not 0.0 < self.cooling_factor < 1.0:
            raise InputError("cooling factor must lie in (0, 1)")
        if self.base_transition_length < 1:
            raise InputError("base transition length must be >= 1")

    def temperatures(self) -> list[float]:
        levels = []
        t = self.t_initial
        while t > self.t_end:
            levels.append(t)
            t *= self.cooling_factor
        return levels

    @property
    def level_count(self) -> int:
        return len(self.temperatures())

    def describe(self) -> str:
        return (
            f"t0={self.t_initial:g} tend={self.t_end:g} "
            f"cool={self.cooling_factor:g} lb={self.base_transition_length}"
        )


@dataclass(frozen=True)
class SeedStreamSpec:
    master_seed: int
    stream_id: int = 0

    def generator(self, proposal: int) -> np.random.Generator:
        seq = np.random.SeedSequence([self.master_seed, self.stream_id, proposal])
        return np.random.Generator(np.random.MT19937(seq))


@dataclass
class AnnealState:
    current: float  # Sol_curr
    last: float  # L_Sol_curr, the solution the walk sits on
    best: float  # E_best
    f_high: float
    f_low: float
    best_bits: np.ndarray  # E_config
    temperature: float
    transition_counter: int = 0  # L_t
    increment: float = 0.0  # I


class LogRecord(NamedTuple):
    temperature: float
    proposal: int
    gain: float
    subset_size: int
    accepted: bool


@dataclass(frozen=True)
class AnnealOutcome:
    best_value: float
    best_mask: PartitionMask
    seed: SeedStreamSpec
    gain_samples: tuple[float, ...]
    size_samples: tuple[int, ...]
    evaluations: int
    f_high: float
    f_low: float
    levels: int
    increments: tuple[float, ...] = ()
    trace: tuple[LogRecord, ...] = field(default=(), repr=False)
    gain: GainValue | None = None

    @property
    def subset_size(self) -> int:
        return self.best_mask.popcount


def random_partition(r: int, rng: np.random.Generator) -> np.ndarray:
    """Bernoulli mask: one uniform threshold, then ``r`` uniforms compared against it."""
    if r < 1:
        raise InputError("need at least one symbol")
    threshold = rng.random()
    return rng.random(r) > threshold


def _increment(f_high: float, f_low: float, base: int) -> float:
    if f_high <= 0 or f_high == f_low:
        return 0.0
    return base * (1.0 - math.exp(-(f_high - f_low) / f_high))


def asa_maximize(
    objective: Callable[[np.ndarray], float],
    r: int,
    schedule: AnnealSchedule | None = None,
    stream: SeedStreamSpec | None = None,
    *,
    code_parity: bool = False,
    tie_key: Callable[[np.ndarray], int] | None = None,
    attribute: int = 0,
) -> AnnealOutcome:
    """Maximize ``objective`` over boolean masks of length ``r``.

    With ``code_parity`` a rejected downhill move ends the current temperature
    level instead of just leaving the walk in place.

    Values within ``GAIN_TOL`` of the incumbent best count as ties and go to
    the mask with the smaller ``tie_key`` (default: the mask read as a binary
    integer, bit ``s`` = symbol ``s``).
    """
    schedule = schedule or AnnealSchedule()
    stream = stream or SeedStreamSpec(1, 0)
    key = tie_key or (lambda bits: int((bits.astype(np.int64) << np.arange(len(bits))).sum()))
    lb = schedule.base_transition_length

    gains: list[float] = []
    sizes: list[int] = []
    trace: list[LogRecord] = []
    increments: list[float] = []

    bits = random_partition(r, stream.generator(0))
    value = float(objective(bits))
    gains.append(value)
    sizes.append(int(bits.sum()))
    trace.append(LogRecord(schedule.t_initial, 0, value, int(bits.sum()), True))
    state = AnnealState(
        current=value,
        last=value,
        best=value,
        f_high=value,
        f_low=value,
        best_bits=bits,
        temperature=schedule.t_initial,
    )

    proposal = 0
    levels = 0
    for temperature in schedule.temperatures():
        levels += 1
        state.temperature = temperature
        state.transition_counter = 0
        while state.transition_counter < lb + state.increment:
            proposal += 1
            rng = stream.generator(proposal)
            bits = random_partition(r, rng)
            value = float(objective(bits))
            state.current = value
            state.f_low = min(state.f_low, value)
            state.f_high = max(state.f_high, value)

            delta = value - state.last
            accepted = False
            stop_level = False
            if delta > 0:
                accepted = True
            elif delta < 0:
                u = rng.random()
                p = math.exp(delta / temperature)
                if p > u:
                    accepted = True
                elif code_parity:
                    stop_level = True
            if accepted:
                state.last = value

            if value > state.best + GAIN_TOL or (
                value >= state.best - GAIN_TOL and key(bits) < key(state.best_bits)
            ):
                state.best = max(state.best, value)
                state.best_bits = bits

            gains.append(value)
            sizes.append(int(bits.sum()))
            trace.append(LogRecord(temperature, proposal, value, int(bits.sum()), accepted))
            state.transition_counter += 1
            if stop_level:
                break

        state.increment = _increment(state.f_high, state.f_low, lb)
        increments.append(state.increment)
        log.debug("T=%.6g evals=%d I=%.6g best=%.6g", temperature, state.transition_counter,
                  state.increment, state.best)

    return AnnealOutcome(
        best_value=state.best,
        best_mask=PartitionMask.from_array(state.best_bits, attribute),
        seed=stream,
        gain_samples=tuple(gains),
        size_samples=tuple(sizes),
        evaluations=len(gains),
        f_high=state.f_high,
        f_low=state.f_low,
        levels=levels,
        increments=tuple(increments),
        trace=tuple(trace),
    )


def mvs_search(
    ds: SymbolicDataset,
    attribute: int,
    schedule: AnnealSchedule | None = None,
    stream: SeedStreamSpec | None = None,
    *,
    code_parity: bool = False,
) -> AnnealOutcome:
    """Search the best multivalued subset of one attribute by annealing."""
    schedule = schedule or AnnealSchedule()
    stream = stream or SeedStreamSpec(1, attribute)
    table = contingency(ds, attribute)
    r = ds.unique_counts[attribute]

    if r == 1:
        g = gain_from_table(table, [False])
        return AnnealOutcome(
            best_value=0.0,
            best_mask=PartitionMask((False,), attribute),
            seed=stream,
            gain_samples=(0.0,),
            size_samples=(0,),
            evaluations=1,
            f_high=0.0,
            f_low=0.0,
            levels=0,
            trace=(LogRecord(schedule.t_initial, 0, 0.0, 0, True),),
            gain=g,
        )

    outcome = asa_maximize(
        lambda bits: gain_from_table(table, bits).gain,
        r,
        schedule,
        stream,
        code_parity=code_parity,
        tie_key=canonical_int,
        attribute=attribute,
    )
    g = gain_from_table(table, outcome.best_mask.array)
    return replace(outcome, best_value=g.gain, gain=g)


def format_run_log(outcome: AnnealOutcome) -> str:
    """Tab-separated run log: temperature, proposal, gain, subset size, accepted."""
    lines = ["temperature\tproposal\tgain\tsubset_size\taccepted"]
    for rec in outcome.trace:
        lines.append(
            f"{rec.temperature:.10g}\t{rec.proposal}\t{rec.gain:.12f}\t{rec.subset_size}\t{int(rec.accepted)}"
        )
    return "\n".join(lines) + "\n"
