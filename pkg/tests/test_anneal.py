import math

import numpy as np
import pytest

from conftest import random_symbolic
from mvsfs.anneal import (
    AnnealSchedule,
    SeedStreamSpec,
    asa_maximize,
    format_run_log,
    mvs_search,
    random_partition,
)
from mvsfs.data import DiscretizationSpec, SymbolicDataset, discretize
from mvsfs.errors import InputError
from mvsfs.infogain import exhaustive_best_partition, id3_gain, partition_gain


def test_default_schedule_has_66_levels():
    # smallest n with 1000 * 0.9**n <= 1
    n = math.ceil(math.log(1 / 1000) / math.log(0.9))
    assert n == 66
    assert AnnealSchedule().level_count == 66


@pytest.mark.parametrize("kwargs", [{"t_initial": 1, "t_end": 1}, {"t_end": 0}, {"cooling_factor": 1.0},
                                    {"cooling_factor": 0}, {"base_transition_length": 0}])
def test_schedule_validation(kwargs):
    with pytest.raises(InputError):
        AnnealSchedule(**kwargs)


def test_random_partition_single_symbol_is_trivial():
    for k in range(50):
        bits = random_partition(1, SeedStreamSpec(3, 0).generator(k))
        assert bits.all() or not bits.any()


def test_random_partition_replay():
    a = random_partition(12, SeedStreamSpec(9, 4).generator(17))
    b = random_partition(12, SeedStreamSpec(9, 4).generator(17))
    assert a.tolist() == b.tolist()


def test_random_partition_coverage():
    draws = np.array([random_partition(16, SeedStreamSpec(1, 0).generator(k)) for k in range(10_000)])
    nontrivial = ~(draws.all(axis=1) | ~draws.any(axis=1))
    # P(trivial) for r=16 is 2/17 under a uniform threshold
    assert nontrivial.mean() == pytest.approx(15 / 17, abs=0.02)
    assert draws.any(axis=0).all()


def test_streams_differ():
    a = [random_partition(20, SeedStreamSpec(1, 0).generator(k)).tolist() for k in range(5)]
    b = [random_partition(20, SeedStreamSpec(1, 1).generator(k)).tolist() for k in range(5)]
    c = [random_partition(20, SeedStreamSpec(2, 0).generator(k)).tolist() for k in range(5)]
    assert a != b and a != c


def test_constant_objective():
    out = asa_maximize(lambda bits: 0.5, 6, AnnealSchedule(), SeedStreamSpec(1))
    assert out.best_value == 0.5
    assert all(i == 0.0 for i in out.increments)
    assert out.levels == 66
    # one initial solution plus L_b proposals per level
    assert out.evaluations == 1 + 66 * 2


def test_increment_grows_inner_loop():
    out = asa_maximize(lambda bits: float(bits.sum()) + 1.0, 8, AnnealSchedule(), SeedStreamSpec(2))
    assert any(i > 0 for i in out.increments)
    assert all(0 <= i < 2 for i in out.increments)
    assert out.evaluations > 1 + 66 * 2
    assert out.evaluations <= 66 * (2 + 2)


def test_increment_formula():
    out = asa_maximize(lambda bits: float(bits.sum()) + 1.0, 8, AnnealSchedule(), SeedStreamSpec(2))
    expected = 2 * (1 - math.exp(-(out.f_high - out.f_low) / out.f_high))
    assert out.increments[-1] == pytest.approx(expected)


def test_best_is_max_of_samples():
    rng_values = np.random.default_rng(0).random(2**10)
    objective = lambda bits: float(rng_values[int((bits.astype(int) << np.arange(10)).sum())])  # noqa: E731
    out = asa_maximize(objective, 10, AnnealSchedule(), SeedStreamSpec(5))
    assert out.best_value == max(out.gain_samples)
    assert out.f_low == min(out.gain_samples) and out.f_high == max(out.gain_samples)
    assert objective(out.best_mask.array) == out.best_value


def test_trace_matches_samples():
    out = asa_maximize(lambda bits: float(bits[0]), 4, AnnealSchedule(), SeedStreamSpec(1))
    assert [rec.gain for rec in out.trace] == list(out.gain_samples)
    assert [rec.subset_size for rec in out.trace] == list(out.size_samples)
    assert [rec.proposal for rec in out.trace] == list(range(out.evaluations))


def test_metropolis_accepts_some_downhill_moves():
    out = asa_maximize(lambda bits: float(bits.sum()) / 10, 10, AnnealSchedule(), SeedStreamSpec(7))
    downhill_accepted = [
        rec for prev, rec in zip(out.trace, out.trace[1:]) if rec.accepted and rec.gain < prev.gain
    ]
    assert downhill_accepted


def test_code_parity_stops_levels_early():
    objective = lambda bits: float(bits.sum()) / 1000  # noqa: E731
    text = asa_maximize(objective, 10, AnnealSchedule(t_initial=0.01, t_end=0.001), SeedStreamSpec(3))
    parity = asa_maximize(objective, 10, AnnealSchedule(t_initial=0.01, t_end=0.001), SeedStreamSpec(3),
                          code_parity=True)
    assert parity.levels == text.levels
    assert parity.evaluations < text.evaluations


def test_run_log_format():
    out = asa_maximize(lambda bits: 1.0, 3, AnnealSchedule(), SeedStreamSpec(1))
    lines = format_run_log(out).splitlines()
    assert lines[0].split("\t") == ["temperature", "proposal", "gain", "subset_size", "accepted"]
    assert len(lines) == out.evaluations + 1
    assert len({line.split("\t")[0] for line in lines[1:]}) == 66


def test_mvs_search_toy(toy):
    out = mvs_search(toy, 0, stream=SeedStreamSpec(1, 0))
    assert out.best_value == pytest.approx(0.9852, abs=1e-4)
    assert out.best_mask.canonical_int() == 3  # {a1, a2} or its complement
    assert out.gain == partition_gain(toy, out.best_mask)
    assert out.subset_size == out.best_mask.popcount


def test_mvs_search_constant_attribute():
    ds = SymbolicDataset(np.zeros((5, 1), dtype=int), np.array([0, 1, 0, 1, 1]), (1,), 2)
    out = mvs_search(ds, 0)
    assert out.best_value == 0.0
    assert out.subset_size in (0, 1)


def test_mvs_replay(iris):
    a = mvs_search(iris, 2, stream=SeedStreamSpec(8, 2))
    b = mvs_search(iris, 2, stream=SeedStreamSpec(8, 2))
    assert a == b
    assert a.gain_samples == b.gain_samples


def test_mvs_within_coarsening_bound(iris):
    out = mvs_search(iris, 3, stream=SeedStreamSpec(1, 3))
    bound = id3_gain(iris, 3).gain
    assert out.best_value <= bound
    assert max(out.gain_samples) <= bound + 1e-12
    assert all(0 <= k <= iris.unique_counts[3] for k in out.size_samples)


def test_mvs_never_beats_oracle():
    rng = np.random.default_rng(21)
    for seed in range(10):
        ds = random_symbolic(rng, 40, 6, 3)
        _, best = exhaustive_best_partition(ds, 0)
        out = mvs_search(ds, 0, stream=SeedStreamSpec(seed, 0))
        assert out.best_value <= best.gain + 1e-12


def test_mvs_finds_optimum_small_r():
    # r = 5: each draw hits a given complement pair with probability >= 2/30
    rng = np.random.default_rng(4)
    ds = random_symbolic(rng, 60, 5, 3)
    _, best = exhaustive_best_partition(ds, 0)
    hits = sum(
        abs(mvs_search(ds, 0, stream=SeedStreamSpec(s, 0)).best_value - best.gain) <= 1e-9 for s in range(20)
    )
    assert hits == 20


def test_mvs_binned_iris_attribute(iris_raw):
    ds = discretize(iris_raw, DiscretizationSpec("equal_frequency", 10))
    out = mvs_search(ds, 3, stream=SeedStreamSpec(1, 3))
    _, best = exhaustive_best_partition(ds, 3)
    assert out.best_value <= best.gain + 1e-12
