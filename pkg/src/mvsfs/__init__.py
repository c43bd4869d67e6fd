"""Feature ranking by multivalued-subset information gain.

Searches binary partitions of each attribute's values for the split with the
highest information gain (adaptive simulated annealing, with an exhaustive
oracle for small attributes), ranks attributes by that gain or by plain ID3
gain, and scores the rankings with an unpruned ID3 classifier.
"""

from .anneal import AnnealOutcome, AnnealSchedule, SeedStreamSpec, asa_maximize, mvs_search, random_partition
from .data import (
    DiscretizationSpec,
    RawDataset,
    SplitPair,
    SymbolicDataset,
    discretize,
    load_csv,
    split_train_test,
)
from .harness import (
    ExperimentConfig,
    RankingReport,
    export_samples,
    prefix_subset_evaluation,
    rank_by_id3_gain,
    rank_by_mvs_gain,
    reproduce_experiment,
)
from .id3 import ErrorReport, classify, error_rate, induce
from .infogain import (
    CQIMatrix,
    GainValue,
    PartitionMask,
    build_cqi,
    class_entropy,
    exhaustive_best_partition,
    gid3_singleton_gain,
    id3_gain,
    partition_gain,
)

__version__ = "0.1.0"
