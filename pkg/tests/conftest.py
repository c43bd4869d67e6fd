import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from mvsfs.data import SymbolicDataset, bundled_dataset_path, discretize, load_csv  # noqa: E402

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def toy():
    """The seven-row, one-attribute toy dataset (symbols a1..a4 -> 0..3)."""
    return SymbolicDataset(
        symbols=np.array([[0], [0], [1], [2], [2], [2], [3]]),
        classes=np.array([0, 0, 0, 1, 1, 2, 3]),
        unique_counts=(4,),
        n_classes=4,
        attribute_names=("A",),
    )


@pytest.fixture(scope="session")
def iris_raw():
    return load_csv(bundled_dataset_path("iris"))


@pytest.fixture(scope="session")
def iris(iris_raw):
    return discretize(iris_raw)


@pytest.fixture(scope="session")
def vehicle_raw():
    return load_csv(bundled_dataset_path("vehicle"))


@pytest.fixture
def toy_csv(tmp_path):
    path = tmp_path / "toy.csv"
    path.write_text("A,class\n1,1\n1,1\n2,1\n3,2\n3,2\n3,3\n4,4\n")
    return path


def random_symbolic(rng, n_rows, r, n_classes, n_attributes=1):
    """Random dataset with dense symbols and classes (every index occurs)."""
    cols = []
    for _ in range(n_attributes):
        col = np.concatenate([np.arange(r), rng.integers(0, r, n_rows - r)])
        rng.shuffle(col)
        cols.append(col)
    classes = np.concatenate([np.arange(n_classes), rng.integers(0, n_classes, n_rows - n_classes)])
    rng.shuffle(classes)
    return SymbolicDataset(np.column_stack(cols), classes, (r,) * n_attributes, n_classes)
