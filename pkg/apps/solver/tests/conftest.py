import pytest
from mpmath import mp

from src.services.benchmarks import BenchmarkRow, BenchmarkSet


@pytest.fixture(autouse=True)
def fifty_digits():
    """Every test starts from a known ambient precision."""
    with mp.workdps(50):
        yield


@pytest.fixture
def exact_benchmarks() -> BenchmarkSet:
    """The two exactly solvable Table 1 rows plus one generic row."""
    return BenchmarkSet(
        rows=[
            BenchmarkRow(k="0.25", E0="2"),
            BenchmarkRow(k="0.1", E0="1.3360503187251752778"),
            BenchmarkRow(k="0.01", E0="0.5"),
        ]
    )


@pytest.fixture
def benchmarks_yaml(tmp_path):
    path = tmp_path / "benchmarks.yaml"
    path.write_text(
        "table1:\n"
        '  - k: "0.25"\n'
        '    E0: "2"\n'
        '  - k: "0.01"\n'
        '    E0: "0.5"\n'
        "figure:\n"
        '  k_min: "0.01"\n'
        '  k_max: "0.25"\n'
        "  samples: 3\n"
    )
    return path
