import io

import pytest

from geomfs.dataio import parse_dataset


def make_dataset(vectors: str, boundaries: str):
    return parse_dataset(io.StringIO(vectors), io.StringIO(boundaries))


@pytest.fixture
def tiny():
    """Three rows, two feature types (t1 = cols 0..2, t2 = col 2)."""
    return make_dataset("A\t0:1 2:1\nB\t1:1 2:1\nA\t0:1 1:1 2:1\n", "t1\t0\t2\nt2\t2\t3\n")
