from pathlib import Path

import numpy as np
import pytest

from qapga import Instance, parse_qaplib

REPO_ROOT = Path(__file__).resolve().parent.parent
QAPLIB_DIR = REPO_ROOT / "data" / "qaplib"
BASELINES_CSV = REPO_ROOT / "data" / "baselines.csv"


@pytest.fixture
def tiny3():
    """Hand-checkable n=3 instance; identity permutation costs 64."""
    return Instance(
        name="tiny3",
        n=3,
        flow=np.array([[0, 1, 2], [1, 0, 3], [2, 3, 0]], dtype=np.int64),
        dist=np.array([[0, 4, 5], [4, 0, 6], [5, 6, 0]], dtype=np.int64),
    )


@pytest.fixture
def nug12():
    return parse_qaplib((QAPLIB_DIR / "nug12.dat").read_text(), name="nug12")


def load_qaplib_or_skip(name: str) -> Instance:
    path = QAPLIB_DIR / f"{name}.dat"
    if not path.exists():
        pytest.skip(
            f"{name}.dat not present under data/qaplib/ (QAPLIB files other "
            "than nug12 are not redistributable here; drop in the official "
            "file to enable this check)"
        )
    return parse_qaplib(path.read_text(), name=name)
