import numpy as np
import pytest

from mgcf.dataset import LabeledDataset, load_ucr_pair, ucr_root

UCR_NAMES = ("ECG200", "Coffee", "GunPoint", "BeetleFly", "BirdChicken")


def planted_dataset(n=20, m=40, motif_len=12, seed=0):
    """Class 0 series carry an identical bump; class 1 series are noise only."""
    rng = np.random.default_rng(seed)
    X = rng.normal(0.0, 0.3, size=(n, m))
    y = np.array([0, 1] * (n // 2))
    bump = 6.0 * np.sin(np.linspace(0, np.pi, motif_len))
    starts = {}
    for i in np.flatnonzero(y == 0):
        s = int(rng.integers(0, m - motif_len + 1))
        X[i, s : s + motif_len] = bump
        starts[int(i)] = s
    return LabeledDataset(X, y, name="planted"), starts, bump


@pytest.fixture
def planted():
    return planted_dataset()


@pytest.fixture(scope="session")
def ucr():
    root = ucr_root()
    if not (root / "ECG200").exists():
        pytest.fail(f"UCR data missing under {root}; run scripts/fetch_ucr.py")
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = load_ucr_pair(name)
        return cache[name]

    return get


# One line per acceptance criterion, printed at the end of the session.
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
