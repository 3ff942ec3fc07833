import os
import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings

# reproducible by default; HYPOTHESIS_PROFILE=stress explores fresh random cases
settings.register_profile("repro", derandomize=True, print_blob=True)
settings.register_profile("stress", derandomize=False, print_blob=True)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "repro"))

sys.path.insert(0, str(Path(__file__).parent))

from gammadisc import GammaTuple, random_gamma_tuple  # noqa: E402


def crandn(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def zero_pair():
    z = np.zeros((2, 2))
    return GammaTuple((z,), z)


@pytest.fixture
def two_identity():
    """d = 2, S_1 = 2I, P = I on C^2."""
    return GammaTuple((2 * np.eye(2),), np.eye(2))


@pytest.fixture
def mixed4():
    """MixedPurity, d = 3, n = 4."""
    return random_gamma_tuple(3, 4, "MixedPurity", 9)


def instance_family(count_per_kind: int = 4, n_max: int = 6, seed0: int = 0):
    """Deterministic spread of certified instances over kinds, d and n."""
    out = []
    for k in range(count_per_kind):
        for kind in ("NormalBoundary", "NormalInterior", "MixedPurity"):
            d = 2 + (k % 3)
            n = 2 + (k * 3 + len(kind)) % (n_max - 1)
            out.append(random_gamma_tuple(d, n, kind, seed0 + 31 * k + len(kind)))
        out.append(random_gamma_tuple(2, 2 + k % (n_max - 1), "Ando2", seed0 + 7 * k))
    return out


# one line per acceptance criterion, printed at the end of the session
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
