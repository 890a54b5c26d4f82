import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from solitonkit import families as fam  # noqa: E402

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"

# (criterion, passed, detail) rows filled by test_acceptance.py
ACCEPTANCE: list[tuple[str, bool, str]] = []


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_points(rng, d, count=100, lo=-1.0, hi=1.0):
    return [lo + (hi - lo) * rng.random(d) for _ in range(count)]


def egorov(f="exp(2*u)", n=2, domain=(-1.0, 1.0), parameters=None):
    params = fam.EgorovParams(n, f, domain, parameters)
    return params, fam.egorov_metric(params)


def cw(kappa=(2.0, 3.0)):
    params = fam.CWParams(len(kappa), kappa)
    return params, fam.cw_metric(params)


def minkowski(n=2):
    return egorov("1", n)[1]


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {name}: {detail}")
