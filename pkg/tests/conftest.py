import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from l1roots.experiments import SweepConfig, run_sweep  # noqa: E402


@pytest.fixture(scope="session")
def unstable_report():
    cfg = SweepConfig(r=1, N=1, n=2, m_min=2, m_max=10)
    return cfg, run_sweep(cfg)


@pytest.fixture(scope="session")
def stable_report():
    cfg = SweepConfig(r=1, N=1, n=2, m_min=2, m_max=10, side="stable")
    return cfg, run_sweep(cfg)
