from __future__ import annotations

import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from gazelidar.runner import load_run_config, run_sweep
from helpers import DEFAULT_CONFIG


@pytest.fixture(scope="session")
def default_config():
    return load_run_config(DEFAULT_CONFIG)


@pytest.fixture(scope="session")
def default_sweep(default_config):
    """Full default sweep, run once and shared; yields (records, seconds)."""
    t0 = time.perf_counter()
    records = run_sweep(default_config)
    return records, time.perf_counter() - t0
