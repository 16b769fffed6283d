"""Test configuration for pytest."""

from pathlib import Path

import pytest

from mnsampsize.config import load_study_config
from mnsampsize.models import SampleSizeReport
from mnsampsize.workflow import run_samplesize


@pytest.fixture(scope="session")
def config_dir() -> Path:
    """Directory of the shipped example configurations."""
    return Path(__file__).resolve().parents[1] / "configs"


@pytest.fixture(scope="session")
def tumour_report(config_dir: Path) -> SampleSizeReport:
    """Sample size report of the five-category tumour example."""
    return run_samplesize(load_study_config(config_dir / "adnex_r2.yaml"))
