"""Minimum sample size for multinomial logistic prediction models."""

from importlib.metadata import PackageNotFoundError, version

from mnsampsize.config import StudyConfig, load_run_config, load_study_config
from mnsampsize.criteria import (
    criterion_one,
    criterion_one_direct,
    criterion_three,
    criterion_two,
    final_sample_size,
    pair_events_required,
)
from mnsampsize.cstat_rsq import estimate_rsq_from_cstat, rsq_from_cstat
from mnsampsize.models import (
    CStatSpec,
    OutcomeDistribution,
    PairEstimate,
    PairPrevalence,
    PrecisionSpec,
    SampleSizeReport,
)
from mnsampsize.simstudy import RunConfig, run_study
from mnsampsize.workflow import run_samplesize

__author__ = "Elias Benbourenane <eliasbenbourenane@gmail.com>"
__credits__ = ["eliasbenb"]
__license__ = "MIT"
__maintainer__ = "eliasbenb"
__email__ = "eliasbenbourenane@gmail.com"
try:
    __version__ = version("mnsampsize")
except PackageNotFoundError:
    __version__ = "0.0.0"


import logging

logging.getLogger("mnsampsize").addHandler(logging.NullHandler())


__all__ = [
    "CStatSpec",
    "OutcomeDistribution",
    "PairEstimate",
    "PairPrevalence",
    "PrecisionSpec",
    "RunConfig",
    "SampleSizeReport",
    "StudyConfig",
    "criterion_one",
    "criterion_one_direct",
    "criterion_three",
    "criterion_two",
    "estimate_rsq_from_cstat",
    "final_sample_size",
    "load_run_config",
    "load_study_config",
    "pair_events_required",
    "rsq_from_cstat",
    "run_samplesize",
    "run_study",
]
