"""Simulation study of sub-model shrinkage at candidate sample sizes."""

from mnsampsize.simstudy.engine import (
    DerivedSampleSize,
    RunConfig,
    StudyResult,
    category_probabilities,
    compute_n_dl,
    compute_n_mn,
    derive_n_dl,
    derive_n_mn,
    generate_dataset,
    make_stream,
    run_replicate,
    run_study,
)
from mnsampsize.simstudy.scenarios import SCENARIOS, ScenarioSpec, get_scenario
from mnsampsize.simstudy.summary import (
    EstimandSummary,
    ReplicateResult,
    ShrinkageSummary,
    read_replicates,
    summarize,
    write_study_csv,
)

__all__ = [
    "SCENARIOS",
    "DerivedSampleSize",
    "EstimandSummary",
    "ReplicateResult",
    "RunConfig",
    "ScenarioSpec",
    "ShrinkageSummary",
    "StudyResult",
    "category_probabilities",
    "compute_n_dl",
    "compute_n_mn",
    "derive_n_dl",
    "derive_n_mn",
    "generate_dataset",
    "get_scenario",
    "make_stream",
    "read_replicates",
    "run_replicate",
    "run_study",
    "summarize",
    "write_study_csv",
]
