"""Replicate results, their summaries and CSV persistence."""

import logging
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd

from mnsampsize.const import (
    ESTIMANDS,
    REPLICATE_COLUMNS,
    SUMMARY_COLUMNS,
    SUMMARY_PERCENTILES,
)
from mnsampsize.exceptions import EmptySummaryError, StudyIOError

logger = logging.getLogger("mnsampsize")


@dataclass(slots=True)
class ReplicateResult:
    """Shrinkage estimates of one development dataset.

    Estimates that could not be computed are NaN and clear the matching
    convergence flag.
    """

    scenario_label: str
    n: int
    replicate: int
    s_mn_21: float = math.nan
    s_mn_31: float = math.nan
    s_dl_21: float = math.nan
    s_dl_31: float = math.nan
    s_vh_mn: float = math.nan
    s_vh_dl_21: float = math.nan
    s_vh_dl_31: float = math.nan
    converged_mn: bool = True
    converged_dl_21: bool = True
    converged_dl_31: bool = True

    @property
    def converged(self) -> bool:
        """Whether every fit of the replicate converged.

        Returns:
            bool: True if the replicate enters summaries
        """
        return self.converged_mn and self.converged_dl_21 and self.converged_dl_31

    def estimate(self, estimand: str) -> float:
        """Value of one estimand.

        Args:
            estimand (str): Column name such as ``s_mn_21``

        Returns:
            float: Estimate, NaN if not computed
        """
        return getattr(self, estimand)

    def to_dict(self) -> dict[str, Any]:
        """Convert to a CSV row.

        Returns:
            dict[str, Any]: Values keyed by the replicate CSV columns
        """
        row: dict[str, Any] = {
            "scenario_label": self.scenario_label,
            "n": self.n,
            "replicate": self.replicate,
        }
        row.update({name: self.estimate(name) for name in ESTIMANDS})
        row["converged"] = int(self.converged)
        return row


@dataclass(slots=True, frozen=True)
class EstimandSummary:
    """Mean and percentiles of one estimand across converged replicates."""

    mean: float
    percentiles: tuple[float, ...]

    @property
    def median(self) -> float:
        """50th percentile.

        Returns:
            float: Median
        """
        return self.percentiles[SUMMARY_PERCENTILES.index(50.0)]

    def percentile(self, q: float) -> float:
        """Look up a summary percentile.

        Args:
            q (float): One of 2.5, 25, 50, 75 or 97.5

        Returns:
            float: Percentile value
        """
        return self.percentiles[SUMMARY_PERCENTILES.index(q)]


@dataclass(slots=True)
class ShrinkageSummary:
    """Summaries of all estimands for one scenario and development size."""

    scenario_label: str
    n: int
    n_converged: int
    n_excluded: int
    estimands: dict[str, EstimandSummary] = field(default_factory=dict)

    def __getitem__(self, estimand: str) -> EstimandSummary:
        """Summary of one estimand.

        Args:
            estimand (str): Estimand name

        Returns:
            EstimandSummary: Mean and percentiles
        """
        return self.estimands[estimand]

    def rows(self) -> list[dict[str, Any]]:
        """Convert to summary CSV rows.

        Returns:
            list[dict[str, Any]]: One row per estimand
        """
        rows = []
        for name, stats in self.estimands.items():
            row: dict[str, Any] = {
                "scenario_label": self.scenario_label,
                "n": self.n,
                "estimand": name,
                "mean": stats.mean,
            }
            row.update(
                dict(zip(SUMMARY_COLUMNS[4:9], stats.percentiles, strict=True))
            )
            row["n_converged"] = self.n_converged
            row["n_excluded"] = self.n_excluded
            rows.append(row)
        return rows


def summarize(results: Sequence[ReplicateResult]) -> ShrinkageSummary:
    """Summarize replicates of one scenario and development size.

    Non-converged replicates are excluded and counted. Percentiles use linear
    interpolation between order statistics.

    Args:
        results (Sequence[ReplicateResult]): Replicates of a single (scenario, N)

    Returns:
        ShrinkageSummary: Mean and percentiles per estimand

    Raises:
        EmptySummaryError: If no replicate converged
    """
    kept = [r for r in results if r.converged]
    if not kept:
        raise EmptySummaryError(
            f"All {len(results)} replicates were excluded; nothing to summarize"
        )
    excluded = len(results) - len(kept)
    if excluded:
        logger.warning(
            f"{kept[0].scenario_label}, N={kept[0].n}: excluded {excluded} of "
            f"{len(results)} replicates with failed fits"
        )
    estimands = {}
    for name in ESTIMANDS:
        values = np.array([r.estimate(name) for r in kept], dtype=float)
        estimands[name] = EstimandSummary(
            mean=float(np.mean(values)),
            percentiles=tuple(
                float(v)
                for v in np.percentile(values, SUMMARY_PERCENTILES, method="linear")
            ),
        )
    return ShrinkageSummary(
        scenario_label=kept[0].scenario_label,
        n=kept[0].n,
        n_converged=len(kept),
        n_excluded=excluded,
        estimands=estimands,
    )


def replicates_frame(results: Iterable[ReplicateResult]) -> pd.DataFrame:
    """Tabulate replicate results.

    Args:
        results (Iterable[ReplicateResult]): Replicates in output order

    Returns:
        pd.DataFrame: One row per replicate with the replicate CSV columns
    """
    return pd.DataFrame(
        [r.to_dict() for r in results], columns=list(REPLICATE_COLUMNS)
    )


def summary_frame(summaries: Iterable[ShrinkageSummary]) -> pd.DataFrame:
    """Tabulate summaries.

    Args:
        summaries (Iterable[ShrinkageSummary]): Summaries in output order

    Returns:
        pd.DataFrame: One row per (scenario, N, estimand)
    """
    rows = [row for summary in summaries for row in summary.rows()]
    return pd.DataFrame(rows, columns=list(SUMMARY_COLUMNS))


def _write_csv(frame: pd.DataFrame, path: Path) -> Path:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(path, index=False)
    except OSError as e:
        raise StudyIOError(f"Could not write results ({e.strerror})", str(path)) from e
    logger.info(f"Wrote {len(frame)} rows to {path}")
    return path


def write_study_csv(
    out_dir: Path,
    stem: str,
    results: Iterable[ReplicateResult],
    summaries: Iterable[ShrinkageSummary],
) -> list[Path]:
    """Write the replicate and summary CSV files of a study.

    Args:
        out_dir (Path): Output directory, created if needed
        stem (str): File name prefix such as ``scenario_1``
        results (Iterable[ReplicateResult]): All replicates of the study
        summaries (Iterable[ShrinkageSummary]): All summaries of the study

    Returns:
        list[Path]: Paths of the replicate and summary files

    Raises:
        StudyIOError: If a file cannot be written
    """
    out_dir = Path(out_dir)
    return [
        _write_csv(replicates_frame(results), out_dir / f"{stem}_replicates.csv"),
        _write_csv(summary_frame(summaries), out_dir / f"{stem}_summary.csv"),
    ]


def read_replicates(path: Path) -> list[ReplicateResult]:
    """Load replicate results written by write_study_csv.

    Args:
        path (Path): Replicate CSV file

    Returns:
        list[ReplicateResult]: Replicates in file order

    Raises:
        StudyIOError: If the file cannot be read or lacks columns
    """
    try:
        frame = pd.read_csv(path)
    except (OSError, pd.errors.ParserError) as e:
        raise StudyIOError(f"Could not read results ({e})", str(path)) from e
    missing = [c for c in REPLICATE_COLUMNS if c not in frame.columns]
    if missing:
        raise StudyIOError(f"Missing columns {missing}", str(path))
    results = []
    for row in frame.itertuples(index=False):
        converged = bool(row.converged)
        results.append(
            ReplicateResult(
                scenario_label=str(row.scenario_label),
                n=int(row.n),
                replicate=int(row.replicate),
                **{name: float(getattr(row, name)) for name in ESTIMANDS},
                converged_mn=converged,
                converged_dl_21=converged,
                converged_dl_31=converged,
            )
        )
    return results
