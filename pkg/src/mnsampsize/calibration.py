"""Calibration slopes and pairwise C-statistics on validation data.

Shrinkage factors are estimated as calibration slopes: the coefficient a
validation cohort assigns to a model's linear predictor. The multinomial
version gives every sub-model its own slope on its own linear predictor,
with intercepts re-estimated jointly.
"""

import logging
from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from mnsampsize.const import RISK_ROW_SUM_TOL
from mnsampsize.exceptions import (
    DegenerateCategoryError,
    DegeneratePredictorError,
    DomainError,
    UndefinedCStatisticError,
)
from mnsampsize.fitting.logit import BinaryLogitModel, MultinomialLogitModel

logger = logging.getLogger("mnsampsize")


@dataclass(slots=True, frozen=True, eq=False)
class LinearPredictorSet:
    """Sub-model linear predictors of a fitted model on a validation cohort."""

    lp: np.ndarray
    y: np.ndarray

    def __post_init__(self) -> None:
        """Validate shapes.

        Raises:
            DomainError: If lp is not n x (K - 1) for labels 1..K
        """
        if self.lp.ndim != 2 or self.lp.shape[0] != self.y.shape[0]:
            raise DomainError(
                f"lp must be an n x (K - 1) matrix for {self.y.shape[0]} subjects, "
                f"got {self.lp.shape}"
            )
        if np.any(self.y < 1) or np.any(self.y > self.k_categories):
            raise DomainError(f"Labels must lie in 1..{self.k_categories}")

    @property
    def k_categories(self) -> int:
        """Number of outcome categories.

        Returns:
            int: Number of lp columns plus one
        """
        return int(self.lp.shape[1]) + 1


@dataclass(slots=True, frozen=True)
class BinaryCalibration:
    """Calibration slope and intercept of a binary model."""

    slope: float
    intercept: float
    converged: bool


@dataclass(slots=True, frozen=True)
class RecalibrationResult:
    """Per-sub-model calibration slopes and re-estimated intercepts."""

    slopes: tuple[float, ...]
    intercepts: tuple[float, ...]
    converged: bool


def _check_variance(lp: np.ndarray, label: str) -> None:
    if lp.size == 0 or np.ptp(lp) == 0.0:
        raise DegeneratePredictorError(f"{label} has no variance")


def binary_calibration_slope(
    lp: np.ndarray, y: np.ndarray, raise_on_failure: bool = True
) -> BinaryCalibration:
    """Logistic calibration slope of a linear predictor.

    Args:
        lp (np.ndarray): n-vector of linear predictors
        y (np.ndarray): n-vector of 0/1 (or boolean) outcomes
        raise_on_failure (bool): Raise on non-convergence instead of returning
            an unconverged result

    Returns:
        BinaryCalibration: Slope (the shrinkage factor) and intercept

    Raises:
        DegeneratePredictorError: If lp is constant
        DegenerateCategoryError: If only one outcome class is present
    """
    lp = np.asarray(lp, dtype=float)
    outcome = np.asarray(y, dtype=float)
    _check_variance(lp, "Linear predictor")
    events = outcome.sum()
    if events == 0 or events == outcome.shape[0]:
        raise DegenerateCategoryError("Calibration needs both outcome classes")
    design = np.column_stack([np.ones(lp.shape[0]), lp])
    result = BinaryLogitModel(design, outcome).fit(raise_on_failure=raise_on_failure)
    return BinaryCalibration(
        slope=float(result.params[1]),
        intercept=float(result.params[0]),
        converged=result.converged,
    )


def multinomial_recalibration(
    lps: LinearPredictorSet, raise_on_failure: bool = True
) -> RecalibrationResult:
    """Recalibrate a multinomial model with one slope per sub-model.

    Sub-model k's linear predictor becomes alpha_k + s_k lp_k and all
    2 (K - 1) parameters are estimated jointly on the multinomial likelihood.

    Args:
        lps (LinearPredictorSet): Validation linear predictors and outcomes
        raise_on_failure (bool): Raise on non-convergence instead of returning
            an unconverged result

    Returns:
        RecalibrationResult: Slopes S_MN,k and intercepts for k = 2..K

    Raises:
        DegeneratePredictorError: If a linear predictor column is constant
        DegenerateCategoryError: If a category is missing
    """
    k = lps.k_categories
    counts = np.bincount(lps.y, minlength=k + 1)[1:]
    if np.any(counts == 0):
        missing = [i for i, c in enumerate(counts, 1) if c == 0]
        raise DegenerateCategoryError(f"Categories {missing} are missing")
    ones = np.ones(lps.lp.shape[0])
    designs = []
    for j in range(k - 1):
        _check_variance(lps.lp[:, j], f"Linear predictor of category {j + 2}")
        designs.append(np.column_stack([ones, lps.lp[:, j]]))
    model = MultinomialLogitModel(designs, lps.y - 1)
    result = model.fit(raise_on_failure=raise_on_failure)
    params = result.params.reshape(k - 1, 2)
    logger.debug(
        f"Recalibration slopes {params[:, 1].round(4).tolist()} "
        f"on {lps.lp.shape[0]} subjects"
    )
    return RecalibrationResult(
        slopes=tuple(float(v) for v in params[:, 1]),
        intercepts=tuple(float(v) for v in params[:, 0]),
        converged=result.converged,
    )


def auc_from_ranks(ranks: np.ndarray, is_case: np.ndarray) -> float:
    """Concordance probability from precomputed midranks.

    Args:
        ranks (np.ndarray): Midranks of the scores over all subjects
        is_case (np.ndarray): Boolean case indicator

    Returns:
        float: Probability a case outscores a control, ties counting one half

    Raises:
        UndefinedCStatisticError: If there are no cases or no controls
    """
    n_case = int(np.count_nonzero(is_case))
    n_control = is_case.shape[0] - n_case
    if n_case == 0 or n_control == 0:
        raise UndefinedCStatisticError(
            f"C-statistic needs cases and controls ({n_case} vs {n_control})"
        )
    rank_sum = float(np.sum(ranks[is_case]))
    return (rank_sum - n_case * (n_case + 1) / 2.0) / (n_case * n_control)


def concordance(scores: np.ndarray, is_case: np.ndarray) -> float:
    """Rank-based C-statistic of a score.

    Args:
        scores (np.ndarray): Scores, higher meaning more likely a case
        is_case (np.ndarray): Boolean case indicator

    Returns:
        float: Concordance probability, ties counting one half
    """
    return auc_from_ranks(rankdata(scores), np.asarray(is_case, dtype=bool))


def pairwise_cstat(risks: np.ndarray, y: np.ndarray, k: int, r: int) -> float:
    """Pairwise C-statistic by the conditional risk method.

    Args:
        risks (np.ndarray): n x K predicted category probabilities
        y (np.ndarray): n-vector of labels 1..K
        k (int): Category treated as the case
        r (int): Category treated as the control

    Returns:
        float: Concordance of P(k) / (P(k) + P(r)) between categories k and r

    Raises:
        DomainError: If a risk row does not sum to one
        UndefinedCStatisticError: If category k or r has no subjects
    """
    risks = np.asarray(risks, dtype=float)
    y = np.asarray(y)
    if np.any(np.abs(risks.sum(axis=1) - 1.0) > RISK_ROW_SUM_TOL):
        raise DomainError("Predicted risks must sum to one for every subject")
    mask = (y == k) | (y == r)
    p_k = risks[mask, k - 1]
    total = p_k + risks[mask, r - 1]
    scores = np.divide(p_k, total, out=np.full_like(p_k, 0.5), where=total > 0)
    return concordance(scores, y[mask] == k)
