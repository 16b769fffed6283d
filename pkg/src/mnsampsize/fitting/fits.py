"""Maximum likelihood fits of binary and multinomial logistic regression."""

import logging
import math
from dataclasses import dataclass
from typing import Any

import numpy as np
from scipy.special import expit, softmax

from mnsampsize.const import LNL_ORDER_TOL
from mnsampsize.exceptions import (
    DegenerateCategoryError,
    DomainError,
    ModelOrderingError,
)
from mnsampsize.fitting.logit import BinaryLogitModel, MultinomialLogitModel
from mnsampsize.models import OutcomeDistribution
from mnsampsize.rsq_math import lnl_null_binary, lnl_null_multinomial, r2_cs_from_lr

logger = logging.getLogger("mnsampsize")


@dataclass(slots=True, frozen=True, eq=False)
class Dataset:
    """Predictor matrix and 1-based category labels of a cohort."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self) -> None:
        """Validate shapes and labels.

        Raises:
            DomainError: If the shapes disagree or a label is below 1
        """
        if self.x.ndim != 2:
            raise DomainError(f"x must be an n x Q matrix, got shape {self.x.shape}")
        if self.y.ndim != 1 or self.y.shape[0] != self.x.shape[0]:
            raise DomainError(
                f"y must be a vector of length {self.x.shape[0]}, got {self.y.shape}"
            )
        if self.y.shape[0] == 0:
            raise DomainError("A dataset needs at least one subject")
        if np.any(self.y < 1):
            raise DomainError("Category labels start at 1")

    @property
    def n(self) -> int:
        """Number of subjects.

        Returns:
            int: n
        """
        return int(self.y.shape[0])

    @property
    def n_categories(self) -> int:
        """Largest category label.

        Returns:
            int: K
        """
        return int(self.y.max())

    def counts(self, k_categories: int | None = None) -> tuple[int, ...]:
        """Number of subjects per category.

        Args:
            k_categories (int | None): Number of categories, defaults to the
                largest label

        Returns:
            tuple[int, ...]: E_1..E_K
        """
        k = k_categories or self.n_categories
        return tuple(int(c) for c in np.bincount(self.y, minlength=k + 1)[1:])

    def pair(self, k: int, r: int) -> "Dataset":
        """Subjects with outcome k or r, relabelled r -> 1 and k -> 2.

        Args:
            k (int): Category modelled as the event
            r (int): Reference category

        Returns:
            Dataset: Two-category dataset for the distinct logistic model
        """
        mask = (self.y == k) | (self.y == r)
        labels = np.where(self.y[mask] == k, 2, 1)
        return Dataset(self.x[mask], labels)


@dataclass(slots=True, frozen=True)
class ShrinkageHeuristic:
    """Heuristic shrinkage factor 1 - params / LR of a development fit."""

    value: float
    lr: float
    params: int

    @property
    def negative(self) -> bool:
        """Whether the model has fewer LR units than parameters.

        Returns:
            bool: True if the value is below zero
        """
        return self.value < 0.0


@dataclass(slots=True, frozen=True, eq=False)
class BinaryFit:
    """Fitted logistic regression: intercept followed by Q slopes."""

    coefficients: np.ndarray
    lnl: float
    lnl_null: float
    n: int
    converged: bool = True
    iterations: int = 0

    @property
    def lr(self) -> float:
        """Likelihood ratio statistic against the intercept-only model.

        Returns:
            float: -2 (lnl_null - lnl)
        """
        return lr_statistic(self.lnl_null, self.lnl)

    @property
    def r2_cs(self) -> float:
        """Apparent Cox-Snell R².

        Returns:
            float: 1 - exp(-LR / n)
        """
        return r2_cs_from_lr(self.lr, self.n)

    @property
    def n_predictor_params(self) -> int:
        """Number of slopes.

        Returns:
            int: Q
        """
        return int(self.coefficients.shape[0]) - 1

    def linear_predictor(self, x: np.ndarray) -> np.ndarray:
        """Predictor part of the log-odds, without the intercept.

        Args:
            x (np.ndarray): n x Q predictors

        Returns:
            np.ndarray: n-vector of sum_q gamma_q x_q
        """
        return np.einsum("ij,j->i", x, self.coefficients[1:])

    def predict_proba(self, x: np.ndarray) -> np.ndarray:
        """Probability of the event category.

        Args:
            x (np.ndarray): n x Q predictors

        Returns:
            np.ndarray: n-vector of P(Y = 2)
        """
        return expit(self.coefficients[0] + self.linear_predictor(x))

    def to_dict(self) -> dict[str, Any]:
        """Convert to a dictionary for JSON serialization.

        Returns:
            dict[str, Any]: Dictionary representation of the fit
        """
        return {
            "coefficients": self.coefficients.tolist(),
            "lnl": self.lnl,
            "lnl_null": self.lnl_null,
            "n": self.n,
            "converged": self.converged,
            "iterations": self.iterations,
        }


@dataclass(slots=True, frozen=True, eq=False)
class MultinomialFit:
    """Fitted multinomial model: one row (intercept, Q slopes) per category 2..K."""

    coefficients: np.ndarray
    lnl: float
    lnl_null: float
    n: int
    converged: bool = True
    iterations: int = 0

    @property
    def lr(self) -> float:
        """Likelihood ratio statistic against the intercept-only model.

        Returns:
            float: -2 (lnl_null - lnl)
        """
        return lr_statistic(self.lnl_null, self.lnl)

    @property
    def r2_cs(self) -> float:
        """Apparent Cox-Snell R².

        Returns:
            float: 1 - exp(-LR / n)
        """
        return r2_cs_from_lr(self.lr, self.n)

    @property
    def n_predictor_params(self) -> int:
        """Number of slopes across all sub-models.

        Returns:
            int: (K - 1) * Q
        """
        rows, cols = self.coefficients.shape
        return rows * (cols - 1)

    def linear_predictors(self, x: np.ndarray) -> np.ndarray:
        """Predictor part of every sub-model, without intercepts.

        Args:
            x (np.ndarray): n x Q predictors

        Returns:
            np.ndarray: n x (K - 1) matrix of sum_q beta_{q,k} x_q
        """
        return np.einsum("ij,kj->ik", x, self.coefficients[:, 1:])

    def predict_proba(self, x: np.ndarray) -> np.ndarray:
        """Category probabilities.

        Args:
            x (np.ndarray): n x Q predictors

        Returns:
            np.ndarray: n x K matrix of P(Y = k)
        """
        eta = self.coefficients[:, 0] + self.linear_predictors(x)
        eta = np.column_stack([np.zeros(eta.shape[0]), eta])
        return softmax(eta, axis=1)

    def to_dict(self) -> dict[str, Any]:
        """Convert to a dictionary for JSON serialization.

        Returns:
            dict[str, Any]: Dictionary representation of the fit
        """
        return {
            "coefficients": self.coefficients.tolist(),
            "lnl": self.lnl,
            "lnl_null": self.lnl_null,
            "n": self.n,
            "converged": self.converged,
            "iterations": self.iterations,
        }


def _with_intercept(x: np.ndarray) -> np.ndarray:
    return np.column_stack([np.ones(x.shape[0]), x])


def _require_categories(data: Dataset, k_categories: int) -> tuple[int, ...]:
    counts = data.counts(k_categories)
    empty = [k for k, c in enumerate(counts, 1) if c == 0]
    if empty:
        raise DegenerateCategoryError(
            f"Categories {empty} have no subjects among {data.n}"
        )
    return counts


def fit_binary(data: Dataset, raise_on_failure: bool = True) -> BinaryFit:
    """Fit a logistic regression of category 2 against category 1.

    Args:
        data (Dataset): Two-category dataset (labels 1 and 2)
        raise_on_failure (bool): Raise on non-convergence instead of returning
            an unconverged fit

    Returns:
        BinaryFit: Maximum likelihood fit

    Raises:
        DomainError: If labels other than 1 and 2 occur
        DegenerateCategoryError: If either category is empty
    """
    if data.n_categories > 2:
        raise DomainError(
            f"Binary fit needs labels 1 and 2, got K={data.n_categories}"
        )
    e_r, e_k = _require_categories(data, 2)
    model = BinaryLogitModel(_with_intercept(data.x), (data.y == 2).astype(float))
    result = model.fit(raise_on_failure=raise_on_failure)
    logger.debug(
        f"Binary fit on {data.n} subjects: lnl={result.lnl:.6f} after "
        f"{result.iterations} iterations ({result.status})"
    )
    return BinaryFit(
        coefficients=result.params,
        lnl=result.lnl,
        lnl_null=lnl_null_binary(e_k, e_r),
        n=data.n,
        converged=result.converged,
        iterations=result.iterations,
    )


def fit_multinomial(
    data: Dataset, k_categories: int | None = None, raise_on_failure: bool = True
) -> MultinomialFit:
    """Fit a multinomial logistic regression with category 1 as reference.

    Args:
        data (Dataset): Cohort with labels 1..K
        k_categories (int | None): Number of categories, defaults to the
            largest label
        raise_on_failure (bool): Raise on non-convergence instead of returning
            an unconverged fit

    Returns:
        MultinomialFit: Joint maximum likelihood fit of the K - 1 sub-models

    Raises:
        DegenerateCategoryError: If a category is empty
    """
    k = k_categories or data.n_categories
    counts = _require_categories(data, k)
    design = _with_intercept(data.x)
    model = MultinomialLogitModel([design] * (k - 1), data.y - 1)
    result = model.fit(raise_on_failure=raise_on_failure)
    logger.debug(
        f"Multinomial fit on {data.n} subjects (K={k}): lnl={result.lnl:.6f} after "
        f"{result.iterations} iterations ({result.status})"
    )
    return MultinomialFit(
        coefficients=result.params.reshape(k - 1, design.shape[1]),
        lnl=result.lnl,
        lnl_null=lnl_null_multinomial(OutcomeDistribution.from_counts(counts)),
        n=data.n,
        converged=result.converged,
        iterations=result.iterations,
    )


def fit_intercept_only(data: Dataset) -> BinaryFit | MultinomialFit:
    """Closed-form intercept-only (null) model.

    Args:
        data (Dataset): Cohort with labels 1..K

    Returns:
        BinaryFit | MultinomialFit: Binary fit for K = 2, multinomial otherwise,
            with intercepts ln(E_k / E_1)

    Raises:
        DegenerateCategoryError: If a category is empty
    """
    counts = _require_categories(data, data.n_categories)
    lnl = lnl_null_multinomial(OutcomeDistribution.from_counts(counts))
    intercepts = np.array([math.log(c / counts[0]) for c in counts[1:]])
    if len(counts) == 2:
        return BinaryFit(intercepts, lnl, lnl, data.n)
    return MultinomialFit(intercepts.reshape(-1, 1), lnl, lnl, data.n)


def lr_statistic(lnl_null: float, lnl_model: float) -> float:
    """Likelihood ratio statistic of a model against the null model.

    Args:
        lnl_null (float): Null model log-likelihood
        lnl_model (float): Fitted model log-likelihood

    Returns:
        float: -2 (lnl_null - lnl_model), clamped at zero within tolerance

    Raises:
        ModelOrderingError: If the model is clearly worse than the null model
    """
    gain = lnl_model - lnl_null
    if gain < -LNL_ORDER_TOL * max(1.0, abs(lnl_null)):
        raise ModelOrderingError(
            f"Model log-likelihood {lnl_model} is below the null {lnl_null}"
        )
    return max(0.0, 2.0 * gain)


def heuristic_shrinkage(params: int, lr: float) -> ShrinkageHeuristic:
    """Heuristic shrinkage factor of a development fit.

    Args:
        params (int): Number of predictor parameters
        lr (float): Likelihood ratio statistic

    Returns:
        ShrinkageHeuristic: 1 - params / lr; negative values are kept

    Raises:
        DomainError: If lr is not positive
    """
    if lr <= 0.0:
        raise DomainError(f"Likelihood ratio statistic must be positive: {lr}")
    value = 1.0 - params / lr
    if value < 0.0:
        logger.warning(
            f"Negative heuristic shrinkage {value:.3f} ({params} parameters, "
            f"LR {lr:.3f})"
        )
    return ShrinkageHeuristic(value=value, lr=lr, params=params)
