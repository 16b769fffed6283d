"""Cox-Snell and Nagelkerke R² arithmetic.

Null log-likelihoods, the maximum attainable Cox-Snell R² of an outcome
distribution, conversions between the two families and the optimism
adjustment of an apparent R².
"""

import logging
import math

import numpy as np

from mnsampsize.const import DEFAULT_NAGELKERKE
from mnsampsize.exceptions import (
    DegenerateCategoryError,
    DomainError,
    IncompleteSpecificationError,
    InconsistentRSquaredError,
)
from mnsampsize.models import OutcomeDistribution, PairPrevalence

logger = logging.getLogger("mnsampsize")


def _plogp_sum(p: np.ndarray) -> float:
    if np.any(p <= 0.0):
        raise DegenerateCategoryError(
            f"Every category needs a positive proportion: {p.tolist()}"
        )
    return math.fsum((p * np.log(p)).tolist())


def _max_rcs_from(p: np.ndarray) -> float:
    # 1 - (prod p_k^p_k)^2
    return -math.expm1(2.0 * _plogp_sum(p))


def lnl_null_multinomial(dist: OutcomeDistribution) -> float:
    """Log-likelihood of the intercept-only multinomial model.

    Args:
        dist (OutcomeDistribution): Distribution with event counts

    Returns:
        float: sum_k E_k ln(E_k / n), in nats

    Raises:
        IncompleteSpecificationError: If the distribution carries no counts
        DegenerateCategoryError: If any category has no events
    """
    if dist.counts is None or dist.n is None:
        raise IncompleteSpecificationError(
            "The null log-likelihood needs event counts, not just proportions"
        )
    counts = np.asarray(dist.counts, dtype=float)
    if np.any(counts <= 0):
        raise DegenerateCategoryError(
            f"Every category needs at least one event: {list(dist.counts)}"
        )
    return math.fsum((counts * np.log(counts / dist.n)).tolist())


def lnl_null_binary(e_k: int, e_r: int) -> float:
    """Log-likelihood of the intercept-only logistic model of a pair.

    Args:
        e_k (int): Events in category k
        e_r (int): Events in category r

    Returns:
        float: E_k ln(E_k / (E_k + E_r)) + E_r ln(E_r / (E_k + E_r))

    Raises:
        DegenerateCategoryError: If either count is zero
    """
    if e_k <= 0 or e_r <= 0:
        raise DegenerateCategoryError(
            f"Both categories of a pair need events: ({e_k}, {e_r})"
        )
    return lnl_null_multinomial(OutcomeDistribution.from_counts((e_k, e_r)))


def max_rcs(dist: OutcomeDistribution) -> float:
    """Maximum attainable Cox-Snell R² for an outcome distribution.

    Args:
        dist (OutcomeDistribution): Outcome distribution

    Returns:
        float: 1 - (prod_k p_k^p_k)^2

    Raises:
        DegenerateCategoryError: If any proportion is zero
    """
    return _max_rcs_from(np.asarray(dist.proportions, dtype=float))


def max_rcs_pair(phi: PairPrevalence | float) -> float:
    """Maximum attainable Cox-Snell R² of a distinct logistic model.

    Args:
        phi (PairPrevalence | float): Prevalence of category k within the pair

    Returns:
        float: 1 - (phi^phi (1 - phi)^(1 - phi))^2

    Raises:
        DomainError: If phi is outside (0, 1)
    """
    value = float(phi)
    if not 0.0 < value < 1.0:
        raise DomainError(f"Pair prevalence must lie in (0, 1): {value}")
    return _max_rcs_from(np.array([value, 1.0 - value]))


def nagelkerke_from_cs(r2_cs: float, max_r2: float) -> float:
    """Rescale a Cox-Snell R² by its maximum.

    Args:
        r2_cs (float): Cox-Snell R², apparent or adjusted
        max_r2 (float): Maximum attainable Cox-Snell R²

    Returns:
        float: Nagelkerke R² in [0, 1]

    Raises:
        DomainError: If max_r2 is outside (0, 1] or r2_cs is negative
        InconsistentRSquaredError: If r2_cs exceeds max_r2
    """
    if not 0.0 < max_r2 <= 1.0:
        raise DomainError(f"Maximum R² must lie in (0, 1]: {max_r2}")
    if r2_cs < 0.0:
        raise DomainError(f"Cox-Snell R² must be non-negative: {r2_cs}")
    if r2_cs > max_r2:
        raise InconsistentRSquaredError(
            f"Cox-Snell R² {r2_cs} exceeds its maximum {max_r2}"
        )
    return r2_cs / max_r2


def cs_from_nagelkerke_assumption(
    target: OutcomeDistribution | PairPrevalence | float,
    r2_nag: float = DEFAULT_NAGELKERKE,
) -> float:
    """Cox-Snell R² implied by an assumed Nagelkerke R².

    Used when no earlier model reports a usable R²; the default 0.15 is the
    conservative fallback.

    Args:
        target (OutcomeDistribution | PairPrevalence | float): Multinomial
            distribution, or the prevalence of a pair
        r2_nag (float): Assumed Nagelkerke R²

    Returns:
        float: r2_nag * max attainable Cox-Snell R²

    Raises:
        DomainError: If r2_nag is outside [0, 1)
    """
    if not 0.0 <= r2_nag < 1.0:
        raise DomainError(f"Nagelkerke R² must lie in [0, 1): {r2_nag}")
    if isinstance(target, OutcomeDistribution):
        return r2_nag * max_rcs(target)
    return r2_nag * max_rcs_pair(target)


def adjust_apparent(r2_app: float, s_vh: float) -> float:
    """Optimism-adjust an apparent Cox-Snell R² with a heuristic shrinkage factor.

    Args:
        r2_app (float): Apparent R²
        s_vh (float): Heuristic shrinkage factor

    Returns:
        float: s_vh * r2_app

    Raises:
        DomainError: If either argument is out of range
    """
    if not 0.0 <= r2_app < 1.0:
        raise DomainError(f"Apparent R² must lie in [0, 1): {r2_app}")
    if not 0.0 < s_vh <= 1.0:
        raise DomainError(f"Shrinkage factor must lie in (0, 1]: {s_vh}")
    return s_vh * r2_app


def r2_cs_from_lr(lr: float, n: int) -> float:
    """Cox-Snell R² of a model with likelihood ratio statistic lr.

    Args:
        lr (float): Likelihood ratio statistic
        n (int): Number of subjects the model was fitted on

    Returns:
        float: 1 - exp(-lr / n)

    Raises:
        DomainError: If lr is negative or n is not positive
    """
    if lr < 0.0:
        raise DomainError(f"Likelihood ratio statistic must be >= 0: {lr}")
    if n <= 0:
        raise DomainError(f"Sample size must be positive: {n}")
    return -math.expm1(-lr / n)


def heuristic_shrinkage_from_r2(params: int, n: int, r2_app: float) -> float:
    """Heuristic shrinkage factor expressed through the apparent R².

    Args:
        params (int): Number of predictor parameters
        n (int): Number of subjects
        r2_app (float): Apparent Cox-Snell R²

    Returns:
        float: 1 + params / (n ln(1 - r2_app))

    Raises:
        DomainError: If r2_app is outside (0, 1)
    """
    if not 0.0 < r2_app < 1.0:
        raise DomainError(f"Apparent R² must lie in (0, 1): {r2_app}")
    return 1.0 + params / (n * math.log1p(-r2_app))
