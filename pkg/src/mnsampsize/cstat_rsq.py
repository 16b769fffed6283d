"""Cox-Snell R² of a binary model from its C-statistic and prevalence.

A large cohort is simulated whose linear predictor reproduces the published
C-statistic and outcome prevalence; the Cox-Snell R² of that linear predictor
is the estimate. Two linear predictor models are available:

* ``logistic_normal``: L ~ Normal(mu, sigma²) and Y ~ Bernoulli(expit(L)).
  mu and sigma are calibrated on common random numbers, so the search
  over sigma is a one-dimensional monotone problem.
* ``binormal``: the linear predictor is normal within each outcome class
  with equal variances, separated by sqrt(2) * Phi^-1(C), and is refitted
  by logistic regression.

The normal shape is an assumption; skewed linear predictors map the same C
to a different R².
"""

import logging
import math

import numpy as np
from scipy.optimize import brentq
from scipy.special import logit
from scipy.stats import norm, rankdata

from mnsampsize.calibration import auc_from_ranks, concordance
from mnsampsize.const import CSTAT_SIGMA_BRACKET
from mnsampsize.exceptions import CStatConvergenceError
from mnsampsize.fitting.fits import lr_statistic
from mnsampsize.fitting.logit import BinaryLogitModel
from mnsampsize.models import CStatEstimate, CStatSpec
from mnsampsize.rsq_math import lnl_null_binary, r2_cs_from_lr

logger = logging.getLogger("mnsampsize")


class _LogisticNormalCohort:
    """Common random numbers for the logistic-normal calibration search."""

    def __init__(self, spec: CStatSpec) -> None:
        rng = np.random.default_rng(spec.seed)
        self.n = spec.sim_size
        self.z = rng.standard_normal(self.n)
        # Y = 1 exactly when logit(U) < L
        self.logit_u = logit(rng.random(self.n))
        self.z_ranks = rankdata(self.z)
        self.events = min(max(round(spec.phi.phi * self.n), 1), self.n - 1)

    def calibrate_mu(self, sigma: float) -> tuple[float, np.ndarray]:
        """Intercept giving exactly the target number of events.

        Args:
            sigma (float): Standard deviation of the linear predictor

        Returns:
            tuple[float, np.ndarray]: (mu, event indicator)
        """
        w = self.logit_u - sigma * self.z
        k = self.events
        lower, upper = np.partition(w, [k - 1, k])[[k - 1, k]]
        mu = 0.5 * (lower + upper)
        return float(mu), w < mu

    def cstat(self, sigma: float) -> float:
        """C-statistic of the linear predictor at a trial sigma.

        Args:
            sigma (float): Standard deviation of the linear predictor

        Returns:
            float: Empirical C-statistic
        """
        _, is_case = self.calibrate_mu(sigma)
        return auc_from_ranks(self.z_ranks, is_case)


def _logistic_normal(spec: CStatSpec) -> CStatEstimate:
    cohort = _LogisticNormalCohort(spec)
    lo, hi = CSTAT_SIGMA_BRACKET

    def gap(sigma: float) -> float:
        return cohort.cstat(sigma) - spec.c

    gap_lo, gap_hi = gap(lo), gap(hi)
    logger.debug(
        f"C-statistic search bracket sigma=[{lo}, {hi}], "
        f"C=[{gap_lo + spec.c:.4f}, {gap_hi + spec.c:.4f}], target {spec.c}"
    )
    if gap_lo >= 0.0:
        if gap_lo > spec.match_tol:
            raise CStatConvergenceError(
                "Target C-statistic is below the smallest attainable value",
                {"target_c": spec.c, "sigma": lo, "achieved_c": gap_lo + spec.c},
            )
        sigma = lo
    elif gap_hi <= 0.0:
        if -gap_hi > spec.match_tol:
            raise CStatConvergenceError(
                "Target C-statistic is above the largest attainable value",
                {"target_c": spec.c, "sigma": hi, "achieved_c": gap_hi + spec.c},
            )
        sigma = hi
    else:
        sigma = brentq(gap, lo, hi, xtol=1e-6)

    mu, is_case = cohort.calibrate_mu(sigma)
    achieved_c = auc_from_ranks(cohort.z_ranks, is_case)
    if abs(achieved_c - spec.c) > spec.match_tol:
        raise CStatConvergenceError(
            "Calibrated linear predictor misses the target C-statistic",
            {"target_c": spec.c, "sigma": sigma, "achieved_c": achieved_c},
        )

    outcome = is_case.astype(float)
    offset = mu + sigma * cohort.z
    result = BinaryLogitModel(np.ones((cohort.n, 1)), outcome, offset=offset).fit()
    events = cohort.events
    lr = lr_statistic(lnl_null_binary(events, cohort.n - events), result.lnl)
    return CStatEstimate(
        r2_cs=r2_cs_from_lr(lr, cohort.n),
        lr=lr,
        achieved_c=achieved_c,
        achieved_phi=events / cohort.n,
        parameters={
            "mu": mu,
            "sigma": sigma,
            "intercept_shift": float(result.params[0]),
        },
        spec=spec,
    )


def _binormal(spec: CStatSpec) -> CStatEstimate:
    rng = np.random.default_rng(spec.seed)
    n = spec.sim_size
    events = min(max(round(spec.phi.phi * n), 1), n - 1)
    separation = math.sqrt(2.0) * float(norm.ppf(spec.c))
    is_case = np.arange(n) < events
    lp = rng.standard_normal(n) + separation * is_case

    design = np.column_stack([np.ones(n), lp])
    result = BinaryLogitModel(design, is_case.astype(float)).fit()
    lr = lr_statistic(lnl_null_binary(events, n - events), result.lnl)
    achieved_c = concordance(lp, is_case)
    if abs(achieved_c - spec.c) > spec.match_tol:
        logger.warning(
            f"Binormal cohort reached C={achieved_c:.4f} for target {spec.c}; "
            "increase sim_size for a closer match"
        )
    return CStatEstimate(
        r2_cs=r2_cs_from_lr(lr, n),
        lr=lr,
        achieved_c=achieved_c,
        achieved_phi=events / n,
        parameters={
            "separation": separation,
            "intercept": float(result.params[0]),
            "slope": float(result.params[1]),
        },
        spec=spec,
    )


def estimate_rsq_from_cstat(spec: CStatSpec) -> CStatEstimate:
    """Estimate the Cox-Snell R² implied by a C-statistic.

    Args:
        spec (CStatSpec): C-statistic, pair prevalence and simulation settings

    Returns:
        CStatEstimate: R² with the achieved C, prevalence and model parameters

    Raises:
        CStatConvergenceError: If the target C cannot be reproduced
    """
    logger.debug(
        f"Estimating R² from C={spec.c}, phi={spec.phi.phi} "
        f"({spec.lp_model}, {spec.sim_size} subjects, seed {spec.seed})"
    )
    if spec.lp_model == "binormal":
        estimate = _binormal(spec)
    else:
        estimate = _logistic_normal(spec)
    logger.debug(f"C-statistic conversion: {estimate}")
    return estimate


def rsq_from_cstat(spec: CStatSpec) -> float:
    """Estimated Cox-Snell R² for a C-statistic.

    Args:
        spec (CStatSpec): C-statistic, pair prevalence and simulation settings

    Returns:
        float: Estimated R²_CS of the distinct logistic model
    """
    return estimate_rsq_from_cstat(spec).r2_cs
