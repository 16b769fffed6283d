"""Base class for concave log-likelihood models fitted by Newton-Raphson."""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from mnsampsize.const import (
    LNL_REL_TOL,
    MAX_ITER,
    MAX_STEP_HALVINGS,
    RCOND_MIN,
    SCORE_TOL,
    SEPARATION_BOUND,
)
from mnsampsize.exceptions import (
    NonConvergenceError,
    SeparationError,
    SingularHessianError,
)

logger = logging.getLogger("mnsampsize")


@dataclass(slots=True)
class NewtonResult:
    """Outcome of a Newton-Raphson maximization."""

    params: np.ndarray
    lnl: float
    score_norm: float
    converged: bool
    iterations: int
    status: str


class NewtonModel(ABC):
    """Abstract base class for likelihoods maximized by Newton-Raphson.

    Subclasses supply the log-likelihood with its score and Hessian; the base
    class owns the iteration, the step-halving line search and the failure
    diagnostics.
    """

    def __init__(
        self,
        n_params: int,
        max_iter: int = MAX_ITER,
        score_tol: float = SCORE_TOL,
        separation_bound: float = SEPARATION_BOUND,
    ) -> None:
        """Initialize the optimizer settings.

        Args:
            n_params (int): Number of free parameters
            max_iter (int): Newton iteration budget
            score_tol (float): Convergence threshold on the score max-norm
            separation_bound (float): Coefficient magnitude that signals
                separation while the fit is still improving
        """
        self.n_params = n_params
        self.max_iter = max_iter
        self.score_tol = score_tol
        self.separation_bound = separation_bound

    @abstractmethod
    def loglik(self, params: np.ndarray) -> float:
        """Evaluate the log-likelihood.

        Args:
            params (np.ndarray): Parameter vector

        Returns:
            float: Log-likelihood in nats
        """
        pass

    @abstractmethod
    def evaluate(self, params: np.ndarray) -> tuple[float, np.ndarray, np.ndarray]:
        """Evaluate the log-likelihood, score vector and Hessian.

        Args:
            params (np.ndarray): Parameter vector

        Returns:
            tuple[float, np.ndarray, np.ndarray]: (lnl, score, hessian)
        """
        pass

    def _newton_step(self, score: np.ndarray, hessian: np.ndarray) -> np.ndarray:
        try:
            factor = cho_factor(-hessian, lower=True, check_finite=True)
        except (LinAlgError, ValueError) as e:
            raise SingularHessianError(
                f"Information matrix is not positive definite: {e}"
            ) from e
        diag = np.abs(np.diag(factor[0]))
        rcond = (diag.min() / diag.max()) ** 2 if diag.max() > 0 else 0.0
        if rcond < RCOND_MIN:
            raise SingularHessianError(
                f"Information matrix is singular (reciprocal condition {rcond:.3g})"
            )
        return cho_solve(factor, score)

    def fit(
        self, start: np.ndarray | None = None, raise_on_failure: bool = True
    ) -> NewtonResult:
        """Maximize the log-likelihood.

        Args:
            start (np.ndarray | None): Starting values, all zero by default
            raise_on_failure (bool): Raise instead of returning an unconverged
                result on separation, a stalled line search or an exhausted
                iteration budget

        Returns:
            NewtonResult: Parameters at the maximum and convergence details

        Raises:
            NonConvergenceError: If the iteration budget is exhausted or the
                line search stalls above the score tolerance
            SeparationError: If coefficients diverge
            SingularHessianError: If the information matrix is singular
        """
        params = (
            np.zeros(self.n_params) if start is None else np.array(start, dtype=float)
        )
        lnl, score, hessian = self.evaluate(params)
        score_norm = float(np.max(np.abs(score)))
        status = "max_iter"
        iteration = 0

        while score_norm >= self.score_tol:
            if iteration == self.max_iter:
                break
            iteration += 1
            step = self._newton_step(score, hessian)
            # Near the maximum lnl differences fall below its rounding error
            slack = LNL_REL_TOL * max(1.0, abs(lnl))
            scale = 1.0
            for halving in range(MAX_STEP_HALVINGS + 1):
                candidate = params + scale * step
                candidate_lnl = self.loglik(candidate)
                if np.isfinite(candidate_lnl) and candidate_lnl >= lnl - slack:
                    break
                scale /= 2.0
            else:
                logger.debug(
                    f"Newton iteration {iteration}: line search exhausted at "
                    f"lnl={lnl:.10g}, score={score_norm:.3g}"
                )
                status = "stalled"
                break

            params = candidate
            lnl, score, hessian = self.evaluate(params)
            score_norm = float(np.max(np.abs(score)))
            logger.debug(
                f"Newton iteration {iteration}: lnl={lnl:.10g}, "
                f"score={score_norm:.3g}, halvings={halving}"
            )
            if np.max(np.abs(params)) > self.separation_bound:
                status = "separation"
                break
        else:
            return NewtonResult(params, lnl, score_norm, True, iteration, "converged")

        if raise_on_failure:
            if status == "separation":
                raise SeparationError(
                    f"Coefficients exceed {self.separation_bound} while the "
                    f"likelihood is still improving (max |coef| = "
                    f"{np.max(np.abs(params)):.3g})"
                )
            if status == "stalled":
                raise NonConvergenceError(
                    f"Line search stalled after {iteration} iterations "
                    f"(score max-norm {score_norm:.3g})"
                )
            raise NonConvergenceError(
                f"No convergence after {self.max_iter} iterations "
                f"(score max-norm {score_norm:.3g})"
            )
        return NewtonResult(params, lnl, score_norm, False, iteration, status)
