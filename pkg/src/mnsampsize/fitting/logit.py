"""Binary and multinomial logistic likelihoods."""

from collections.abc import Sequence

import numpy as np
from scipy.special import expit, log_expit, logsumexp, softmax

from mnsampsize.fitting.base import NewtonModel


def _bernoulli_lnl(y: np.ndarray, eta: np.ndarray) -> float:
    return float(np.sum(y * log_expit(eta) + (1.0 - y) * log_expit(-eta)))


class BinaryLogitModel(NewtonModel):
    """Logistic regression of a 0/1 outcome on a design matrix.

    The design carries its own intercept column. An optional offset is added
    to the linear predictor with a fixed coefficient of one.
    """

    def __init__(
        self,
        x: np.ndarray,
        y: np.ndarray,
        offset: np.ndarray | None = None,
        **kwargs: float,
    ) -> None:
        """Initialize the model.

        Args:
            x (np.ndarray): n x p design matrix
            y (np.ndarray): n-vector of 0/1 outcomes
            offset (np.ndarray | None): Fixed part of the linear predictor
            **kwargs (float): Optimizer settings passed to NewtonModel
        """
        self.x = np.asarray(x, dtype=float)
        self.y = np.asarray(y, dtype=float)
        self.offset = None if offset is None else np.asarray(offset, dtype=float)
        super().__init__(self.x.shape[1], **kwargs)

    def linear_predictor(self, params: np.ndarray) -> np.ndarray:
        """Linear predictor including the offset.

        Args:
            params (np.ndarray): Coefficients

        Returns:
            np.ndarray: n-vector of log-odds
        """
        eta = np.einsum("ij,j->i", self.x, params)
        if self.offset is not None:
            eta = eta + self.offset
        return eta

    def loglik(self, params: np.ndarray) -> float:
        """Bernoulli log-likelihood.

        Args:
            params (np.ndarray): Coefficients

        Returns:
            float: Log-likelihood in nats
        """
        eta = self.linear_predictor(params)
        return _bernoulli_lnl(self.y, eta)

    def evaluate(self, params: np.ndarray) -> tuple[float, np.ndarray, np.ndarray]:
        """Log-likelihood with analytic score and Hessian.

        Args:
            params (np.ndarray): Coefficients

        Returns:
            tuple[float, np.ndarray, np.ndarray]: (lnl, score, hessian)
        """
        eta = self.linear_predictor(params)
        lnl = _bernoulli_lnl(self.y, eta)
        prob = expit(eta)
        score = np.einsum("ij,i->j", self.x, self.y - prob)
        weight = prob * (1.0 - prob)
        hessian = -np.einsum("ij,i,ik->jk", self.x, weight, self.x)
        return lnl, score, hessian


class MultinomialLogitModel(NewtonModel):
    """Multinomial logistic regression against the first category.

    Each non-reference category j has its own design matrix, so sub-models may
    use different predictors (the recalibration model gives sub-model j only
    its own linear predictor). Parameters are stacked sub-model by sub-model.
    """

    def __init__(
        self,
        designs: Sequence[np.ndarray],
        y: np.ndarray,
        offsets: Sequence[np.ndarray] | None = None,
        **kwargs: float,
    ) -> None:
        """Initialize the model.

        Args:
            designs (Sequence[np.ndarray]): One n x p_j design per category 2..K
            y (np.ndarray): n-vector of 0-based category indices (0 = reference)
            offsets (Sequence[np.ndarray] | None): Fixed linear predictor parts
            **kwargs (float): Optimizer settings passed to NewtonModel
        """
        self.designs = [np.asarray(d, dtype=float) for d in designs]
        self.y = np.asarray(y, dtype=np.int64)
        self.n_categories = len(self.designs) + 1
        self.onehot = np.zeros((self.y.shape[0], self.n_categories))
        self.onehot[np.arange(self.y.shape[0]), self.y] = 1.0
        self.offsets = (
            None if offsets is None else [np.asarray(o, dtype=float) for o in offsets]
        )
        sizes = [d.shape[1] for d in self.designs]
        self.slices = []
        start = 0
        for size in sizes:
            self.slices.append(slice(start, start + size))
            start += size
        super().__init__(start, **kwargs)

    def linear_predictors(self, params: np.ndarray) -> np.ndarray:
        """Linear predictors of all categories.

        Args:
            params (np.ndarray): Stacked coefficients

        Returns:
            np.ndarray: n x K matrix with a zero reference column
        """
        eta = np.zeros((self.y.shape[0], self.n_categories))
        for j, (design, part) in enumerate(zip(self.designs, self.slices, strict=True)):
            eta[:, j + 1] = np.einsum("ij,j->i", design, params[part])
            if self.offsets is not None:
                eta[:, j + 1] += self.offsets[j]
        return eta

    def loglik(self, params: np.ndarray) -> float:
        """Multinomial log-likelihood.

        Args:
            params (np.ndarray): Stacked coefficients

        Returns:
            float: Log-likelihood in nats
        """
        eta = self.linear_predictors(params)
        return float(
            np.sum(eta[np.arange(eta.shape[0]), self.y] - logsumexp(eta, axis=1))
        )

    def evaluate(self, params: np.ndarray) -> tuple[float, np.ndarray, np.ndarray]:
        """Log-likelihood with analytic score and block Hessian.

        Args:
            params (np.ndarray): Stacked coefficients

        Returns:
            tuple[float, np.ndarray, np.ndarray]: (lnl, score, hessian)
        """
        eta = self.linear_predictors(params)
        lnl = float(
            np.sum(eta[np.arange(eta.shape[0]), self.y] - logsumexp(eta, axis=1))
        )
        prob = softmax(eta, axis=1)
        resid = self.onehot - prob

        score = np.empty(self.n_params)
        hessian = np.empty((self.n_params, self.n_params))
        for j, (x_j, part_j) in enumerate(zip(self.designs, self.slices, strict=True)):
            p_j = prob[:, j + 1]
            score[part_j] = np.einsum("ij,i->j", x_j, resid[:, j + 1])
            for m, (x_m, part_m) in enumerate(
                zip(self.designs, self.slices, strict=True)
            ):
                if m < j:
                    continue
                weight = p_j * ((1.0 if m == j else 0.0) - prob[:, m + 1])
                block = -np.einsum("ia,i,ib->ab", x_j, weight, x_m)
                hessian[part_j, part_m] = block
                hessian[part_m, part_j] = block.T
        return lnl, score, hessian
