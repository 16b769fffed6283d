"""Maximum likelihood fitting of logistic regression models."""

from mnsampsize.fitting.base import NewtonModel, NewtonResult
from mnsampsize.fitting.fits import (
    BinaryFit,
    Dataset,
    MultinomialFit,
    ShrinkageHeuristic,
    fit_binary,
    fit_intercept_only,
    fit_multinomial,
    heuristic_shrinkage,
    lr_statistic,
)
from mnsampsize.fitting.logit import BinaryLogitModel, MultinomialLogitModel

__all__ = [
    "BinaryFit",
    "BinaryLogitModel",
    "Dataset",
    "MultinomialFit",
    "MultinomialLogitModel",
    "NewtonModel",
    "NewtonResult",
    "ShrinkageHeuristic",
    "fit_binary",
    "fit_intercept_only",
    "fit_multinomial",
    "heuristic_shrinkage",
    "lr_statistic",
]
