"""Tests for calibration slopes and C-statistics."""

import numpy as np
import pytest
from scipy.special import expit

from mnsampsize.calibration import (
    LinearPredictorSet,
    binary_calibration_slope,
    concordance,
    multinomial_recalibration,
    pairwise_cstat,
)
from mnsampsize.exceptions import (
    DegenerateCategoryError,
    DegeneratePredictorError,
    DomainError,
    UndefinedCStatisticError,
)
from mnsampsize.simstudy import generate_dataset, get_scenario, make_stream


def _binary_outcome(lp: np.ndarray, slope: float, seed: int = 4) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.random(lp.shape[0]) < expit(-0.3 + slope * lp)


def _brute_force_c(scores: np.ndarray, is_case: np.ndarray) -> float:
    cases, controls = scores[is_case], scores[~is_case]
    diff = cases[:, None] - controls[None, :]
    return float(np.mean((diff > 0) + 0.5 * (diff == 0)))


def test_calibration_slope_recovers_generating_slope() -> None:
    lp = np.random.default_rng(1).standard_normal(50_000)
    y = _binary_outcome(lp, 0.7)

    result = binary_calibration_slope(lp, y)

    assert result.slope == pytest.approx(0.7, abs=0.05)
    assert result.intercept == pytest.approx(-0.3, abs=0.05)
    assert result.converged


def test_calibration_slope_rescaling_contract() -> None:
    lp = np.random.default_rng(2).standard_normal(5000)
    y = _binary_outcome(lp, 1.2)

    base = binary_calibration_slope(lp, y).slope
    for factor in (0.5, 2.0, 3.7):
        scaled = binary_calibration_slope(factor * lp, y).slope

        assert scaled * factor == pytest.approx(base, abs=1e-6)


def test_calibration_slope_rejects_constant_predictor() -> None:
    with pytest.raises(DegeneratePredictorError):
        binary_calibration_slope(np.ones(10), np.arange(10) % 2 == 0)


def test_calibration_slope_rejects_single_class() -> None:
    with pytest.raises(DegenerateCategoryError):
        binary_calibration_slope(np.arange(10.0), np.zeros(10, dtype=bool))


def test_multinomial_recalibration_recovers_scaling() -> None:
    spec = get_scenario(3)
    data = generate_dataset(spec, 50_000, make_stream(3, 1))
    lp = np.einsum("ij,kj->ik", data.x, spec.beta_matrix[:, 1:])

    result = multinomial_recalibration(LinearPredictorSet(0.5 * lp, data.y))

    assert result.slopes == pytest.approx((2.0, 2.0), abs=0.1)
    np.testing.assert_allclose(result.intercepts, spec.beta_matrix[:, 0], atol=0.1)
    assert result.converged


def test_multinomial_recalibration_rescaling_contract() -> None:
    spec = get_scenario(1)
    data = generate_dataset(spec, 5000, make_stream(8, 1))
    lp = np.einsum("ij,kj->ik", data.x, spec.beta_matrix[:, 1:])

    base = multinomial_recalibration(LinearPredictorSet(lp, data.y)).slopes
    scaled = multinomial_recalibration(LinearPredictorSet(lp * [2.0, 0.5], data.y))

    assert scaled.slopes[0] * 2.0 == pytest.approx(base[0], abs=1e-6)
    assert scaled.slopes[1] * 0.5 == pytest.approx(base[1], abs=1e-6)


def test_multinomial_recalibration_missing_category() -> None:
    lp = np.random.default_rng(0).standard_normal((20, 2))
    y = np.array([1, 2] * 10)

    with pytest.raises(DegenerateCategoryError):
        multinomial_recalibration(LinearPredictorSet(lp, y))


def test_linear_predictor_set_validates_labels() -> None:
    with pytest.raises(DomainError):
        LinearPredictorSet(np.zeros((3, 2)), np.array([1, 2, 4]))


def test_concordance_simple_cases() -> None:
    scores = np.array([0.1, 0.4, 0.35, 0.8])
    is_case = np.array([False, True, False, True])

    assert concordance(scores, is_case) == 1.0
    assert concordance(-scores, is_case) == 0.0
    assert concordance(np.array([1.0, 1.0]), np.array([True, False])) == 0.5


def test_concordance_matches_pair_counting() -> None:
    rng = np.random.default_rng(6)
    scores = np.round(rng.standard_normal(300), 1)
    is_case = rng.random(300) < 0.3

    assert concordance(scores, is_case) == pytest.approx(
        _brute_force_c(scores, is_case), abs=1e-12
    )


def test_concordance_needs_both_classes() -> None:
    with pytest.raises(UndefinedCStatisticError):
        concordance(np.arange(5.0), np.ones(5, dtype=bool))


def test_pairwise_cstat_uses_conditional_risks() -> None:
    rng = np.random.default_rng(10)
    risks = rng.dirichlet((1.0, 1.0, 1.0), size=400)
    y = rng.integers(1, 4, size=400)

    mask = (y == 3) | (y == 1)
    scores = risks[mask, 2] / (risks[mask, 2] + risks[mask, 0])
    expected = _brute_force_c(scores, y[mask] == 3)

    assert pairwise_cstat(risks, y, 3, 1) == pytest.approx(expected, abs=1e-12)
    assert pairwise_cstat(risks, y, 1, 3) == pytest.approx(1.0 - expected, abs=1e-12)


def test_pairwise_cstat_zero_pair_risk_scores_half() -> None:
    risks = np.array([[0.0, 0.0, 1.0], [0.5, 0.5, 0.0], [0.2, 0.6, 0.2]])
    y = np.array([1, 2, 2])

    assert pairwise_cstat(risks, y, 2, 1) == pytest.approx(0.75)


def test_pairwise_cstat_rejects_unnormalized_risks() -> None:
    with pytest.raises(DomainError):
        pairwise_cstat(np.full((2, 3), 0.5), np.array([1, 2]), 2, 1)


@pytest.mark.parametrize(
    "transform",
    [np.sqrt, np.square, lambda c: np.log(c / (1.0 - c)), lambda c: c**3 + 2.0 * c],
)
def test_pairwise_cstat_ignores_monotone_score_transforms(transform) -> None:
    rng = np.random.default_rng(12)
    risks = rng.dirichlet((2.0, 1.0, 1.5), size=500)
    y = rng.integers(1, 4, size=500)

    mask = (y == 3) | (y == 1)
    scores = risks[mask, 2] / (risks[mask, 2] + risks[mask, 0])

    assert concordance(transform(scores), y[mask] == 3) == pytest.approx(
        pairwise_cstat(risks, y, 3, 1), abs=1e-12
    )

    pair_total = risks[:, 2] + risks[:, 0]
    conditional = risks[:, 2] / pair_total
    squeezed = conditional**2
    reshaped = risks.copy()
    reshaped[:, 2] = squeezed * pair_total
    reshaped[:, 0] = (1.0 - squeezed) * pair_total

    assert pairwise_cstat(reshaped, y, 3, 1) == pytest.approx(
        pairwise_cstat(risks, y, 3, 1), abs=1e-12
    )


@pytest.mark.slow
def test_calibration_slope_on_true_predictor_concentrates_at_one() -> None:
    for n, band in ((10_000, 0.12), (100_000, 0.04), (1_000_000, 0.02)):
        lp = np.random.default_rng(n).standard_normal(n)
        y = _binary_outcome(lp, 1.0, seed=n + 1)

        slope = binary_calibration_slope(lp, y).slope

        assert slope == pytest.approx(1.0, abs=band)


@pytest.mark.slow
def test_calibration_slope_on_doubled_predictor_halves() -> None:
    lp = np.random.default_rng(6).standard_normal(1_000_000)
    y = _binary_outcome(lp, 1.0, seed=7)

    assert binary_calibration_slope(lp, y).slope == pytest.approx(1.0, abs=0.02)
    assert binary_calibration_slope(2.0 * lp, y).slope == pytest.approx(0.5, abs=0.02)


@pytest.mark.slow
def test_multinomial_recalibration_of_generating_model_is_one() -> None:
    spec = get_scenario(1)
    data = generate_dataset(spec, 500_000, make_stream(17, 1))
    lp = np.einsum("ij,kj->ik", data.x, spec.beta_matrix[:, 1:])

    result = multinomial_recalibration(LinearPredictorSet(lp, data.y))
    halved = multinomial_recalibration(LinearPredictorSet(0.5 * lp, data.y))

    assert result.converged
    assert result.slopes == pytest.approx((1.0, 1.0), abs=0.02)
    assert halved.slopes == pytest.approx((2.0, 2.0), abs=0.04)
