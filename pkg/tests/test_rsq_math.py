"""Tests for R² arithmetic."""

import math

import numpy as np
import pytest

from mnsampsize.exceptions import (
    DegenerateCategoryError,
    DomainError,
    IncompleteSpecificationError,
    InconsistentRSquaredError,
)
from mnsampsize.models import OutcomeDistribution, PairPrevalence
from mnsampsize.rsq_math import (
    adjust_apparent,
    cs_from_nagelkerke_assumption,
    heuristic_shrinkage_from_r2,
    lnl_null_binary,
    lnl_null_multinomial,
    max_rcs,
    max_rcs_pair,
    nagelkerke_from_cs,
    r2_cs_from_lr,
)

TUMOUR_COUNTS = (2557, 186, 176, 467, 120)


def test_max_rcs_of_tumour_proportions() -> None:
    dist = OutcomeDistribution.from_proportions(
        (0.729, 0.053, 0.050, 0.133, 0.034), normalize=True
    )

    assert max_rcs(dist) == pytest.approx(0.841, abs=1e-3)


def test_max_rcs_of_counts() -> None:
    dist = OutcomeDistribution.from_counts(TUMOUR_COUNTS)

    assert max_rcs(dist) == pytest.approx(0.841246, abs=1e-6)


def test_max_rcs_matches_null_loglikelihood_form() -> None:
    rng = np.random.default_rng(7)
    for _ in range(1000):
        k = int(rng.integers(2, 7))
        counts = rng.integers(1, 5000, size=k)
        dist = OutcomeDistribution.from_counts(counts.tolist())

        via_lnl = -math.expm1(2.0 * lnl_null_multinomial(dist) / dist.n)

        assert max_rcs(dist) == pytest.approx(via_lnl, abs=1e-12)


def test_uniform_binary_maximum_is_three_quarters() -> None:
    assert max_rcs_pair(0.5) == pytest.approx(0.75, abs=1e-15)
    assert max_rcs_pair(PairPrevalence(0.1)) == pytest.approx(0.478041, abs=1e-6)


@pytest.mark.parametrize("k", [2, 3, 4, 5, 6])
def test_uniform_distribution_attains_the_maximum(k: int) -> None:
    uniform = OutcomeDistribution.from_proportions([1.0 / k] * k, normalize=True)

    assert max_rcs(uniform) == pytest.approx((k * k - 1) / (k * k), abs=1e-12)


def test_uniform_three_category_maximum_is_eight_ninths() -> None:
    uniform = OutcomeDistribution.from_counts([100, 100, 100])

    assert max_rcs(uniform) == pytest.approx(8 / 9, abs=1e-12)


def test_perturbing_the_uniform_distribution_lowers_the_maximum() -> None:
    rng = np.random.default_rng(21)
    for _ in range(200):
        k = int(rng.integers(2, 7))
        shift = rng.normal(scale=0.05, size=k)
        shift -= shift.mean()
        proportions = 1.0 / k + shift * min(1.0, 0.9 / k / np.max(np.abs(shift)))
        dist = OutcomeDistribution.from_proportions(
            proportions.tolist(), normalize=True
        )

        assert max_rcs(dist) < (k * k - 1) / (k * k)

    for eps in (1e-3, 1e-2, 0.1):
        tilted = OutcomeDistribution.from_proportions(
            [1 / 3 + eps, 1 / 3 - eps, 1 / 3], normalize=True
        )

        assert max_rcs(tilted) < 8 / 9


def test_max_rcs_pair_is_symmetric_in_phi() -> None:
    for phi in (0.01, 0.2, 0.37):
        assert max_rcs_pair(phi) == pytest.approx(max_rcs_pair(1.0 - phi), abs=1e-14)


def test_max_rcs_pair_rejects_degenerate_prevalence() -> None:
    with pytest.raises(DomainError):
        max_rcs_pair(0.0)
    with pytest.raises(DomainError):
        max_rcs_pair(1.0)


def test_max_rcs_rejects_empty_category() -> None:
    dist = OutcomeDistribution.from_proportions((0.5, 0.5, 0.0))

    with pytest.raises(DegenerateCategoryError):
        max_rcs(dist)


def test_lnl_null_binary_value() -> None:
    assert lnl_null_binary(30, 70) == pytest.approx(-61.0864, abs=1e-4)


def test_lnl_null_binary_rejects_empty_category() -> None:
    with pytest.raises(DegenerateCategoryError):
        lnl_null_binary(0, 10)


def test_lnl_null_multinomial_needs_counts() -> None:
    dist = OutcomeDistribution.from_proportions((0.3, 0.7))

    with pytest.raises(IncompleteSpecificationError):
        lnl_null_multinomial(dist)


def test_nagelkerke_rescaling() -> None:
    assert nagelkerke_from_cs(0.126, 0.841) == pytest.approx(0.126 / 0.841)
    assert nagelkerke_from_cs(0.0, 0.5) == 0.0

    with pytest.raises(InconsistentRSquaredError):
        nagelkerke_from_cs(0.6, 0.5)


def test_nagelkerke_fallback_for_pair_and_distribution() -> None:
    dist = OutcomeDistribution.from_counts(TUMOUR_COUNTS)

    assert cs_from_nagelkerke_assumption(0.5) == pytest.approx(0.1125)
    assert cs_from_nagelkerke_assumption(dist) == pytest.approx(
        0.15 * 0.841246, abs=1e-6
    )

    with pytest.raises(DomainError):
        cs_from_nagelkerke_assumption(0.5, r2_nag=1.0)


def test_adjust_apparent() -> None:
    assert adjust_apparent(0.2, 0.9) == pytest.approx(0.18)

    with pytest.raises(DomainError):
        adjust_apparent(0.2, 0.0)
    with pytest.raises(DomainError):
        adjust_apparent(1.0, 0.9)


def test_r2_from_lr_and_heuristic_shrinkage_agree() -> None:
    params, n, lr = 10, 800, 120.0
    r2_app = r2_cs_from_lr(lr, n)

    assert r2_cs_from_lr(0.0, n) == 0.0
    assert heuristic_shrinkage_from_r2(params, n, r2_app) == pytest.approx(
        1.0 - params / lr, abs=1e-12
    )


def test_r2_from_lr_rejects_negative_statistic() -> None:
    with pytest.raises(DomainError):
        r2_cs_from_lr(-1.0, 100)
