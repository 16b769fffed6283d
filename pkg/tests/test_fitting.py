"""Tests for the logistic and multinomial maximum likelihood fits."""

import logging

import numpy as np
import pytest
import statsmodels.api as sm

from mnsampsize.exceptions import (
    DegenerateCategoryError,
    DomainError,
    ModelOrderingError,
    NonConvergenceError,
    SeparationError,
    SingularHessianError,
)
from mnsampsize.fitting import (
    BinaryLogitModel,
    Dataset,
    MultinomialLogitModel,
    fit_binary,
    fit_intercept_only,
    fit_multinomial,
    heuristic_shrinkage,
    lr_statistic,
)
from mnsampsize.simstudy import generate_dataset, get_scenario, make_stream


def _make_binary(n: int = 2000, seed: int = 3, scale: float = 1.0) -> Dataset:
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((n, 3))
    eta = -0.4 + x @ np.array([0.8, -0.5, 0.3])
    y = 1 + (rng.random(n) < 1.0 / (1.0 + np.exp(-eta))).astype(np.int64)
    return Dataset(x * scale, y)


def _make_multinomial(n: int = 3000, seed: int = 5) -> Dataset:
    return generate_dataset(get_scenario(3), n, make_stream(seed, 0))


def test_binary_fit_matches_statsmodels() -> None:
    data = _make_binary()

    fit = fit_binary(data)
    oracle = sm.Logit((data.y == 2).astype(float), sm.add_constant(data.x)).fit(
        disp=0, method="newton", tol=1e-12
    )

    np.testing.assert_allclose(fit.coefficients, oracle.params, atol=1e-6)
    assert fit.lnl == pytest.approx(oracle.llf, abs=1e-6)
    assert fit.lnl_null == pytest.approx(oracle.llnull, abs=1e-6)
    assert fit.lr == pytest.approx(oracle.llr, abs=1e-5)
    assert fit.converged


def test_multinomial_fit_matches_statsmodels() -> None:
    data = _make_multinomial()

    fit = fit_multinomial(data, k_categories=3)
    oracle = sm.MNLogit(data.y - 1, sm.add_constant(data.x)).fit(
        disp=0, method="newton", tol=1e-12
    )

    np.testing.assert_allclose(fit.coefficients, np.asarray(oracle.params).T, atol=1e-5)
    assert fit.lnl == pytest.approx(oracle.llf, abs=1e-6)
    assert fit.lnl_null == pytest.approx(oracle.llnull, abs=1e-6)
    assert fit.n_predictor_params == 10


def test_fit_reaches_score_tolerance() -> None:
    data = _make_multinomial()
    model = MultinomialLogitModel([sm.add_constant(data.x)] * 2, data.y - 1)

    result = model.fit()
    _, score, _ = model.evaluate(result.params)

    assert result.converged
    assert result.score_norm < 1e-8
    assert np.max(np.abs(score)) < 1e-8


def _assert_converged_means_small_score(data: Dataset) -> None:
    model = BinaryLogitModel(sm.add_constant(data.x), (data.y == 2).astype(float))

    result = model.fit(raise_on_failure=False)
    _, score, _ = model.evaluate(result.params)

    if result.converged:
        assert result.status == "converged"
        assert result.score_norm < 1e-8
        assert np.max(np.abs(score)) < 1e-8
    else:
        assert result.status in ("stalled", "max_iter")


def test_large_cohort_fit_converges_on_the_score() -> None:
    data = _make_binary(n=200_000, seed=11)

    _assert_converged_means_small_score(data)
    assert fit_binary(data).converged


@pytest.mark.slow
def test_large_scaled_cohort_never_reports_false_convergence() -> None:
    _assert_converged_means_small_score(_make_binary(n=1_000_000, seed=11, scale=100.0))


def test_stalled_line_search_is_not_convergence() -> None:
    data = _make_binary(n=300)
    model = BinaryLogitModel(sm.add_constant(data.x), (data.y == 2).astype(float))
    model.loglik = lambda params: -np.inf

    result = model.fit(raise_on_failure=False)

    assert not result.converged
    assert result.status == "stalled"
    assert result.iterations == 1
    with pytest.raises(NonConvergenceError, match="stalled"):
        model.fit()


def test_iteration_budget_is_not_convergence() -> None:
    data = _make_binary(n=300)
    model = BinaryLogitModel(
        sm.add_constant(data.x), (data.y == 2).astype(float), max_iter=1
    )

    result = model.fit(raise_on_failure=False)

    assert not result.converged
    assert result.status == "max_iter"
    with pytest.raises(NonConvergenceError, match="No convergence"):
        model.fit()


@pytest.mark.slow
def test_large_cohort_recovers_generating_coefficients() -> None:
    spec = get_scenario(1)
    data = generate_dataset(spec, 500_000, make_stream(13, 0))

    fit = fit_multinomial(data, k_categories=3)

    assert fit.converged
    np.testing.assert_allclose(fit.coefficients, spec.beta_matrix, atol=0.02)


def test_analytic_score_matches_finite_differences() -> None:
    data = _make_multinomial(n=500)
    model = MultinomialLogitModel([sm.add_constant(data.x)] * 2, data.y - 1)
    params = np.random.default_rng(1).normal(scale=0.3, size=model.n_params)
    _, score, hessian = model.evaluate(params)

    step = 1e-6
    numeric = np.empty_like(score)
    for i in range(params.size):
        shift = np.zeros_like(params)
        shift[i] = step
        numeric[i] = (model.loglik(params + shift) - model.loglik(params - shift)) / (
            2 * step
        )

    np.testing.assert_allclose(score, numeric, rtol=1e-5, atol=1e-4)
    np.testing.assert_allclose(hessian, hessian.T)


def test_binary_and_multinomial_models_agree_for_two_categories() -> None:
    data = _make_binary(n=800)

    binary = fit_binary(data)
    multinomial = fit_multinomial(data, k_categories=2)

    np.testing.assert_allclose(
        binary.coefficients, multinomial.coefficients[0], atol=1e-7
    )


def test_distinct_logistic_fits_match_sub_models() -> None:
    data = generate_dataset(get_scenario(1), 100_000, make_stream(9, 0))

    joint = fit_multinomial(data, k_categories=3)
    for k in (2, 3):
        distinct = fit_binary(data.pair(k, 1))

        np.testing.assert_allclose(
            distinct.coefficients[1:], joint.coefficients[k - 2, 1:], atol=0.05
        )


def test_intercept_only_closed_form_matches_fit() -> None:
    y = np.array([1] * 50 + [2] * 30 + [3] * 20)
    data = Dataset(np.empty((100, 0)), y)

    closed = fit_intercept_only(data)
    fitted = fit_multinomial(data)

    np.testing.assert_allclose(
        closed.coefficients[:, 0], fitted.coefficients[:, 0], atol=1e-8
    )
    assert fitted.lnl == pytest.approx(closed.lnl_null, abs=1e-8)
    assert fitted.lr == pytest.approx(0.0, abs=1e-8)


def test_separation_is_detected() -> None:
    x = np.linspace(-1.0, 1.0, 40).reshape(-1, 1)
    y = np.where(x[:, 0] > 0, 2, 1)
    data = Dataset(x, y)

    with pytest.raises(SeparationError):
        fit_binary(data)

    fit = fit_binary(data, raise_on_failure=False)
    assert not fit.converged


def test_collinear_design_is_singular() -> None:
    rng = np.random.default_rng(2)
    column = rng.standard_normal(200)
    x = np.column_stack([np.ones(200), column, column])
    y = (rng.random(200) < 0.4).astype(float)

    with pytest.raises(SingularHessianError):
        BinaryLogitModel(x, y).fit()


def test_empty_category_is_rejected() -> None:
    data = Dataset(np.zeros((4, 1)), np.array([1, 1, 3, 3]))

    with pytest.raises(DegenerateCategoryError):
        fit_multinomial(data, k_categories=3)


def test_binary_fit_rejects_three_labels() -> None:
    data = Dataset(np.zeros((3, 1)), np.array([1, 2, 3]))

    with pytest.raises(DomainError):
        fit_binary(data)


def test_dataset_pair_relabels_categories() -> None:
    data = Dataset(np.arange(5.0).reshape(-1, 1), np.array([1, 3, 2, 3, 1]))

    pair = data.pair(3, 2)

    assert pair.y.tolist() == [2, 1, 2]
    assert pair.x[:, 0].tolist() == [1.0, 2.0, 3.0]


def test_lr_statistic_clamps_and_orders() -> None:
    assert lr_statistic(-100.0, -90.0) == pytest.approx(20.0)
    assert lr_statistic(-100.0, -100.0 - 1e-9) == 0.0

    with pytest.raises(ModelOrderingError):
        lr_statistic(-100.0, -110.0)


def test_heuristic_shrinkage_keeps_negative_values(
    caplog: pytest.LogCaptureFixture,
) -> None:
    with caplog.at_level(logging.WARNING, logger="mnsampsize"):
        result = heuristic_shrinkage(10, 5.0)

    assert result.value == pytest.approx(-1.0)
    assert result.negative
    assert "Negative heuristic shrinkage" in caplog.text

    with pytest.raises(DomainError):
        heuristic_shrinkage(10, 0.0)
