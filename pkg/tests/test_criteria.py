"""Tests for the three sample size criteria."""

import pytest

from mnsampsize.criteria import (
    all_pairs,
    chi2_quantile_1df,
    criterion_one,
    criterion_one_direct,
    criterion_three,
    criterion_two,
    direct_criterion,
    epv_sample_size,
    expected_shrinkage,
    final_sample_size,
    pair_events_required,
    permute_pairs,
    required_events_raw,
)
from mnsampsize.exceptions import (
    DomainError,
    IncompleteSpecificationError,
    InconsistentRSquaredError,
    InfeasibleTargetError,
)
from mnsampsize.models import OutcomeDistribution, PairEstimate, PrecisionSpec
from mnsampsize.rsq_math import max_rcs

TUMOUR_COUNTS = (2557, 186, 176, 467, 120)
TUMOUR_R2 = {
    (2, 1): 0.116,
    (3, 1): 0.179,
    (4, 1): 0.497,
    (5, 1): 0.170,
    (3, 2): 0.185,
    (4, 2): 0.499,
    (5, 2): 0.374,
    (4, 3): 0.328,
    (5, 3): 0.129,
    (5, 4): 0.210,
}
EXPECTED_PAIR_N = {
    (2, 1): 1574,
    (3, 1): 982,
    (4, 1): 246,
    (5, 1): 1067,
    (3, 2): 7147,
    (4, 2): 1128,
    (5, 2): 3629,
    (4, 3): 2045,
    (5, 3): 13063,
    (5, 4): 3813,
}


def _tumour_dist() -> OutcomeDistribution:
    return OutcomeDistribution.from_counts(TUMOUR_COUNTS)


def _make_pairs(
    dist: OutcomeDistribution | None = None, **overrides: float
) -> list[PairEstimate]:
    dist = dist or _tumour_dist()
    pairs = []
    for (k, r), r2 in TUMOUR_R2.items():
        pairs.append(
            PairEstimate(
                k=k,
                r=r,
                r2_adj_pair=r2,
                p_pair=dist.pair_proportion(k, r),
                s_target=overrides.get(f"s_{k}{r}", 0.9),
                phi=dist.phi(k, r),
            )
        )
    return pairs


def test_pair_events_required_values() -> None:
    assert required_events_raw(17, 0.116, 0.9) == pytest.approx(1232.011, abs=1e-3)
    assert pair_events_required(17, 0.116, 0.9) == 1233
    assert pair_events_required(10, 0.5, 0.9) == 124


def test_pair_events_required_is_linear_in_parameters() -> None:
    assert required_events_raw(34, 0.116, 0.9) == pytest.approx(
        2.0 * required_events_raw(17, 0.116, 0.9), rel=1e-14
    )


def test_pair_events_required_monotonicity() -> None:
    assert required_events_raw(10, 0.2, 0.9) > required_events_raw(10, 0.3, 0.9)
    assert required_events_raw(10, 0.2, 0.95) > required_events_raw(10, 0.2, 0.9)


def test_pair_events_required_infeasible_target() -> None:
    with pytest.raises(InfeasibleTargetError):
        pair_events_required(10, 0.95, 0.9)


def test_pair_events_match_integer_scan() -> None:
    for q, r2, s in ((5, 0.05, 0.9), (17, 0.3, 0.85), (40, 0.12, 0.95)):
        m = pair_events_required(q, r2, s)

        assert expected_shrinkage(q, m, r2) >= s - 1e-9
        assert expected_shrinkage(q, m - 1, r2) < s


def test_direct_criterion_value() -> None:
    result = direct_criterion(5, 3, 0.3, 0.9)

    assert result.n == 247
    assert result.raw == pytest.approx(246.63, abs=0.01)
    assert result.params == 10
    assert result.diagnostic is True
    assert criterion_one_direct(5, 3, 0.3, 0.9) == 247


def test_direct_criterion_reduces_to_binary_case() -> None:
    assert criterion_one_direct(12, 2, 0.2, 0.9) == pair_events_required(12, 0.2, 0.9)


def test_criterion_one_worked_example() -> None:
    report = criterion_one(_make_pairs(), 17, k_categories=5)

    for key, expected in EXPECTED_PAIR_N.items():
        assert report.pair(*key).n_raw == pytest.approx(expected, rel=5e-3)
    assert report.binding == (5, 3)
    assert report.n == pytest.approx(13063, rel=5e-3)
    assert report.pair(2, 1).m == 1233


def test_criterion_one_every_pair_at_least_its_events() -> None:
    report = criterion_one(_make_pairs(), 17, k_categories=5)

    for req in report.pairs:
        assert req.n >= req.m
        assert report.n >= req.n


def test_criterion_one_per_pair_shrinkage_override_moves_binding_pair() -> None:
    report = criterion_one(_make_pairs(s_53=0.8), 17, k_categories=5)

    assert report.pair(5, 3).n_raw == pytest.approx(5746, rel=5e-3)
    assert report.binding == (3, 2)


def test_criterion_one_single_binary_pair() -> None:
    pair = PairEstimate(k=2, r=1, r2_adj_pair=0.2, p_pair=1.0)

    report = criterion_one([pair], 12, k_categories=2)

    assert report.n == pair_events_required(12, 0.2, 0.9)


def test_criterion_one_identical_pairs_give_identical_sizes() -> None:
    pairs = [
        PairEstimate(k=k, r=r, r2_adj_pair=0.2, p_pair=2 / 3)
        for k, r in all_pairs(3)
    ]

    report = criterion_one(pairs, 8, k_categories=3)

    assert len({req.n for req in report.pairs}) == 1


def test_criterion_one_missing_pair() -> None:
    pairs = _make_pairs()[1:]

    with pytest.raises(IncompleteSpecificationError):
        criterion_one(pairs, 17, k_categories=5)


def test_criterion_one_duplicate_pair() -> None:
    pairs = _make_pairs()
    pairs.append(pairs[0])

    with pytest.raises(IncompleteSpecificationError):
        criterion_one(pairs, 17, k_categories=5)


def test_criterion_one_non_binding_pair_removal() -> None:
    pairs = _make_pairs()
    full = criterion_one(pairs, 17, k_categories=5)
    reduced = criterion_one(
        [p for p in pairs if p.key != (2, 1)],
        17,
        k_categories=5,
        require_complete=False,
    )

    assert reduced.n == full.n
    assert reduced.binding == full.binding


def test_criterion_one_infeasible_pair_is_named() -> None:
    pairs = _make_pairs(s_41=0.45)

    with pytest.raises(InfeasibleTargetError) as excinfo:
        criterion_one(pairs, 17, k_categories=5)

    assert excinfo.value.pair == (4, 1)
    assert "{4,1}" in str(excinfo.value)


def test_criterion_one_rejects_r2_above_pair_maximum() -> None:
    dist = _tumour_dist()
    pair = PairEstimate(
        k=5,
        r=1,
        r2_adj_pair=0.35,
        p_pair=dist.pair_proportion(5, 1),
        phi=dist.phi(5, 1),
    )

    with pytest.raises(InconsistentRSquaredError):
        criterion_one([pair], 17, k_categories=5, require_complete=False)


def test_criterion_one_non_decreasing_in_parameters() -> None:
    sizes = [criterion_one(_make_pairs(), q, k_categories=5).n for q in (5, 10, 17)]

    assert sizes == sorted(sizes)


def test_criterion_two_worked_example() -> None:
    report = criterion_two(17, 5, 0.126, 0.841, 0.05)

    assert abs(report.n - 1477) <= 1


def test_criterion_two_with_exact_maximum() -> None:
    dist = _tumour_dist()
    max_r2 = max_rcs(dist)

    report = criterion_two(17, 5, 0.15 * max_r2, max_r2, 0.05)

    assert report.n == 1477
    assert report.raw == pytest.approx(1476.48, abs=0.01)


def test_criterion_two_nagelkerke_fallback_implies_three_quarters() -> None:
    for counts in ((10, 20), (5, 5, 90), TUMOUR_COUNTS):
        max_r2 = max_rcs(OutcomeDistribution.from_counts(counts))

        report = criterion_two(10, len(counts), 0.15 * max_r2, max_r2, 0.05)

        assert report.shrinkage_bound == pytest.approx(0.75, abs=1e-12)


def test_criterion_two_matches_integer_scan() -> None:
    report = criterion_two(17, 5, 0.126, 0.841, 0.10)
    params = 4 * 17

    bound = report.shrinkage_bound

    assert expected_shrinkage(params, report.n, 0.126) >= bound - 1e-9
    assert expected_shrinkage(params, report.n - 1, 0.126) < bound


def test_criterion_two_rejects_inconsistent_inputs() -> None:
    with pytest.raises(InconsistentRSquaredError):
        criterion_two(10, 3, 0.9, 0.8)
    with pytest.raises(InfeasibleTargetError):
        criterion_two(10, 3, 0.7, 0.8, delta=0.5)


def test_chi2_quantile_values() -> None:
    assert chi2_quantile_1df(0.01) == pytest.approx(6.6349, abs=1e-3)
    assert chi2_quantile_1df(0.05) == pytest.approx(1.959964**2, abs=1e-5)
    assert chi2_quantile_1df(1.0) == pytest.approx(0.0, abs=1e-12)

    with pytest.raises(DomainError):
        chi2_quantile_1df(0.0)


def test_criterion_three_worked_example() -> None:
    report = criterion_three(_tumour_dist())

    assert report.per_category == (524, 134, 127, 307, 88)
    assert report.n == 524
    assert report.chi2 == pytest.approx(6.6349, abs=1e-3)


def test_criterion_three_binary_uniform() -> None:
    dist = OutcomeDistribution.from_proportions((0.5, 0.5))

    report = criterion_three(dist, PrecisionSpec(0.05, 0.05))

    assert report.n == 503
    assert report.chi2 == pytest.approx(5.0239, abs=1e-4)


def test_criterion_three_flags_degenerate_category() -> None:
    dist = OutcomeDistribution.from_proportions((0.6, 0.4, 0.0))

    report = criterion_three(dist)

    assert report.degenerate == (3,)
    assert report.per_category[2] == 0


def test_criterion_three_non_increasing_in_delta() -> None:
    dist = _tumour_dist()
    sizes = [criterion_three(dist, PrecisionSpec(d, 0.05)).n for d in (0.02, 0.05, 0.1)]

    assert sizes == sorted(sizes, reverse=True)


def test_final_sample_size_takes_maximum() -> None:
    report = final_sample_size(13063, 1477, 524, _tumour_dist())

    assert report.n_final == 13063
    assert report.binding_criterion == 1
    for got, expected in zip(
        report.expected_events, (9527, 693, 656, 1740, 447), strict=True
    ):
        assert abs(got - expected) <= 2
    assert sum(report.expected_events) >= report.n_final


def test_final_sample_size_ties() -> None:
    report = final_sample_size(100, 100, 100)

    assert report.n_final == 100
    assert report.expected_events == ()


def test_epv_contrast() -> None:
    dist = _tumour_dist()

    assert epv_sample_size(dist, 17, 10) == 4967
    assert epv_sample_size(dist, 17, 20) == 9934


def test_criteria_invariant_under_relabelling() -> None:
    dist = _tumour_dist()
    order = (5, 3, 1, 4, 2)
    permuted = dist.permuted(order)
    pairs = permute_pairs(_make_pairs(dist), order)

    one = criterion_one(_make_pairs(dist), 17, k_categories=5)
    one_permuted = criterion_one(pairs, 17, k_categories=5)
    max_r2 = max_rcs(dist)

    assert one_permuted.n == one.n
    assert max_rcs(permuted) == pytest.approx(max_r2, abs=1e-14)
    assert criterion_three(permuted).n == criterion_three(dist).n
    assert (
        criterion_two(17, 5, 0.15 * max_rcs(permuted), max_rcs(permuted)).n
        == criterion_two(17, 5, 0.15 * max_r2, max_r2).n
    )
