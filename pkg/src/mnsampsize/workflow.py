"""Minimum sample size calculation from a StudyConfig."""

import logging

from mnsampsize.config import PairInput, StudyConfig
from mnsampsize.const import P_PAIR_TOL
from mnsampsize.criteria import (
    criterion_one,
    criterion_three,
    criterion_two,
    direct_criterion,
    epv_sample_size,
    expected_shrinkage,
    final_sample_size,
)
from mnsampsize.cstat_rsq import estimate_rsq_from_cstat
from mnsampsize.exceptions import ConfigError, InfeasibleTargetError
from mnsampsize.models import (
    CStatSpec,
    OutcomeDistribution,
    PairEstimate,
    PrecisionSpec,
    RSquared,
    SampleSizeReport,
)
from mnsampsize.rsq_math import cs_from_nagelkerke_assumption, max_rcs

logger = logging.getLogger("mnsampsize")

EPV_LEVELS = (10, 20)


def resolve_pair(
    config: StudyConfig, dist: OutcomeDistribution, k: int, r: int, entry: PairInput
) -> PairEstimate:
    """Turn one configured pair into criterion (i) inputs.

    Args:
        config (StudyConfig): Calculation settings
        dist (OutcomeDistribution): Anticipated outcome distribution
        k (int): Larger category label of the pair
        r (int): Smaller category label of the pair
        entry (PairInput): Configured R² source and options

    Returns:
        PairEstimate: Pair with its adjusted R² resolved

    Raises:
        ConfigError: If a supplied p_pair disagrees with p_k + p_r
    """
    p_pair = dist.pair_proportion(k, r)
    if entry.p_pair is not None:
        if abs(entry.p_pair - p_pair) > P_PAIR_TOL:
            raise ConfigError(
                f"{entry.p_pair} disagrees with p_{k} + p_{r} = {p_pair:.4f}",
                field=f"pairs.{k},{r}.p_pair",
            )
        p_pair = entry.p_pair
    phi = dist.phi(k, r)
    cstat = None
    if entry.r2_cs_adj is not None:
        r2 = entry.r2_cs_adj
    elif entry.c_statistic is not None:
        cstat = estimate_rsq_from_cstat(
            CStatSpec(
                c=entry.c_statistic,
                phi=phi,
                sim_size=config.sim_size,
                seed=config.seed,
                lp_model=config.lp_model,
            )
        )
        r2 = cstat.r2_cs
        logger.info(f"Pair {{{k},{r}}}: C={entry.c_statistic} gives R² {r2:.4f}")
    else:
        r2 = cs_from_nagelkerke_assumption(phi, config.r2_nagelkerke)
    return PairEstimate(
        k=k,
        r=r,
        r2_adj_pair=r2,
        p_pair=p_pair,
        s_target=entry.shrinkage if entry.shrinkage is not None else config.shrinkage,
        phi=phi,
        source=entry.source,
        cstat=cstat,
    )


def run_samplesize(config: StudyConfig) -> SampleSizeReport:
    """Run all three criteria and combine them.

    Args:
        config (StudyConfig): Validated calculation settings

    Returns:
        SampleSizeReport: Final size with every criterion's details

    Raises:
        InfeasibleTargetError: If a criterion cannot be met
        CStatConvergenceError: If a C-statistic cannot be converted
    """
    dist = config.distribution()
    k_cat = config.k_categories
    q = config.q_parameters
    logger.debug(f"Sample size for K={k_cat}, Q={q}, p={dist.proportions}")

    pairs = [
        resolve_pair(config, dist, k, r, entry)
        for (k, r), entry in sorted(config.pairs.items())
    ]
    one = criterion_one(pairs, q, k_categories=k_cat)

    max_r2 = max_rcs(dist)
    if config.r2_cs_adj is not None:
        r2_overall = RSquared(config.r2_cs_adj, source="user")
    else:
        r2_overall = RSquared(
            config.r2_nagelkerke * max_r2, source=f"nagelkerke_{config.r2_nagelkerke}"
        )
    two = criterion_two(q, k_cat, r2_overall.value, max_r2, config.delta2)
    three = criterion_three(dist, PrecisionSpec(config.delta3, config.alpha))

    report = final_sample_size(one, two, three, dist)
    for req in one.pairs:
        req.shrinkage_at_final = expected_shrinkage(
            q, report.n_final * req.p_pair, req.r2_adj
        )

    try:
        report.direct = direct_criterion(q, k_cat, r2_overall.value, config.shrinkage)
    except InfeasibleTargetError as e:
        logger.warning(f"Direct multinomial criterion skipped: {e}")
    if min(dist.proportions) > 0.0:
        report.epv = {level: epv_sample_size(dist, q, level) for level in EPV_LEVELS}
    report.r2_overall = r2_overall
    report.inputs = config.to_dict()
    logger.debug(f"Binding criterion {report.binding_criterion}: {report}")
    return report
