"""Minimum sample size criteria for multinomial prediction models.

Criterion (i) targets a small amount of overfitting in every distinct
logistic pair, criterion (ii) a small optimism in the Nagelkerke R² and
criterion (iii) precise overall risks. The final size is the largest of
the three.
"""

import logging
import math
from collections.abc import Iterable, Sequence
from itertools import combinations

from scipy.optimize import brentq
from scipy.stats import norm

from mnsampsize.exceptions import (
    DegenerateCategoryError,
    DomainError,
    IncompleteSpecificationError,
    InconsistentRSquaredError,
    InfeasibleTargetError,
)
from mnsampsize.models import (
    CriterionOneReport,
    CriterionThreeReport,
    CriterionTwoReport,
    DirectCriterion,
    OutcomeDistribution,
    PairEstimate,
    PairPrevalence,
    PairRequirement,
    PrecisionSpec,
    SampleSizeReport,
    ceil_count,
)
from mnsampsize.rsq_math import max_rcs_pair

logger = logging.getLogger("mnsampsize")


def _check_shrinkage_inputs(params: int, r2_adj: float, s: float) -> None:
    if params < 1:
        raise DomainError(f"Need at least one predictor parameter: {params}")
    if not 0.0 < r2_adj < 1.0:
        raise DomainError(f"Adjusted R² must lie in (0, 1): {r2_adj}")
    if not 0.0 < s < 1.0:
        raise DomainError(f"Shrinkage target must lie in (0, 1): {s}")
    if r2_adj >= s:
        raise InfeasibleTargetError(
            f"shrinkage target {s} is unattainable with R² {r2_adj} "
            "(R² must be below the target)"
        )


def required_events_raw(params: int, r2_adj: float, s: float) -> float:
    """Unrounded number of subjects needed to expect shrinkage s.

    Args:
        params (int): Number of predictor parameters
        r2_adj (float): Anticipated adjusted Cox-Snell R²
        s (float): Shrinkage target

    Returns:
        float: params / ((s - 1) ln(1 - r2_adj / s))

    Raises:
        DomainError: If an argument is out of range
        InfeasibleTargetError: If r2_adj is not below s
    """
    _check_shrinkage_inputs(params, r2_adj, s)
    return params / ((s - 1.0) * math.log1p(-r2_adj / s))


def pair_events_required(q: int, r2_adj: float, s: float) -> int:
    """Events needed in a distinct logistic pair.

    Args:
        q (int): Predictor parameters per sub-model
        r2_adj (float): Adjusted Cox-Snell R² of the pair's logistic model
        s (float): Shrinkage target

    Returns:
        int: Ceiled number of subjects with either outcome of the pair

    Raises:
        DomainError: If an argument is out of range
        InfeasibleTargetError: If r2_adj is not below s
    """
    return ceil_count(required_events_raw(q, r2_adj, s))


def expected_shrinkage(params: int, n: float, r2_adj: float) -> float:
    """Heuristic shrinkage expected when fitting on n subjects.

    Inverts the events relation: the returned S satisfies
    required_events_raw(params, r2_adj, S) == n.

    Args:
        params (int): Number of predictor parameters
        n (float): Number of subjects
        r2_adj (float): Anticipated adjusted Cox-Snell R²

    Returns:
        float: Expected shrinkage factor in (r2_adj, 1)

    Raises:
        DomainError: If an argument is out of range
    """
    if params < 1 or n <= 0:
        raise DomainError(f"Need params >= 1 and n > 0: ({params}, {n})")
    if not 0.0 < r2_adj < 1.0:
        raise DomainError(f"Adjusted R² must lie in (0, 1): {r2_adj}")

    def gap(s: float) -> float:
        return n * (s - 1.0) * math.log1p(-r2_adj / s) - params

    lo = r2_adj * (1.0 + 1e-12) + 1e-300
    hi = 1.0 - 1e-15
    if gap(hi) >= 0.0:
        return hi
    if gap(lo) <= 0.0:
        return lo
    return brentq(gap, lo, hi, xtol=1e-14)


def all_pairs(k_categories: int) -> list[tuple[int, int]]:
    """Every distinct logistic pair of a K-category outcome.

    Args:
        k_categories (int): Number of categories K

    Returns:
        list[tuple[int, int]]: (k, r) with k > r, ordered by r then k
    """
    return [(k, r) for r, k in combinations(range(1, k_categories + 1), 2)]


def criterion_one(
    pairs: Iterable[PairEstimate],
    q: int,
    k_categories: int | None = None,
    require_complete: bool = True,
) -> CriterionOneReport:
    """Criterion (i): target shrinkage in every distinct logistic pair.

    Each pair's events m_{k,r} are divided by the share p_{k,r} of the cohort
    with outcome k or r; the largest resulting cohort size is required.

    Args:
        pairs (Iterable[PairEstimate]): Pair inputs
        q (int): Predictor parameters per sub-model
        k_categories (int | None): Number of categories; inferred from the
            largest label when omitted
        require_complete (bool): Demand all K(K-1)/2 pairs

    Returns:
        CriterionOneReport: Per-pair requirements and the binding pair

    Raises:
        IncompleteSpecificationError: If pairs are missing or duplicated
        InconsistentRSquaredError: If a pair R² exceeds its maximum
        InfeasibleTargetError: If a pair target is unattainable, naming the pair
    """
    pair_list = list(pairs)
    if not pair_list:
        raise IncompleteSpecificationError("Criterion (i) needs at least one pair")
    keys = [p.key for p in pair_list]
    duplicates = sorted({key for key in keys if keys.count(key) > 1})
    if duplicates:
        raise IncompleteSpecificationError(f"Duplicate pairs: {duplicates}")
    if k_categories is None:
        k_categories = max(p.k for p in pair_list)
    if any(p.k > k_categories for p in pair_list):
        raise IncompleteSpecificationError(
            f"Pair label above K={k_categories}: {keys}"
        )
    if require_complete:
        missing = sorted(set(all_pairs(k_categories)) - set(keys))
        if missing:
            raise IncompleteSpecificationError(
                f"Missing pairs for K={k_categories}: {missing}"
            )

    requirements = []
    for est in pair_list:
        if est.phi is not None:
            ceiling = max_rcs_pair(est.phi)
            if est.r2_adj_pair >= ceiling:
                raise InconsistentRSquaredError(
                    f"Pair {{{est.k},{est.r}}} R² {est.r2_adj_pair} is not below "
                    f"its maximum {ceiling:.4f}"
                )
        try:
            m_raw = required_events_raw(q, est.r2_adj_pair, est.s_target)
        except InfeasibleTargetError as e:
            raise InfeasibleTargetError(str(e), pair=est.key) from e
        m = ceil_count(m_raw)
        requirements.append(
            PairRequirement(
                k=est.k,
                r=est.r,
                p_pair=est.p_pair,
                r2_adj=est.r2_adj_pair,
                s_target=est.s_target,
                m_raw=m_raw,
                m=m,
                n_raw=m_raw / est.p_pair,
                n=ceil_count(m / est.p_pair),
                source=est.source,
                cstat=est.cstat,
            )
        )
        logger.debug(
            f"Pair {{{est.k},{est.r}}}: m_raw={m_raw:.3f}, "
            f"n={requirements[-1].n} (p_pair={est.p_pair:.4f})"
        )

    binding = max(requirements, key=lambda req: (req.n, req.n_raw))
    return CriterionOneReport(
        pairs=requirements, n=binding.n, binding=(binding.k, binding.r)
    )


def direct_criterion(
    q: int, k_categories: int, r2_adj_mn: float, s: float
) -> DirectCriterion:
    """Shrinkage criterion applied to the multinomial model as a whole.

    Args:
        q (int): Predictor parameters per sub-model
        k_categories (int): Number of categories K
        r2_adj_mn (float): Adjusted Cox-Snell R² of the multinomial model
        s (float): Shrinkage target

    Returns:
        DirectCriterion: Diagnostic requirement with (K - 1) * q parameters

    Raises:
        DomainError: If K < 2 or another argument is out of range
        InfeasibleTargetError: If r2_adj_mn is not below s
    """
    if k_categories < 2:
        raise DomainError(f"Need at least two categories: {k_categories}")
    params = (k_categories - 1) * q
    raw = required_events_raw(params, r2_adj_mn, s)
    return DirectCriterion(
        n=ceil_count(raw), raw=raw, params=params, r2_adj=r2_adj_mn, s_target=s
    )


def criterion_one_direct(q: int, k_categories: int, r2_adj_mn: float, s: float) -> int:
    """Sample size targeting shrinkage of the multinomial model as a whole.

    Args:
        q (int): Predictor parameters per sub-model
        k_categories (int): Number of categories K
        r2_adj_mn (float): Adjusted Cox-Snell R² of the multinomial model
        s (float): Shrinkage target

    Returns:
        int: Ceiled sample size
    """
    return direct_criterion(q, k_categories, r2_adj_mn, s).n


def criterion_two(
    q: int,
    k_categories: int,
    r2_adj: float,
    max_r2_app: float,
    delta: float = 0.05,
) -> CriterionTwoReport:
    """Criterion (ii): small optimism in the apparent Nagelkerke R².

    Args:
        q (int): Predictor parameters per sub-model
        k_categories (int): Number of categories K
        r2_adj (float): Anticipated adjusted Cox-Snell R² of the multinomial model
        max_r2_app (float): Maximum attainable Cox-Snell R²
        delta (float): Acceptable difference between apparent and adjusted
            Nagelkerke R²

    Returns:
        CriterionTwoReport: Sample size and the shrinkage bound it implies

    Raises:
        DomainError: If delta or K is out of range
        InconsistentRSquaredError: If r2_adj is not below its maximum
        InfeasibleTargetError: If r2_adj + delta * max_r2_app >= 1
    """
    if delta <= 0.0:
        raise DomainError(f"delta must be positive: {delta}")
    if k_categories < 2:
        raise DomainError(f"Need at least two categories: {k_categories}")
    if not 0.0 < r2_adj < max_r2_app:
        raise InconsistentRSquaredError(
            f"Adjusted R² {r2_adj} must lie in (0, {max_r2_app})"
        )
    if r2_adj + delta * max_r2_app >= 1.0:
        raise InfeasibleTargetError(
            f"R² {r2_adj} plus delta * max R² ({delta * max_r2_app}) reaches 1"
        )
    bound = r2_adj / (r2_adj + delta * max_r2_app)
    raw = required_events_raw((k_categories - 1) * q, r2_adj, bound)
    return CriterionTwoReport(
        n=ceil_count(raw),
        raw=raw,
        shrinkage_bound=bound,
        r2_adj=r2_adj,
        max_r2=max_r2_app,
        delta=delta,
    )


def chi2_quantile_1df(upper_tail: float) -> float:
    """Upper-tail quantile of the chi-squared distribution with one degree of freedom.

    Args:
        upper_tail (float): Upper-tail probability in (0, 1]

    Returns:
        float: Squared standard normal quantile at upper_tail / 2

    Raises:
        DomainError: If the probability is out of range
    """
    if not 0.0 < upper_tail <= 1.0:
        raise DomainError(f"Upper-tail probability must lie in (0, 1]: {upper_tail}")
    return float(norm.isf(upper_tail / 2.0)) ** 2


def criterion_three(
    dist: OutcomeDistribution, spec: PrecisionSpec | None = None
) -> CriterionThreeReport:
    """Criterion (iii): estimate every category's overall risk within delta.

    Args:
        dist (OutcomeDistribution): Anticipated outcome distribution
        spec (PrecisionSpec | None): Margin of error and simultaneous alpha

    Returns:
        CriterionThreeReport: Largest per-category requirement with the breakdown
    """
    spec = spec or PrecisionSpec()
    chi2 = chi2_quantile_1df(spec.alpha / dist.k)
    raw = tuple(chi2 * p * (1.0 - p) / spec.delta**2 for p in dist.proportions)
    degenerate = tuple(
        i for i, p in enumerate(dist.proportions, 1) if p <= 0.0 or p >= 1.0
    )
    if degenerate:
        logger.warning(
            f"Categories {list(degenerate)} have zero variance and do not "
            "contribute to criterion (iii)"
        )
    per_category = tuple(ceil_count(v) for v in raw)
    return CriterionThreeReport(
        n=max(per_category),
        per_category=per_category,
        raw=raw,
        chi2=chi2,
        delta=spec.delta,
        alpha=spec.alpha,
        degenerate=degenerate,
    )


def final_sample_size(
    r1: CriterionOneReport | int,
    r2: CriterionTwoReport | int,
    r3: CriterionThreeReport | int,
    dist: OutcomeDistribution | None = None,
) -> SampleSizeReport:
    """Combine the three criteria into the minimum sample size.

    Args:
        r1 (CriterionOneReport | int): Criterion (i) result or size
        r2 (CriterionTwoReport | int): Criterion (ii) result or size
        r3 (CriterionThreeReport | int): Criterion (iii) result or size
        dist (OutcomeDistribution | None): Distribution used for the expected
            events per category

    Returns:
        SampleSizeReport: Largest of the three sizes with expected events

    Raises:
        DomainError: If a criterion size is negative
    """
    sizes = [r if isinstance(r, int) else r.n for r in (r1, r2, r3)]
    if any(n < 0 for n in sizes):
        raise DomainError(f"Criterion sizes must be non-negative: {sizes}")
    n_final = max(sizes)
    return SampleSizeReport(
        n1=sizes[0],
        n2=sizes[1],
        n3=sizes[2],
        n_final=n_final,
        expected_events=dist.expected_events(n_final) if dist is not None else (),
        criterion_one=r1 if isinstance(r1, CriterionOneReport) else None,
        criterion_two=r2 if isinstance(r2, CriterionTwoReport) else None,
        criterion_three=r3 if isinstance(r3, CriterionThreeReport) else None,
    )


def epv_sample_size(dist: OutcomeDistribution, q: int, epv: float = 10.0) -> int:
    """Sample size giving the rarest category epv events per parameter.

    Args:
        dist (OutcomeDistribution): Anticipated outcome distribution
        q (int): Predictor parameters per sub-model
        epv (float): Events per parameter

    Returns:
        int: ceil(epv * q / min_k p_k)

    Raises:
        DegenerateCategoryError: If a category has zero proportion
    """
    rarest = min(dist.proportions)
    if rarest <= 0.0:
        raise DegenerateCategoryError("A category with no events has no EPV size")
    return ceil_count(epv * q / rarest)


def permute_pairs(
    pairs: Sequence[PairEstimate], order: Sequence[int]
) -> list[PairEstimate]:
    """Relabel pair inputs consistently with OutcomeDistribution.permuted.

    Args:
        pairs (Sequence[PairEstimate]): Pair inputs under the old labels
        order (Sequence[int]): 1-based old label for each new position

    Returns:
        list[PairEstimate]: Pair inputs under the new labels
    """
    new_label = {old: new for new, old in enumerate(order, 1)}
    relabelled = []
    for est in pairs:
        a, b = new_label[est.k], new_label[est.r]
        k, r = max(a, b), min(a, b)
        phi = est.phi
        if phi is not None and (k, r) != (a, b):
            phi = PairPrevalence(1.0 - phi.phi)
        relabelled.append(
            PairEstimate(
                k=k,
                r=r,
                r2_adj_pair=est.r2_adj_pair,
                p_pair=est.p_pair,
                s_target=est.s_target,
                phi=phi,
                source=est.source,
                cstat=est.cstat,
            )
        )
    return relabelled
