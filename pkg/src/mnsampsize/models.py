"""Data models for mnsampsize."""

import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Any, Literal

from mnsampsize.const import (
    CSTAT_DEFAULT_SEED,
    CSTAT_MATCH_TOL,
    CSTAT_MIN_SIM_SIZE,
    CSTAT_SIM_SIZE,
    DEFAULT_ALPHA,
    DEFAULT_DELTA,
    DEFAULT_SHRINKAGE,
    LP_MODELS,
    PROPORTION_SUM_TOL,
    REPORT_SCHEMA_VERSION,
)
from mnsampsize.exceptions import DomainError, IncompleteSpecificationError

RSquaredKind = Literal["apparent", "adjusted"]
RSquaredFamily = Literal["cox_snell", "nagelkerke"]


def ceil_count(value: float) -> int:
    """Round a sample size up, ignoring floating point noise just above an integer.

    Args:
        value (float): Unrounded size

    Returns:
        int: Smallest integer not below value
    """
    return math.ceil(value - 1e-9 * max(1.0, abs(value)))


@dataclass(slots=True, frozen=True)
class OutcomeDistribution:
    """Anticipated distribution of a K-category outcome.

    Categories are labelled 1..K. Counts are optional; operations that need
    event counts (null log-likelihoods) reject distributions built from
    proportions only.
    """

    proportions: tuple[float, ...]
    counts: tuple[int, ...] | None = None
    n: int | None = None

    def __post_init__(self) -> None:
        """Validate the distribution.

        Raises:
            DomainError: If fewer than two categories are given, a proportion lies
                outside [0, 1] or the proportions do not sum to one
            IncompleteSpecificationError: If counts and n disagree
        """
        if len(self.proportions) < 2:
            raise DomainError("An outcome needs at least two categories")
        if any(not 0.0 <= p <= 1.0 for p in self.proportions):
            raise DomainError(f"Proportions must lie in [0, 1]: {self.proportions}")
        total = math.fsum(self.proportions)
        if abs(total - 1.0) > PROPORTION_SUM_TOL:
            raise DomainError(f"Proportions sum to {total!r}, expected 1")
        if self.counts is not None:
            if len(self.counts) != len(self.proportions):
                raise IncompleteSpecificationError(
                    "Counts and proportions have different lengths"
                )
            if any(c < 0 for c in self.counts):
                raise DomainError(f"Counts must be non-negative: {self.counts}")
            if self.n != sum(self.counts):
                raise IncompleteSpecificationError(
                    f"n={self.n} does not equal the sum of counts {sum(self.counts)}"
                )

    @classmethod
    def from_counts(cls, counts: Sequence[int]) -> "OutcomeDistribution":
        """Build a distribution from per-category event counts.

        Args:
            counts (Sequence[int]): Event counts E_1..E_K

        Returns:
            OutcomeDistribution: Distribution with p_k = E_k / n

        Raises:
            DomainError: If the counts are negative or sum to zero
        """
        values = tuple(int(c) for c in counts)
        n = sum(values)
        if n <= 0:
            raise DomainError("Counts must sum to a positive total")
        return cls(tuple(c / n for c in values), values, n)

    @classmethod
    def from_proportions(
        cls, proportions: Sequence[float], normalize: bool = False
    ) -> "OutcomeDistribution":
        """Build a distribution from anticipated proportions.

        Args:
            proportions (Sequence[float]): Proportions p_1..p_K
            normalize (bool): Rescale proportions that were rounded for
                publication so they sum to one

        Returns:
            OutcomeDistribution: Distribution without counts

        Raises:
            DomainError: If normalization is requested for a zero total
        """
        values = tuple(float(p) for p in proportions)
        if normalize:
            total = math.fsum(values)
            if total <= 0:
                raise DomainError("Proportions must sum to a positive total")
            values = tuple(p / total for p in values)
        return cls(values)

    @property
    def k(self) -> int:
        """Number of outcome categories.

        Returns:
            int: K
        """
        return len(self.proportions)

    def p(self, category: int) -> float:
        """Proportion of a 1-based category.

        Args:
            category (int): Category label in 1..K

        Returns:
            float: p_category

        Raises:
            DomainError: If the label is out of range
        """
        if not 1 <= category <= self.k:
            raise DomainError(f"Category {category} outside 1..{self.k}")
        return self.proportions[category - 1]

    def pair_proportion(self, k: int, r: int) -> float:
        """Share of the whole cohort with outcome k or r.

        Args:
            k (int): First category
            r (int): Second category

        Returns:
            float: p_k + p_r
        """
        return self.p(k) + self.p(r)

    def phi(self, k: int, r: int) -> "PairPrevalence":
        """Prevalence of category k within the pair {k, r}.

        Args:
            k (int): Category whose prevalence is returned
            r (int): Other category of the pair

        Returns:
            PairPrevalence: E_k / (E_k + E_r), or the proportion equivalent
        """
        if self.counts is not None:
            return PairPrevalence.from_counts(
                self.counts[k - 1], self.counts[r - 1]
            )
        return PairPrevalence(self.p(k) / self.pair_proportion(k, r))

    def expected_events(self, n: int) -> tuple[int, ...]:
        """Expected number of subjects per category in a cohort of size n.

        Args:
            n (int): Cohort size

        Returns:
            tuple[int, ...]: ceil(n * p_k) per category
        """
        return tuple(ceil_count(n * p) for p in self.proportions)

    def permuted(self, order: Sequence[int]) -> "OutcomeDistribution":
        """Relabel categories.

        Args:
            order (Sequence[int]): 1-based old label for each new position

        Returns:
            OutcomeDistribution: Distribution whose category i is old order[i-1]
        """
        if sorted(order) != list(range(1, self.k + 1)):
            raise DomainError(f"Not a permutation of 1..{self.k}: {order}")
        if self.counts is not None:
            return OutcomeDistribution.from_counts(
                [self.counts[i - 1] for i in order]
            )
        return OutcomeDistribution(tuple(self.proportions[i - 1] for i in order))

    def to_dict(self) -> dict[str, Any]:
        """Convert to a dictionary for JSON serialization.

        Returns:
            dict[str, Any]: Dictionary representation of the distribution
        """
        return {
            "proportions": list(self.proportions),
            "counts": list(self.counts) if self.counts is not None else None,
            "n": self.n,
        }


@dataclass(slots=True, frozen=True)
class RSquared:
    """A Cox-Snell or Nagelkerke R² together with how it was obtained."""

    value: float
    kind: RSquaredKind = "adjusted"
    family: RSquaredFamily = "cox_snell"
    source: str = "user"

    def __post_init__(self) -> None:
        """Validate the value.

        Raises:
            DomainError: If the value is outside its family's range
        """
        upper_ok = self.value < 1.0 if self.family == "cox_snell" else True
        if not (0.0 <= self.value <= 1.0 and upper_ok):
            raise DomainError(f"{self.family} R² out of range: {self.value}")

    def __str__(self) -> str:
        """Readable form of the R².

        Returns:
            str: Value with family, kind and source
        """
        return f"{self.value:.4f} ({self.family}, {self.kind}, {self.source})"

    def to_dict(self) -> dict[str, Any]:
        """Convert to a dictionary for JSON serialization.

        Returns:
            dict[str, Any]: Dictionary representation of the R²
        """
        return {
            "value": self.value,
            "kind": self.kind,
            "family": self.family,
            "source": self.source,
        }


@dataclass(slots=True, frozen=True)
class PairPrevalence:
    """Outcome proportion of category k among subjects with outcome k or r."""

    phi: float

    def __post_init__(self) -> None:
        """Validate the prevalence.

        Raises:
            DomainError: If phi is not strictly between 0 and 1
        """
        if not 0.0 < self.phi < 1.0:
            raise DomainError(f"Pair prevalence must lie in (0, 1): {self.phi}")

    @classmethod
    def from_counts(cls, e_k: int, e_r: int) -> "PairPrevalence":
        """Build from the event counts of the two categories.

        Args:
            e_k (int): Events in category k
            e_r (int): Events in category r

        Returns:
            PairPrevalence: E_k / (E_k + E_r)

        Raises:
            DomainError: If both counts are zero
        """
        if e_k + e_r <= 0:
            raise DomainError("A pair needs at least one event")
        return cls(e_k / (e_k + e_r))

    def __float__(self) -> float:
        """Numeric value of the prevalence.

        Returns:
            float: phi
        """
        return self.phi


@dataclass(slots=True, frozen=True)
class PrecisionSpec:
    """Margin of error and simultaneous error rate for overall risk estimates."""

    delta: float = DEFAULT_DELTA
    alpha: float = DEFAULT_ALPHA

    def __post_init__(self) -> None:
        """Validate delta and alpha.

        Raises:
            DomainError: If either value is out of range
        """
        if not 0.0 < self.delta < 0.5:
            raise DomainError(f"delta must lie in (0, 0.5): {self.delta}")
        if not 0.0 < self.alpha < 1.0:
            raise DomainError(f"alpha must lie in (0, 1): {self.alpha}")


@dataclass(slots=True, frozen=True)
class CStatSpec:
    """Inputs of the C-statistic to Cox-Snell R² conversion."""

    c: float
    phi: PairPrevalence
    sim_size: int = CSTAT_SIM_SIZE
    seed: int = CSTAT_DEFAULT_SEED
    match_tol: float = CSTAT_MATCH_TOL
    lp_model: str = "logistic_normal"

    def __post_init__(self) -> None:
        """Validate the conversion settings.

        Raises:
            DomainError: If C, the simulation size or the model name is invalid
        """
        if not 0.5 < self.c < 1.0:
            raise DomainError(f"C-statistic must lie in (0.5, 1): {self.c}")
        if self.sim_size < CSTAT_MIN_SIM_SIZE:
            raise DomainError(
                f"sim_size must be at least {CSTAT_MIN_SIM_SIZE}: {self.sim_size}"
            )
        if self.match_tol <= 0:
            raise DomainError(f"match_tol must be positive: {self.match_tol}")
        if self.lp_model not in LP_MODELS:
            raise DomainError(
                f"Unknown linear predictor model {self.lp_model!r}, "
                f"expected one of {', '.join(LP_MODELS)}"
            )

    def to_dict(self) -> dict[str, Any]:
        """Convert to a dictionary for JSON serialization.

        Returns:
            dict[str, Any]: Dictionary representation of the settings
        """
        return {
            "c": self.c,
            "phi": self.phi.phi,
            "sim_size": self.sim_size,
            "seed": self.seed,
            "match_tol": self.match_tol,
            "lp_model": self.lp_model,
        }


@dataclass(slots=True, frozen=True)
class CStatEstimate:
    """Cox-Snell R² estimated from a C-statistic, with the simulation it came from."""

    r2_cs: float
    lr: float
    achieved_c: float
    achieved_phi: float
    parameters: dict[str, float]
    spec: CStatSpec

    def __str__(self) -> str:
        """Readable form of the estimate.

        Returns:
            str: R² with the achieved C and prevalence
        """
        return (
            f"R²_CS = {self.r2_cs:.4f} "
            f"(C = {self.achieved_c:.4f}, phi = {self.achieved_phi:.4f})"
        )

    def to_dict(self) -> dict[str, Any]:
        """Convert to a dictionary for JSON serialization.

        Returns:
            dict[str, Any]: Dictionary representation of the estimate
        """
        return {
            "r2_cs": self.r2_cs,
            "lr": self.lr,
            "achieved_c": self.achieved_c,
            "achieved_phi": self.achieved_phi,
            "parameters": dict(self.parameters),
            "settings": self.spec.to_dict(),
        }


@dataclass(slots=True, frozen=True)
class PairEstimate:
    """A distinct logistic pair {k, r} with its anticipated R² and shrinkage target."""

    k: int
    r: int
    r2_adj_pair: float
    p_pair: float
    s_target: float = DEFAULT_SHRINKAGE
    phi: PairPrevalence | None = None
    source: str = "r2_cs_adj"
    cstat: CStatEstimate | None = None

    def __post_init__(self) -> None:
        """Validate the pair.

        Raises:
            DomainError: If the labels, R², p_pair or target are out of range
        """
        if self.k <= self.r or self.r < 1:
            raise DomainError(f"Pair labels need k > r >= 1: ({self.k}, {self.r})")
        if not 0.0 < self.r2_adj_pair < 1.0:
            raise DomainError(
                f"Pair {{{self.k},{self.r}}} R² must lie in (0, 1): {self.r2_adj_pair}"
            )
        if not 0.0 < self.p_pair <= 1.0:
            raise DomainError(
                f"Pair {{{self.k},{self.r}}} p_pair must lie in (0, 1]: {self.p_pair}"
            )
        if not 0.0 < self.s_target < 1.0:
            raise DomainError(
                f"Pair {{{self.k},{self.r}}} shrinkage must lie in (0, 1): "
                f"{self.s_target}"
            )

    @property
    def key(self) -> tuple[int, int]:
        """Pair identity.

        Returns:
            tuple[int, int]: (k, r)
        """
        return (self.k, self.r)


@dataclass(slots=True)
class PairRequirement:
    """Criterion (i) requirement for one distinct logistic pair."""

    k: int
    r: int
    p_pair: float
    r2_adj: float
    s_target: float
    m_raw: float
    m: int
    n_raw: float
    n: int
    source: str = "r2_cs_adj"
    cstat: CStatEstimate | None = None
    shrinkage_at_final: float | None = None

    def __str__(self) -> str:
        """One-line form of the requirement.

        Returns:
            str: Pair with events and cohort size
        """
        return f"{{{self.k},{self.r}}}: m = {self.m}, n = {self.n}"

    def to_dict(self) -> dict[str, Any]:
        """Convert to a dictionary for JSON serialization.

        Returns:
            dict[str, Any]: Dictionary representation of the requirement
        """
        return {
            "pair": [self.k, self.r],
            "p_pair": self.p_pair,
            "r2_cs_adj": self.r2_adj,
            "shrinkage_target": self.s_target,
            "events_raw": self.m_raw,
            "events": self.m,
            "n_raw": self.n_raw,
            "n": self.n,
            "r2_source": self.source,
            "cstat": self.cstat.to_dict() if self.cstat is not None else None,
            "shrinkage_at_final": self.shrinkage_at_final,
        }


@dataclass(slots=True)
class CriterionOneReport:
    """Pairwise shrinkage criterion: one requirement per pair and the binding pair."""

    pairs: list[PairRequirement]
    n: int
    binding: tuple[int, int]

    @property
    def n_raw(self) -> float:
        """Unrounded requirement of the binding pair.

        Returns:
            float: m_raw / p_pair of the binding pair
        """
        return self.pair(*self.binding).n_raw

    def pair(self, k: int, r: int) -> PairRequirement:
        """Look up the requirement of a pair.

        Args:
            k (int): Larger category label
            r (int): Smaller category label

        Returns:
            PairRequirement: Requirement of pair {k, r}

        Raises:
            KeyError: If the pair was not part of the criterion
        """
        for req in self.pairs:
            if (req.k, req.r) == (k, r):
                return req
        raise KeyError((k, r))

    def to_dict(self) -> dict[str, Any]:
        """Convert to a dictionary for JSON serialization.

        Returns:
            dict[str, Any]: Dictionary representation of the criterion
        """
        return {
            "n": self.n,
            "n_raw": self.n_raw,
            "binding_pair": list(self.binding),
            "pairs": [req.to_dict() for req in self.pairs],
        }


@dataclass(slots=True)
class CriterionTwoReport:
    """Criterion (ii): small optimism in the Nagelkerke R²."""

    n: int
    raw: float
    shrinkage_bound: float
    r2_adj: float
    max_r2: float
    delta: float

    def to_dict(self) -> dict[str, Any]:
        """Convert to a dictionary for JSON serialization.

        Returns:
            dict[str, Any]: Dictionary representation of the criterion
        """
        return {
            "n": self.n,
            "n_raw": self.raw,
            "shrinkage_bound": self.shrinkage_bound,
            "r2_cs_adj": self.r2_adj,
            "max_r2_cs": self.max_r2,
            "delta": self.delta,
        }


@dataclass(slots=True)
class CriterionThreeReport:
    """Criterion (iii): precise estimation of every category's overall risk."""

    n: int
    per_category: tuple[int, ...]
    raw: tuple[float, ...]
    chi2: float
    delta: float
    alpha: float
    degenerate: tuple[int, ...] = ()

    def to_dict(self) -> dict[str, Any]:
        """Convert to a dictionary for JSON serialization.

        Returns:
            dict[str, Any]: Dictionary representation of the criterion
        """
        return {
            "n": self.n,
            "per_category": list(self.per_category),
            "per_category_raw": list(self.raw),
            "chi2": self.chi2,
            "delta": self.delta,
            "alpha": self.alpha,
            "degenerate_categories": list(self.degenerate),
        }


@dataclass(slots=True)
class DirectCriterion:
    """Shrinkage criterion applied to the multinomial model as a whole.

    Reported for comparison only; it can leave individual sub-models
    overfitted, so it never enters the final sample size.
    """

    n: int
    raw: float
    params: int
    r2_adj: float
    s_target: float
    diagnostic: bool = True

    def to_dict(self) -> dict[str, Any]:
        """Convert to a dictionary for JSON serialization.

        Returns:
            dict[str, Any]: Dictionary representation of the criterion
        """
        return {
            "n": self.n,
            "n_raw": self.raw,
            "params": self.params,
            "r2_cs_adj": self.r2_adj,
            "shrinkage_target": self.s_target,
            "diagnostic": self.diagnostic,
        }


@dataclass(slots=True)
class SampleSizeReport:
    """Minimum sample size for a multinomial prediction model."""

    n1: int
    n2: int
    n3: int
    n_final: int
    expected_events: tuple[int, ...] = ()
    criterion_one: CriterionOneReport | None = None
    criterion_two: CriterionTwoReport | None = None
    criterion_three: CriterionThreeReport | None = None
    direct: DirectCriterion | None = None
    r2_overall: RSquared | None = None
    epv: dict[int, int] = field(default_factory=dict)
    inputs: dict[str, Any] = field(default_factory=dict)

    @property
    def binding_criterion(self) -> int:
        """Criterion that determines the final size.

        Returns:
            int: 1, 2 or 3 (the first one on ties)
        """
        return (self.n1, self.n2, self.n3).index(self.n_final) + 1

    def __str__(self) -> str:
        """One-line summary of the report.

        Returns:
            str: Final size with the per-criterion sizes
        """
        return (
            f"n = {self.n_final} "
            f"(i: {self.n1}, ii: {self.n2}, iii: {self.n3})"
        )

    def to_dict(self) -> dict[str, Any]:
        """Convert to a dictionary for JSON serialization.

        Returns:
            dict[str, Any]: Dictionary representation of the report
        """
        return {
            "schema_version": REPORT_SCHEMA_VERSION,
            "n_final": self.n_final,
            "binding_criterion": self.binding_criterion,
            "criteria": {
                "i": self.criterion_one.to_dict()
                if self.criterion_one is not None
                else {"n": self.n1},
                "ii": self.criterion_two.to_dict()
                if self.criterion_two is not None
                else {"n": self.n2},
                "iii": self.criterion_three.to_dict()
                if self.criterion_three is not None
                else {"n": self.n3},
            },
            "expected_events": list(self.expected_events),
            "direct_multinomial": self.direct.to_dict()
            if self.direct is not None
            else None,
            "r2_overall": self.r2_overall.to_dict()
            if self.r2_overall is not None
            else None,
            "epv": {str(k): v for k, v in self.epv.items()},
            "inputs": self.inputs,
        }
