"""Data generation, required sizes and replicates of the shrinkage study.

Every random draw comes from a stream derived from the study seed and the
purpose of the draw: the cohort used to compute N_MN and N_DL, the shared
validation cohort, and one stream per (scenario, N, replicate). Results are
therefore identical for any number of workers.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
from joblib import Parallel, delayed
from scipy.special import softmax

from mnsampsize.calibration import (
    LinearPredictorSet,
    binary_calibration_slope,
    multinomial_recalibration,
)
from mnsampsize.const import (
    DEFAULT_SHRINKAGE,
    SIM_CALC_COHORT,
    SIM_DEFAULT_SEED,
    SIM_MIN_COHORT,
    SIM_N_COVARIATES,
    SIM_N_VALUES,
    SIM_REPS,
    SIM_VALIDATION_N,
    STREAM_CALC,
    STREAM_REPLICATE,
    STREAM_VALIDATION,
    SYMBOLIC_N,
)
from mnsampsize.criteria import criterion_one, direct_criterion
from mnsampsize.exceptions import (
    ConfigError,
    DomainError,
    EmptySummaryError,
    FitError,
    ModelOrderingError,
)
from mnsampsize.fitting.fits import (
    Dataset,
    fit_binary,
    fit_multinomial,
    heuristic_shrinkage,
)
from mnsampsize.models import PairEstimate
from mnsampsize.rsq_math import adjust_apparent, r2_cs_from_lr
from mnsampsize.simstudy.scenarios import ScenarioSpec
from mnsampsize.simstudy.summary import (
    ReplicateResult,
    ShrinkageSummary,
    summarize,
    write_study_csv,
)

logger = logging.getLogger("mnsampsize")

_FIT_FAILURES = (FitError, DomainError, ModelOrderingError)


def make_stream(seed: int, *key: int) -> np.random.Generator:
    """Independent generator for one purpose of the study.

    Args:
        seed (int): Study seed
        *key (int): Spawn key identifying the stream

    Returns:
        np.random.Generator: Generator seeded from SeedSequence(seed, key)
    """
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=key))


def category_probabilities(spec: ScenarioSpec, x: np.ndarray) -> np.ndarray:
    """Outcome probabilities of the generating model.

    Args:
        spec (ScenarioSpec): Generating coefficients
        x (np.ndarray): n x 5 covariates

    Returns:
        np.ndarray: n x 3 matrix of P(Y = 1), P(Y = 2), P(Y = 3)
    """
    beta = spec.beta_matrix
    eta = beta[:, 0] + np.einsum("ij,kj->ik", x, beta[:, 1:])
    return softmax(np.column_stack([np.zeros(x.shape[0]), eta]), axis=1)


def generate_dataset(
    spec: ScenarioSpec, n: int, stream: np.random.Generator
) -> Dataset:
    """Simulate a cohort from a scenario.

    Args:
        spec (ScenarioSpec): Generating coefficients
        n (int): Number of subjects
        stream (np.random.Generator): Random stream, advanced by the draw

    Returns:
        Dataset: Five standard normal covariates and labels 1..3

    Raises:
        DomainError: If n is below one
    """
    if n < 1:
        raise DomainError(f"Cohort size must be positive: {n}")
    x = stream.standard_normal((n, SIM_N_COVARIATES))
    u = stream.random(n)
    cumulative = np.cumsum(category_probabilities(spec, x), axis=1)
    y = 1 + (u >= cumulative[:, 0]).astype(np.int64) + (u >= cumulative[:, 1])
    return Dataset(x, y.astype(np.int64))


@dataclass(slots=True, frozen=True)
class DerivedSampleSize:
    """Required development size computed from a large simulated cohort."""

    name: str
    n: int
    raw: float
    quantities: dict[str, float]

    def to_dict(self) -> dict[str, Any]:
        """Convert to a dictionary for JSON serialization.

        Returns:
            dict[str, Any]: Dictionary representation of the derivation
        """
        return {"name": self.name, "n": self.n, "raw": self.raw, **self.quantities}


def derive_n_mn(
    cohort: Dataset, s_target: float = DEFAULT_SHRINKAGE
) -> DerivedSampleSize:
    """Size required by applying the shrinkage criterion to the multinomial model.

    Args:
        cohort (Dataset): Large simulated cohort
        s_target (float): Shrinkage target

    Returns:
        DerivedSampleSize: N_MN with the R² values it derives from
    """
    fit = fit_multinomial(cohort, k_categories=3)
    lr = fit.lr
    r2_app = r2_cs_from_lr(lr, cohort.n)
    s_vh = heuristic_shrinkage(fit.n_predictor_params, lr).value
    r2_adj = adjust_apparent(r2_app, s_vh)
    direct = direct_criterion(SIM_N_COVARIATES, 3, r2_adj, s_target)
    logger.debug(
        f"N_MN: LR={lr:.3f}, R²_app={r2_app:.5f}, S_VH={s_vh:.5f}, "
        f"R²_adj={r2_adj:.5f}, n={direct.n}"
    )
    return DerivedSampleSize(
        name="N_MN",
        n=direct.n,
        raw=direct.raw,
        quantities={"lr": lr, "r2_app": r2_app, "s_vh": s_vh, "r2_adj": r2_adj},
    )


def derive_n_dl(
    cohort: Dataset, s_target: float = DEFAULT_SHRINKAGE
) -> DerivedSampleSize:
    """Size required by the distinct logistic pairs {2,1} and {3,1}.

    Args:
        cohort (Dataset): Large simulated cohort
        s_target (float): Shrinkage target

    Returns:
        DerivedSampleSize: N_DL with the per-pair R² values it derives from
    """
    pairs = []
    quantities: dict[str, float] = {}
    for k in (2, 3):
        subset = cohort.pair(k, 1)
        fit = fit_binary(subset)
        lr = fit.lr
        r2_app = r2_cs_from_lr(lr, subset.n)
        s_vh = heuristic_shrinkage(fit.n_predictor_params, lr).value
        r2_adj = adjust_apparent(r2_app, s_vh)
        omega = subset.n / cohort.n
        pairs.append(
            PairEstimate(k=k, r=1, r2_adj_pair=r2_adj, p_pair=omega, s_target=s_target)
        )
        quantities.update(
            {
                f"r2_app_{k}1": r2_app,
                f"s_vh_{k}1": s_vh,
                f"r2_adj_{k}1": r2_adj,
                f"omega_{k}1": omega,
            }
        )
    report = criterion_one(
        pairs, SIM_N_COVARIATES, k_categories=3, require_complete=False
    )
    for req in report.pairs:
        quantities[f"n_{req.k}{req.r}"] = float(req.n)
    logger.debug(f"N_DL: {quantities}, n={report.n}")
    return DerivedSampleSize(
        name="N_DL", n=report.n, raw=report.n_raw, quantities=quantities
    )


def compute_n_mn(
    spec: ScenarioSpec, stream: np.random.Generator, calc_cohort: int = SIM_CALC_COHORT
) -> int:
    """N_MN of a scenario.

    Args:
        spec (ScenarioSpec): Generating coefficients
        stream (np.random.Generator): Stream for the calculation cohort
        calc_cohort (int): Size of the calculation cohort

    Returns:
        int: Required development size
    """
    return derive_n_mn(generate_dataset(spec, calc_cohort, stream)).n


def compute_n_dl(
    spec: ScenarioSpec, stream: np.random.Generator, calc_cohort: int = SIM_CALC_COHORT
) -> int:
    """N_DL of a scenario.

    Args:
        spec (ScenarioSpec): Generating coefficients
        stream (np.random.Generator): Stream for the calculation cohort
        calc_cohort (int): Size of the calculation cohort

    Returns:
        int: Required development size
    """
    return derive_n_dl(generate_dataset(spec, calc_cohort, stream)).n


def run_replicate(
    spec: ScenarioSpec,
    n: int,
    validation: Dataset,
    stream: np.random.Generator,
    replicate: int = 0,
) -> ReplicateResult:
    """Develop models on one simulated dataset and validate their shrinkage.

    Args:
        spec (ScenarioSpec): Generating coefficients
        n (int): Development size
        validation (Dataset): Shared validation cohort
        stream (np.random.Generator): Stream of this replicate
        replicate (int): Replicate index recorded in the result

    Returns:
        ReplicateResult: Shrinkage estimates; failed parts are NaN and flagged
    """
    result = ReplicateResult(scenario_label=spec.label, n=n, replicate=replicate)
    dev = generate_dataset(spec, n, stream)

    try:
        fit = fit_multinomial(dev, k_categories=3)
        result.s_vh_mn = heuristic_shrinkage(fit.n_predictor_params, fit.lr).value
        lps = LinearPredictorSet(fit.linear_predictors(validation.x), validation.y)
        recal = multinomial_recalibration(lps)
        result.s_mn_21, result.s_mn_31 = recal.slopes
    except _FIT_FAILURES as e:
        logger.debug(f"{spec.label}, N={n}, replicate {replicate}: multinomial {e}")
        result.converged_mn = False

    for k in (2, 3):
        try:
            dl = fit_binary(dev.pair(k, 1))
            s_vh = heuristic_shrinkage(dl.n_predictor_params, dl.lr).value
            val = validation.pair(k, 1)
            calibration = binary_calibration_slope(
                dl.linear_predictor(val.x), val.y == 2
            )
        except _FIT_FAILURES as e:
            logger.debug(
                f"{spec.label}, N={n}, replicate {replicate}: pair {{{k},1}} {e}"
            )
            setattr(result, f"converged_dl_{k}1", False)
            continue
        setattr(result, f"s_vh_dl_{k}1", s_vh)
        setattr(result, f"s_dl_{k}1", calibration.slope)
    return result


def _replicate_task(
    spec: ScenarioSpec, n: int, validation: Dataset, seed: int, replicate: int
) -> ReplicateResult:
    stream = make_stream(seed, STREAM_REPLICATE, spec.scenario_id, n, replicate)
    return run_replicate(spec, n, validation, stream, replicate)


@dataclass(slots=True, frozen=True)
class RunConfig:
    """Settings of a simulation study for one scenario."""

    scenario: ScenarioSpec
    n_values: tuple[int | str, ...] = SIM_N_VALUES
    reps: int = SIM_REPS
    seed: int = SIM_DEFAULT_SEED
    calc_cohort: int = SIM_CALC_COHORT
    validation_n: int = SIM_VALIDATION_N
    jobs: int = 1

    def __post_init__(self) -> None:
        """Validate the settings.

        Raises:
            ConfigError: If a size, count or N value is invalid
        """
        if self.reps < 1:
            raise ConfigError(f"must be at least 1, got {self.reps}", field="reps")
        for name in ("calc_cohort", "validation_n"):
            if getattr(self, name) < SIM_MIN_COHORT:
                raise ConfigError(
                    f"must be at least {SIM_MIN_COHORT}, got {getattr(self, name)}",
                    field=name,
                )
        if not self.n_values:
            raise ConfigError("at least one development size is needed", field="n")
        for value in self.n_values:
            if isinstance(value, str):
                if value not in SYMBOLIC_N:
                    raise ConfigError(
                        f"unknown symbolic size {value!r}, expected "
                        f"{' or '.join(SYMBOLIC_N)}",
                        field="n",
                    )
            elif value < 1:
                raise ConfigError(f"sizes must be positive, got {value}", field="n")
        if self.jobs == 0:
            raise ConfigError("must be non-zero", field="jobs")


@dataclass(slots=True)
class StudyResult:
    """Required sizes, replicates and summaries of a simulation study."""

    scenario: ScenarioSpec
    n_mn: DerivedSampleSize
    n_dl: DerivedSampleSize
    n_values: list[int]
    replicates: dict[int, list[ReplicateResult]] = field(default_factory=dict)
    summaries: list[ShrinkageSummary] = field(default_factory=list)
    files: list[Path] = field(default_factory=list)

    def summary(self, n: int | str) -> ShrinkageSummary:
        """Summary for one development size.

        Args:
            n (int | str): Size or ``N_MN`` / ``N_DL``

        Returns:
            ShrinkageSummary: Summary of that size

        Raises:
            KeyError: If the size was not run or has no summary
        """
        size = self.resolve(n)
        for summary in self.summaries:
            if summary.n == size:
                return summary
        raise KeyError(n)

    def resolve(self, n: int | str) -> int:
        """Resolve a symbolic development size.

        Args:
            n (int | str): Size or ``N_MN`` / ``N_DL``

        Returns:
            int: Numeric size
        """
        if n == "N_MN":
            return self.n_mn.n
        if n == "N_DL":
            return self.n_dl.n
        return int(n)

    def to_dict(self) -> dict[str, Any]:
        """Convert to a dictionary for JSON serialization.

        Returns:
            dict[str, Any]: Required sizes and summaries
        """
        return {
            "scenario": self.scenario.to_dict(),
            "n_mn": self.n_mn.to_dict(),
            "n_dl": self.n_dl.to_dict(),
            "n_values": self.n_values,
            "summaries": [row for s in self.summaries for row in s.rows()],
            "files": [p.as_posix() for p in self.files],
        }


def run_study(config: RunConfig, out_dir: Path | None = None) -> StudyResult:
    """Run the shrinkage simulation study for one scenario.

    Args:
        config (RunConfig): Scenario and study settings
        out_dir (Path | None): Directory for the replicate and summary CSV
            files; nothing is written when omitted

    Returns:
        StudyResult: N_MN, N_DL, replicates and summaries per development size

    Raises:
        StudyIOError: If the CSV files cannot be written
    """
    spec = config.scenario
    logger.info(
        f"{spec.label}: computing N_MN and N_DL on {config.calc_cohort} subjects"
    )
    cohort = generate_dataset(
        spec,
        config.calc_cohort,
        make_stream(config.seed, STREAM_CALC, spec.scenario_id),
    )
    n_mn = derive_n_mn(cohort)
    n_dl = derive_n_dl(cohort)
    del cohort
    logger.info(f"{spec.label}: N_MN = {n_mn.n}, N_DL = {n_dl.n}")

    validation = generate_dataset(
        spec,
        config.validation_n,
        make_stream(config.seed, STREAM_VALIDATION, spec.scenario_id),
    )
    result = StudyResult(scenario=spec, n_mn=n_mn, n_dl=n_dl, n_values=[])
    for value in config.n_values:
        size = result.resolve(value)
        if size not in result.n_values:
            result.n_values.append(size)

    parallel = Parallel(n_jobs=config.jobs)
    for size in result.n_values:
        logger.info(f"{spec.label}: N={size}, {config.reps} replicates")
        replicates = parallel(
            delayed(_replicate_task)(spec, size, validation, config.seed, rep)
            for rep in range(config.reps)
        )
        result.replicates[size] = list(replicates)
        try:
            result.summaries.append(summarize(result.replicates[size]))
        except EmptySummaryError as e:
            logger.warning(f"{spec.label}, N={size}: {e}")

    if out_dir is not None:
        stem = f"scenario_{spec.scenario_id}" if spec.scenario_id else spec.label
        result.files = write_study_csv(
            Path(out_dir),
            stem,
            [r for size in result.n_values for r in result.replicates[size]],
            result.summaries,
        )
    return result
