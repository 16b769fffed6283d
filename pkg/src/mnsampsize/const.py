"""Constants for mnsampsize."""

from enum import IntEnum

REPORT_SCHEMA_VERSION = 1

# Sample size defaults
DEFAULT_SHRINKAGE = 0.9
DEFAULT_DELTA = 0.05
DEFAULT_ALPHA = 0.05
DEFAULT_NAGELKERKE = 0.15

# Tolerances
PROPORTION_SUM_TOL = 1e-9
P_PAIR_TOL = 1e-3
RISK_ROW_SUM_TOL = 1e-6
LNL_ORDER_TOL = 1e-6

# Newton-Raphson
MAX_ITER = 100
SCORE_TOL = 1e-8
LNL_REL_TOL = 1e-12
SEPARATION_BOUND = 15.0
MAX_STEP_HALVINGS = 30
RCOND_MIN = 1e-12

# C-statistic to R² simulation
CSTAT_SIM_SIZE = 1_000_000
CSTAT_MIN_SIM_SIZE = 10_000
CSTAT_MATCH_TOL = 0.002
CSTAT_SIGMA_BRACKET = (0.01, 10.0)
CSTAT_DEFAULT_SEED = 20240101
LP_MODELS = ("logistic_normal", "binormal")

# Simulation study
SIM_REPS = 1000
SIM_CALC_COHORT = 500_000
SIM_VALIDATION_N = 500_000
SIM_MIN_COHORT = 10_000
SIM_DEFAULT_SEED = 12345
SIM_N_COVARIATES = 5
SIM_N_VALUES: tuple[int | str, ...] = (250, 500, 1000, "N_MN", "N_DL")
SYMBOLIC_N = ("N_MN", "N_DL")
SUMMARY_PERCENTILES = (2.5, 25.0, 50.0, 75.0, 97.5)

# Stream tags for SeedSequence spawn keys
STREAM_CALC = 0
STREAM_VALIDATION = 1
STREAM_REPLICATE = 2

ESTIMANDS = (
    "s_mn_21",
    "s_mn_31",
    "s_dl_21",
    "s_dl_31",
    "s_vh_mn",
    "s_vh_dl_21",
    "s_vh_dl_31",
)
REPLICATE_COLUMNS = ("scenario_label", "n", "replicate", *ESTIMANDS, "converged")
SUMMARY_COLUMNS = (
    "scenario_label",
    "n",
    "estimand",
    "mean",
    "p2_5",
    "p25",
    "p50",
    "p75",
    "p97_5",
    "n_converged",
    "n_excluded",
)


class ExitCode(IntEnum):
    """Process exit codes of the command line interface."""

    OK = 0
    NO_COMMAND = 1
    INVALID_CONFIG = 2
    INFEASIBLE = 3
    IO_FAILURE = 4
    COMPUTATION = 5
