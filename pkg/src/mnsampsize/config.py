"""Configuration files for sample size calculations and simulation runs.

Both file types are YAML mappings. A sample size configuration names the
outcome distribution, the number of predictor parameters and one R² source
per distinct logistic pair::

    k_categories: 3
    q_parameters: 10
    counts: [500, 300, 200]
    pairs:
      "2,1": {r2_cs_adj: 0.12}
      "3,1": {c_statistic: 0.8}
      "3,2": {nagelkerke: true, shrinkage: 0.85}
"""

import logging
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any

import yaml

from mnsampsize.const import (
    CSTAT_DEFAULT_SEED,
    CSTAT_SIM_SIZE,
    DEFAULT_ALPHA,
    DEFAULT_DELTA,
    DEFAULT_NAGELKERKE,
    DEFAULT_SHRINKAGE,
    LP_MODELS,
    SYMBOLIC_N,
)
from mnsampsize.criteria import all_pairs
from mnsampsize.exceptions import ConfigError, DomainError
from mnsampsize.models import OutcomeDistribution
from mnsampsize.simstudy.engine import RunConfig
from mnsampsize.simstudy.scenarios import ScenarioSpec, get_scenario

logger = logging.getLogger("mnsampsize")

PairKey = tuple[int, int]
_FLOAT_KEYS = ("shrinkage", "r2_cs_adj", "r2_nagelkerke", "delta2", "delta3", "alpha")


def _parse_pair_key(key: Any) -> PairKey:
    try:
        k, r = (int(part) for part in str(key).split(","))
    except ValueError as e:
        raise ConfigError(f"expected 'k,r', got {key!r}", field="pairs") from e
    if k <= r or r < 1:
        raise ConfigError(f"pair {key!r} needs k > r >= 1", field="pairs")
    return k, r


def _number(data: dict[str, Any], key: str, kind: type, prefix: str = "") -> Any:
    value = data[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"expected a number, got {value!r}", field=prefix + key)
    if kind is int:
        if isinstance(value, float) and not value.is_integer():
            raise ConfigError(f"expected an integer, got {value!r}", field=prefix + key)
        return int(value)
    return float(value)


def _unit_interval(value: float, field_name: str, closed_right: bool = False) -> None:
    upper_ok = value <= 1.0 if closed_right else value < 1.0
    if not (value > 0.0 and upper_ok):
        raise ConfigError(f"must lie in (0, 1): {value}", field=field_name)


@dataclass(slots=True, frozen=True)
class PairInput:
    """R² source and options of one distinct logistic pair."""

    r2_cs_adj: float | None = None
    c_statistic: float | None = None
    nagelkerke: bool = False
    shrinkage: float | None = None
    p_pair: float | None = None

    @property
    def source(self) -> str:
        """Which R² source the pair uses.

        Returns:
            str: ``r2_cs_adj``, ``c_statistic`` or ``nagelkerke``
        """
        if self.r2_cs_adj is not None:
            return "r2_cs_adj"
        if self.c_statistic is not None:
            return "c_statistic"
        return "nagelkerke"

    @classmethod
    def from_dict(cls, data: Any, key: str) -> "PairInput":
        """Parse one pair entry.

        Args:
            data (Any): Mapping from the configuration file
            key (str): Pair key used in error messages

        Returns:
            PairInput: Validated pair input

        Raises:
            ConfigError: If the entry has no or several R² sources, or a value
                is out of range
        """
        prefix = f"pairs.{key}."
        if not isinstance(data, dict):
            raise ConfigError("expected a mapping", field=f"pairs.{key}")
        unknown = set(data) - {f.name for f in fields(cls)}
        if unknown:
            raise ConfigError(f"unknown keys {sorted(unknown)}", field=f"pairs.{key}")
        nagelkerke = data.get("nagelkerke", False)
        if not isinstance(nagelkerke, bool):
            raise ConfigError("expected true or false", field=prefix + "nagelkerke")
        sources = [
            name
            for name in ("r2_cs_adj", "c_statistic")
            if data.get(name) is not None
        ] + (["nagelkerke"] if nagelkerke else [])
        if len(sources) != 1:
            raise ConfigError(
                "exactly one of r2_cs_adj, c_statistic or nagelkerke: true is "
                f"required, got {sources or 'none'}",
                field=f"pairs.{key}",
            )
        values: dict[str, Any] = {"nagelkerke": nagelkerke}
        for name in ("r2_cs_adj", "c_statistic", "shrinkage", "p_pair"):
            if data.get(name) is not None:
                values[name] = _number(data, name, float, prefix)
        if "r2_cs_adj" in values:
            _unit_interval(values["r2_cs_adj"], prefix + "r2_cs_adj")
        if "c_statistic" in values and not 0.5 < values["c_statistic"] < 1.0:
            raise ConfigError(
                f"must lie in (0.5, 1): {values['c_statistic']}",
                field=prefix + "c_statistic",
            )
        if "shrinkage" in values:
            _unit_interval(values["shrinkage"], prefix + "shrinkage")
        if "p_pair" in values:
            _unit_interval(values["p_pair"], prefix + "p_pair", closed_right=True)
        return cls(**values)

    def to_dict(self) -> dict[str, Any]:
        """Serialize to the configuration file form.

        Returns:
            dict[str, Any]: Only the keys that are set
        """
        data: dict[str, Any] = {}
        if self.r2_cs_adj is not None:
            data["r2_cs_adj"] = self.r2_cs_adj
        if self.c_statistic is not None:
            data["c_statistic"] = self.c_statistic
        if self.nagelkerke:
            data["nagelkerke"] = True
        if self.shrinkage is not None:
            data["shrinkage"] = self.shrinkage
        if self.p_pair is not None:
            data["p_pair"] = self.p_pair
        return data


@dataclass(slots=True, frozen=True)
class StudyConfig:
    """Inputs of a sample size calculation."""

    k_categories: int
    q_parameters: int
    counts: tuple[int, ...] | None = None
    proportions: tuple[float, ...] | None = None
    pairs: dict[PairKey, PairInput] = field(default_factory=dict)
    shrinkage: float = DEFAULT_SHRINKAGE
    r2_cs_adj: float | None = None
    r2_nagelkerke: float = DEFAULT_NAGELKERKE
    delta2: float = DEFAULT_DELTA
    delta3: float = DEFAULT_DELTA
    alpha: float = DEFAULT_ALPHA
    seed: int = CSTAT_DEFAULT_SEED
    sim_size: int = CSTAT_SIM_SIZE
    lp_model: str = "logistic_normal"
    normalize: bool = False

    def __post_init__(self) -> None:
        """Validate field ranges and the pair set.

        Raises:
            ConfigError: If a field is out of range or the pairs are incomplete
        """
        if self.k_categories < 2:
            raise ConfigError("need at least 2 categories", field="k_categories")
        if self.q_parameters < 1:
            raise ConfigError("need at least 1 parameter", field="q_parameters")
        if (self.counts is None) == (self.proportions is None):
            raise ConfigError(
                "give exactly one of counts or proportions", field="counts"
            )
        given = self.counts if self.counts is not None else self.proportions
        if given is not None and len(given) != self.k_categories:
            name = "counts" if self.counts is not None else "proportions"
            raise ConfigError(
                f"expected {self.k_categories} values, got {len(given)}", field=name
            )
        _unit_interval(self.shrinkage, "shrinkage")
        if self.r2_cs_adj is not None:
            _unit_interval(self.r2_cs_adj, "r2_cs_adj")
        _unit_interval(self.r2_nagelkerke, "r2_nagelkerke")
        for name in ("delta2", "delta3", "alpha"):
            _unit_interval(getattr(self, name), name)
        if self.delta3 >= 0.5:
            raise ConfigError(f"must lie in (0, 0.5): {self.delta3}", field="delta3")
        if self.lp_model not in LP_MODELS:
            raise ConfigError(
                f"expected one of {', '.join(LP_MODELS)}, got {self.lp_model!r}",
                field="lp_model",
            )
        expected = set(all_pairs(self.k_categories))
        missing = sorted(expected - set(self.pairs))
        extra = sorted(set(self.pairs) - expected)
        if missing or extra:
            raise ConfigError(
                f"pairs must cover every k,r with k > r for K={self.k_categories} "
                f"(missing {missing}, unexpected {extra})",
                field="pairs",
            )
        try:
            self.distribution()
        except DomainError as e:
            name = "counts" if self.counts is not None else "proportions"
            raise ConfigError(str(e), field=name) from e

    def distribution(self) -> OutcomeDistribution:
        """Anticipated outcome distribution.

        Returns:
            OutcomeDistribution: Built from counts when given
        """
        if self.counts is not None:
            return OutcomeDistribution.from_counts(self.counts)
        assert self.proportions is not None
        return OutcomeDistribution.from_proportions(
            self.proportions, normalize=self.normalize
        )

    @classmethod
    def from_dict(cls, data: Any, fill_nagelkerke: bool = False) -> "StudyConfig":
        """Parse and validate a configuration mapping.

        Args:
            data (Any): Mapping loaded from YAML
            fill_nagelkerke (bool): Give pairs missing from the mapping the
                Nagelkerke fallback instead of rejecting the configuration

        Returns:
            StudyConfig: Validated configuration

        Raises:
            ConfigError: If a field is missing, unknown or invalid
        """
        if not isinstance(data, dict):
            raise ConfigError("configuration must be a mapping")
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown keys {sorted(unknown)}")
        for required in ("k_categories", "q_parameters"):
            if required not in data:
                raise ConfigError("is required", field=required)

        values: dict[str, Any] = {}
        for name in ("k_categories", "q_parameters", "seed", "sim_size"):
            if name in data:
                values[name] = _number(data, name, int)
        for name in _FLOAT_KEYS:
            if data.get(name) is not None:
                values[name] = _number(data, name, float)
        for name, kind in (("counts", int), ("proportions", float)):
            if data.get(name) is None:
                continue
            if not isinstance(data[name], list):
                raise ConfigError("expected a list", field=name)
            values[name] = tuple(
                _number({name: v}, name, kind) for v in data[name]
            )
        if "lp_model" in data:
            values["lp_model"] = str(data["lp_model"])
        if "normalize" in data:
            if not isinstance(data["normalize"], bool):
                raise ConfigError("expected true or false", field="normalize")
            values["normalize"] = data["normalize"]

        raw_pairs = data.get("pairs") or {}
        if not isinstance(raw_pairs, dict):
            raise ConfigError("expected a mapping keyed by 'k,r'", field="pairs")
        pairs = {}
        for key, entry in raw_pairs.items():
            parsed = _parse_pair_key(key)
            if parsed in pairs:
                raise ConfigError(f"duplicate pair {key!r}", field="pairs")
            pairs[parsed] = PairInput.from_dict(entry, f"{parsed[0]},{parsed[1]}")
        if fill_nagelkerke:
            for key in all_pairs(values["k_categories"]):
                pairs.setdefault(key, PairInput(nagelkerke=True))
        values["pairs"] = pairs
        return cls(**values)

    def to_dict(self) -> dict[str, Any]:
        """Serialize to the configuration file form.

        Returns:
            dict[str, Any]: Mapping accepted by from_dict
        """
        data: dict[str, Any] = {
            "k_categories": self.k_categories,
            "q_parameters": self.q_parameters,
        }
        if self.counts is not None:
            data["counts"] = list(self.counts)
        if self.proportions is not None:
            data["proportions"] = list(self.proportions)
        data.update(
            {
                "shrinkage": self.shrinkage,
                "r2_nagelkerke": self.r2_nagelkerke,
                "delta2": self.delta2,
                "delta3": self.delta3,
                "alpha": self.alpha,
                "seed": self.seed,
                "sim_size": self.sim_size,
                "lp_model": self.lp_model,
                "normalize": self.normalize,
            }
        )
        if self.r2_cs_adj is not None:
            data["r2_cs_adj"] = self.r2_cs_adj
        data["pairs"] = {
            f"{k},{r}": entry.to_dict() for (k, r), entry in sorted(self.pairs.items())
        }
        return data


def _load_yaml(path: Path) -> Any:
    try:
        with Path(path).open(encoding="utf-8") as f:
            return yaml.safe_load(f)
    except OSError as e:
        raise ConfigError(f"cannot read {path}: {e.strerror}", field="config") from e
    except yaml.YAMLError as e:
        raise ConfigError(f"invalid YAML in {path}: {e}", field="config") from e


def load_study_config(
    path: Path | None, fill_nagelkerke: bool = False, **overrides: Any
) -> StudyConfig:
    """Read a sample size configuration, applying command line overrides.

    Args:
        path (Path | None): YAML file, or None to build from overrides only
        fill_nagelkerke (bool): Give missing pairs the Nagelkerke fallback
        **overrides (Any): Values replacing the file's; None entries are
            ignored, and counts replace proportions and vice versa

    Returns:
        StudyConfig: Validated configuration

    Raises:
        ConfigError: If the file cannot be read or the result is invalid
    """
    data: Any = {}
    if path is not None:
        logger.debug(f"Reading sample size configuration from {path}")
        data = _load_yaml(path)
        if not isinstance(data, dict):
            raise ConfigError(f"{path} must hold a mapping", field="config")
    values = {k: v for k, v in overrides.items() if v is not None}
    if "counts" in values:
        data.pop("proportions", None)
    elif "proportions" in values:
        data.pop("counts", None)
    return StudyConfig.from_dict({**data, **values}, fill_nagelkerke=fill_nagelkerke)


def dump_study_config(config: StudyConfig) -> str:
    """Render a configuration as YAML.

    Args:
        config (StudyConfig): Configuration to serialize

    Returns:
        str: YAML text accepted by load_study_config
    """
    return yaml.safe_dump(config.to_dict(), sort_keys=False)


def parse_n_values(values: list[Any]) -> tuple[int | str, ...]:
    """Parse development sizes, keeping N_MN and N_DL symbolic.

    Args:
        values (list[Any]): Integers or symbolic names

    Returns:
        tuple[int | str, ...]: Parsed sizes

    Raises:
        ConfigError: If an entry is neither a positive integer nor symbolic
    """
    parsed: list[int | str] = []
    for value in values:
        text = str(value).strip()
        if text.upper() in SYMBOLIC_N:
            parsed.append(text.upper())
            continue
        try:
            number = int(text)
        except ValueError as e:
            raise ConfigError(
                f"expected an integer, N_MN or N_DL, got {value!r}", field="n"
            ) from e
        if number < 1:
            raise ConfigError(f"sizes must be positive, got {number}", field="n")
        parsed.append(number)
    return tuple(parsed)


def run_config_from_dict(data: Any, **overrides: Any) -> RunConfig:
    """Build simulation settings from a mapping and command line overrides.

    Args:
        data (Any): Mapping loaded from YAML, may be empty
        **overrides (Any): Values replacing the mapping's; None entries are
            ignored

    Returns:
        RunConfig: Validated settings

    Raises:
        ConfigError: If the scenario is missing or unknown, or a value is invalid
    """
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError("configuration must be a mapping")
    merged = {**data, **{k: v for k, v in overrides.items() if v is not None}}
    allowed = {"scenario", "beta", "label", "n", "reps", "seed", "calc_cohort",
               "validation_n", "jobs"}  # fmt: skip
    unknown = set(merged) - allowed
    if unknown:
        raise ConfigError(f"unknown keys {sorted(unknown)}")

    if merged.get("beta") is not None:
        beta = merged["beta"]
        if not isinstance(beta, list) or not all(isinstance(r, list) for r in beta):
            raise ConfigError("expected a 2 x 6 list of numbers", field="beta")
        try:
            scenario = ScenarioSpec.custom(beta, str(merged.get("label", "custom")))
        except (TypeError, ValueError) as e:
            raise ConfigError(f"invalid coefficients: {e}", field="beta") from e
    elif merged.get("scenario") is not None:
        scenario = get_scenario(merged["scenario"])
    else:
        raise ConfigError("give a scenario id or a beta matrix", field="scenario")

    values: dict[str, Any] = {"scenario": scenario}
    if merged.get("n") is not None:
        n = merged["n"]
        values["n_values"] = parse_n_values(n if isinstance(n, list) else [n])
    for name in ("reps", "seed", "calc_cohort", "validation_n", "jobs"):
        if merged.get(name) is not None:
            values[name] = _number(merged, name, int)
    return RunConfig(**values)


def load_run_config(path: Path | None, **overrides: Any) -> RunConfig:
    """Read simulation settings, applying command line overrides.

    Args:
        path (Path | None): YAML file, or None for overrides only
        **overrides (Any): Values replacing the file's

    Returns:
        RunConfig: Validated settings
    """
    data = _load_yaml(path) if path is not None else {}
    return run_config_from_dict(data, **overrides)


__all__ = [
    "PairInput",
    "StudyConfig",
    "dump_study_config",
    "load_run_config",
    "load_study_config",
    "parse_n_values",
    "run_config_from_dict",
]
