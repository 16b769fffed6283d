"""Catalog of generating models for the shrinkage simulation study."""

from dataclasses import dataclass
from typing import Any

import numpy as np

from mnsampsize.exceptions import ConfigError, UnknownScenarioError

SMALL_EFFECTS_2 = (0.5, -0.25, -0.125, 0.25, 0.375)
SMALL_EFFECTS_3 = (0.375, -0.5, -0.25, -0.375, 0.125)

_INTERCEPTS_2 = (
    0.0, 0.0, -0.35, -0.4, -0.53, -2.9,
    0.0, 0.0, -0.4, -0.5, -0.65, -3.5,
)  # fmt: skip
_INTERCEPTS_3 = (
    0.0, -0.75, -0.85, -1.7, -2.4, -2.9,
    -1.0, -1.0, -1.0, -2.0, -2.85, -3.5,
)  # fmt: skip
_FREQS = (
    (0.33, 0.33, 0.33),
    (0.40, 0.40, 0.19),
    (0.45, 0.33, 0.21),
    (0.52, 0.36, 0.11),
    (0.58, 0.36, 0.06),
    (0.88, 0.06, 0.06),
    (0.33, 0.33, 0.34),
    (0.40, 0.40, 0.19),
    (0.45, 0.33, 0.21),
    (0.52, 0.36, 0.11),
    (0.58, 0.36, 0.06),
    (0.88, 0.06, 0.06),
)


@dataclass(slots=True, frozen=True)
class ScenarioSpec:
    """Generating coefficients of a three-category outcome on five covariates.

    Row j of ``beta`` holds (intercept, slopes 1..5) of the sub-model for
    category j + 2 against category 1.
    """

    scenario_id: int
    label: str
    beta: tuple[tuple[float, ...], tuple[float, ...]]
    expected_freqs: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        """Validate the coefficient matrix.

        Raises:
            ConfigError: If beta is not a finite 2 x 6 matrix
        """
        matrix = np.asarray(self.beta, dtype=float)
        if matrix.shape != (2, 6):
            raise ConfigError(f"beta must be 2 x 6, got {matrix.shape}", field="beta")
        if not np.all(np.isfinite(matrix)):
            raise ConfigError("beta must be finite", field="beta")

    @property
    def beta_matrix(self) -> np.ndarray:
        """Coefficients as an array.

        Returns:
            np.ndarray: 2 x 6 matrix
        """
        return np.asarray(self.beta, dtype=float)

    @classmethod
    def custom(
        cls, beta: list[list[float]], label: str = "custom"
    ) -> "ScenarioSpec":
        """Build a scenario outside the catalog.

        Args:
            beta (list[list[float]]): 2 x 6 coefficients
            label (str): Scenario label used in outputs

        Returns:
            ScenarioSpec: Scenario with id 0
        """
        rows = tuple(tuple(float(v) for v in row) for row in beta)
        if len(rows) != 2:
            raise ConfigError(f"beta must have 2 rows, got {len(rows)}", field="beta")
        return cls(0, label, (rows[0], rows[1]))

    def __str__(self) -> str:
        """Readable form of the scenario.

        Returns:
            str: Label with expected frequencies
        """
        freqs = " / ".join(f"{f:.0%}" for f in self.expected_freqs)
        return f"{self.label}: {freqs}" if freqs else self.label

    def to_dict(self) -> dict[str, Any]:
        """Convert to a dictionary for JSON serialization.

        Returns:
            dict[str, Any]: Dictionary representation of the scenario
        """
        return {
            "scenario_id": self.scenario_id,
            "label": self.label,
            "beta": [list(row) for row in self.beta],
            "expected_freqs": list(self.expected_freqs),
        }


def _build_catalog() -> dict[int, ScenarioSpec]:
    catalog = {}
    for index in range(12):
        scale = 1.0 if index < 6 else 2.0
        row2 = (_INTERCEPTS_2[index], *(scale * b for b in SMALL_EFFECTS_2))
        row3 = (_INTERCEPTS_3[index], *(scale * b for b in SMALL_EFFECTS_3))
        scenario_id = index + 1
        catalog[scenario_id] = ScenarioSpec(
            scenario_id=scenario_id,
            label=f"scenario_{scenario_id}",
            beta=(row2, row3),
            expected_freqs=_FREQS[index],
        )
    return catalog


SCENARIOS: dict[int, ScenarioSpec] = _build_catalog()


def get_scenario(scenario_id: int | str) -> ScenarioSpec:
    """Look up a catalog scenario.

    Args:
        scenario_id (int | str): Scenario number 1..12

    Returns:
        ScenarioSpec: The catalog entry

    Raises:
        UnknownScenarioError: If the id is not in the catalog
    """
    try:
        return SCENARIOS[int(scenario_id)]
    except (KeyError, ValueError) as e:
        raise UnknownScenarioError(
            f"Unknown scenario {scenario_id!r}, expected 1..{len(SCENARIOS)}",
            field="scenario",
        ) from e
