"""Text and JSON rendering of mnsampsize results.

Both renderings of a result are built from its ``to_dict()`` form, so they
carry the same numbers.
"""

import json
from collections.abc import Iterable
from typing import Any

from mnsampsize.const import REPORT_SCHEMA_VERSION
from mnsampsize.models import CStatEstimate, SampleSizeReport
from mnsampsize.simstudy.engine import StudyResult
from mnsampsize.simstudy.scenarios import ScenarioSpec

_CRITERIA = {1: "i", 2: "ii", 3: "iii"}


def _fmt(value: float | None, digits: int = 4) -> str:
    return "-" if value is None else f"{value:.{digits}f}"


def render_json(data: dict[str, Any]) -> str:
    """Render a result dictionary as indented JSON.

    Args:
        data (dict[str, Any]): Output of a ``to_dict()`` method

    Returns:
        str: JSON text
    """
    return json.dumps(data, indent=2)


def samplesize_text(report: SampleSizeReport) -> str:
    """Render a sample size report as a table.

    Args:
        report (SampleSizeReport): Result of a sample size calculation

    Returns:
        str: Multi-line text report
    """
    data = report.to_dict()
    crit = data["criteria"]
    lines = [
        f"Minimum sample size: {data['n_final']} "
        f"(criterion {_CRITERIA[data['binding_criterion']]})",
        "",
        "Criterion (i): shrinkage in every distinct logistic pair",
    ]
    one = crit["i"]
    if "pairs" in one:
        lines.append(
            f"  {'pair':<7}{'R2_CS_adj':>10}{'source':>13}{'S':>6}{'p_pair':>8}"
            f"{'m_raw':>12}{'m':>7}{'n_raw':>12}{'n':>7}{'S at n':>8}"
        )
        for pair in one["pairs"]:
            k, r = pair["pair"]
            lines.append(
                f"  {f'{{{k},{r}}}':<7}{_fmt(pair['r2_cs_adj']):>10}"
                f"{pair['r2_source']:>13}{pair['shrinkage_target']:>6.2f}"
                f"{_fmt(pair['p_pair']):>8}{_fmt(pair['events_raw'], 3):>12}"
                f"{pair['events']:>7}{_fmt(pair['n_raw'], 3):>12}{pair['n']:>7}"
                f"{_fmt(pair['shrinkage_at_final'], 3):>8}"
            )
            if pair["cstat"] is not None:
                cs = pair["cstat"]
                lines.append(
                    f"         C = {cs['settings']['c']} (achieved "
                    f"{_fmt(cs['achieved_c'])}, phi {_fmt(cs['achieved_phi'])}, "
                    f"{cs['settings']['lp_model']}, seed {cs['settings']['seed']})"
                )
        k, r = one["binding_pair"]
        lines.append(f"  n = {one['n']} (binding pair {{{k},{r}}})")
    else:
        lines.append(f"  n = {one['n']}")

    two = crit["ii"]
    lines += ["", "Criterion (ii): small optimism in Nagelkerke R²"]
    if "n_raw" in two:
        lines.append(
            f"  R2_CS_adj = {_fmt(two['r2_cs_adj'])}, "
            f"max R2_CS = {_fmt(two['max_r2_cs'])}, delta = {two['delta']}, "
            f"S bound = {_fmt(two['shrinkage_bound'])}"
        )
        lines.append(f"  n = {two['n']} (raw {_fmt(two['n_raw'], 3)})")
    else:
        lines.append(f"  n = {two['n']}")

    three = crit["iii"]
    lines += ["", "Criterion (iii): precise overall risk per category"]
    if "per_category" in three:
        lines.append(
            f"  chi2 = {_fmt(three['chi2'])}, delta = {three['delta']}, "
            f"alpha = {three['alpha']}"
        )
        for index, (n_k, raw) in enumerate(
            zip(three["per_category"], three["per_category_raw"], strict=True), 1
        ):
            lines.append(f"  category {index}: n = {n_k} (raw {_fmt(raw, 3)})")
        if three["degenerate_categories"]:
            lines.append(
                f"  degenerate categories: {three['degenerate_categories']}"
            )
    lines.append(f"  n = {three['n']}")

    if data["expected_events"]:
        events = ", ".join(str(e) for e in data["expected_events"])
        n_final = data["n_final"]
        lines += ["", f"Expected events per category at n = {n_final}: {events}"]
    if data["direct_multinomial"] is not None:
        direct = data["direct_multinomial"]
        lines.append(
            f"Direct multinomial criterion (diagnostic): n = {direct['n']} "
            f"(raw {_fmt(direct['n_raw'], 3)}, {direct['params']} parameters)"
        )
    if data["epv"]:
        epv = ", ".join(f"EPV {level}: {n}" for level, n in data["epv"].items())
        lines.append(f"Events-per-variable sizes: {epv}")
    return "\n".join(lines)


def cstat_text(estimate: CStatEstimate) -> str:
    """Render a C-statistic conversion.

    Args:
        estimate (CStatEstimate): Conversion result

    Returns:
        str: Multi-line text report
    """
    data = estimate.to_dict()
    settings = data["settings"]
    params = ", ".join(f"{k} = {_fmt(v)}" for k, v in data["parameters"].items())
    return "\n".join(
        [
            f"R2_CS = {_fmt(data['r2_cs'])} (LR = {_fmt(data['lr'], 2)})",
            f"target C = {settings['c']}, achieved C = {_fmt(data['achieved_c'])}",
            f"target phi = {_fmt(settings['phi'])}, "
            f"achieved phi = {_fmt(data['achieved_phi'])}",
            f"{settings['lp_model']}: {params}",
            f"{settings['sim_size']} simulated subjects, seed {settings['seed']}",
        ]
    )


def study_text(result: StudyResult) -> str:
    """Render the console summary of a simulation study.

    Args:
        result (StudyResult): Study result

    Returns:
        str: Required sizes and median shrinkage per development size
    """
    data = result.to_dict()
    lines = [
        str(result.scenario),
        f"N_MN = {data['n_mn']['n']} (raw {_fmt(data['n_mn']['raw'], 2)}), "
        f"N_DL = {data['n_dl']['n']} (raw {_fmt(data['n_dl']['raw'], 2)})",
    ]
    for summary in result.summaries:
        lines.append(
            f"N = {summary.n}: {summary.n_converged} replicates "
            f"({summary.n_excluded} excluded)"
        )
        for name, stats in summary.estimands.items():
            lines.append(
                f"  {name:<11} median {_fmt(stats.median, 3)}  "
                f"[{_fmt(stats.percentile(2.5), 3)}, "
                f"{_fmt(stats.percentile(97.5), 3)}]  mean {_fmt(stats.mean, 3)}"
            )
    lines += [f"Wrote {path}" for path in data["files"]]
    return "\n".join(lines)


def scenarios_dict(scenarios: Iterable[ScenarioSpec]) -> dict[str, Any]:
    """Collect catalog scenarios for JSON output.

    Args:
        scenarios (Iterable[ScenarioSpec]): Scenarios to list

    Returns:
        dict[str, Any]: Versioned list of scenario dictionaries
    """
    return {
        "schema_version": REPORT_SCHEMA_VERSION,
        "scenarios": [spec.to_dict() for spec in scenarios],
    }


def scenarios_text(scenarios: Iterable[ScenarioSpec]) -> str:
    """Render the scenario catalog.

    Args:
        scenarios (Iterable[ScenarioSpec]): Scenarios to list

    Returns:
        str: One block per scenario with both coefficient rows
    """
    lines = []
    for spec in scenarios:
        lines.append(str(spec))
        for category, row in enumerate(spec.beta, 2):
            coefs = " ".join(f"{v:>7.3f}" for v in row)
            lines.append(f"  {category} vs 1: {coefs}")
    return "\n".join(lines)
