"""Tests for the command line interface."""

import json

import pytest

from mnsampsize.cli import build_parser, main
from mnsampsize.const import ExitCode

BINARY_ARGS = ["--k", "2", "--q", "5", "--counts", "50", "50", "--fill-nagelkerke"]


def test_no_command_prints_help(capsys) -> None:
    assert main([]) == ExitCode.NO_COMMAND

    assert "samplesize" in capsys.readouterr().out


@pytest.mark.parametrize(
    "argv",
    [["samplesize"], ["cstat2rsq", "--c", "0.8"], ["simulate", "1"], ["scenarios"]],
)
def test_parser_knows_every_command(argv) -> None:
    args = build_parser().parse_args(argv)

    assert args.command == argv[0]


def test_scenarios_json(capsys) -> None:
    assert main(["--json", "scenarios"]) == ExitCode.OK

    data = json.loads(capsys.readouterr().out)
    assert len(data["scenarios"]) == 12
    assert data["scenarios"][6]["beta"][0][1] == 1.0


def test_global_options_after_the_command() -> None:
    args = build_parser().parse_args(
        ["scenarios", "--json", "--seed", "3", "--debug", "--out", "results"]
    )

    assert args.json
    assert args.seed == 3
    assert args.debug
    assert str(args.out) == "results"


def test_global_options_before_the_command_are_kept() -> None:
    args = build_parser().parse_args(
        ["--json", "--seed", "5", "samplesize", "--q", "8"]
    )

    assert args.json
    assert args.seed == 5
    assert args.config is None
    assert not args.debug


def test_scenarios_json_after_the_command(capsys) -> None:
    assert main(["scenarios", "--json"]) == ExitCode.OK

    data = json.loads(capsys.readouterr().out)
    assert len(data["scenarios"]) == 12


def test_samplesize_config_after_the_command(capsys, config_dir) -> None:
    config = str(config_dir / "adnex_r2.yaml")

    code = main(["samplesize", "--config", config, "--json", "--q", "8"])

    assert code == ExitCode.OK
    data = json.loads(capsys.readouterr().out)
    assert data["inputs"]["q_parameters"] == 8


def test_scenarios_text(capsys) -> None:
    assert main(["scenarios"]) == ExitCode.OK

    out = capsys.readouterr().out
    assert "scenario_12" in out
    assert out.count("3 vs 1") == 12


def test_samplesize_tumour_config(capsys, tmp_path, config_dir) -> None:
    config = str(config_dir / "adnex_r2.yaml")

    code = main(["--config", config, "--json", "--out", str(tmp_path), "samplesize"])

    assert code == ExitCode.OK
    data = json.loads(capsys.readouterr().out)
    assert data["n_final"] == pytest.approx(13063, rel=5e-3)
    assert data["criteria"]["i"]["binding_pair"] == [5, 3]
    written = json.loads((tmp_path / "samplesize.json").read_text())
    assert written == data


def test_samplesize_flags_override_config(capsys, config_dir) -> None:
    config = str(config_dir / "adnex_r2.yaml")

    code = main(["--config", config, "--json", "samplesize", "--q", "8"])

    assert code == ExitCode.OK
    data = json.loads(capsys.readouterr().out)
    assert data["inputs"]["q_parameters"] == 8


def test_samplesize_from_flags_text(capsys) -> None:
    assert main(["samplesize", *BINARY_ARGS]) == ExitCode.OK

    out = capsys.readouterr().out
    assert out.startswith("Minimum sample size:")
    assert "{2,1}" in out


def test_samplesize_missing_inputs_is_config_error() -> None:
    assert main(["samplesize", "--k", "3"]) == ExitCode.INVALID_CONFIG


def test_samplesize_unreadable_config_is_config_error(tmp_path) -> None:
    code = main(["--config", str(tmp_path / "missing.yaml"), "samplesize"])

    assert code == ExitCode.INVALID_CONFIG


def test_samplesize_unreachable_shrinkage_is_infeasible(caplog) -> None:
    code = main(["samplesize", *BINARY_ARGS, "--shrinkage", "0.05"])

    assert code == ExitCode.INFEASIBLE
    assert "{2,1}" in caplog.text


def test_samplesize_unwritable_output_is_io_failure(tmp_path) -> None:
    blocker = tmp_path / "blocker"
    blocker.write_text("")

    code = main(["--out", str(blocker), "samplesize", *BINARY_ARGS])

    assert code == ExitCode.IO_FAILURE


def test_cstat2rsq(capsys) -> None:
    code = main(
        ["--json", "--seed", "5", "cstat2rsq", "--c", "0.8", "--phi", "0.3",
         "--sim-size", "20000"]
    )  # fmt: skip

    assert code == ExitCode.OK
    data = json.loads(capsys.readouterr().out)
    assert data["settings"]["c"] == 0.8
    assert data["settings"]["seed"] == 5
    assert 0.0 < data["r2_cs"] < 0.5


def test_cstat2rsq_from_pair_counts(capsys) -> None:
    code = main(
        ["cstat2rsq", "--c", "0.75", "--pair-counts", "120", "280",
         "--sim-size", "20000"]
    )  # fmt: skip

    assert code == ExitCode.OK
    assert "target phi = 0.3000" in capsys.readouterr().out


def test_cstat2rsq_needs_prevalence() -> None:
    assert main(["cstat2rsq", "--c", "0.8"]) == ExitCode.INVALID_CONFIG


def test_simulate_writes_csv(capsys, tmp_path) -> None:
    code = main(
        ["--json", "--seed", "3", "--out", str(tmp_path), "simulate", "1",
         "--n", "300", "--reps", "2", "--calc-cohort", "20000",
         "--validation-n", "10000", "--jobs", "1"]
    )  # fmt: skip

    assert code == ExitCode.OK
    data = json.loads(capsys.readouterr().out)
    assert data["n_values"] == [300]
    assert (tmp_path / "scenario_1_replicates.csv").exists()
    assert (tmp_path / "scenario_1_summary.csv").exists()


def test_simulate_unknown_scenario() -> None:
    assert main(["simulate", "99"]) == ExitCode.INVALID_CONFIG


def test_simulate_needs_a_scenario() -> None:
    assert main(["simulate", "--reps", "2"]) == ExitCode.INVALID_CONFIG
