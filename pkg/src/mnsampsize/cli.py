"""Command line interface for mnsampsize."""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any

from mnsampsize.config import load_run_config, load_study_config
from mnsampsize.const import CSTAT_DEFAULT_SEED, CSTAT_SIM_SIZE, LP_MODELS, ExitCode
from mnsampsize.cstat_rsq import estimate_rsq_from_cstat
from mnsampsize.exceptions import (
    ConfigError,
    DomainError,
    IncompleteSpecificationError,
    InfeasibleTargetError,
    MnSampSizeError,
    StudyIOError,
)
from mnsampsize.models import CStatSpec, PairPrevalence
from mnsampsize.report import (
    cstat_text,
    render_json,
    samplesize_text,
    scenarios_dict,
    scenarios_text,
    study_text,
)
from mnsampsize.simstudy import SCENARIOS, run_study
from mnsampsize.workflow import run_samplesize

logger = logging.getLogger("mnsampsize")


def setup_logging(debug: bool = False) -> None:
    """Set up logging configuration.

    Args:
        debug (bool): Whether to enable debug logging
    """
    level = logging.DEBUG if debug else logging.INFO
    logging.basicConfig(
        level=level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s"
        if debug
        else "%(message)s",
        stream=sys.stderr,
    )
    logger.setLevel(level)

    if debug:
        logging.getLogger("joblib").setLevel(logging.INFO)
        logger.debug("Debug logging enabled")


def _write_report(out_dir: Path | None, name: str, text: str) -> None:
    if out_dir is None:
        return
    path = Path(out_dir) / name
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text + "\n", encoding="utf-8")
    except OSError as e:
        raise StudyIOError(f"Could not write report ({e.strerror})", str(path)) from e
    logger.info(f"Wrote report to {path}")


def _emit(data: dict[str, Any], text: str, args: argparse.Namespace, name: str) -> None:
    json_text = render_json(data)
    print(json_text if args.json else text)
    _write_report(args.out, name, json_text)


def cmd_samplesize(args: argparse.Namespace) -> None:
    """Run the three sample size criteria.

    Args:
        args (argparse.Namespace): Parsed command line
    """
    config = load_study_config(
        args.config,
        fill_nagelkerke=args.fill_nagelkerke,
        k_categories=args.k,
        q_parameters=args.q,
        counts=args.counts,
        proportions=args.proportions,
        shrinkage=args.shrinkage,
        r2_cs_adj=args.r2_cs_adj,
        delta2=args.delta2,
        delta3=args.delta3,
        alpha=args.alpha,
        seed=args.seed,
        sim_size=args.sim_size,
        lp_model=args.lp_model,
        normalize=args.normalize,
    )
    report = run_samplesize(config)
    _emit(report.to_dict(), samplesize_text(report), args, "samplesize.json")


def cmd_cstat2rsq(args: argparse.Namespace) -> None:
    """Convert a C-statistic to a Cox-Snell R².

    Args:
        args (argparse.Namespace): Parsed command line
    """
    if args.pair_counts is not None:
        phi = PairPrevalence.from_counts(*args.pair_counts)
    elif args.phi is not None:
        phi = PairPrevalence(args.phi)
    else:
        raise ConfigError("give --phi or --pair-counts", field="phi")
    spec = CStatSpec(
        c=args.c,
        phi=phi,
        sim_size=args.sim_size,
        seed=args.seed if args.seed is not None else CSTAT_DEFAULT_SEED,
        lp_model=args.lp_model,
    )
    estimate = estimate_rsq_from_cstat(spec)
    _emit(estimate.to_dict(), cstat_text(estimate), args, "cstat2rsq.json")


def cmd_simulate(args: argparse.Namespace) -> None:
    """Run the shrinkage simulation study for one scenario.

    Args:
        args (argparse.Namespace): Parsed command line
    """
    config = load_run_config(
        args.spec_file or args.config,
        scenario=args.scenario,
        n=args.n,
        reps=args.reps,
        seed=args.seed,
        calc_cohort=args.calc_cohort,
        validation_n=args.validation_n,
        jobs=args.jobs,
    )
    result = run_study(config, args.out)
    print(render_json(result.to_dict()) if args.json else study_text(result))


def cmd_scenarios(args: argparse.Namespace) -> None:
    """List the scenario catalog.

    Args:
        args (argparse.Namespace): Parsed command line
    """
    catalog = list(SCENARIOS.values())
    if args.json:
        print(render_json(scenarios_dict(catalog)))
    else:
        print(scenarios_text(catalog))


def _global_options(suppress: bool = False) -> argparse.ArgumentParser:
    """Options accepted before and after the subcommand.

    Args:
        suppress (bool): Leave unset options out of the namespace so a
            subcommand copy does not overwrite values given before it

    Returns:
        argparse.ArgumentParser: Parent parser holding the shared options
    """
    flag = argparse.SUPPRESS if suppress else False
    value = argparse.SUPPRESS if suppress else None
    options = argparse.ArgumentParser(add_help=False)
    options.add_argument(
        "--debug", action="store_true", default=flag, help="Enable debug logging"
    )
    options.add_argument(
        "--config", type=Path, default=value, help="YAML configuration file"
    )
    options.add_argument("--seed", type=int, default=value, help="Seed for simulations")
    options.add_argument(
        "--json", action="store_true", default=flag, help="Output as JSON"
    )
    options.add_argument(
        "--out", type=Path, default=value, help="Directory for output files"
    )
    return options


def build_parser() -> argparse.ArgumentParser:
    """Build the argument parser.

    Returns:
        argparse.ArgumentParser: Parser with all subcommands
    """
    parser = argparse.ArgumentParser(
        description="Minimum sample size for multinomial logistic prediction models",
        parents=[_global_options()],
    )
    shared = [_global_options(suppress=True)]

    subparsers = parser.add_subparsers(dest="command", help="Command to execute")

    size = subparsers.add_parser(
        "samplesize",
        help="Minimum sample size from the three criteria",
        parents=shared,
    )
    size.add_argument("--k", type=int, help="Number of outcome categories")
    size.add_argument("--q", type=int, help="Predictor parameters per sub-model")
    outcome = size.add_mutually_exclusive_group()
    outcome.add_argument(
        "--proportions", type=float, nargs="+", help="Anticipated proportions"
    )
    outcome.add_argument("--counts", type=int, nargs="+", help="Category counts")
    size.add_argument("--shrinkage", type=float, help="Shrinkage target")
    size.add_argument(
        "--r2-cs-adj", type=float, help="Overall adjusted Cox-Snell R²"
    )
    size.add_argument("--delta2", type=float, help="Criterion (ii) margin")
    size.add_argument("--delta3", type=float, help="Criterion (iii) margin")
    size.add_argument("--alpha", type=float, help="Criterion (iii) error rate")
    size.add_argument(
        "--fill-nagelkerke",
        action="store_true",
        help="Use the Nagelkerke fallback for pairs without an R² source",
    )
    size.add_argument(
        "--normalize",
        action="store_true",
        default=None,
        help="Rescale proportions that do not sum to one",
    )
    size.add_argument("--lp-model", choices=LP_MODELS, help="C-statistic model")
    size.add_argument("--sim-size", type=int, help="C-statistic simulation size")

    cstat = subparsers.add_parser(
        "cstat2rsq", help="Cox-Snell R² implied by a C-statistic", parents=shared
    )
    cstat.add_argument("--c", type=float, required=True, help="C-statistic")
    prevalence = cstat.add_mutually_exclusive_group()
    prevalence.add_argument("--phi", type=float, help="Outcome prevalence")
    prevalence.add_argument(
        "--pair-counts",
        type=int,
        nargs=2,
        metavar=("E_K", "E_R"),
        help="Counts of the two categories of the pair",
    )
    cstat.add_argument("--sim-size", type=int, default=CSTAT_SIM_SIZE)
    cstat.add_argument("--lp-model", choices=LP_MODELS, default="logistic_normal")

    simulate = subparsers.add_parser(
        "simulate",
        help="Shrinkage simulation study for one scenario",
        parents=shared,
    )
    simulate.add_argument("scenario", nargs="?", help="Catalog scenario id")
    simulate.add_argument("--spec-file", type=Path, help="Simulation YAML file")
    simulate.add_argument(
        "--n", nargs="+", help="Development sizes, integers or N_MN / N_DL"
    )
    simulate.add_argument("--reps", type=int, help="Replicates per size")
    simulate.add_argument("--calc-cohort", type=int, help="Cohort for N_MN / N_DL")
    simulate.add_argument("--validation-n", type=int, help="Validation cohort size")
    simulate.add_argument("--jobs", type=int, help="Parallel workers")

    subparsers.add_parser(
        "scenarios", help="List the simulation scenarios", parents=shared
    )
    return parser


_COMMANDS = {
    "samplesize": cmd_samplesize,
    "cstat2rsq": cmd_cstat2rsq,
    "simulate": cmd_simulate,
    "scenarios": cmd_scenarios,
}


def main(argv: list[str] | None = None) -> int:
    """Main entry point for the CLI application.

    Args:
        argv (list[str] | None): Arguments, defaults to sys.argv

    Returns:
        int: Process exit code
    """
    parser = build_parser()
    args = parser.parse_args(argv)

    setup_logging(args.debug)

    if not args.command:
        parser.print_help()
        return ExitCode.NO_COMMAND

    try:
        _COMMANDS[args.command](args)
    except (ConfigError, DomainError, IncompleteSpecificationError) as e:
        logger.error(e)
        return ExitCode.INVALID_CONFIG
    except InfeasibleTargetError as e:
        logger.error(e)
        return ExitCode.INFEASIBLE
    except StudyIOError as e:
        logger.error(e)
        return ExitCode.IO_FAILURE
    except MnSampSizeError as e:
        logger.error(e, exc_info=args.debug)
        return ExitCode.COMPUTATION
    return ExitCode.OK


if __name__ == "__main__":
    sys.exit(main())
