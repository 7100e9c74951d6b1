"""Main entry point for the cutlab command-line tool."""

import sys
import time
import logging
from typing import Dict, Optional, Sequence

import numpy as np
import psutil

from compiler.manager import CompilerManager
from config.manager import ConfigurationManager
from flip.manager import EnumerationManager, FlipManager
from formats.manager import FormatManager, ReportManager
from gadget.manager import GadgetManager, VerificationManager
from models import BiaserAttestation, CompileMode, CutLabError, LabSettings, LogLevel, Partition, PivotRule
from smoothed.manager import SmoothedManager
from state import StateManager
import constants

logger = logging.getLogger(__name__)

LOG_LEVELS = {
    LogLevel.DEBUG: logging.DEBUG,
    LogLevel.INFO: logging.INFO,
    LogLevel.WARNING: logging.WARNING,
    LogLevel.ERROR: logging.ERROR,
}


def configure_logging(settings: LabSettings, verbose: bool = False, quiet: bool = False):
    level = LOG_LEVELS[settings.log_level]
    if verbose:
        level = logging.DEBUG
    elif quiet:
        level = logging.WARNING
    # stdout carries the reports
    logging.basicConfig(
        level=level,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=[
            logging.StreamHandler(sys.stderr)
        ],
        force=True,
    )


def _degree_rule(text: str) -> str:
    """argparse type for --degree: log, cubic or a positive integer"""
    import argparse
    if text in constants.DEGREE_RULES or (text.isdigit() and int(text) >= 1):
        return text
    raise argparse.ArgumentTypeError(constants.ERROR_DEGREE_RULE.format(value=text))


def _non_negative(text: str) -> int:
    import argparse
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(constants.ERROR_STEP_LIMIT.format(limit=value))
    return value


def build_parser():
    import argparse
    parser = argparse.ArgumentParser(
        prog=constants.APP_NAME,
        description=constants.APP_DESCRIPTION,
        epilog="Node ids in files, arguments and reports are 1-based.",
    )
    parser.add_argument("--version", action="version", version=f"{constants.APP_NAME} {constants.APP_VERSION}")
    parser.add_argument("--settings", metavar="PATH", help="JSON settings file (created with defaults if missing)")
    noise = parser.add_mutually_exclusive_group()
    noise.add_argument("--verbose", action="store_true", help="log at DEBUG level")
    noise.add_argument("--quiet", action="store_true", help="log warnings and errors only")
    commands = parser.add_subparsers(dest="command", required=True)
    rules = [rule.value for rule in PivotRule]

    compile_cmd = commands.add_parser("compile", help="compile a circuit into a Max-Cut graph")
    compile_cmd.add_argument("--circuit", required=True, metavar="FILE")
    compile_cmd.add_argument("--mode", choices=[mode.value for mode in CompileMode], default=CompileMode.CVP.value)
    compile_cmd.add_argument("--assignment", metavar="BITS", help="input bits X_1..X_n (cvp mode)")
    compile_cmd.add_argument("--exponents", action="store_true", help="write power-of-two weights as x lines")
    compile_cmd.add_argument("--out", metavar="FILE")

    flip_cmd = commands.add_parser("flip", help="run FLIP local search")
    flip_cmd.add_argument("--graph", required=True, metavar="FILE")
    flip_cmd.add_argument("--start", default="random", help="random, zeros or a partition file")
    flip_cmd.add_argument("--rule", choices=rules, default=PivotRule.FIRST.value)
    flip_cmd.add_argument("--seed", type=int, default=constants.DEFAULT_SEED)
    flip_cmd.add_argument("--step-limit", type=_non_negative)
    flip_cmd.add_argument("--out", metavar="FILE")

    check_cmd = commands.add_parser("check", help="local-optimum verdict for a partition")
    check_cmd.add_argument("--graph", required=True, metavar="FILE")
    check_cmd.add_argument("--partition", required=True, metavar="FILE")
    check_cmd.add_argument("--out", metavar="FILE")

    enumerate_cmd = commands.add_parser("enumerate", help="list every local optimum")
    enumerate_cmd.add_argument("--graph", required=True, metavar="FILE")
    enumerate_cmd.add_argument("--pin", action="append", default=[], metavar="ID=C")
    enumerate_cmd.add_argument("--out", metavar="FILE")

    degrade_cmd = commands.add_parser("degrade", help="replace a comparing node by its degree-five gadget")
    degrade_cmd.add_argument("--graph", required=True, metavar="FILE")
    degrade_cmd.add_argument("--node", required=True, type=int, metavar="ID")
    degrade_cmd.add_argument("--biaser", type=int, metavar="ID", help="neighbor attested as the biaser")
    degrade_cmd.add_argument("--exponents", action="store_true")
    degrade_cmd.add_argument("--out", metavar="FILE")

    verify_cmd = commands.add_parser("verify-theorem1", help="exhaustively check the degradation on a star")
    verify_cmd.add_argument("--m", type=int, required=True, choices=range(1, constants.VERIFY_MAX_M + 1))
    verify_cmd.add_argument("--delta", type=int, default=1)
    verify_cmd.add_argument("--out", metavar="FILE")

    smooth_cmd = commands.add_parser("smooth", help="smoothed FLIP experiment")
    smooth_cmd.add_argument("--sizes", type=int, nargs="+", default=constants.DEFAULT_SIZES)
    smooth_cmd.add_argument("--sigmas", type=float, nargs="+", default=[constants.DEFAULT_SIGMA])
    smooth_cmd.add_argument("--trials", type=int, default=constants.DEFAULT_TRIALS)
    smooth_cmd.add_argument("--rules", nargs="+", choices=rules, default=[PivotRule.RANDOM.value])
    smooth_cmd.add_argument("--degree", type=_degree_rule, default="log", help="log, cubic or a fixed degree")
    smooth_cmd.add_argument("--quantile-constant", type=float, help="c' in the step-count quantile bound")
    smooth_cmd.add_argument("--n-power", type=float, help="exponent of n in the quantile bound")
    smooth_cmd.add_argument("--sigma-power", type=float, help="exponent of 1/sigma in the quantile bound")
    smooth_cmd.add_argument("--seed", type=int, default=constants.DEFAULT_SEED)
    smooth_cmd.add_argument("--timing", action="store_true", help="record wall-clock time and memory")
    smooth_cmd.add_argument("--out", metavar="FILE")

    claim_cmd = commands.add_parser("claim17", help="Monte Carlo check of the Gaussian window bound")
    claim_cmd.add_argument("--k", type=int, nargs="+", default=[1, 2, 4, 8])
    claim_cmd.add_argument("--delta-prime", type=float, nargs="+", default=[0.2, 0.5])
    claim_cmd.add_argument("--samples", type=int, default=100_000)
    claim_cmd.add_argument("--c", type=float)
    claim_cmd.add_argument("--a", type=float, default=0.0)
    claim_cmd.add_argument("--sigma", type=float, default=constants.DEFAULT_SIGMA)
    claim_cmd.add_argument("--seed", type=int, default=constants.DEFAULT_SEED)
    claim_cmd.add_argument("--out", metavar="FILE")

    cubic_cmd = commands.add_parser("cubic-bench", help="FLIP step counts on random cubic graphs")
    cubic_cmd.add_argument("--sizes", type=int, nargs="+", default=constants.DEFAULT_CUBIC_SIZES)
    cubic_cmd.add_argument("--starts", type=int, default=constants.DEFAULT_CUBIC_STARTS)
    cubic_cmd.add_argument("--rule", choices=rules, default=PivotRule.RANDOM.value)
    cubic_cmd.add_argument("--max-weight", type=int, default=constants.DEFAULT_CUBIC_MAX_WEIGHT)
    cubic_cmd.add_argument("--seed", type=int, default=constants.DEFAULT_SEED)
    cubic_cmd.add_argument("--out", metavar="FILE")
    return parser


def _read(path: str) -> str:
    with open(path, 'r', encoding='utf-8') as f:
        return f.read()


def _emit(text: str, out: Optional[str] = None):
    if out:
        StateManager.save_text(text, out)
    else:
        sys.stdout.write(text)


def _emit_report(report: Dict[str, object], out: Optional[str] = None):
    if out:
        StateManager.save_report(report, out)
    else:
        sys.stdout.write(StateManager.dump_report(report))


def run_compile(args, settings: LabSettings) -> int:
    circuit = FormatManager.parse_circuit(_read(args.circuit))
    if args.mode == CompileMode.CVP.value:
        assignment = FormatManager.parse_partition(args.assignment, circuit.n_inputs).colors
        compiled = CompilerManager.compile_cvp(circuit, assignment)
    else:
        compiled = CompilerManager.compile_looker(circuit)
    text = FormatManager.emit_graph(compiled.graph, exponents=args.exponents)
    if not args.out:
        _emit(text)
        return 0
    _emit(text, args.out)
    StateManager.save_report(ReportManager.role_map(compiled), args.out + constants.ROLE_MAP_SUFFIX)
    _emit_report(ReportManager.compile_summary(compiled))
    return 0


def run_flip(args, settings: LabSettings) -> int:
    g = FormatManager.parse_graph(_read(args.graph))
    if args.start == "random":
        rng = np.random.default_rng([args.seed, 1])
        start = Partition(tuple(int(c) for c in rng.integers(0, 2, size=g.node_count)))
    elif args.start == "zeros":
        start = Partition((0,) * g.node_count)
    else:
        start = FormatManager.parse_partition(_read(args.start), g.node_count)
    trace = FlipManager.run_flip(g, start, PivotRule(args.rule), args.step_limit, args.seed)
    _emit_report(ReportManager.trace(g, trace), args.out)
    return 0


def run_check(args, settings: LabSettings) -> int:
    g = FormatManager.parse_graph(_read(args.graph))
    p = FormatManager.parse_partition(_read(args.partition), g.node_count)
    _emit_report(ReportManager.check(g, p), args.out)
    return 0


def run_enumerate(args, settings: LabSettings) -> int:
    g = FormatManager.parse_graph(_read(args.graph))
    pins = dict(FormatManager.parse_pin(text) for text in args.pin)
    if pins:
        optima = EnumerationManager.pinned_local_optima(g, pins, settings.enumeration_cap)
    else:
        optima = EnumerationManager.enumerate_local_optima(g, settings.enumeration_cap)
    _emit_report(ReportManager.optima(optima, pins), args.out)
    return 0


def run_degrade(args, settings: LabSettings) -> int:
    g = FormatManager.parse_graph(_read(args.graph))
    attestation = BiaserAttestation(node=args.biaser - 1) if args.biaser else None
    spec = GadgetManager.comparing_spec(g, args.node - 1, attestation)
    dg = GadgetManager.degrade(g, spec)
    text = FormatManager.emit_graph(dg.graph, exponents=args.exponents)
    if not args.out:
        _emit(text)
        return 0
    _emit(text, args.out)
    node_map = ReportManager.node_map(dg)
    StateManager.save_report(node_map, args.out + constants.NODE_MAP_SUFFIX)
    _emit_report(node_map)
    return 0


def run_verify(args, settings: LabSettings) -> int:
    workers = ConfigurationManager.resolve_workers(settings.max_workers)
    report = VerificationManager.verify_theorem1(args.m, args.delta, workers)
    _emit_report(ReportManager.verification(report), args.out)
    return 0 if report.passed else 1


def run_smooth(args, settings: LabSettings) -> int:
    config = ConfigurationManager.experiment_config(
        settings, args.sizes, args.sigmas, args.trials,
        [PivotRule(rule) for rule in args.rules], args.seed, args.degree,
        args.quantile_constant, args.n_power, args.sigma_power)
    started = time.perf_counter()
    report = ReportManager.smoothed(SmoothedManager.experiment(config))
    if args.timing:
        report["runtime"] = {
            "seconds": time.perf_counter() - started,
            "rss_bytes": psutil.Process().memory_info().rss,
        }
    _emit_report(report, args.out)
    return 0


def run_claim17(args, settings: LabSettings) -> int:
    c = args.c if args.c is not None else settings.claim17_c
    cases = [(k, delta_prime) for k in args.k for delta_prime in args.delta_prime]
    seeds = ConfigurationManager.derive_seeds(args.seed, len(cases))
    results = []
    for (k, delta_prime), seed in zip(cases, seeds):
        rng = np.random.default_rng(seed)
        subset = [j for j in range(1, k + 1) if rng.integers(2)]
        results.append(SmoothedManager.claim17_check(
            k, subset, args.a, delta_prime, args.sigma, args.samples, seed + 1, c))
    _emit_report(ReportManager.claim17(results, args.seed), args.out)
    return 0


def run_cubic(args, settings: LabSettings) -> int:
    config = ConfigurationManager.cubic_config(
        settings, args.sizes, args.starts, args.seed, PivotRule(args.rule), args.max_weight)
    _emit_report(ReportManager.cubic(SmoothedManager.cubic_bench(config)), args.out)
    return 0


COMMANDS = {
    "compile": run_compile,
    "flip": run_flip,
    "check": run_check,
    "enumerate": run_enumerate,
    "degrade": run_degrade,
    "verify-theorem1": run_verify,
    "smooth": run_smooth,
    "claim17": run_claim17,
    "cubic-bench": run_cubic,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Application entry point; returns the process exit code"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    if args.command == "compile" and args.mode == CompileMode.CVP.value and args.assignment is None:
        try:
            parser.error(constants.ERROR_ASSIGNMENT_REQUIRED)
        except SystemExit as e:
            return int(e.code)

    settings = StateManager.load_settings(args.settings) if args.settings else LabSettings()
    configure_logging(settings, args.verbose, args.quiet)
    logger.debug(constants.LOG_APP_STARTED.format(version=constants.APP_VERSION, command=args.command))

    try:
        return COMMANDS[args.command](args, settings)
    except (CutLabError, OSError) as e:
        logger.error(constants.LOG_DOMAIN_ERROR.format(error=str(e)))
        return 1
    except Exception:
        logger.exception(constants.LOG_FATAL_ERROR)
        return 1


if __name__ == "__main__":
    sys.exit(main())
