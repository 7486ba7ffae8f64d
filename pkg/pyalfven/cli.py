# Standard:
import argparse
import logging
import os
import sys

# External:
import numpy as np
import pandas as pd

# Internal:
from .analytics.holder import norm_c1alpha
from .analytics.weights import WeightSpec, check_ass_f, check_lemma33, check_sandwich, check_w2
from .fields.grid import Grid
from .lab.registry import list_cases, run_suite, select_cases
from .lab.trials import TrialSpec, trial_field
from .operators.trace import TraceRecorder
from .solvers.initial import initial_pair
from .solvers.mhd import bootstrap_check, ideal_picard, viscous_solve
from .utils.config import COMMANDS, RunConfig
from .utils.errors import ConfigError, NumericalAbort, PreconditionError
from .utils.io import read_field, write_field, write_frame, write_manifest

# Constants:
from .utils.constants import (DEFAULT_MU1, EXIT_ABORT, EXIT_CONFIG, EXIT_FAILED, EXIT_OK, NORM_COLS,
                              WEIGHT_C1, WEIGHT_REPORT_COLS)

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'

# Flag name -> (RunConfig field, type).
OVERRIDES = {
    'd': ('d', int), 'L': ('L', float), 'N': ('N', int), 'geometry': ('geometry', str), 'nu': ('nu', float),
    'mu': ('mu', float), 'T': ('T', float), 'dt': ('dt', float), 'delta': ('delta', float),
    'alpha': ('alpha', float), 'eps': ('eps', float), 'c0': ('c0', float), 'seed': ('seed', int),
    'n-iter': ('n_iter', int), 'n-trials': ('n_trials', int), 'filter': ('filter', str), 'out': ('out', str),
    'threads': ('threads', int), 'weight': ('weight', str), 'field': ('field', str),
}


"""
----------------------------------------------------------------------------------------------------
Parser
----------------------------------------------------------------------------------------------------
"""
def build_parser() -> argparse.ArgumentParser:
    """
    One subparser per command; every config field can be overridden by a flag of the same name.
    """
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', help="JSON run config; flags override its fields.")
    common.add_argument('--log-level', default='WARNING', choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'])
    common.add_argument('--timing', action='store_true', help="Record wall times (makes outputs nondeterministic).")
    for flag, (name, kind) in OVERRIDES.items():
        common.add_argument(f"--{flag}", dest=name, type=kind, default=None)

    parser = argparse.ArgumentParser(prog='pyalfven', description="Numerical lab for MHD well-posedness estimates.")
    commands = parser.add_subparsers(dest='command', required=True)
    helps = {
        'verify': "Run the inequality registry and write lemma-report.csv.",
        'solve-ideal': "Picard iteration of the ideal system on the strip.",
        'solve-viscous': "Decomposed viscous solver with the bootstrap check.",
        'norms': "Weighted Hölder norms of a field file or a trial field.",
        'weights-check': "Sampled structural conditions of the weight families.",
        'list-cases': "Print every registered case id with its anchor.",
    }
    for command in COMMANDS:
        sub = commands.add_parser(command, parents=[common], help=helps[command])
        if command == 'verify':
            sub.add_argument('--list', action='store_true', help="List the selected cases and exit.")
    return parser


def load_config(args: argparse.Namespace) -> RunConfig:
    """
    Config file (if any) with the subcommand and every given flag applied on top.

    Raises
    ------
    ConfigError
        If the file cannot be read or the result violates a constraint.
    """
    config = RunConfig(command=args.command)
    if args.config:
        try:
            with open(args.config) as handle:
                text = handle.read()
        except OSError as error:
            raise ConfigError(f"Config Error: cannot read '{args.config}' ({error.strerror}).") from error
        config = RunConfig.from_json(text).with_overrides(command=args.command)
    overrides = {name: getattr(args, name) for name, _ in OVERRIDES.values()}
    return config.with_overrides(**overrides)


"""
----------------------------------------------------------------------------------------------------
Commands
----------------------------------------------------------------------------------------------------
"""
def run_verify(config: RunConfig, timing: bool = False) -> int:
    frame = run_suite(config.filter, config.n_trials, config.seed, config.threads, timing)
    os.makedirs(config.out, exist_ok=True)
    report = write_frame(os.path.join(config.out, 'lemma-report.csv'), frame)
    failed = frame.loc[~frame['pass'], 'id'].tolist()
    write_manifest(config.out, config, [report], {'cases': len(frame), 'failed': failed, 'timing': timing})
    for case_id in failed:
        logger.warning("Case %s failed.", case_id)
    return EXIT_FAILED if failed else EXIT_OK


def run_solve_ideal(config: RunConfig, timing: bool = False) -> int:
    grid = Grid(config.d, config.L, config.N, 'strip')
    z_plus0, z_minus0 = initial_pair(grid, config.eps, config.delta, config.seed)
    recorder = TraceRecorder()
    result = ideal_picard(z_plus0, z_minus0, config.T, config.n_iter, config.alpha, config.delta, config.c0,
                          seed=config.seed, dump_dir=config.out, recorder=recorder)

    os.makedirs(config.out, exist_ok=True)
    increments = result.increments.to_frame()
    increments.index = increments.index + 1
    outputs = [
        write_frame(os.path.join(config.out, 'diagnostics.csv'), result.diagnostics.to_frame()),
        write_frame(os.path.join(config.out, 'increments.csv'), increments.reset_index()),
        write_frame(os.path.join(config.out, 'iterate-norms.csv'), result.norms),
        write_frame(os.path.join(config.out, 'traces.csv'), recorder.to_frame(timing)),
    ]
    plus, minus = result.last
    outputs += [write_field(os.path.join(config.out, 'z_plus.afld'), plus.slices[-1]),
                write_field(os.path.join(config.out, 'z_minus.afld'), minus.slices[-1])]
    summary = {'gate': result.gate, 'A1': result.A1, 'C1': result.C1, 'delta_T': result.delta_T, 'C2': result.C2}
    write_manifest(config.out, config, outputs, summary)
    return EXIT_OK if np.all(np.isfinite(result.increments)) else EXIT_FAILED


def run_solve_viscous(config: RunConfig, timing: bool = False) -> int:
    """
    Notes
    -----
    1. The run is repeated on ``grid.refined()`` with half the step cap; the bootstrap constant must agree between
       the two within the refinement drift.
    2. Initial data are band limited, so the same seed draws the same continuum data on both grids.
    """
    grid = Grid(config.d, config.L, config.N, config.geometry)
    z_plus0, z_minus0 = initial_pair(grid, config.eps, config.delta, config.seed)
    recorder = TraceRecorder()
    result = viscous_solve(z_plus0, z_minus0, config.nu, config.mu, config.T, config.dt, config.alpha, config.delta,
                           seed=config.seed, dump_dir=config.out, recorder=recorder)

    fine = grid.refined()
    fine_plus0, fine_minus0 = initial_pair(fine, config.eps, config.delta, config.seed)
    refined = viscous_solve(fine_plus0, fine_minus0, config.nu, config.mu, config.T, 0.5 * config.dt, config.alpha,
                            config.delta, seed=config.seed, dump_dir=os.path.join(config.out, 'refined'))
    report = bootstrap_check(result.diagnostics, config.mu1, config.mu2, refined=refined.diagnostics)

    os.makedirs(config.out, exist_ok=True)
    outputs = [
        write_frame(os.path.join(config.out, 'diagnostics.csv'), result.diagnostics.to_frame()),
        write_frame(os.path.join(config.out, 'traces.csv'), recorder.to_frame(timing)),
    ]
    for k, state in enumerate(result.states):
        outputs.append(write_field(os.path.join(config.out, f"z_plus-{k:03d}.afld"), state.z_plus))
        outputs.append(write_field(os.path.join(config.out, f"z_minus-{k:03d}.afld"), state.z_minus))
    summary = {'steps': result.steps, 'dt': result.dt, 'C_plus': report.C_plus, 'C_minus': report.C_minus,
               'C_refined': report.C_refined, 'drift': report.drift, 'refined_steps': refined.steps,
               'eps': report.eps, 'gate': report.gate, 'pass': report.passed}
    write_manifest(config.out, config, outputs, summary)
    return EXIT_OK if report.passed else EXIT_FAILED


def run_norms(config: RunConfig, timing: bool = False) -> int:
    weight = WeightSpec.from_text(config.weight)
    outputs = []
    os.makedirs(config.out, exist_ok=True)
    if config.field:
        u = read_field(config.field)
    else:
        grid = Grid(config.d, config.L, config.N, config.geometry)
        u = trial_field(TrialSpec(kind='vector', envelope=weight), grid, config.seed)
        outputs.append(write_field(os.path.join(config.out, 'trial.afld'), u))

    report = norm_c1alpha(u, weight, config.alpha, seed=config.seed)
    row = {'weight': weight.to_text(), 'norm0': report.norm0, 'norm1': report.norm1, **report.to_row()}
    frame = pd.DataFrame([row], columns=NORM_COLS)
    outputs.append(write_frame(os.path.join(config.out, 'norms.csv'), frame))
    write_manifest(config.out, config, outputs, {'norm1': report.norm1})
    return EXIT_OK if np.isfinite(report.norm1) else EXIT_FAILED


def run_weights_check(config: RunConfig, timing: bool = False) -> int:
    """
    Notes
    -----
    1. A ``powerf0`` weight gets the three decay lines against ``WEIGHT_C1`` and the ``g`` lemma.
    2. For ``0 < δ < 1/2`` the heat-evolved weights get the sandwich bounds and the three registered pairs.
    """
    weight = WeightSpec.from_text(config.weight)
    reports = []
    if weight.kind == 'powerf0':
        reports += check_ass_f(weight, WEIGHT_C1, T=max(config.T, 1.0))
        reports.append(check_lemma33(weight, 1.0, max(config.T, 1.0)))
    if 0.0 < config.delta < 0.5:
        mu1 = config.mu1 if config.mu1 > 0 else DEFAULT_MU1
        reports += [check_sandwich(which, mu1, config.delta, config.T) for which in ('f', 'f1')]
        for pair, sign in ((('f', 'g'), 1), (('f', 'g'), -1), (('f1', 'f-'), -1), (('f1', 'f+'), 1)):
            reports.append(check_w2(pair, sign, mu1, config.T, config.delta))
    else:
        logger.warning("Skipping heat-evolved weight checks: δ=%.3g is outside (0, 1/2).", config.delta)
    if not reports:
        raise ConfigError(f"Config Error: nothing to check for weight '{config.weight}' with delta={config.delta}.")

    rows = [{'condition': r.condition, 'value': r.value, 'bound': r.bound, 'pass': r.passed} for r in reports]
    frame = pd.DataFrame(rows, columns=WEIGHT_REPORT_COLS)
    os.makedirs(config.out, exist_ok=True)
    path = write_frame(os.path.join(config.out, 'weight-report.csv'), frame)
    failed = frame.loc[~frame['pass'], 'condition'].tolist()
    write_manifest(config.out, config, [path], {'failed': failed})
    return EXIT_FAILED if failed else EXIT_OK


RUNNERS = {
    'verify': run_verify,
    'solve-ideal': run_solve_ideal,
    'solve-viscous': run_solve_viscous,
    'norms': run_norms,
    'weights-check': run_weights_check,
}


"""
----------------------------------------------------------------------------------------------------
Entry Point
----------------------------------------------------------------------------------------------------
"""
def main(argv: list[str] = None) -> int:
    """
    Parses ``argv``, runs the command and maps the outcome to an exit code.

    Notes
    -----
    1. Exit codes: 0 every check passed, 1 some check failed, 2 configuration or input error, 3 numerical abort.
    2. ``list-cases`` (and ``verify --list``) only print.
    """
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=args.log_level, format=LOG_FORMAT)

    if args.command == 'list-cases':
        print('\n'.join(list_cases()))
        return EXIT_OK
    try:
        config = load_config(args)
        if args.command == 'verify' and args.list:
            print('\n'.join(f"{case.id}\t{case.anchor}" for case in select_cases(config.filter)))
            return EXIT_OK
        code = RUNNERS[args.command](config, args.timing)
    except NumericalAbort as error:
        print(error, file=sys.stderr)
        if error.dump_path:
            print(f"state dump: {error.dump_path}", file=sys.stderr)
        return EXIT_ABORT
    except PreconditionError as error:
        print(error, file=sys.stderr)
        return EXIT_FAILED
    except (ConfigError, ValueError, KeyError) as error:
        print(error.args[0] if isinstance(error, KeyError) else error, file=sys.stderr)
        return EXIT_CONFIG

    logger.info("Command %s finished with exit code %d.", args.command, code)
    return code


if __name__ == '__main__':
    sys.exit(main())
