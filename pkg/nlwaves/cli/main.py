# copyright ############################### #
# This file is part of the Nlwaves Package. #
# Copyright (c) 2025.                       #
# ######################################### #

import argparse
import logging
import numbers
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np
import pandas as pd

from ..general import __version__, NlwavesError
from .config import ConfigError, DEFAULT_OUTPUT_ROOT, OUTPUT_ROOT_ENV, list_scenarios, load_scenario
from .output import RunArtifacts
from .tasks import TASK_RUNNERS
from .acceptance import CRITERIA, run_acceptance

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2

ACCEPTANCE_REPORT = 'acceptance_report'


def write_acceptance(report, out):
    """Write the JSON report and a flat per-criterion CSV."""
    out.json(ACCEPTANCE_REPORT, report)
    rows = [{'name': cc['name'], 'passed': cc['passed'], 'runtime': cc['runtime'], 'error': cc['error'] or ''}
            for cc in report['criteria']]
    out.table('acceptance', pd.DataFrame(rows, columns=['name', 'passed', 'runtime', 'error']))


def run_scenario(config, output=None):
    """Run one scenario and write its artifacts.

    Returns:
        tuple: (name, exit status, summary or error message).
    """
    try:
        sc = load_scenario(config)
    except ConfigError as err:
        return str(config), EXIT_CONFIG, f"{type(err).__name__}: {err}"
    out = RunArtifacts(sc.output_dir(output))
    log.info(f"Running {sc.name} ({sc.task}) into {out.directory}")
    try:
        if sc.task == 'acceptance':
            names = sc.param('criteria', 'all', kind=None,
                             check=lambda c: c == 'all' or (isinstance(c, list) and set(c) <= set(CRITERIA)),
                             message=f"expected 'all' or a list of {', '.join(CRITERIA)}")
            report = run_acceptance(names)
            write_acceptance(report, out)
            summary = {'passed': report['passed'],
                       'failed': [cc['name'] for cc in report['criteria'] if not cc['passed']]}
            status = EXIT_OK if report['passed'] else EXIT_FAILED
        else:
            summary = TASK_RUNNERS[sc.task](sc, out)
            status = EXIT_OK
    except ConfigError as err:
        return sc.name, EXIT_CONFIG, f"{type(err).__name__}: {err}"
    except (NlwavesError, ArithmeticError, RuntimeError, ValueError) as err:
        log.debug(f"{sc.name} failed", exc_info=True)
        return sc.name, EXIT_FAILED, f"{type(err).__name__}: {err}"
    out.manifest(sc, summary)
    return sc.name, status, summary


def _format_summary(summary):
    if not isinstance(summary, dict):
        return f"  {summary}"
    lines = []
    for key, value in summary.items():
        if isinstance(value, float):
            value = f"{value:.12g}"
        elif 'index' in key and isinstance(value, numbers.Integral) and not isinstance(value, (bool, np.bool_)):
            value = f"{value:+d}"
        elif isinstance(value, (list, dict)):
            continue
        lines.append(f"  {key}: {value}")
    return '\n'.join(lines)


def cmd_run(args):
    if args.jobs > 1 and len(args.configs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(run_scenario, args.configs, [args.output]*len(args.configs)))
    else:
        results = [run_scenario(cc, args.output) for cc in args.configs]
    status = EXIT_OK
    for name, code, summary in results:
        tag = {EXIT_OK: 'OK', EXIT_FAILED: 'FAIL', EXIT_CONFIG: 'ERROR'}[code]
        print(f"[{tag}] {name}")
        print(_format_summary(summary))
        status = max(status, code)
    return status


def cmd_acceptance(args):
    names = None if args.criterion == 'all' else [args.criterion]
    if names and names[0] not in CRITERIA:
        print(f"[ERROR] unknown criterion {args.criterion!r}; expected all or one of {', '.join(CRITERIA)}")
        return EXIT_CONFIG
    if args.output:
        out = RunArtifacts(args.output)
    else:
        out = RunArtifacts(Path(os.environ.get(OUTPUT_ROOT_ENV, DEFAULT_OUTPUT_ROOT)) / 'acceptance')
    report = run_acceptance(names)
    write_acceptance(report, out)
    for cc in report['criteria']:
        line = f"[{'PASS' if cc['passed'] else 'FAIL'}] {cc['name']} ({cc['runtime']:.1f} s)"
        if cc['error']:
            line += f": {cc['error']}"
        print(line)
    print(f"Report written to {out.directory / (ACCEPTANCE_REPORT + '.json')}")
    return EXIT_OK if report['passed'] else EXIT_FAILED


def cmd_list(args):
    for name in list_scenarios():
        print(name)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog='nlwaves', description="Nonlocal coherent structures: symbols, "
                                     + "Fredholm indices, wave trains and center manifolds.")
    parser.add_argument('--version', action='version', version=f"nlwaves {__version__}")
    parser.add_argument('-v', '--verbose', action='count', default=0,
                        help="Increase verbosity (-v for INFO, -vv for DEBUG).")
    sub = parser.add_subparsers(dest='command', required=True)

    run = sub.add_parser('run', help="Run scenario configs (file paths or bundled names).")
    run.add_argument('configs', nargs='+', metavar='config')
    run.add_argument('--output', default=None, help="Output directory, overriding the config and "
                     + f"${OUTPUT_ROOT_ENV}.")
    run.add_argument('--jobs', type=int, default=1, help="Run up to this many scenarios concurrently.")
    run.set_defaults(func=cmd_run)

    accept = sub.add_parser('acceptance', help="Run the acceptance suite or a single criterion.")
    accept.add_argument('criterion', nargs='?', default='all', help=f"all, or one of {', '.join(CRITERIA)}.")
    accept.add_argument('--output', default=None, help="Directory for the acceptance report.")
    accept.set_defaults(func=cmd_acceptance)

    listing = sub.add_parser('list-scenarios', help="List the bundled scenarios.")
    listing.set_defaults(func=cmd_list)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    level = [logging.WARNING, logging.INFO, logging.DEBUG][min(args.verbose, 2)]
    logging.basicConfig(level=level, format='%(levelname)s %(name)s: %(message)s')
    return args.func(args)


if __name__ == '__main__':
    sys.exit(main())
