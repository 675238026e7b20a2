#!/usr/bin/env python3
"""
loopforge command line: construct, analyze, verify-paper and check.

Exit status: 0 when every asserted property holds, 1 when a mathematical
assertion fails, 2 on input, usage or size-gate errors.
"""

import argparse
import logging
import os
import sys
import traceback
from pathlib import Path
from typing import List, Optional

# Add src directory to path
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from config import Config
from loops.base import Loop
from loops.cayley_io import save_cayley
from loops.groups import chein_double, verify_group
from loops.presets import preset
from loops.sources import descriptor_text, resolve_loop
from loops.triple import TripleLoop, build_bruck_loop
from suites.batteries import SUITES, run_suite
from suites.multilinear import MAP_NAMES
from suites.plan import SamplingPlan
from suites.theorems import THEOREMS, VIOLATION, theorem_harness
from utils.errors import LoopforgeError
from utils.report_writer import Report
from utils.suite_report import Status

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_ERROR = 2


def setup_logging(config: Config):
    # stdout carries the report
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if config.log_file:
        handlers.append(logging.FileHandler(config.log_file, mode='a'))
    logging.basicConfig(level=config.log_level, format=Config.LOG_FORMAT, handlers=handlers)


def _sampling_options(parser: argparse.ArgumentParser, samples: bool = True):
    parser.add_argument('--seed', type=int, help='sampling seed (default LOOPFORGE_SEED or 0x5EED)')
    if samples:
        parser.add_argument('--samples', type=int, help='sample count for arity <= 3 checks')
    parser.add_argument('--threads', type=int, help='worker threads (default LOOPFORGE_THREADS)')
    parser.add_argument('--tsv', action='store_true', help='tab-separated output')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='loopforge', description='Exact computation on finite loops')
    commands = parser.add_subparsers(dest='command', required=True)

    construct = commands.add_parser('construct', help='build a loop and write its descriptor')
    kinds = construct.add_subparsers(dest='kind', required=True)
    bruck = kinds.add_parser('bruck', help='triple loop of a ring')
    bruck.add_argument('--ring', required=True, help='ring preset name or ring-spec file')
    named = kinds.add_parser('preset', help='a shipped loop')
    named.add_argument('--name', required=True)
    chein = kinds.add_parser('chein', help='Chein double M(G,2) of a group table')
    chein.add_argument('--group', required=True, help='Cayley file, descriptor or preset of a group')
    for sub in (bruck, named, chein):
        sub.add_argument('--out', help='write the descriptor to this path')
        sub.add_argument('--export-table', help='write the Cayley table to this path')

    analyze = commands.add_parser('analyze', help='structure of a loop')
    analyze.add_argument('source', help='preset name, Cayley file, ring-spec file or descriptor')
    for flag in ('--center', '--nucleus', '--series', '--inn', '--derived', '--latin'):
        analyze.add_argument(flag, action='store_true')
    _sampling_options(analyze)

    verify = commands.add_parser('verify-paper', help='reproduce the class-3 loop end to end')
    verify.add_argument('--ring', default='paper-z4', help='ring preset or ring-spec file')
    _sampling_options(verify, samples=False)

    check = commands.add_parser('check', help='run an identity suite or theorem harness')
    check.add_argument('source')
    target = check.add_mutually_exclusive_group(required=True)
    target.add_argument('--suite', choices=SUITES)
    target.add_argument('--theorem', choices=THEOREMS)
    check.add_argument('--map', choices=MAP_NAMES, help='bracket map for the multilinear suite')
    check.add_argument('--assume-proper-class2', action='store_true',
                       help='assert that every proper subloop has class <= 2')
    check.add_argument('--minimal-counterexample', action='store_true')
    _sampling_options(check)
    return parser


def make_plan(config: Config, args: argparse.Namespace) -> SamplingPlan:
    return SamplingPlan.from_config(config, seed=getattr(args, 'seed', None),
                                    sample_count=getattr(args, 'samples', None),
                                    threads=getattr(args, 'threads', None))


def emit(report: Report, args: argparse.Namespace):
    sys.stdout.write(report.render(tsv=getattr(args, 'tsv', False)))
    sys.stdout.flush()


def cmd_construct(args: argparse.Namespace, config: Config) -> int:
    if args.kind == 'bruck':
        loop, source = build_bruck_loop(args.ring), args.ring
    elif args.kind == 'preset':
        loop, source = preset(args.name), args.name
    else:
        group = verify_group(resolve_loop(args.group))
        loop, source = chein_double(group), args.group

    text = descriptor_text(args.kind, source, loop)
    if args.out:
        Path(args.out).write_text(text, encoding='utf-8')
        logger.info(f"✅ Descriptor written to {args.out}")
    if args.export_table:
        Path(args.export_table).write_text(save_cayley(loop, config.cayley_export_cap), encoding='utf-8')
        logger.info(f"✅ Cayley table of order {loop.order} written to {args.export_table}")
    sys.stdout.write(text)
    return EXIT_OK


def _loop_section(report: Report, loop: Loop):
    report.extend('loop', {'loop.name': loop.name, 'loop.kind': loop.kind, 'loop.order': loop.order})


def cmd_analyze(args: argparse.Namespace, config: Config) -> int:
    from analysis.brackets import certify_bracket_forms
    from analysis.center import center, nucleus
    from analysis.series import upper_central_series
    from analysis.subloops import associator_subloop, derived_subloop
    from loops.latin import verify_latin
    from mappings.inner_group import certify_inner_form, inner_group_closure

    plan = make_plan(config, args)
    loop = resolve_loop(args.source)
    report = Report()
    _loop_section(report, loop)
    status = EXIT_OK

    if isinstance(loop, TripleLoop):
        if args.center or args.nucleus or args.series or args.derived:
            forms = certify_bracket_forms(loop, plan, samples=plan.sample_count)
            report.add('loop', 'forms.certified', forms.ok)
        if args.inn:
            report.add('loop', 'inn.certified', certify_inner_form(loop, plan).ok)

    if args.latin:
        latin = verify_latin(loop, plan)
        report.add_suite(latin)
        if not latin.ok:
            status = EXIT_FAILURE
    if args.center:
        z = center(loop, plan)
        report.extend('center', {'center.order': z.order, 'center.elements': z.describe()})
    if args.nucleus:
        n = nucleus(loop, plan)
        report.extend('nucleus', {'nucleus.order': n.order, 'nucleus.elements': n.describe()})
    if args.series:
        series = upper_central_series(loop, plan=plan)
        report.extend('series', {'class': series.verdict(), 'series.orders': series.orders,
                                 'series.mode': series.mode})
    if args.inn:
        inn = inner_group_closure(loop)
        report.extend('inn', {'inn.order': inn.order, 'inn.abelian': inn.abelian,
                              'inn.exponent': inn.exponent, 'inn.complete': inn.complete,
                              'inn.mode': inn.mode})
    if args.derived:
        report.extend('derived', {'derived.order': derived_subloop(loop).order,
                                  'associator_subloop.order': associator_subloop(loop).order})

    emit(report, args)
    return status


def cmd_verify_paper(args: argparse.Namespace, config: Config) -> int:
    from verify_pipeline import PaperVerifier

    verifier = PaperVerifier(config, make_plan(config, args))
    result = verifier.run(args.ring)
    emit(result.report, args)
    return EXIT_OK if result.passed else EXIT_FAILURE


def cmd_check(args: argparse.Namespace, config: Config) -> int:
    plan = make_plan(config, args)
    loop = resolve_loop(args.source)
    report = Report()
    _loop_section(report, loop)

    if args.theorem:
        harness = theorem_harness(loop, args.theorem, plan)
        report.add('theorem', f"theorem.{args.theorem.replace('-', '_')}", harness.verdict)
        report.add_suite(harness, section='theorem')
        emit(report, args)
        return EXIT_FAILURE if harness.verdict == VIOLATION else EXIT_OK

    suite = run_suite(loop, args.suite, plan, map_name=args.map,
                      assume_proper_class2=args.assume_proper_class2,
                      minimal_counterexample=args.minimal_counterexample)
    report.add_suite(suite, section='suite')
    if suite.status == Status.VACUOUS:
        logger.info(f"📊 {args.suite}: every item vacuous, gate closed")
    emit(report, args)
    return EXIT_FAILURE if suite.status == Status.FAIL else EXIT_OK


COMMANDS = {
    'construct': cmd_construct,
    'analyze': cmd_analyze,
    'verify-paper': cmd_verify_paper,
    'check': cmd_check
}


def main(argv: Optional[List[str]] = None) -> int:
    """Main function"""
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_ERROR

    try:
        config = Config()
    except ValueError as e:
        logging.basicConfig(format=Config.LOG_FORMAT, stream=sys.stderr)
        logger.error(f"❌ Config issue: {e}")
        return EXIT_ERROR
    setup_logging(config)

    try:
        return COMMANDS[args.command](args, config)
    except LoopforgeError as e:
        logger.error(f"❌ {args.command} refused: {e}")
        return EXIT_ERROR
    except (OSError, ValueError) as e:
        logger.error(f"❌ {args.command} input error: {e}")
        return EXIT_ERROR
    except Exception as e:
        logger.error(f"💥 Fatal error: {str(e)}")
        logger.error(f"Full traceback: {traceback.format_exc()}")
        return EXIT_ERROR


if __name__ == '__main__':
    sys.exit(main())
