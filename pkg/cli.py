#!/usr/bin/env python3
"""
Command Line Interface for Hyperharmonics

Point evaluation of the special functions and separated modes, CSV tables
of the hyperspherical associated Legendre function, and the acceptance
suite.
"""

import argparse
import csv
import dataclasses
import json
import logging
import math
import sys
import os
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, TextIO

# Add src directory to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), 'src'))

from src.acceptance import SUITES, VerificationSuite
from src.config_manager import ConfigManager, parse_dims
from src.coords import from_coordinates
from src.exceptions import CheckFailedError, DomainError, HyperHarmonicsError
from src.legendre import (
    HyperLegendreParams,
    assoc_legendre_p,
    hyper_assoc_legendre,
    hyper_assoc_legendre_theta,
    hyper_legendre,
    legendre_p,
)
from src.physics import ModeSpec, mode_eval, mode_spec_from_json
from src.specfun import BESSEL_KINDS, Hyp2F1Call, bessel, hyp2f1, spherical_bessel

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

DEFAULT_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def setup_logging(log_level: str = 'WARNING', fmt: str = DEFAULT_FORMAT):
    """Set up logging configuration; results go to stdout, logs to stderr."""
    logging.basicConfig(
        level=getattr(logging, str(log_level).upper(), logging.WARNING),
        format=fmt or DEFAULT_FORMAT,
        handlers=[
            logging.StreamHandler(sys.stderr)
        ]
    )


def format_value(value) -> str:
    """15 significant digits; complex values as re+imj."""
    if isinstance(value, complex):
        return f"{value.real:.15g}{value.imag:+.15g}j"
    return f"{float(value):.15g}"


def parse_floats(text: str) -> List[float]:
    text = text.strip()
    if not text:
        return []
    try:
        return [float(item) for item in text.split(',')]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def parse_ints(text: str) -> List[int]:
    text = text.strip()
    if not text:
        return []
    try:
        return [int(item) for item in text.split(',')]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def parse_complex(text: str) -> complex:
    values = parse_floats(text)
    if len(values) == 1:
        return complex(values[0], 0.0)
    if len(values) != 2:
        raise argparse.ArgumentTypeError(f"expected re or re,im, got {text!r}")
    return complex(values[0], values[1])


@dataclass(frozen=True)
class TableRequest:
    """Function of the latitude sampled on [start, stop] with ``count`` rows."""
    nu: float
    mu: float
    lam: float
    start: float
    stop: float
    count: int
    out: Optional[str] = None

    def __post_init__(self):
        if self.count < 2:
            raise DomainError(f"Table count must be >= 2, got {self.count}")
        if not 0.0 < self.start < math.pi or not 0.0 < self.stop < math.pi:
            raise DomainError(
                f"Table range [{self.start}, {self.stop}] must lie inside (0, pi)")

    @classmethod
    def fig0(cls, q: int, s: int, start: float, stop: float, count: int,
             out: Optional[str] = None) -> 'TableRequest':
        """First-latitude preset: nu = q, mu = sqrt(s(s+1)), lambda = 1/2."""
        return cls(float(q), math.sqrt(s * (s + 1.0)), 0.5, start, stop, count, out)

    def samples(self) -> List[float]:
        step = (self.stop - self.start) / (self.count - 1)
        return [self.start + i * step for i in range(self.count)]


def write_table(req: TableRequest, stream: TextIO) -> int:
    """Write ``x,value_plus,value_minus`` rows; returns the number of rows."""
    plus = HyperLegendreParams(req.nu, req.mu, req.lam, 'plus')
    minus = plus.with_branch('minus')
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(['x', 'value_plus', 'value_minus'])
    rows = 0
    for psi in req.samples():
        writer.writerow([repr(psi),
                         repr(hyper_assoc_legendre_theta(plus, psi)),
                         repr(hyper_assoc_legendre_theta(minus, psi))])
        rows += 1
    return rows


def _eval_mode_spec(args, parser: argparse.ArgumentParser) -> ModeSpec:
    if args.spec:
        with open(args.spec, 'r') as file:
            return mode_spec_from_json(file.read())
    missing = [flag for flag, value in (('--system', args.system), ('--dim', args.dim),
                                        ('--chain', args.chain), ('--m', args.m),
                                        ('--k', args.k), ('--kind', args.kind))
               if value is None]
    if missing:
        parser.error(f"eval mode needs {', '.join(missing)} (or --spec FILE)")
    return ModeSpec(system=args.system, dim=args.dim, m=args.m, q_chain=tuple(args.chain),
                    k=args.k, k_axial=args.K, omega=args.omega, bessel_kind=args.kind,
                    phi_sign=args.phi_sign, time_sign=args.time_sign, branch=args.branch)


def cmd_eval(args, parser: argparse.ArgumentParser) -> int:
    """Evaluate one function at one point and print the value."""
    logger = logging.getLogger(__name__)
    function = args.function
    if function == 'hyp2f1':
        value = hyp2f1(Hyp2F1Call(args.alpha, args.beta, args.gamma, args.z))
    elif function == 'bessel':
        if args.spherical:
            if args.q is None:
                parser.error("eval bessel --spherical needs --q")
            value = spherical_bessel(args.kind.lower(), args.q, args.x)
        else:
            if args.sigma is None:
                parser.error("eval bessel needs --sigma")
            value = bessel(args.kind, args.sigma, args.x)
    elif function == 'legendre':
        value = legendre_p(args.nu, args.x)
    elif function == 'assoc':
        value = assoc_legendre_p(args.nu, args.mu, args.x)
    elif function == 'hyper':
        value = hyper_legendre(args.nu, args.lam, args.x)
    elif function == 'hyper-assoc':
        value = hyper_assoc_legendre(HyperLegendreParams(args.nu, args.mu, args.lam, args.branch), args.x)
    elif function == 'mode':
        spec = _eval_mode_spec(args, parser)
        if args.point is None:
            parser.error("eval mode needs --point")
        point = from_coordinates(spec.system, spec.dim, args.point)
        value = mode_eval(spec, point, args.t)
    else:
        parser.error(f"Unknown function: {function}")
    logger.debug(f"eval {function} -> {value!r}")
    print(format_value(value))
    return EXIT_OK


def cmd_table(args, config: ConfigManager) -> int:
    """Write a CSV table of both branches over the latitude range."""
    logger = logging.getLogger(__name__)
    start = args.start if args.start is not None else float(config.get('table.start', 0.3))
    stop = args.stop if args.stop is not None else float(config.get('table.stop', math.pi - 0.3))
    count = args.count if args.count is not None else int(config.get('table.count', 201))
    if args.preset == 'fig0':
        req = TableRequest.fig0(args.q, args.s, start, stop, count, args.out)
    else:
        req = TableRequest(args.nu, args.mu, args.lam, start, stop, count, args.out)

    if req.out:
        with open(req.out, 'w', newline='') as file:
            rows = write_table(req, file)
        logger.info(f"Wrote {rows} rows to {req.out}")
    else:
        write_table(req, sys.stdout)
    return EXIT_OK


def _erratum_table(results) -> List[str]:
    lines = [f"{'control':<36} {'relative_residual':>18}  verdict"]
    for result in results:
        if not result.name.startswith('erratum_'):
            continue
        residual = result.details.get('relative_residual', float('nan'))
        if result.name == 'erratum_printed_radical_fails':
            verdict = 'FAIL (expected)' if result.passed else 'PASS (unexpected)'
        else:
            verdict = 'PASS' if result.passed else 'FAIL'
        lines.append(f"{result.name:<36} {residual:>18.6e}  {verdict}")
    return lines


def cmd_verify(args, config: ConfigManager) -> int:
    """Run the acceptance suite; exit 0 iff every check passes."""
    logger = logging.getLogger(__name__)
    settings = config.verify_settings()
    if args.dims:
        settings = dataclasses.replace(settings, dims=parse_dims(args.dims))
    if args.seed is not None:
        settings = dataclasses.replace(settings, seed=args.seed)

    suite = VerificationSuite(settings)
    results = suite.run(args.suite)
    if args.erratum_check and args.suite not in ('legendre', 'all'):
        results.extend(suite.erratum_controls())

    failed = suite.failures(results)
    report = {
        'suite': args.suite,
        'pass': not failed,
        'settings': dataclasses.asdict(settings),
        'checks': [result.to_dict() for result in results],
    }
    if args.out:
        with open(args.out, 'w') as file:
            json.dump(report, file, indent=2, default=str)
            file.write('\n')
        logger.info(f"Wrote verification report to {args.out}")

    if args.json:
        print(json.dumps(report, indent=2, default=str))
    else:
        for result in results:
            print(f"{'PASS' if result.passed else 'FAIL'} {result.suite}.{result.name}")
        if args.erratum_check:
            print()
            print('\n'.join(_erratum_table(results)))

    try:
        suite.require_all(results)
    except CheckFailedError as e:
        print(f"Verification failed: {e}", file=sys.stderr)
        return EXIT_FAILURE
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description='Hyperspherical and hypercylindrical harmonics CLI',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  %(prog)s eval legendre --nu 2 --x 0.5
  %(prog)s eval hyper-assoc --nu 1 --mu 1.4142135624 --lambda 0.5 --branch plus --x 0
  %(prog)s eval mode --system hs --dim 4 --chain 1,1 --m 0 --k 1 --kind J --point 2,1.0,1.2,0.5
  %(prog)s table fig0 --q 1 --s 1 --out fig0.csv
  %(prog)s verify all --json --out report.json
        """
    )

    # Global options
    parser.add_argument('--log-level', choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'],
                        help='Set logging level (default from configuration)')
    parser.add_argument('--config-dir', help='Path to configuration directory')

    subparsers = parser.add_subparsers(dest='command', help='Available commands')

    # eval
    eval_parser = subparsers.add_parser('eval', help='Evaluate a function at one point')
    functions = eval_parser.add_subparsers(dest='function', help='Function to evaluate')

    hyp = functions.add_parser('hyp2f1', help='Gauss hypergeometric F(alpha, beta; gamma; z)')
    hyp.add_argument('--alpha', type=float, required=True)
    hyp.add_argument('--beta', type=float, required=True)
    hyp.add_argument('--gamma', type=float, required=True)
    hyp.add_argument('--z', type=float, required=True)

    bes = functions.add_parser('bessel', help='Bessel, Neumann or Hankel function')
    bes.add_argument('--kind', type=str.upper, choices=BESSEL_KINDS, required=True)
    bes.add_argument('--sigma', type=float, help='Order (cylinder functions)')
    bes.add_argument('--q', type=int, help='Degree (spherical functions)')
    bes.add_argument('--spherical', action='store_true', help='Spherical Bessel function of degree q')
    bes.add_argument('--x', type=float, required=True)

    leg = functions.add_parser('legendre', help='Legendre function P_nu(x)')
    leg.add_argument('--nu', type=float, required=True)
    leg.add_argument('--x', type=float, required=True)

    assoc = functions.add_parser('assoc', help='Associated Legendre function P_nu^mu(x)')
    assoc.add_argument('--nu', type=float, required=True)
    assoc.add_argument('--mu', type=float, required=True)
    assoc.add_argument('--x', type=float, required=True)

    hyper = functions.add_parser('hyper', help='Hyperspherical Legendre function')
    hyper.add_argument('--nu', type=float, required=True)
    hyper.add_argument('--lambda', dest='lam', type=float, required=True)
    hyper.add_argument('--x', type=float, required=True)

    hassoc = functions.add_parser('hyper-assoc', help='Hyperspherical associated Legendre function')
    hassoc.add_argument('--nu', type=float, required=True)
    hassoc.add_argument('--mu', type=float, required=True)
    hassoc.add_argument('--lambda', dest='lam', type=float, required=True)
    hassoc.add_argument('--branch', choices=['plus', 'minus'], default='plus')
    hassoc.add_argument('--x', type=float, required=True)

    mode = functions.add_parser('mode', help='Separated mode of the generalized equation')
    mode.add_argument('--spec', help='ModeSpec JSON file (replaces the mode flags)')
    mode.add_argument('--system', choices=['hs', 'hc', 'hyperspherical', 'hypercylindrical'])
    mode.add_argument('--dim', type=int)
    mode.add_argument('--chain', type=parse_ints, help='Latitude degrees q_1,...')
    mode.add_argument('--m', type=int)
    mode.add_argument('--k', type=float)
    mode.add_argument('--K', type=float, default=0.0, help='Axial wavenumber (hc)')
    mode.add_argument('--kind', type=str.upper, choices=BESSEL_KINDS)
    mode.add_argument('--omega', type=parse_complex, default=0j, help='re[,im]')
    mode.add_argument('--phi-sign', choices=['+', '-'], default='+', help='Sign of the e^(i m phi) factor')
    mode.add_argument('--time-sign', choices=['+', '-'], default='-')
    mode.add_argument('--branch', choices=['plus', 'minus'], default='plus')
    mode.add_argument('--point', type=parse_floats, help='Coordinates r,theta...,phi[,z]')
    mode.add_argument('--t', type=float, default=0.0)

    # table
    table_parser = subparsers.add_parser('table', help='CSV table of both branches')
    presets = table_parser.add_subparsers(dest='preset', help='Table preset')
    fig0 = presets.add_parser('fig0', help='First latitude, nu = q, mu = sqrt(s(s+1)), lambda = 1/2')
    fig0.add_argument('--q', type=int, required=True)
    fig0.add_argument('--s', type=int, required=True)
    custom = presets.add_parser('hyper-assoc', help='Any nu, mu, lambda')
    custom.add_argument('--nu', type=float, required=True)
    custom.add_argument('--mu', type=float, required=True)
    custom.add_argument('--lambda', dest='lam', type=float, required=True)
    for preset in (fig0, custom):
        preset.add_argument('--start', type=float)
        preset.add_argument('--stop', type=float)
        preset.add_argument('--count', type=int)
        preset.add_argument('--out', help='Output CSV path (default stdout)')

    # verify
    verify_parser = subparsers.add_parser('verify', help='Run the acceptance suite')
    verify_parser.add_argument('suite', choices=list(SUITES) + ['all'])
    verify_parser.add_argument('--json', action='store_true', help='Print the JSON report')
    verify_parser.add_argument('--out', help='Write the JSON report to a file')
    verify_parser.add_argument('--erratum-check', action='store_true',
                               help='Print the printed/derived radical control table')
    verify_parser.add_argument('--dims', help='Dimension range A..B')
    verify_parser.add_argument('--seed', type=int)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main CLI entry point."""
    parser = build_parser()
    args = parser.parse_args(argv)

    # Show help if no command specified
    if not args.command:
        parser.print_help()
        return EXIT_USAGE
    if args.command == 'eval' and not args.function:
        parser.error("eval needs a function")
    if args.command == 'table' and not args.preset:
        parser.error("table needs a preset")

    try:
        config = ConfigManager(args.config_dir)
    except HyperHarmonicsError as e:
        setup_logging(args.log_level or 'WARNING')
        logging.getLogger(__name__).error(f"Configuration error: {e}")
        return EXIT_FAILURE

    setup_logging(args.log_level or config.get('logging.level', 'WARNING'),
                  config.get('logging.format', DEFAULT_FORMAT))
    logger = logging.getLogger(__name__)

    commands: dict = {
        'eval': lambda: cmd_eval(args, parser),
        'table': lambda: cmd_table(args, config),
        'verify': lambda: cmd_verify(args, config),
    }
    command: Optional[Callable[[], int]] = commands.get(args.command)
    if command is None:
        logger.error(f"Unknown command: {args.command}")
        return EXIT_USAGE
    try:
        return command()
    except HyperHarmonicsError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_FAILURE
    except OSError as e:
        print(f"I/O error: {e}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == '__main__':
    sys.exit(main())
