"""Command-line entry point: tmsv-decoherence {pure,phase,amplitude,border,verify}.

Exit status: 0 success, 1 usage or configuration error, 2 numerical
failure, 3 verification failure.
"""
import argparse
import logging
import sys

from .errors import NumericalError
from .oracle import AMPLITUDE, PHASE
from .sweep import (
    PURE,
    SweepConfig,
    emit_border,
    render,
    render_border,
    run_sweep,
    run_verify,
)

log = logging.getLogger("tmsv_decoherence")

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL, EXIT_VERIFY = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_r_grid(p):
    p.add_argument("--r-min", type=float, default=0.0, help="smallest squeezing r")
    p.add_argument("--r-max", type=float, default=1.5, help="largest squeezing r")
    p.add_argument("--r-steps", type=int, default=16, help="number of r grid points")


def _add_output(p, formats=("csv", "json")):
    p.add_argument("--format", choices=formats, default=formats[0], help="output format")
    p.add_argument("--output", default="-", metavar="PATH", help="output file, '-' for stdout")


def _add_sweep(p, d_max, d_steps):
    _add_r_grid(p)
    p.add_argument("--d-min", type=float, default=0.0, help="smallest damping d = gamma t")
    p.add_argument("--d-max", type=float, default=d_max, help="largest damping d")
    p.add_argument("--d-steps", type=int, default=d_steps, help="number of d grid points")
    p.add_argument("--trunc", type=int, default=100, help="photon-number truncation N per mode")
    p.add_argument("--tail-ceiling", type=float, default=1e-8,
                   help="largest probability mass allowed outside the truncation")
    p.add_argument("--workers", type=int, default=1, help="worker processes")
    _add_output(p)


def build_parser():
    parser = _Parser(
        prog="tmsv-decoherence",
        description="Entanglement of two-mode squeezed vacuum under phase and amplitude damping.",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    fmt = argparse.ArgumentDefaultsHelpFormatter

    p = sub.add_parser("pure", help="pure-state entanglement over r", formatter_class=fmt)
    _add_r_grid(p)
    _add_output(p)

    p = sub.add_parser("phase", help="exact E_R under phase damping", formatter_class=fmt)
    _add_sweep(p, d_max=2.0, d_steps=21)

    p = sub.add_parser("amplitude", help="upper bound E_R* under thermal amplitude damping",
                       formatter_class=fmt)
    _add_sweep(p, d_max=1.2, d_steps=13)
    p.add_argument("--nbar", type=float, default=0.01, help="bath mean photon number")
    p.add_argument("--eps-block", type=float, default=1e-12,
                   help="drop k-blocks whose weight falls below this")

    p = sub.add_parser("border", help="separability border d*(r)", formatter_class=fmt)
    _add_r_grid(p)
    p.add_argument("--nbar", type=float, default=0.01, help="bath mean photon number")
    _add_output(p)

    p = sub.add_parser("verify", help="compare closed forms against RK4 integration",
                       formatter_class=fmt)
    p.add_argument("model", choices=(PHASE, AMPLITUDE))
    p.add_argument("--r", type=float, default=0.5, help="squeezing r")
    p.add_argument("--d", type=float, default=0.3, help="damping d = gamma t")
    p.add_argument("--nbar", type=float, default=0.01, help="bath mean photon number")
    p.add_argument("--oracle-trunc", type=int, default=12, help="per-mode truncation M")
    p.add_argument("--oracle-steps", type=int, default=None,
                   help="RK4 steps (default: fewest with gamma dt <= 1e-3)")
    _add_output(p, formats=("text", "json"))
    return parser


def _write(text, path):
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _config(args):
    model = args.command
    kw = dict(
        model=model,
        r_grid=(args.r_min, args.r_max, args.r_steps),
        format=args.format,
        output=args.output,
    )
    if model != PURE:
        kw.update(
            d_grid=(args.d_min, args.d_max, args.d_steps),
            trunc=args.trunc,
            tail_ceiling=args.tail_ceiling,
            workers=args.workers,
        )
    if model == AMPLITUDE:
        kw.update(nbar=args.nbar, eps_block=args.eps_block)
    return SweepConfig(**kw)


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # --help, or a usage error already reported
        return exc.code
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        if args.command == "border":
            rows = emit_border((args.r_min, args.r_max, args.r_steps), args.nbar)
            _write(render_border(rows, args.format), args.output)
            return EXIT_OK
        if args.command == "verify":
            report = run_verify(args.model, args.r, args.d, args.nbar,
                                args.oracle_trunc, args.oracle_steps)
            _write(report.render(args.format), args.output)
            return EXIT_OK if report.passed else EXIT_VERIFY
        config = _config(args)
        log.info("running %s sweep", config.model)
        _write(render(run_sweep(config)), config.output)
        return EXIT_OK
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
