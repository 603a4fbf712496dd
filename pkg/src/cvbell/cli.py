"""``bell`` command-line front end.

    bell dp|hd|ps --state twb|ips --r 0.5|0:2:0.01 [--gamma-t ...] [--n-th ...] [--angles=0,pi/2,-pi/4,pi/4] ...
    bell maximize dp|hd|ps [same options]
    bell preset fig-dp [--out data/fig-dp.csv] [--format csv|json]
    bell preset --list

Exit status: 0 on success, 2 on usage errors, 3 on domain errors.
"""

from __future__ import annotations

import argparse
import ast
import math
import operator
import sys
from pathlib import Path

from . import sweeps
from .errors import ConfigError, DomainError, FockConvergenceError

EXIT_USAGE = 2
EXIT_DOMAIN = 3

_OPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv}


def parse_number(text: str) -> float:
    """Float or a simple arithmetic expression in ``pi`` (``-pi/4``, ``3*pi/2``)."""

    def ev(node):
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.left), ev(node.right))
        raise ValueError(text)

    try:
        return ev(ast.parse(text.strip(), mode="eval").body)
    except (SyntaxError, ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def parse_r(text: str) -> tuple[float, float, float]:
    """``0.5`` (single point) or ``min:max:step``."""
    parts = text.split(":")
    if len(parts) == 1:
        v = parse_number(parts[0])
        return v, v, 1.0
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"--r expects a value or min:max:step, got {text!r}")
    return tuple(parse_number(p) for p in parts)  # type: ignore[return-value]


def parse_angles(text: str) -> tuple[float, ...]:
    """Four comma-separated angles."""
    parts = text.split(",")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError(f"--angles expects 4 comma-separated values, got {text!r}")
    return tuple(parse_number(p) for p in parts)


def _add_common(p: argparse.ArgumentParser, default_r: str | None) -> None:
    p.add_argument("--state", choices=sweeps.STATES, default="twb")
    p.add_argument("--r", type=parse_r, required=default_r is None, default=default_r and parse_r(default_r),
                   help="squeezing value or grid min:max:step")
    p.add_argument("--gamma-t", type=parse_number, default=0.0, help="damping exposure (rate x time)")
    p.add_argument("--n-th", type=parse_number, default=0.0, help="thermal photons per channel")
    p.add_argument("--tau", type=parse_number, default=0.9999, help="IPS effective transmissivity")
    p.add_argument("--J", type=parse_number, default=sweeps.DEFAULT_J, help="displaced-parity scale")
    p.add_argument("--eta-h", type=parse_number, default=1.0, help="homodyne efficiency")
    p.add_argument("--angles", type=parse_angles, metavar="A1,A2,B1,B2",
                   help="hd: theta1,theta2,phi1,phi2; ps: a1,a2,b1,b2 (radians, 'pi' allowed; "
                        "write --angles=-pi/4,... when the first one is negative)")
    p.add_argument("--oracle", action="store_true", help="add the Fock-truncation oracle value to each row")
    _add_output(p)


def _add_output(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", type=Path, help="output file (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--workers", type=int, default=1, help="processes for grid evaluation")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bell", description="Bell tests on twin-beam and IPS states.")
    sub = parser.add_subparsers(dest="command", required=True)
    for test in sweeps.TESTS:
        p = sub.add_parser(test, help=f"{test} Bell parameter over an r grid")
        _add_common(p, None)
        p.set_defaults(test=test)
    m = sub.add_parser("maximize", help="maximize a Bell parameter over r")
    m.add_argument("test", choices=sweeps.TESTS)
    _add_common(m, "0:2:0.01")
    pr = sub.add_parser("preset", help="regenerate a figure dataset")
    pr.add_argument("fig_id", nargs="?", choices=sorted(sweeps.PRESETS))
    pr.add_argument("--list", action="store_true")
    pr.add_argument("--oracle", action="store_true")
    _add_output(pr)
    return parser


def _config(args) -> sweeps.SweepConfig:
    r_min, r_max, r_step = args.r
    return sweeps.SweepConfig(
        test=args.test, state=args.state, r_min=r_min, r_max=r_max, r_step=r_step,
        gamma_t=args.gamma_t, n_th=args.n_th, tau=args.tau, J=args.J, eta_h=args.eta_h,
        angles=args.angles, label=args.state,
    ).validate()


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text)


def run(argv: list[str] | None = None) -> int:
    # argparse itself exits with status 2 on malformed command lines
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "preset":
            if args.list or args.fig_id is None:
                for name, (desc, curves) in sweeps.PRESETS.items():
                    print(f"{name:16s} {len(curves):2d} curves  {desc}")
                return 0
            curves = sweeps.run_preset(args.fig_id, workers=args.workers, oracle=args.oracle)
            text = sweeps.to_json(curves, args.fig_id) if args.format == "json" else sweeps.to_csv(curves)
        elif args.command == "maximize":
            cfg = _config(args)
            r_star, res = sweeps.maximize_over_r(cfg)
            if args.oracle:
                res.parameters["oracle_value"] = sweeps.oracle_value(cfg, r_star)
            curves = [(cfg, [res])]
            text = sweeps.to_json(curves) if args.format == "json" else sweeps.to_csv(curves)
        else:
            cfg = _config(args)
            curves = [(cfg, sweeps.sweep(cfg, workers=args.workers, oracle=args.oracle))]
            text = sweeps.to_json(curves) if args.format == "json" else sweeps.to_csv(curves)
    except ConfigError as e:
        print(f"bell: usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, FockConvergenceError) as e:
        print(f"bell: domain error: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    _emit(text, args.out)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
