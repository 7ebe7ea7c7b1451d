"""Command-line entry point.

Every subcommand writes CSV (or JSON with ``--format json``) to ``--out`` or
stdout.  Exit status: 0 success, 2 bad configuration, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import json
import math
import re
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._csv import to_csv
from .design import find_extremal_tau, solve_tau_for_nmean
from .errors import (DegenerateSearchError, DomainError, GridError, InfeasibleTargetError,
                     IntegrationError)
from .observables import energy_ratio_E2_E0, energy_ratio_E2_E1, moments_at
from .pinney import solve_protocol
from .protocol import FrequencyProtocol, two_jump
from .squeeze import squeeze_at
from .transitions import prob_closed, table_at
from .verify import run_checks

EXIT_CONFIG = 2
EXIT_NUMERIC = 3

_PI_EXPR = re.compile(r"^\s*([-+]?[0-9.]*(?:[eE][-+]?\d+)?)\s*\*?\s*pi\s*(?:/\s*([0-9.]+))?\s*$")


class ConfigError(Exception):
    pass


def parse_real(text: str) -> float:
    """Float, or a multiple of pi such as ``pi``, ``5pi/6`` or ``59*pi/62``."""
    try:
        return float(text)
    except ValueError:
        pass
    match = _PI_EXPR.match(text)
    if not match:
        raise argparse.ArgumentTypeError(f"not a number or multiple of pi: {text!r}")
    coef = match.group(1)
    coef = 1.0 if coef in ("", "+") else -1.0 if coef == "-" else float(coef)
    div = float(match.group(2)) if match.group(2) else 1.0
    return coef * math.pi / div


@dataclass(frozen=True)
class RunConfig:
    protocol: FrequencyProtocol
    t_start: float
    t_end: float
    samples: int
    n: int
    m: int
    max_level: int
    fmt: str

    def __post_init__(self):
        if self.samples < 2:
            raise ConfigError("--samples must be at least 2")
        if not self.t_start < self.t_end:
            raise ConfigError("--t-start must be smaller than --t-end")
        if self.n < 0 or self.m < 0:
            raise ConfigError("--n and --m must be non-negative")
        if self.max_level < max(self.n, self.m):
            raise ConfigError("--max-level must be at least max(--n, --m)")

    @property
    def times(self) -> np.ndarray:
        return np.linspace(self.t_start, self.t_end, self.samples)


def _protocol_from_args(args) -> FrequencyProtocol:
    if args.protocol:
        try:
            return FrequencyProtocol.from_json(Path(args.protocol).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read protocol file: {exc}") from exc
    if args.omega1 is None or args.tau is None:
        raise ConfigError("give --protocol, or both --omega1 and --tau")
    return two_jump(args.omega0, args.omega1, args.tau, args.mass, args.hbar)


def _config(args) -> RunConfig:
    max_level = args.max_level if args.max_level is not None else max(args.n, args.m, 8)
    return RunConfig(_protocol_from_args(args), args.t_start, args.t_end, args.samples,
                     args.n, args.m, max_level, args.format)


def _tabular(header, rows, fmt):
    if fmt == "json":
        return json.dumps({"columns": list(header), "rows": [list(r) for r in rows]}) + "\n"
    return to_csv(header, rows)


def cmd_rho(cfg: RunConfig) -> str:
    s = solve_protocol(cfg.protocol)
    t = cfg.times
    rho, rho_dot, _ = s.evaluate(t)
    omega = s.omega(t)
    rows = [(float(a), float(b), float(c), float(d)) for a, b, c, d in zip(t, rho, rho_dot, omega)]
    return _tabular(("t", "rho", "rho_dot", "omega"), rows, cfg.fmt)


def cmd_squeeze(cfg: RunConfig) -> str:
    s = solve_protocol(cfg.protocol)
    rows = []
    for t in cfg.times:
        sq = squeeze_at(s, float(t))
        rows.append((float(t), sq.r, sq.phi if sq.phi_defined else None, sq.phi_defined))
    return _tabular(("t", "r", "phi", "phi_defined"), rows, cfg.fmt)


def cmd_moments(cfg: RunConfig, with_product: bool = False) -> str:
    s = solve_protocol(cfg.protocol)
    header = ("t", "n", "x2", "p2", "var_x", "var_p", "energy", "n_mean")
    rows = []
    for t in cfg.times:
        ms = moments_at(s, cfg.n, float(t))
        row = ms.row()
        rows.append(row + (ms.uncertainty,) if with_product else row)
    if with_product:
        header = header + ("var_x_var_p",)
    return _tabular(header, rows, cfg.fmt)


def cmd_transitions(cfg: RunConfig, at: float | None = None) -> str:
    s = solve_protocol(cfg.protocol)
    if at is not None:
        table = table_at(s, at, cfg.max_level)
        return table.to_json() + "\n" if cfg.fmt == "json" else table.to_csv()
    rows = []
    for t in cfg.times:
        r = squeeze_at(s, float(t)).r
        for n in range(cfg.max_level + 1):
            rows.append((float(t), cfg.m, n, prob_closed(cfg.m, n, r)))
    return _tabular(("t", "m", "n", "prob"), rows, cfg.fmt)


def cmd_sweep_energy(omega0, tau_range, ratio_range, fmt="csv") -> str:
    """E2/E0 and E2/E1 on a (omega0*tau, omega1/omega0) grid."""
    taus = np.linspace(*tau_range) / omega0
    ratios = np.linspace(*ratio_range)
    if np.any(ratios <= 0):
        raise ConfigError("frequency ratios must be positive")
    T, R = np.meshgrid(taus, ratios, indexing="ij")
    e20 = energy_ratio_E2_E0(omega0, R * omega0, T)
    e21 = energy_ratio_E2_E1(omega0, R * omega0, T)
    rows = [(float(omega0 * T[i, j]), float(R[i, j]), float(e20[i, j]), float(e21[i, j]))
            for i in range(T.shape[0]) for j in range(T.shape[1])]
    return _tabular(("omega0_tau", "omega1_ratio", "e2_over_e0", "e2_over_e1"), rows, fmt)


def cmd_verify(tol: float = 1e-10, corrupt: bool = False) -> tuple[str, bool]:
    results = run_checks(tol=tol, corrupt=corrupt)
    text = "\n".join(r.line() for r in results) + "\n"
    return text, all(r.passed for r in results)


def _common(p: argparse.ArgumentParser):
    p.add_argument("--omega0", type=parse_real, default=1.0)
    p.add_argument("--omega1", type=parse_real)
    p.add_argument("--tau", type=parse_real)
    p.add_argument("--mass", type=parse_real, default=1.0)
    p.add_argument("--hbar", type=parse_real, default=1.0)
    p.add_argument("--protocol", help="JSON protocol file (overrides the two-jump flags)")
    p.add_argument("--t-start", type=parse_real, default=-1.0)
    p.add_argument("--t-end", type=parse_real, default=4 * math.pi)
    p.add_argument("--samples", type=int, default=1001)
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--max-level", type=int)
    p.add_argument("--out")
    p.add_argument("--format", choices=("csv", "json"), default="csv")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lrquench",
        description="Exact dynamics of a harmonic oscillator with sudden frequency jumps.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in (("rho", "Ermakov-Pinney solution rho(t)"),
                        ("squeeze", "squeeze parameter and phase"),
                        ("moments", "second moments, energy, mean excitation")):
        sp = sub.add_parser(name, help=help_)
        _common(sp)
        if name == "moments":
            sp.add_argument("--uncertainty", action="store_true",
                            help="append a var_x_var_p column")
    sp = sub.add_parser("transitions", help="Fock transition probabilities")
    _common(sp)
    sp.add_argument("--at", type=parse_real, help="emit the full table at this time")

    sp = sub.add_parser("sweep-energy", help="E2/E0 and E2/E1 over a parameter grid")
    _common(sp)
    sp.add_argument("--tau-min", type=parse_real, default=0.0)
    sp.add_argument("--tau-max", type=parse_real, default=2 * math.pi)
    sp.add_argument("--tau-samples", type=int, default=101)
    sp.add_argument("--ratio-min", type=parse_real, default=0.05)
    sp.add_argument("--ratio-max", type=parse_real, default=3.0)
    sp.add_argument("--ratio-samples", type=int, default=60)

    sp = sub.add_parser("design", help="search tau for revivals, maximal squeezing or a target")
    _common(sp)
    sp.add_argument("--kind", choices=("revival", "maximal"))
    sp.add_argument("--index", type=int, default=1)
    sp.add_argument("--target-nmean", type=parse_real)

    sp = sub.add_parser("verify", help="run the oracle-equivalence self checks")
    _common(sp)
    sp.add_argument("--tol", type=float, default=1e-10, help="ODE tolerance, in (1e-14, 1e-3)")
    sp.add_argument("--corrupt-segment", action="store_true", help=argparse.SUPPRESS)
    return parser


def _run(args) -> tuple[str, int]:
    if args.command == "verify":
        text, ok = cmd_verify(args.tol, args.corrupt_segment)
        return text, 0 if ok else EXIT_NUMERIC
    if args.command == "sweep-energy":
        if args.tau_samples < 2 or args.ratio_samples < 2:
            raise ConfigError("sweep grids need at least 2 samples per axis")
        return cmd_sweep_energy(args.omega0, (args.tau_min, args.tau_max, args.tau_samples),
                                (args.ratio_min, args.ratio_max, args.ratio_samples),
                                args.format), 0
    if args.command == "design":
        if args.omega1 is None:
            raise ConfigError("design needs --omega1")
        if args.target_nmean is not None:
            res = solve_tau_for_nmean(args.omega0, args.omega1, args.target_nmean)
        elif args.kind:
            res = find_extremal_tau(args.omega0, args.omega1, args.kind, args.index,
                                    args.mass, args.hbar)
        else:
            raise ConfigError("design needs --kind or --target-nmean")
        return json.dumps(res.to_dict()) + "\n", 0
    cfg = _config(args)
    if args.command == "rho":
        return cmd_rho(cfg), 0
    if args.command == "squeeze":
        return cmd_squeeze(cfg), 0
    if args.command == "moments":
        return cmd_moments(cfg, args.uncertainty), 0
    return cmd_transitions(cfg, args.at), 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text, code = _run(args)
    except (ConfigError, DomainError, InfeasibleTargetError, DegenerateSearchError) as exc:
        print(f"lrquench: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (IntegrationError, GridError, ArithmeticError) as exc:
        print(f"lrquench: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
