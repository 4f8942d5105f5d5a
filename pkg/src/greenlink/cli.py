"""Command-line front end.

Subcommands::

    greenlink energy SCENARIO [--json]         one-cell energy report
    greenlink sweep  SCENARIO [--out CSV] [--json]
    greenlink mmax   SCENARIO                  largest feasible constellation
    greenlink verify [--seed N] [--samples N] [--json]

Exit codes: 0 success (and, for ``energy``, feasible; for ``verify``, all
bounds hold), 1 infeasible result or bound violation, 2 configuration
error, 3 numerical failure.

CSV numbers are serialized with 9 significant digits and rows iterate in
declaration order, so identical scenarios produce byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import (
    ConfigError,
    GreenlinkError,
    InfeasibleTargetError,
    NumericalError,
    UnsupportedFadingError,
)
from .montecarlo import verify_bounds
from .scenario import load_scenario
from .schemes import total_energy, max_constellation, M_CONSTRAINED
from .solver import SweepRow, sweep

CSV_HEADER = "scheme,m,d_m,k_db,target_ser,t_ac_s,e_t_j,e_tx_j,e_circ_j,e_trans_j,e_total_j,feasible"

EXIT_OK = 0
EXIT_INFEASIBLE = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _fmt(x: float | None) -> str:
    return "" if x is None else format(x, ".9g")


def _row_csv(row: SweepRow) -> str:
    return ",".join(
        (
            row.scheme.value,
            str(row.m),
            _fmt(row.d_m),
            _fmt(row.k_db),
            _fmt(row.target_ser),
            _fmt(row.t_ac_s),
            _fmt(row.e_t_j),
            _fmt(row.e_tx_j),
            _fmt(row.e_circ_j),
            _fmt(row.e_trans_j),
            _fmt(row.e_total_j),
            "true" if row.feasible else "false",
        )
    )


def _row_dict(row: SweepRow) -> dict:
    out = {
        "scheme": row.scheme.value,
        "m": row.m,
        "d_m": row.d_m,
        "k_db": row.k_db,
        "fading_desc": row.fading_desc,
        "target_ser": row.target_ser,
        "t_ac_s": row.t_ac_s,
        "e_t_j": row.e_t_j,
        "e_tx_j": row.e_tx_j,
        "e_circ_j": row.e_circ_j,
        "e_trans_j": row.e_trans_j,
        "e_total_j": row.e_total_j,
        "feasible": row.feasible,
    }
    if row.error is not None:
        out["error"] = row.error
    return out


def cmd_energy(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.scenario)
    cfg, link, fading, circuit = scenario.build_single()
    bd = total_energy(cfg, link, fading, circuit)
    row = SweepRow(
        scheme=cfg.scheme,
        m=cfg.m,
        d_m=link.distance_m,
        k_db=scenario.fading.get("k_db"),
        fading_desc=fading.describe(),
        target_ser=cfg.target_ser,
        t_ac_s=bd.t_active_s,
        e_t_j=bd.symbol_energy_j,
        e_tx_j=bd.transmit_j,
        e_circ_j=bd.circuit_j,
        e_trans_j=bd.transient_j,
        e_total_j=bd.total_j,
        feasible=bd.feasible,
    )
    if args.json:
        print(json.dumps(_row_dict(row), indent=2))
    else:
        for key, value in _row_dict(row).items():
            if value is None:
                continue
            if isinstance(value, float):
                value = format(value, ".9g")
            elif isinstance(value, bool):
                value = "true" if value else "false"
            print(f"{key:<12} {value}")
    return EXIT_OK if bd.feasible else EXIT_INFEASIBLE


def cmd_sweep(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.scenario)
    rows = sweep(scenario.build_sweep())
    if args.json:
        text = json.dumps([_row_dict(r) for r in rows], indent=2) + "\n"
    else:
        text = "\n".join([CSV_HEADER] + [_row_csv(r) for r in rows]) + "\n"
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_mmax(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.scenario)
    scheme = scenario.scheme_id()
    if scheme not in M_CONSTRAINED:
        raise ConfigError(f"mmax applies to MFSK/MPPM schemes, got {scheme.value}")
    cfg = scenario.build_config(scheme=scheme, m=2)
    b_max, m_max = max_constellation(cfg)
    print(f"b_max={b_max} m_max={m_max}")
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    if args.samples < 1000:
        raise ConfigError(f"--samples must be at least 1000, got {args.samples}")
    if args.seed < 0:
        raise ConfigError(f"--seed must be >= 0, got {args.seed}")
    rows = verify_bounds(n_samples=args.samples, seed=args.seed)
    if args.json:
        print(json.dumps([r.__dict__ | {"scheme": r.scheme.value} for r in rows], indent=2))
    else:
        print(
            f"{'scheme':<14}{'m':>4}  {'fading':<24}{'gbar':>8}"
            f"{'bound':>14}{'exact':>14}{'mc':>14}{'ci95':>11}  status"
        )
        for r in rows:
            print(
                f"{r.scheme.value:<14}{r.m:>4}  {r.fading_desc:<24}{r.gamma_bar:>8g}"
                f"{r.bound:>14.6e}{r.exact:>14.6e}{r.mc_mean:>14.6e}{r.mc_half_width:>11.2e}"
                f"  {'pass' if r.passed else 'FAIL'}"
            )
        n_pass = sum(r.passed for r in rows)
        print(f"{n_pass}/{len(rows)} bound checks passed")
    return EXIT_OK if all(r.passed for r in rows) else EXIT_INFEASIBLE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="greenlink",
        description="Per-frame energy models of sensor-node modulation schemes "
        "over fading channels with path loss.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("energy", help="energy breakdown of a single configuration")
    p.add_argument("scenario", help="scenario file path or preset name")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.set_defaults(func=cmd_energy)

    p = sub.add_parser("sweep", help="evaluate a (scheme, M, d, K) grid to CSV")
    p.add_argument("scenario", help="scenario file path or preset name")
    p.add_argument("--out", help="CSV output path (default: stdout)")
    p.add_argument("--json", action="store_true", help="emit JSON rows instead of CSV")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("mmax", help="largest constellation fitting the frame budget")
    p.add_argument("scenario", help="scenario file path or preset name")
    p.set_defaults(func=cmd_mmax)

    p = sub.add_parser("verify", help="bound-domination report (quadrature + Monte Carlo)")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, UnsupportedFadingError, InfeasibleTargetError, ValueError, OSError) as exc:
        print(f"greenlink: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"greenlink: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except GreenlinkError as exc:
        print(f"greenlink: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
