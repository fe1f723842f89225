"""Command-line entry point: single-point evaluation, sweeps and self-checks.

Exit codes: 0 success, 1 validation error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import sys

from .checks import run_selfcheck
from .errors import NumericalError
from .metrics import relative_power, required_transmit_power
from .scenario import Architecture, Mode, Scenario, load_scenario_file, table1_defaults, watt_to_dbm, with_mode
from .sweep import METRICS, PRESETS, VARIABLES, SweepConfig, SweepSpec, emit_csv, make_grid, run_point, run_preset, run_sweep

EXIT_OK, EXIT_INVALID, EXIT_NUMERICAL = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    # usage errors are validation errors
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _scenario(args) -> Scenario:
    scn = load_scenario_file(args.config) if args.config else table1_defaults()
    if args.arch:
        scn = scn.replace(architecture=Architecture.parse(args.arch))
    if args.mode:
        scn = with_mode(scn, args.mode, scn.ris_u.amplification if args.mode == scn.ris_u.mode.value else None)
    return scn


def cmd_eval(args) -> int:
    scn = _scenario(args)
    m = run_point(scn, exact=args.exact)
    print(f"architecture      {scn.architecture.value}")
    print(f"ris_u mode        {scn.ris_u.mode.value}")
    print(f"model             {m.model_used}")
    print(f"path loss         {m.path_loss_db:.4f} dB")
    print(f"amplification     {m.amplification:.6g}")
    print(f"noise             {watt_to_dbm(m.noise_w):.4f} dBm")
    print(f"SNR               {m.snr_db:.4f} dB")
    print(f"ADR               {m.adr_bps_per_hz:.6g} bps/Hz")
    print(f"total power       {watt_to_dbm(m.p_total_w):.4f} dBm ({m.p_total_w:.6g} W)")
    print(f"energy efficiency {m.ee_bits_per_joule:.6g} bit/J")
    if args.target_adr is not None:
        p = required_transmit_power(scn, args.target_adr, exact=args.exact)
        print(f"required P_t      {watt_to_dbm(p):.4f} dBm for {args.target_adr:g} bps/Hz")
        if scn.architecture is not Architecture.NORIS:
            print(f"RP vs no RIS      {relative_power(scn, args.target_adr, exact=args.exact):.4f} dB")
    return EXIT_OK


def cmd_sweep(args) -> int:
    scn = _scenario(args)
    if args.preset:
        result = run_preset(args.preset, scn)
    else:
        missing = [f for f in ("var", "min", "max", "points") if getattr(args, f) is None]
        if missing:
            raise ValueError(f"custom sweep needs --{', --'.join(missing)} (or use --preset)")
        label = f"{scn.architecture.value} ({scn.ris_u.mode.value})"
        overrides = {"path_loss_model": scn.path_loss_model}
        if args.target_adr is not None:
            overrides["target_adr"] = args.target_adr
        spec = SweepSpec(
            variable=args.var,
            grid=make_grid(args.min, args.max, args.points, log=args.log),
            configurations=(SweepConfig(label, scn.architecture, scn.ris_u.mode, overrides),),
            metric=args.metric.upper(),
        )
        result = run_sweep(spec, scn)
    if args.out == "-":
        emit_csv(result, sys.stdout)
    else:
        emit_csv(result, args.out)
        print(f"wrote {len(result.rows)} rows to {args.out}", file=sys.stderr)
    return EXIT_OK


def cmd_selfcheck(args) -> int:
    ok = True
    for name, passed, detail in run_selfcheck(args.seed):
        ok &= passed
        print(f"{'PASS' if passed else 'FAIL'}  {name}: {detail}")
    return EXIT_OK if ok else EXIT_NUMERICAL


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="drisleo", description="Double-RIS LEO uplink link-level simulator.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--config", help="YAML scenario file (defaults to the built-in baseline)")
        sp.add_argument("--arch", choices=[a.value for a in Architecture])
        sp.add_argument("--mode", choices=[m.value for m in Mode], help="RIS-u mode")
        sp.add_argument("--target-adr", type=float, help="target ADR (bps/Hz) for required-power metrics")

    e = sub.add_parser("eval", help="evaluate one scenario")
    common(e)
    e.add_argument("--exact", action="store_true", help="force the per-element path-loss sum")
    e.set_defaults(func=cmd_eval)

    s = sub.add_parser("sweep", help="run a preset or custom sweep and write CSV")
    common(s)
    s.add_argument("--preset", choices=PRESETS)
    s.add_argument("--var", choices=VARIABLES)
    s.add_argument("--min", type=float)
    s.add_argument("--max", type=float)
    s.add_argument("--points", type=int)
    s.add_argument("--log", action="store_true", help="log-spaced grid")
    s.add_argument("--metric", default="adr", choices=[m.lower() for m in METRICS] + list(METRICS))
    s.add_argument("--out", required=True, help="CSV path, or - for stdout")
    s.set_defaults(func=cmd_sweep)

    c = sub.add_parser("selfcheck", help="seeded oracle and coherent-combining checks")
    c.add_argument("--seed", type=int, default=0, help="RNG seed (unsigned 64-bit)")
    c.set_defaults(func=cmd_selfcheck)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "seed", 0) is not None and not 0 <= getattr(args, "seed", 0) < 2**64:
        print("error: --seed must fit in an unsigned 64-bit integer", file=sys.stderr)
        return EXIT_INVALID
    try:
        return args.func(args)
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, OSError) as exc:
        # ConfigError and GeometryError are ValueErrors
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
