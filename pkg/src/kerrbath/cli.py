"""Command-line entry point: ``kerrbath run --scenario <name> ...``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .model import ModelParams
from .scenarios import SCENARIOS, Scenario, parse_grid, run_scenario

log = logging.getLogger("kerrbath")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kerrbath", description="Kerr oscillator in a phase-damping bath: figure and check scenarios")
    sub = p.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run one scenario and write CSV + JSON")
    run.add_argument("--scenario", required=True, choices=SCENARIOS)
    run.add_argument("--params", type=Path, help="JSON parameter document replacing the preset")
    run.add_argument("--out", type=Path, default=Path("."), help="output directory (default: cwd)")
    run.add_argument("--seed", type=int, default=None, help="Monte Carlo seed (unsigned 64-bit)")
    run.add_argument("--samples", type=int, default=0, help="Monte Carlo samples for oracle-check (0 = skip)")
    run.add_argument("--grid", type=str, default=None, help="start:stop:count (tau grid; beta*hbar*omega grid for sweep)")
    run.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        params = ModelParams.load(args.params) if args.params else None
        grid = parse_grid(args.grid) if args.grid else None
        kwargs = {"out_dir": args.out, "samples": args.samples}
        if args.seed is not None:
            kwargs["seed"] = args.seed
        sc = Scenario.preset(args.scenario, params=params, tau_grid=grid, **kwargs)
        paths = run_scenario(sc)
    except (ValueError, OSError) as exc:
        print(f"kerrbath: error: {exc}", file=sys.stderr)
        return 2
    for path in paths:
        log.info("wrote %s", path)
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
