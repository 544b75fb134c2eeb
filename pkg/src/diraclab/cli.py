"""Command-line experiment runner.

Subcommands: evolve, packet, em, fock, grassmann.  Each takes
--config <path>, --out <dir>, --assert and --seed <u64>, writes report.csv
(plus profile.csv / spectrum.csv where applicable) into the output directory
and exits 0 on success, 2 on a config error, 3 on an assertion breach, and
4 on an internal numerical failure (NaN/Inf in an output table).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import ConfigError, load_config
from .runner import EXPERIMENTS, AssertionBreach, NumericalFailure

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_ASSERT = 3
EXIT_NUMERIC = 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="diraclab",
        description="Classical Dirac field laboratory: config-driven experiment runs",
    )
    sub = parser.add_subparsers(dest="experiment", required=True)
    for name, help_text in [
        ("evolve", "free evolution with conserved-quantity and continuity tracking"),
        ("packet", "wavepacket width sweeps and spin diagnostics"),
        ("em", "electromagnetic analog energy and evolution identities"),
        ("fock", "finite-mode Fock operator identities and spectra"),
        ("grassmann", "Grassmann algebra identity checks"),
    ]:
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--config", required=True, help="experiment config file")
        cmd.add_argument("--out", required=True, help="output directory")
        cmd.add_argument("--assert", dest="do_assert", action="store_true",
                         help="exit 3 if any run-level tolerance is breached")
        cmd.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.seed < 0:
            raise ConfigError(f"--seed must be a nonnegative integer, got {args.seed}")
        cfg = load_config(args.config)
        declared = cfg.get("experiment")
        if declared is not None and declared != args.experiment:
            raise ConfigError(
                f"config key 'experiment' says {declared!r}, subcommand is {args.experiment!r}"
            )
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        EXPERIMENTS[args.experiment](cfg, outdir, args.seed, args.do_assert)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except AssertionBreach as exc:
        print(f"assertion breach: {exc}", file=sys.stderr)
        return EXIT_ASSERT
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    print(f"{args.experiment}: wrote {Path(args.out)}")
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
