"""``cci-ring <mode> [--config FILE] [--out DIR] [--seed N] [--override key=value ...]``.

Exit status: 0 success, 2 some solve did not converge, 1 error.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .config import MODES, OUT_ENV, load_config
from .errors import CciRingError
from .runner import EXIT_CODES, ERROR, run


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="cci-ring",
        description="Projected Hartree (CCI) and GP ground states of bosons on a ring.",
        epilog=f"Default output root: ${OUT_ENV} or ./cci_ring_out, plus the mode name.")
    p.add_argument("mode", choices=MODES)
    p.add_argument("--config", help="sectioned key = value file (defaults if omitted)")
    p.add_argument("--out", help="output directory")
    p.add_argument("--seed", type=int, help="unsigned 64-bit RNG seed")
    p.add_argument("--override", action="append", default=[], metavar="KEY=VALUE",
                   help="override a config key, e.g. model.gamma=-1 (repeatable)")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        config = load_config(args.config, overrides=args.override, mode=args.mode,
                             seed=args.seed, output_dir=args.out)
        manifest = run(config)
    except (CciRingError, OSError, ArithmeticError) as exc:
        print(f"cci-ring: error: {exc}", file=sys.stderr)
        return EXIT_CODES[ERROR]
    print(f"{manifest.status}: {manifest.path}")
    return manifest.exit_code


if __name__ == "__main__":
    sys.exit(main())
