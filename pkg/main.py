#!/usr/bin/env python3
"""
Main entry point for mollowsim
Lightweight CLI that loads a config and routes the subcommand to the simulator
"""

import argparse
import json
import logging
import sys
from pathlib import Path

from mollowsim import SUBCOMMANDS, load_config, run_subcommand
from mollowsim.errors import ConfigError
from mollowsim.utils import save_json_file


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='sim',
        description="Spin qubit / nanowire hybrid simulator: field maps, ESR, mechanics, "
                    "Bloch dynamics and the phonon-dressed triplet.",
        epilog="Examples:\n"
               "  python main.py scales --config configs/working_point.json --out out/scales\n"
               "  python main.py mollow-sweep --config configs/working_point.json --threads 4",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument('subcommand', choices=SUBCOMMANDS)
    parser.add_argument('--config', required=True, type=Path, help="JSON config file")
    parser.add_argument('--out', type=Path, default=None,
                        help="output directory (default: output.directory from the config)")
    parser.add_argument('--threads', type=int, default=None,
                        help="worker count for simulation sweeps (default: all cores)")
    parser.add_argument('--seed', type=int, default=None,
                        help="reserved for stochastic extensions; currently unused")
    parser.add_argument('-v', '--verbose', action='store_true', help="debug logging")
    parser.add_argument('-q', '--quiet', action='store_true', help="no progress output")
    return parser


def main(argv=None) -> int:
    """Main entry point; returns the process exit code"""
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads is not None and args.threads < 1:
        parser.error("--threads must be >= 1")

    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level, format='%(levelname)s %(name)s: %(message)s')

    try:
        config = load_config(args.config)
    except ConfigError as e:
        record = e.to_record()
        # the config never loaded, so there is no hash to carry
        record['config_hash'] = None
        print(json.dumps(record), file=sys.stderr)
        if args.out is not None:
            args.out.mkdir(parents=True, exist_ok=True)
            save_json_file(args.out / 'error.json', record)
        return e.exit_code

    code, _ = run_subcommand(args.subcommand, config, out_dir=args.out, workers=args.threads,
                             seed=args.seed, quiet=args.quiet)
    return code


if __name__ == "__main__":
    sys.exit(main())
