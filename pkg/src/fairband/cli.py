"""Command line interface.

Subcommands: ``run`` executes an experiment from an INI config, ``preset``
executes a named built-in experiment, ``list-presets`` shows what is
available and ``validate`` checks a config and prints its resolved settings
without running anything.  Exit status: 0 on success, 1 on configuration or
runtime errors, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from .config import ConfigError, parse_config, validate_config
from .harness import default_threads, run_suite
from .presets import describe_presets, make_preset


def _add_common_overrides(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="output directory override")
    p.add_argument("--seeds", type=int, metavar="N", help="run seeds 0..N-1 instead")
    p.add_argument("--stride", type=int, help="trajectory CSV row spacing")
    p.add_argument("--threads", type=int, help="worker processes (default: FAIRBAND_THREADS or 1)")
    p.add_argument("--no-figures", action="store_true", help="skip figure rendering")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fairband",
        description="Fairness-aware contextual bandit simulations with corruption and auditing.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run an experiment from an INI config file")
    p_run.add_argument("config", help="path to the experiment INI file")
    _add_common_overrides(p_run)

    p_preset = sub.add_parser("preset", help="run a built-in experiment")
    p_preset.add_argument("name", help="preset name; see list-presets")
    p_preset.add_argument("--wine-red", help="red wine CSV path (wine presets)")
    p_preset.add_argument("--wine-white", help="white wine CSV path (wine presets)")
    _add_common_overrides(p_preset)

    sub.add_parser("list-presets", help="list built-in experiments")

    p_val = sub.add_parser("validate", help="check a config and print resolved settings")
    p_val.add_argument("config", help="path to the experiment INI file")

    return parser


def _apply_overrides(config, args):
    updates = {}
    if args.out is not None:
        updates["out_dir"] = args.out
    if args.seeds is not None:
        if args.seeds < 1:
            raise ConfigError("--seeds must be at least 1")
        updates["seeds"] = tuple(range(args.seeds))
    if args.stride is not None:
        updates["stride"] = args.stride
    if args.threads is not None:
        updates["threads"] = args.threads
    elif config.threads == 1 and default_threads() > 1:
        updates["threads"] = default_threads()
    if args.no_figures:
        updates["figures"] = False
    if updates:
        config = replace(config, **updates)
        validate_config(config)
    return config


def _report(suite) -> None:
    config = suite.config
    print(f"experiment {config.experiment_id}: {len(config.seeds)} seeds, horizon {config.horizon}")
    for s in suite.summaries:
        print(
            f"  {s.policy:<22} regret {s.regret_mean:10.2f} +- {s.regret_sd:8.2f}   "
            f"unfair {s.unfair_mean:10.1f} +- {s.unfair_sd:8.1f}"
        )
    print(f"outputs in {config.out_dir}")


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            config = _apply_overrides(parse_config(args.config), args)
            _report(run_suite(config))
        elif args.command == "preset":
            config = make_preset(
                args.name, wine_red=args.wine_red, wine_white=args.wine_white
            )
            config = _apply_overrides(config, args)
            validate_config(config)
            _report(run_suite(config))
        elif args.command == "list-presets":
            for name, blurb in describe_presets():
                print(f"{name:<16} {blurb}")
        elif args.command == "validate":
            for line in validate_config(parse_config(args.config)):
                print(line)
        return 0
    except (ConfigError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
