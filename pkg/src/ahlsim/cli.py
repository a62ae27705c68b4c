"""Command-line entry point.

    ahl-sim run <preset|config-file> [--seed S] [--out DIR] [--noise P]
                                     [--depth L] [--model rqnn|qnn]
    ahl-sim presets
    ahl-sim check
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .checks import run_all
from .experiments import PRESET_GROUPS, PRESETS, load_config, run_experiment, run_preset


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ahl-sim",
        description="Train the lattice-ansatz and baseline circuit models on the preset experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_parser = sub.add_parser("run", help="run a preset by name or a key=value config file")
    run_parser.add_argument("target", help="preset name or path to a config file")
    run_parser.add_argument("--seed", type=int, default=None, help="override the experiment seed")
    run_parser.add_argument("--out", default="out", help="output directory (default: out)")
    run_parser.add_argument("--noise", type=float, default=None, help="override the damping strength")
    run_parser.add_argument("--depth", type=int, default=None, help="override the circuit depth")
    run_parser.add_argument("--model", choices=("rqnn", "qnn"), default=None, help="run one model only")

    sub.add_parser("presets", help="list the available presets")
    sub.add_parser("check", help="run the invariant check suite")
    return parser


def _cmd_run(args) -> int:
    if args.target in PRESETS:
        records = run_preset(
            args.target,
            args.out,
            seed=args.seed,
            noise=args.noise,
            depth=args.depth,
            model=args.model,
        )
        name = args.target
    else:
        path = Path(args.target)
        if not path.is_file():
            raise ValueError(f"{args.target!r} is neither a preset nor a config file")
        cfg = load_config(path)
        import dataclasses

        overrides = {}
        if args.seed is not None:
            overrides["seed"] = args.seed
        if args.noise is not None:
            overrides["noise"] = args.noise
        if args.depth is not None:
            overrides["depth"] = args.depth
        if args.model is not None:
            overrides["model"] = args.model
        cfg = dataclasses.replace(cfg, **overrides)
        records = [run_experiment(cfg, args.out)]
        name = cfg.name
    for record in records:
        print(
            f"{name}/{record.model}: final loss {record.loss_curve[-1]:.6g}, "
            f"train metric {record.train_metric:.6g}, test metric {record.test_metric:.6g}"
        )
    print(f"artifacts under {Path(args.out) / name}")
    return 0


def _cmd_presets() -> int:
    for group, names in PRESET_GROUPS.items():
        print(group)
        for name in names:
            for cfg in PRESETS[name]:
                print(
                    f"  {name} [{cfg.model}]: task={cfg.task} depth={cfg.depth} "
                    f"lr={cfg.learning_rate:g} epochs={cfg.epochs} noise={cfg.noise:g}"
                )
    return 0


def _cmd_check() -> int:
    results = run_all()
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        print(f"{status} {result.name}: {result.detail}")
    return 0 if all(r.passed for r in results) else 1


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "presets":
            return _cmd_presets()
        return _cmd_check()
    except Exception as exc:  # CLI contract: nonzero exit with a message
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
