"""Command-line entry point: ``pinlab {generate,select,sweep,validate,plot}``."""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .harness import cmd_generate, cmd_plot, cmd_select, cmd_sweep, cmd_validate
from .harness.config import AXES, ExperimentConfig, load_config, parse_config
from .degree_model import GenerationError
from .spectral import AUDIT, BACKENDS


def _csv_list(s: str) -> list[str]:
    return [x.strip() for x in s.split(",") if x.strip()]


def _number(s: str) -> float:
    return float(s)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="key = value experiment file")
    common.add_argument("--out", type=Path, default=Path("out"), help="output directory")
    common.add_argument("--seed", type=int, action="append", dest="seeds", help="seed (repeatable)")
    common.add_argument("--backend", choices=BACKENDS, help="evaluation backend")
    common.add_argument("--pmax", type=float, help="largest pinned fraction")
    common.add_argument("--strategies", type=_csv_list, help="comma-separated, e.g. A2,DC,BFG")
    common.add_argument("--lcc", choices=("on", "off"), help="reduce edge-list inputs to the largest component")
    common.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="override any config key")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="pinlab", description="Optimal pinning sets under the annealed approximation.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("generate", parents=[common], help="sample configuration-model graphs")
    sel = sub.add_parser("select", parents=[common], help="run strategies and write result CSVs")
    sel.add_argument("--dump-char", action="store_true",
                     help="also write (lambda, g(lambda)) samples of the annealed characteristic function")
    sw = sub.add_parser("sweep", parents=[common], help="repeat select along one distribution parameter")
    sw.add_argument("--axis", choices=AXES)
    sw.add_argument("--values", type=lambda s: [_number(x) for x in _csv_list(s)])
    va = sub.add_parser("validate", parents=[common], help="A2 against exhaustive search plus property checks")
    va.add_argument("--n-max", type=int, default=16)
    va.add_argument("--c-max", type=int, default=5)
    va.add_argument("--trials", type=int, default=200)
    pl = sub.add_parser("plot", help="SVG chart from a results CSV")
    pl.add_argument("results", type=Path)
    pl.add_argument("--out", type=Path, default=None, help="SVG path (default: next to the CSV)")
    pl.add_argument("--title", default="")
    return p


def resolve_config(args, selection: bool = True) -> ExperimentConfig:
    cfg = load_config(args.config, selection) if args.config else ExperimentConfig()
    if args.set:
        text = cfg.dumps() + "\n".join(args.set) + "\n"
        # later keys win: rebuild from a deduplicated mapping
        merged = {}
        for line in text.splitlines()[1:]:
            if "=" in line:
                k, v = line.split("=", 1)
                merged[k.strip()] = v.strip()
        cfg = parse_config("\n".join(f"{k} = {v}" for k, v in merged.items()), selection=selection)
    over = {}
    if args.seeds:
        over["seeds"] = args.seeds
    if args.backend:
        over["backend"] = args.backend
    if args.pmax is not None:
        over["p_max"] = args.pmax
    if args.strategies:
        over["strategies"] = [s.upper() for s in args.strategies]
    if args.lcc:
        over["lcc"] = args.lcc == "on"
    if getattr(args, "axis", None):
        over["axis"] = args.axis
    if getattr(args, "values", None):
        over["values"] = args.values
    return cfg.replace(**over).validate(selection)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        if args.command == "plot":
            out = args.out or args.results.with_suffix(".svg")
            print(cmd_plot(args.results, out, args.title))
            return 0
        if args.command == "validate":
            seed = args.seeds[0] if args.seeds else 0
            code, text = cmd_validate(args.n_max, args.c_max, args.trials, seed, args.out)
            sys.stdout.write(text)
            return code
        cfg = resolve_config(args, selection=args.command != "generate")
        if args.command == "generate":
            for path in cmd_generate(cfg, args.out):
                print(path)
            return 0
        if args.command == "select":
            outcome = cmd_select(cfg, args.out, args.dump_char)
            print(f"wrote {len(outcome.result_rows)} rows to {args.out / 'results.csv'}")
            _report_audit()
            return 1 if outcome.failures else 0
        if args.command == "sweep":
            if not cfg.axis or not cfg.values:
                raise ValueError("sweep needs --axis and --values (or axis/values in the config)")
            sw = cmd_sweep(cfg, args.out, cfg.axis, cfg.values)
            for t in sw.trends:
                print(f"{t['strategy']}: omega decreasing along {cfg.axis}: {t['omega_monotone_decreasing']}")
            _report_audit()
            return 1 if sw.failures else 0
    except GenerationError as exc:
        print(f"pinlab {args.command}: error: {exc} {exc.diagnostics}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"pinlab {args.command}: error: {exc}", file=sys.stderr)
        return 2
    return 0


def _report_audit() -> None:
    if AUDIT.violations():
        print(f"bound check: {AUDIT.summary()}", file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
