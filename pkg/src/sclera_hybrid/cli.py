"""Command line entry point: ``sclera-hybrid {run,reproduce,sweep,validate}``.

Exit codes: 0 success, 2 config error, 3 validation error, 4 runtime error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import export
from .analysis import sweep
from .config import (
    ConfigError,
    ScenarioConfig,
    ValidationError,
    dump_config,
    figure_config,
    resolve_config,
    with_overrides,
)
from .core import InvalidParameters, validate_params
from .solver import simulate

EXIT_OK, EXIT_CONFIG, EXIT_VALIDATION, EXIT_RUNTIME = 0, 2, 3, 4

log = logging.getLogger("sclera_hybrid")


def run_scenario(cfg: ScenarioConfig, out_dir) -> dict:
    """Simulate one scenario and write its artifacts into ``out_dir``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    arc, verdict = simulate(cfg.initial, cfg.params, cfg.solver)
    spacing = cfg.output.sample_spacing
    (out / "config.yaml").write_text(dump_config(cfg))
    n_rows = export.write_timeseries(arc, out / "timeseries.csv", spacing)
    export.write_jumps(arc, out / "jumps.csv")
    export.write_verdict(verdict, cfg.params, out / "verdict.json")
    if cfg.output.plot:
        export.plot_phase(arc, cfg.initial, out / "phase.svg", spacing, cfg.output.plot_dims,
                          title=cfg.name)
        export.plot_timeseries(arc, out / "timeseries.svg", spacing, title=cfg.name)
    summary = export.verdict_summary(verdict, cfg.params)
    log.info("%s: %d jumps, %d table rows", cfg.name, arc.n_jumps, n_rows)
    return {"arc": arc, "verdict": verdict, "summary": summary}


def _overrides(args, cfg: ScenarioConfig) -> ScenarioConfig:
    return with_overrides(
        cfg,
        seed=args.seed,
        t_max=args.t_max,
        j_max=args.j_max,
        sample_spacing=args.spacing,
        plot=args.plot,
        workers=getattr(args, "workers", None),
    )


def _cmd_run(args) -> int:
    cfg = _overrides(args, resolve_config(args.config))
    res = run_scenario(cfg, args.out or Path("out") / cfg.name)
    print(res["summary"])
    return EXIT_OK


def _cmd_reproduce(args) -> int:
    cfg = _overrides(args, figure_config(args.figure))
    res = run_scenario(cfg, args.out or Path("out") / cfg.name)
    print(res["summary"])
    return EXIT_OK


def _cmd_sweep(args) -> int:
    cfg = _overrides(args, resolve_config(args.config))
    if not cfg.axes:
        raise ConfigError("config has no 'sweep' section")
    grid = sweep(cfg.params, cfg.axes, cfg.initial, cfg.solver, workers=cfg.workers)
    out = Path(args.out or Path("out") / cfg.name)
    out.mkdir(parents=True, exist_ok=True)
    export.write_sweep_table(grid, out / "sweep.csv")
    for c in grid.cells:
        vals = " ".join(f"{k}={v:.6g}" for k, v in c.values.items())
        print(f"{c.index:4d} {vals} {c.kind or 'error'} {c.summary()}")
    return EXIT_OK


def _cmd_validate(args) -> int:
    cfg = resolve_config(args.config)
    for issue in validate_params(cfg.params):
        print(issue)
    print(f"{cfg.name}: ok")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sclera-hybrid", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, workers=False):
        p.add_argument("-o", "--out", help="output directory (default out/<name>)")
        p.add_argument("--seed", type=int)
        p.add_argument("--t-max", type=float)
        p.add_argument("--j-max", type=int)
        p.add_argument("--spacing", type=float, help="sample spacing of the time-series table")
        p.add_argument("--plot", action=argparse.BooleanOptionalAction, default=None)
        if workers:
            p.add_argument("--workers", type=int)

    p = sub.add_parser("run", help="simulate a scenario file or bundled preset")
    p.add_argument("config", help="path to a YAML scenario, or a preset name such as fig-s1")
    common(p)
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("reproduce", help="rerun one of the bundled figure presets")
    p.add_argument("figure", help="s1, s3, s5 or s7")
    common(p)
    p.set_defaults(func=_cmd_reproduce)

    p = sub.add_parser("sweep", help="run a parameter sweep defined in a scenario file")
    p.add_argument("config")
    common(p, workers=True)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("validate", help="check a scenario file without simulating")
    p.add_argument("config")
    p.set_defaults(func=_cmd_validate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ValidationError, InvalidParameters) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except Exception as exc:
        log.debug("runtime failure", exc_info=True)
        print(f"runtime error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
