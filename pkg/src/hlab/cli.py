"""Command line harness: hlab <experiment> [options].

Writes the experiment's CSV table to stdout (or --out FILE) and a one
line summary to stderr.  Exit codes: 0 all rows pass, 1 some row fails,
2 configuration problem.  Options may also come from a key=value config
file via --config; command line values override the file, the file
overrides built-in defaults.
"""

from __future__ import annotations

import argparse
import sys

from .experiments import CATALOG, ConfigError, ExperimentConfig, run


def _parse_times(text: str) -> tuple:
    try:
        vals = tuple(float(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise ConfigError("cannot parse time list %r" % text) from None
    if not vals or any(v <= 0 for v in vals):
        raise ConfigError("time list must hold positive numbers")
    return vals


def _parse_bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ConfigError("cannot parse boolean %r" % text)


_FILE_KEYS = {
    "d": ("d", int),
    "kappa": ("kappa", float),
    "ell": ("ell", int),
    "r0": ("r0", float),
    "t": ("t_values", _parse_times),
    "tol": ("tol", float),
    "grid": ("grid", int),
    "out": ("out", str),
    "fast": ("fast", _parse_bool),
    "seed": ("seed", int),
}


def read_config_file(path: str) -> dict:
    out = {}
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError("cannot read config file: %s" % exc) from None
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("%s:%d: expected key=value" % (path, lineno))
        key, _, value = line.partition("=")
        key = key.strip().lower()
        if key not in _FILE_KEYS:
            raise ConfigError("%s:%d: unknown key %r" % (path, lineno, key))
        field_name, conv = _FILE_KEYS[key]
        try:
            out[field_name] = conv(value.strip())
        except (ValueError, ConfigError) as exc:
            raise ConfigError("%s:%d: %s" % (path, lineno, exc)) from None
    return out


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="hlab",
        description="Run a named verification experiment and emit CSV.")
    p.add_argument("experiment",
                   help="one of: " + ", ".join(sorted(CATALOG)))
    p.add_argument("--d", type=int, default=None, metavar="N")
    p.add_argument("--kappa", type=float, default=None, metavar="X")
    p.add_argument("--ell", type=int, default=None, metavar="L")
    p.add_argument("--R0", type=float, default=None, dest="r0", metavar="X")
    p.add_argument("--t", type=str, default=None, metavar="a,b,c",
                   help="comma separated list of times")
    p.add_argument("--tol", type=float, default=None, metavar="X")
    p.add_argument("--grid", type=int, default=None, metavar="N")
    p.add_argument("--out", type=str, default=None, metavar="FILE")
    p.add_argument("--config", type=str, default=None, metavar="FILE")
    p.add_argument("--fast", action="store_true", default=None)
    p.add_argument("--seed", type=int, default=None, metavar="N")
    return p


def build_config(argv) -> ExperimentConfig:
    args = _build_parser().parse_args(argv)
    settings = {}
    if args.config:
        settings.update(read_config_file(args.config))
    cli_values = {
        "d": args.d, "kappa": args.kappa, "ell": args.ell, "r0": args.r0,
        "t_values": _parse_times(args.t) if args.t is not None else None,
        "tol": args.tol, "grid": args.grid, "out": args.out,
        "fast": args.fast, "seed": args.seed,
    }
    settings.update({k: v for k, v in cli_values.items() if v is not None})
    return ExperimentConfig(experiment=args.experiment, **settings)


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    try:
        cfg = build_config(argv)
        report = run(cfg)
    except ConfigError as exc:
        print("hlab: %s" % exc, file=sys.stderr)
        return 2
    if cfg.out:
        with open(cfg.out, "w") as fh:
            report.to_csv(fh)
    else:
        report.to_csv(sys.stdout)
    print(report.summary, file=sys.stderr)
    return 0 if report.all_pass else 1


if __name__ == "__main__":
    raise SystemExit(main())
