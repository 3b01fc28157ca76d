"""Config-driven command line front end.

One run = one JSON config, one subcommand, one output directory holding
report.json (the full convergence report), series.csv (the per-degree
table), and manifest.json (config hash, tool version, timestamp).

Exit codes: 0 all verdicts pass, 1 some verdict fails, 2 the config is
bad (message anchored to the file and, for syntax errors, the line),
3 a numerical guard tripped (the module's message verbatim).

The CSV is written with 17 significant digits, '.' decimal separator
and plain newline endings, so two runs of the same config on the same
build produce byte-identical files.
"""

import argparse
import hashlib
import json
import os
import sys
from datetime import datetime, timezone

from . import __version__
from .experiments import (COLUMNS, ExperimentConfig, circle_oracle,
                          run_faber_check, run_maximizer_scan,
                          run_strong_asymptotics, run_widom_sweep)

_DRIVERS = {
    "widom-sweep": run_widom_sweep,
    "strong-asymptotics": run_strong_asymptotics,
    "maximizer-scan": run_maximizer_scan,
    "circle-oracle": circle_oracle,
    "faber-check": run_faber_check,
}


def _fmt(x):
    if isinstance(x, (int,)) and not isinstance(x, bool):
        return "%d" % x
    return "%.17g" % x


def _series_csv(rows):
    lines = [",".join(COLUMNS)]
    for r in rows:
        lines.append(",".join(_fmt(r[k]) for k in COLUMNS))
    return "\n".join(lines) + "\n"


def _jsonable(obj):
    # report dicts carry NaN placeholders; JSON has no spelling for them
    if isinstance(obj, float):
        return obj if obj == obj else None
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def run(subcommand, config_path, out_dir, degrees=None, nodes=None):
    """Execute one subcommand; returns the process exit status."""
    driver = _DRIVERS[subcommand]
    try:
        with open(config_path, "rb") as fh:
            raw = fh.read()
    except OSError as e:
        print("%s: %s" % (config_path, e.strerror), file=sys.stderr)
        return 2
    try:
        obj = json.loads(raw.decode("utf-8"))
    except UnicodeDecodeError as e:
        print("%s: not UTF-8 (%s)" % (config_path, e.reason), file=sys.stderr)
        return 2
    except json.JSONDecodeError as e:
        print("%s:%d:%d: %s" % (config_path, e.lineno, e.colno, e.msg),
              file=sys.stderr)
        return 2

    if degrees is not None:
        obj["degrees"] = degrees
    if nodes is not None:
        obj["nodes"] = nodes
    try:
        cfg = ExperimentConfig.from_dict(obj)
        if subcommand != "circle-oracle":
            # geometry problems are config problems: surface them here,
            # before any numerics
            cfg.frames()
    except ValueError as e:
        print("%s: %s" % (config_path, e), file=sys.stderr)
        return 2

    try:
        report = driver(cfg)
    except ValueError as e:
        print(str(e), file=sys.stderr)
        return 3

    os.makedirs(out_dir, exist_ok=True)
    outputs = ["report.json", "series.csv", "manifest.json"]
    with open(os.path.join(out_dir, "report.json"), "w",
              encoding="utf-8", newline="") as fh:
        json.dump(_jsonable(report.to_dict()), fh, indent=2,
                  allow_nan=False)
        fh.write("\n")
    with open(os.path.join(out_dir, "series.csv"), "w",
              encoding="utf-8", newline="") as fh:
        fh.write(_series_csv(report.rows))
    manifest = {
        "subcommand": subcommand,
        "config_sha256": hashlib.sha256(raw).hexdigest(),
        "tool_version": __version__,
        "timestamp": datetime.now(timezone.utc)
                             .strftime("%Y-%m-%dT%H:%M:%SZ"),
        "outputs": outputs,
    }
    with open(os.path.join(out_dir, "manifest.json"), "w",
              encoding="utf-8", newline="") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")

    for v in report.verdicts:
        print("%s %s: value=%.6g tolerance=%.6g"
              % ("pass" if v["passed"] else "FAIL", v["name"],
                 v["value"], v["tolerance"]))
    for note in report.notes:
        print("note: %s" % note)
    return 0 if report.passed else 1


def main(argv=None):
    p = argparse.ArgumentParser(
        prog="arcszego",
        description="Convergence experiments for orthogonal polynomials "
                    "on smooth arcs.")
    p.add_argument("subcommand", choices=sorted(_DRIVERS))
    p.add_argument("--config", required=True, metavar="PATH",
                   help="JSON config file")
    p.add_argument("--out", default=".", metavar="DIR",
                   help="output directory (default: current)")
    p.add_argument("--degrees", metavar="LIST",
                   help="comma-separated override of the degree list")
    p.add_argument("--nodes", type=int, metavar="M",
                   help="override of the quadrature size")
    args = p.parse_args(argv)
    degrees = None
    if args.degrees is not None:
        try:
            degrees = [int(s) for s in args.degrees.split(",")]
        except ValueError:
            p.error("--degrees expects comma-separated integers")
    return run(args.subcommand, args.config, args.out,
               degrees=degrees, nodes=args.nodes)


if __name__ == "__main__":
    sys.exit(main())
