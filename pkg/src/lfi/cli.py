"""Command line entry point: ``lfi run CONFIG`` and ``lfi list``.

Exit codes: 0 all assertions passed, 1 an assertion failed, 2 the config
is invalid, 3 a resource cap was hit.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
import time
from pathlib import Path

from .experiments import CSV_COLUMNS, EXPERIMENTS, PARAMS, ConfigError, RunContext
from .operators import ResourceCapError, set_workers
from .potentials import PotentialSpecError, free, potential_from_config
from .units import (
    InvalidScheduleError,
    InvalidUnitsError,
    LatticeSequence,
    schedule_from_config,
    units_from_config,
)

log = logging.getLogger("lfi")

TOP_LEVEL_KEYS = {"experiment", "t_over_pi", "h", "k_max", "delta", "lattices", "potential", "mode",
                  "output", "tolerances", "params"}

EXIT_OK, EXIT_ASSERT, EXIT_CONFIG, EXIT_RESOURCE = 0, 1, 2, 3


def _lattices(spec, k_max):
    if spec is None or spec == "nk":
        return LatticeSequence.nk_sequence(k_max if k_max is not None else 3)
    if isinstance(spec, list):
        return LatticeSequence(tuple(int(v) for v in spec))
    if isinstance(spec, dict) and set(spec) <= {"surrogate", "ratio"} and "surrogate" in spec:
        if k_max is None:
            raise ConfigError("a surrogate lattice sequence needs k_max")
        return LatticeSequence.surrogate(int(spec["surrogate"]), k_max, int(spec.get("ratio", 2)))
    raise ConfigError(f"lattices must be 'nk', a list of sqrt(N) or {{'surrogate': base}}, got {spec!r}")


def build_context(cfg: dict, seed: int = 0) -> tuple[str, RunContext]:
    """Validate a parsed config and turn it into (kind, RunContext)."""
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(cfg) - TOP_LEVEL_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys {sorted(unknown)}")
    kind = cfg.get("experiment")
    if kind not in EXPERIMENTS:
        raise ConfigError(f"unknown experiment {kind!r}; choose from {sorted(EXPERIMENTS)}")
    params = cfg.get("params", {})
    if not isinstance(params, dict):
        raise ConfigError("params must be an object")
    bad = set(params) - PARAMS[kind]
    if bad:
        raise ConfigError(f"unknown params for {kind}: {sorted(bad)}")
    mode = cfg.get("mode", "float")
    if mode not in ("float", "exact"):
        raise ConfigError(f"mode must be 'float' or 'exact', got {mode!r}")
    tolerances = cfg.get("tolerances", {})
    if not isinstance(tolerances, dict) or not all(isinstance(v, (int, float)) for v in tolerances.values()):
        raise ConfigError("tolerances must map names to numbers")
    units = units_from_config({"t_over_pi": cfg.get("t_over_pi", "1/2"), "h": cfg.get("h", 4)})
    k_max = cfg.get("k_max")
    if k_max is not None and (not isinstance(k_max, int) or k_max < 2):
        raise ConfigError("k_max must be an integer >= 2")
    lattices = _lattices(cfg.get("lattices"), k_max)
    delta = schedule_from_config(cfg.get("delta", {"constant": 1}), lattices.k_max)
    potential = potential_from_config(cfg["potential"], units) if "potential" in cfg else free()
    ctx = RunContext(units=units, potential=potential, params=params, mode=mode, seed=seed,
                     tolerances=tolerances, k_max=lattices.k_max, delta=delta, lattices=lattices)
    return kind, ctx


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_outputs(result, out_dir: Path, name: str, timings: bool, config: dict) -> tuple[Path, Path]:
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / f"{name}.csv"
    json_path = out_dir / f"{name}.json"
    with open(csv_path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for row in result.rows:
            w.writerow([_fmt(row[c]) if (c != "wall_time_ms" or timings) else "" for c in CSV_COLUMNS])
    summary = {
        "experiment": result.kind,
        "passed": result.passed,
        "assertions": [a.to_json() for a in result.assertions],
        "config": config,
        **result.summary,
    }
    with open(json_path, "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True, default=_json_default)
        fh.write("\n")
    return csv_path, json_path


def _json_default(o):
    if isinstance(o, complex):
        return {"re": o.real, "im": o.imag}
    if hasattr(o, "item"):
        return o.item()
    return str(o)


def run(config_path: str, threads: int = 1, seed: int = 0, out: str = "results", timings: bool = False) -> int:
    try:
        with open(config_path) as fh:
            cfg = json.load(fh)
        kind, ctx = build_context(cfg, seed)
    except (OSError, json.JSONDecodeError, ConfigError, InvalidUnitsError, InvalidScheduleError,
            PotentialSpecError, ValueError, TypeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    set_workers(threads)
    name = cfg.get("output") or Path(config_path).stem
    t0 = time.perf_counter()
    try:
        result = EXPERIMENTS[kind](ctx)
    except (ResourceCapError, MemoryError) as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    log.info("%s finished in %.1f s", kind, time.perf_counter() - t0)
    csv_path, json_path = write_outputs(result, Path(out), name, timings, cfg)
    for a in result.assertions:
        print(f"{'PASS' if a.passed else 'FAIL'} {a.name}: {a.detail}")
    print(f"wrote {csv_path} and {json_path}")
    return EXIT_OK if result.passed else EXIT_ASSERT


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="lfi", description="Lattice path-integral experiments")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="run one experiment config")
    p_run.add_argument("config")
    p_run.add_argument("--threads", type=int, default=1)
    p_run.add_argument("--seed", type=int, default=0)
    p_run.add_argument("--out", default="results")
    p_run.add_argument("--timings", action="store_true", help="fill the wall_time_ms column")
    sub.add_parser("list", help="list experiment kinds")
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    if args.command == "list":
        for kind in EXPERIMENTS:
            print(f"{kind}: params {sorted(PARAMS[kind])}")
        return EXIT_OK
    return run(args.config, args.threads, args.seed, args.out, args.timings)


if __name__ == "__main__":
    sys.exit(main())
