"""Command-line front end: verify, propagate and tau-eval.

Config and report are JSON documents carrying ``schema_version``; see
README.md for the field reference.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from .core import KptauError, LatticePoint, Partition, format_rational, format_rational_full, rational
from .fixtures import FIXTURES, Element, fixture
from .grassmann import GrassmannianElement, LagrangianElement, from_affine, lagrangian_to_grassmannian
from .lattice import H_eval_partition, LatticeEvaluation, h_eval_partition, x_params, y_params
from .propagation import (
    octahedron_window,
    propagate_hexahedron,
    propagate_octahedron,
    seed_hexahedron,
    seed_octahedron,
)
from .recurrences import HexahedronState, OctahedronGrid
from .suites import SUITES, Record, SuiteContext, run_suite
from .tau import tau_eval, tilde, times

SCHEMA_VERSION = 1
WORKERS_ENV = "KPTAU_MAX_WORKERS"


class ConfigError(KptauError, ValueError):
    """The job configuration is malformed or violates a precondition."""


@dataclass
class JobConfig:
    mode: str
    element: Element | None = None
    x: dict[int, Fraction] | None = None
    y: dict[int, Fraction] | None = None
    base_time: tuple[Fraction, ...] | None = None
    suites: list[str] = field(default_factory=lambda: list(SUITES))
    seed: int = 0
    counts: dict[str, int] = field(default_factory=dict)
    recurrence: str | None = None
    window: dict[str, Any] = field(default_factory=dict)
    seed_values: dict[str, Any] = field(default_factory=dict)
    points: list[dict[str, Any]] = field(default_factory=list)
    flip: bool = False
    timing: bool = False


def parse_element(spec: dict[str, Any] | str | None) -> Element | None:
    if spec is None:
        return None
    if isinstance(spec, str):
        return fixture(spec)
    if "fixture" in spec:
        return fixture(spec["fixture"])
    if "affine" in spec:
        M = [[rational(v) for v in row] for row in spec["affine"]]
        if spec.get("symmetric", False):
            if any(len(row) != len(M) for row in M):
                raise ConfigError("symmetric affine matrix must be square")
            try:
                return LagrangianElement(M)
            except ValueError as exc:
                raise ConfigError(str(exc)) from None
        return from_affine(M)
    try:
        k, n = int(spec["k"]), int(spec["n"])
        return GrassmannianElement(k, n, [[rational(v) for v in row] for row in spec["matrix"]])
    except KeyError as exc:
        raise ConfigError(f"element spec lacks {exc.args[0]!r}") from None
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def parse_point(spec: dict[str, Any]) -> LatticePoint:
    """A lattice point written as {"index": value}."""
    return LatticePoint({int(i): int(v) for i, v in spec.items()})


def parse_config(doc: dict[str, Any], mode: str | None = None) -> JobConfig:
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ConfigError(f"unsupported schema_version {version!r}; expected {SCHEMA_VERSION}")
    mode = mode or doc.get("mode")
    if mode not in ("verify", "propagate", "tau-eval"):
        raise ConfigError(f"unknown mode {mode!r}")
    try:
        x = x_params({int(i): v for i, v in doc["x"].items()}) if "x" in doc else None
        y = y_params(doc["y"] if isinstance(doc["y"], list) else {int(i): v for i, v in doc["y"].items()}) if "y" in doc else None
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    suites = list(doc.get("suites", SUITES))
    for s in suites:
        if s not in SUITES:
            raise ConfigError(f"unknown suite {s!r}")
    return JobConfig(
        mode=mode,
        element=parse_element(doc.get("element")),
        x=x,
        y=y,
        base_time=times(doc["base_time"]) if "base_time" in doc else None,
        suites=suites,
        seed=int(doc.get("seed", 0)),
        counts={str(k): int(v) for k, v in doc.get("sweeps", {}).items()},
        recurrence=doc.get("recurrence"),
        window=dict(doc.get("window", {})),
        seed_values=dict(doc.get("seed_values", {})),
        points=list(doc.get("points", [])),
        flip=bool(doc.get("flip", False)),
        timing=bool(doc.get("timing", False)),
    )


def _worker_count() -> int:
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _suite_job(args: tuple[str, SuiteContext]) -> list[Record]:
    name, ctx = args
    return run_suite(name, ctx)


def run_verify(config: JobConfig) -> dict[str, Any]:
    ctx = SuiteContext(seed=config.seed, element=config.element, counts=config.counts, base_time=config.base_time)
    jobs = [(name, ctx) for name in config.suites]
    workers = min(_worker_count(), len(jobs)) if jobs else 1
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            batches = list(pool.map(_suite_job, jobs))
    else:
        batches = [_suite_job(job) for job in jobs]
    records = [r for batch in batches for r in batch]
    return build_report("verify", config, records)


def build_report(mode: str, config: JobConfig, records: list[Record], extra: dict[str, Any] | None = None) -> dict[str, Any]:
    records = sorted(records, key=lambda r: (r.check, r.digest))
    report: dict[str, Any] = {
        "schema_version": SCHEMA_VERSION,
        "mode": mode,
        "seed": config.seed,
        "green": all(r.passed and r.residual == "0/1" for r in records),
        "summary": {"records": len(records), "failed": sum(1 for r in records if not r.passed)},
        "records": [r.to_json(config.timing) for r in records],
    }
    if extra:
        report.update(extra)
    return report


def _parse_site(key: str) -> tuple[int, ...]:
    return tuple(int(p) for p in key.split(","))


def _site_key(site: Sequence[int]) -> str:
    return ",".join(str(v) for v in site)


def run_propagate(config: JobConfig, steps: int) -> dict[str, Any]:
    recurrence = config.recurrence or "octahedron"
    if recurrence == "octahedron":
        return _propagate_octahedron(config, steps)
    if recurrence == "hexahedron":
        return _propagate_hexahedron(config, steps)
    raise ConfigError(f"unknown recurrence {recurrence!r}")


def _propagate_octahedron(config: JobConfig, steps: int) -> dict[str, Any]:
    win = config.window
    try:
        a, b, c = (rational(win[key]) for key in ("a", "b", "c"))
    except KeyError as exc:
        raise ConfigError(f"octahedron window lacks parameter {exc.args[0]!r}") from None
    grid = OctahedronGrid(a, b, c)
    seed_level = int(win.get("seed_level", 0))
    w = _grassmannian(config.element)
    t0 = None
    if w is not None:
        t0 = config.base_time or times([], w.n)
        t0 = tuple(t0) + (Fraction(0),) * max(0, w.n - len(t0))
        n_range = tuple(win.get("n_range", (0, 1)))
        sites = octahedron_window(steps, seed_level, n_range, int(win.get("extent", steps + 1)))
        seed_octahedron(w, t0, grid, sites)
    else:
        if not config.seed_values:
            raise ConfigError("propagation without an element needs seed_values")
        for key, value in config.seed_values.items():
            grid.values[_parse_site(key)] = rational(value)
    result = propagate_octahedron(grid, seed_level + 2, steps, w, t0)
    records = _crosscheck_records("octahedron", result.produced)
    dump = {_site_key(p.site): format_rational(p.value) for p in result.produced}
    return build_report("propagate", config, records, {"recurrence": "octahedron", "levels": result.levels, "values": dump})


def _propagate_hexahedron(config: JobConfig, steps: int) -> dict[str, Any]:
    win = config.window
    height = int(win.get("height", 0))
    radius = int(win.get("radius", steps + 1))
    ev = None
    if config.element is not None:
        if config.y is None:
            raise ConfigError("hexahedron propagation from an element needs y-parameters")
        w = _grassmannian(config.element)
        assert w is not None
        T = w.n
        t0 = tuple(config.base_time or ()) + (Fraction(0),) * max(0, T - len(config.base_time or ()))
        ev = LatticeEvaluation(w, t0, y=config.y)
        state = seed_hexahedron(ev, radius, height)
    else:
        if not config.seed_values:
            raise ConfigError("propagation without an element needs seed_values")
        state = HexahedronState()
        for kind, entries in config.seed_values.items():
            for key, value in entries.items():
                state.family(kind)[_parse_site(key)] = rational(value)  # type: ignore[index]
    result = propagate_hexahedron(state, height, steps, ev)
    records = _crosscheck_records("hexahedron", result.produced)
    dump: dict[str, dict[str, str]] = {}
    for p in result.produced:
        dump.setdefault(p.family, {})[_site_key(p.site)] = format_rational(p.value)
    return build_report("propagate", config, records, {"recurrence": "hexahedron", "levels": result.levels, "values": dump})


def _crosscheck_records(name: str, produced: list) -> list[Record]:
    out = []
    for p in produced:
        if p.direct is None:
            continue
        diff = p.value - p.direct
        out.append(Record(f"propagate.{name}.{p.family}", _site_key(p.site), format_rational_full(diff), diff == 0))
    return out


def _grassmannian(element: Element | None) -> GrassmannianElement | None:
    if isinstance(element, LagrangianElement):
        return lagrangian_to_grassmannian(element)
    return element


def run_tau_eval(config: JobConfig, at: Sequence[Any]) -> list[str]:
    if config.element is None:
        raise ConfigError("tau-eval needs an element")
    w = _grassmannian(config.element)
    assert w is not None
    t = times(at)
    t = t + (Fraction(0),) * max(0, w.n - 1 - len(t))
    if config.flip:
        t = tilde(t)
    lines = [format_rational(tau_eval(w, t))]
    for spec in config.points:
        point = parse_point(spec.get("point", {}))
        lam = Partition(spec.get("partition", []))
        if spec.get("kind", "H") == "h":
            if config.y is None:
                raise ConfigError("h evaluation needs y-parameters")
            value = h_eval_partition(w, point, lam, t, config.y)
        else:
            if config.x is None:
                raise ConfigError("H evaluation needs x-parameters")
            value = H_eval_partition(w, point, lam, t, config.x)
        lines.append(format_rational(value))
    return lines


def _load(path: str) -> dict[str, Any]:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kptau", description="Exact KP tau-function lattice checks")
    sub = parser.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", help="run verification suites")
    v.add_argument("--config", required=True)
    v.add_argument("--suite", action="append", choices=SUITES, help="restrict to a suite (repeatable)")
    v.add_argument("--seed", type=int)
    v.add_argument("--output", help="write the report here instead of stdout")
    p = sub.add_parser("propagate", help="propagate a recurrence over a window")
    p.add_argument("--config", required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--output")
    t = sub.add_parser("tau-eval", help="evaluate tau at a time vector")
    t.add_argument("--config", required=True)
    t.add_argument("--at", required=True, help='JSON list of times, e.g. ["1/2", "0"]')
    return parser


def _emit(report: dict[str, Any], output: str | None) -> None:
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        doc = _load(args.config)
        config = parse_config(doc, args.command)
        if args.command == "verify":
            if args.suite:
                config.suites = list(args.suite)
            if args.seed is not None:
                if not 0 <= args.seed < 2**64:
                    raise ConfigError("seed must be an unsigned 64-bit integer")
                config.seed = args.seed
            report = run_verify(config)
            _emit(report, args.output)
            return 0 if report["green"] else 1
        if args.command == "propagate":
            report = run_propagate(config, args.steps)
            _emit(report, args.output)
            return 0 if report["green"] else 1
        for line in run_tau_eval(config, json.loads(args.at)):
            print(line)
        return 0
    except (KptauError, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


__all__ = ["main", "run_verify", "run_propagate", "run_tau_eval", "parse_config", "FIXTURES"]
