"""Command line runner for the named verification checks.

Two subcommands:

* ``gkverify list`` prints every registered check with its suite and a
  one-line description.
* ``gkverify run`` executes the selected suites over one parameter tuple
  (``--p --q --m``) or, when none is given, over the built-in sweep of
  five tuples, and emits a text or JSON report.

Configuration can also come from a plain ``key=value`` file via
``--config``; explicit flags win over file values.  Runs are deterministic:
two runs with the same configuration produce identical reports except for
the ``elapsed`` timing fields.  The exit status is 0 exactly when every
executed check passed, 1 when any failed or errored, and 2 for
configuration errors.  ``GKVERIFY_THREADS`` sets the worker pool size
(default 1); report assembly is always single threaded and ordered.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .checks import (
    ALL_SUITES,
    MODULE_SUITES,
    CheckResult,
    execute_jobs,
    plan_jobs,
    selected_checks,
)
from .gkmodule import ModuleParams

DEFAULT_SWEEP: Tuple[Tuple[int, int, int], ...] = (
    (2, 4, 0),
    (3, 3, 0),
    (4, 4, 0),
    (4, 4, 1),
    (4, 6, 2),
)


class ConfigError(ValueError):
    """Raised for invalid or inconsistent run configuration."""


@dataclass
class SuiteConfig:
    """Resolved configuration for one ``run`` invocation."""

    p: Optional[int] = None
    q: Optional[int] = None
    m: Optional[int] = None
    max_degree: Optional[int] = None
    k_max: int = 3
    l_max: int = 3
    suites: Tuple[str, ...] = ("all",)
    format: str = "text"
    out: Optional[str] = None
    threads: int = 1

    def resolved_suites(self) -> Tuple[str, ...]:
        want = set(self.suites)
        if "all" in want:
            want = set(ALL_SUITES)
        unknown = want - set(ALL_SUITES)
        if unknown:
            raise ConfigError(f"unknown suites: {', '.join(sorted(unknown))}")
        return tuple(s for s in ALL_SUITES if s in want)

    def tuples(self) -> Tuple[Tuple[int, int, Optional[int]], ...]:
        given = [v is not None for v in (self.p, self.q, self.m)]
        if not any(given):
            return DEFAULT_SWEEP
        if self.p is None or self.q is None:
            raise ConfigError("give both --p and --q, or neither")
        if self.m is None:
            needs_m = set(self.resolved_suites()) & MODULE_SUITES
            if needs_m:
                raise ConfigError(
                    "the suites "
                    + ", ".join(sorted(needs_m))
                    + " need --m; give it or restrict --suite"
                )
        return ((self.p, self.q, self.m),)

    def validate(self) -> None:
        suites = self.resolved_suites()
        tuples = self.tuples()
        if self.k_max < 0 or self.l_max < 0:
            raise ConfigError("k_max and l_max must be non-negative")
        if self.threads < 1:
            raise ConfigError("threads must be at least 1")
        if self.max_degree is not None and self.max_degree < 0:
            raise ConfigError("max_degree must be non-negative")
        if self.format not in ("text", "json"):
            raise ConfigError("format must be 'text' or 'json'")
        for p, q, _ in tuples:
            if p < 1 or q < 1:
                raise ConfigError("need p >= 1 and q >= 1")
        if set(suites) & MODULE_SUITES:
            for p, q, m in tuples:
                try:
                    ModuleParams(p, q, m, 1)
                except ValueError as exc:
                    raise ConfigError(
                        f"invalid parameters (p={p}, q={q}, m={m}): {exc}"
                    ) from exc


_CONFIG_KEYS = {
    "p": int,
    "q": int,
    "m": int,
    "max_degree": int,
    "k_max": int,
    "l_max": int,
    "suite": str,
    "format": str,
    "out": str,
    "threads": int,
}


def _load_config_file(path: str) -> Dict[str, object]:
    values: Dict[str, object] = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip().replace("-", "_")
        value = value.strip()
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        caster = _CONFIG_KEYS[key]
        try:
            values[key] = caster(value)
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: bad value for {key}: {value!r}") from exc
    return values


def _build_config(args: argparse.Namespace) -> SuiteConfig:
    file_values: Dict[str, object] = {}
    if args.config:
        file_values = _load_config_file(args.config)

    def pick(flag_value, key: str, default):
        if flag_value is not None:
            return flag_value
        if key in file_values:
            return file_values[key]
        return default

    suite_raw = pick(args.suite, "suite", "all")
    suites = tuple(s.strip() for s in str(suite_raw).split(",") if s.strip())
    if not suites:
        raise ConfigError("empty suite selection")
    threads_env = os.environ.get("GKVERIFY_THREADS")
    if threads_env is not None:
        try:
            threads = int(threads_env)
        except ValueError as exc:
            raise ConfigError(f"bad GKVERIFY_THREADS value {threads_env!r}") from exc
    else:
        threads = int(file_values.get("threads", 1))
    config = SuiteConfig(
        p=pick(args.p, "p", None),
        q=pick(args.q, "q", None),
        m=pick(args.m, "m", None),
        max_degree=pick(args.max_degree, "max_degree", None),
        k_max=pick(args.k_max, "k_max", 3),
        l_max=pick(args.l_max, "l_max", 3),
        suites=suites,
        format=str(pick(args.format, "format", "text")),
        out=pick(args.out, "out", None),
        threads=threads,
    )
    config.validate()
    return config


def build_report(config: SuiteConfig, results: Sequence[CheckResult]) -> Dict:
    """Assemble the deterministic report dictionary."""
    passed = sum(1 for r in results if r.status == "pass")
    failed = sum(1 for r in results if r.status == "fail")
    errors = sum(1 for r in results if r.status == "error")
    return {
        "config": {
            "p": config.p,
            "q": config.q,
            "m": config.m,
            "max_degree": config.max_degree,
            "k_max": config.k_max,
            "l_max": config.l_max,
            "suites": list(config.resolved_suites()),
            "tuples": [list(t) for t in config.tuples()],
            "threads": config.threads,
        },
        "checks": [r.to_dict() for r in results],
        "summary": {
            "total": len(results),
            "passed": passed,
            "failed": failed,
            "errors": errors,
            "elapsed": round(sum(r.elapsed for r in results), 6),
        },
    }


def format_text(report: Dict) -> str:
    lines: List[str] = []
    cfg = report["config"]
    tuples = ", ".join(
        "(" + ", ".join("-" if v is None else str(v) for v in t) + ")"
        for t in cfg["tuples"]
    )
    lines.append(f"suites: {', '.join(cfg['suites'])}")
    lines.append(f"tuples: {tuples}")
    for rec in report["checks"]:
        params = " ".join(f"{k}={v}" for k, v in sorted(rec["params"].items()))
        validity = "" if rec["validity"] is None else f"  validity={rec['validity']}"
        lines.append(
            f"{rec['status'].upper():5}  {rec['name']:28} {params:18}{validity}"
            f"  ({rec['elapsed']:.2f}s)"
        )
        if rec["status"] != "pass":
            lines.append(f"       detail: {json.dumps(rec['detail'], sort_keys=True)}")
    s = report["summary"]
    lines.append(
        f"total {s['total']}: {s['passed']} passed, {s['failed']} failed, "
        f"{s['errors']} errors  ({s['elapsed']:.2f}s)"
    )
    return "\n".join(lines) + "\n"


def run_command(args: argparse.Namespace) -> int:
    try:
        config = _build_config(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    defs = selected_checks(config.resolved_suites())
    jobs = plan_jobs(
        defs, config.tuples(), config.k_max, config.l_max, config.max_degree
    )
    results = execute_jobs(jobs, threads=config.threads)
    report = build_report(config, results)
    if config.format == "json":
        rendered = json.dumps(report, indent=2, sort_keys=True) + "\n"
    else:
        rendered = format_text(report)
    if config.out:
        with open(config.out, "w", encoding="utf-8") as fh:
            fh.write(rendered)
        s = report["summary"]
        print(
            f"wrote {config.out}: {s['passed']}/{s['total']} passed, "
            f"{s['failed']} failed, {s['errors']} errors"
        )
    else:
        sys.stdout.write(rendered)
    s = report["summary"]
    return 0 if s["failed"] == 0 and s["errors"] == 0 else 1


def list_command(_: argparse.Namespace) -> int:
    for cd in selected_checks(("all",)):
        print(f"{cd.name:32} [{cd.suite}]  {cd.description}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gkverify",
        description="exact verification checks for the module family library",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    runp = sub.add_parser("run", help="execute check suites and emit a report")
    runp.add_argument("--p", type=int, default=None, help="first block size")
    runp.add_argument("--q", type=int, default=None, help="second block size")
    runp.add_argument("--m", type=int, default=None, help="family parameter")
    runp.add_argument(
        "--max-degree",
        dest="max_degree",
        type=int,
        default=None,
        help="override the working truncation degree",
    )
    runp.add_argument("--k-max", dest="k_max", type=int, default=None)
    runp.add_argument("--l-max", dest="l_max", type=int, default=None)
    runp.add_argument(
        "--suite",
        type=str,
        default=None,
        help="comma-separated suites: " + ", ".join(ALL_SUITES) + ", or all",
    )
    runp.add_argument("--format", choices=("text", "json"), default=None)
    runp.add_argument("--out", type=str, default=None, help="write the report here")
    runp.add_argument(
        "--config", type=str, default=None, help="key=value file; flags win"
    )
    runp.set_defaults(func=run_command)

    listp = sub.add_parser("list", help="list registered checks")
    listp.set_defaults(func=list_command)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
