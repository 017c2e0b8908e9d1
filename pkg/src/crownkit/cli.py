"""crownkit command line: run verification suites, write reports and tables.

Exit status: 0 when every selected check passes, 1 on verification failure,
2 on usage errors.
"""
from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, field

from .errors import CrownkitError, UsageError
from .hk_structure import NumericsConfig, build_handle
from .lie_core import SUPPORTED_SPACES
from .report_io import ray_table, render_json, run_document, write_csv
from .verify_suites import SUITES, run_suite

_SUITE_ORDER = tuple(SUITES)


@dataclass
class RunConfig:
    space: str
    suites: tuple
    seed: int = 0
    h_fd: float = 1e-4
    tolerances: dict = field(default_factory=dict)
    grid_n: int = 9
    out: str | None = None
    csv_dir: str | None = None

    def validate(self) -> None:
        if self.space not in SUPPORTED_SPACES:
            raise UsageError(
                f"unknown space {self.space!r}; supported: {', '.join(SUPPORTED_SPACES)}"
            )
        if not (1e-8 < self.h_fd < 1e-2):
            raise UsageError("--h must lie strictly between 1e-8 and 1e-2")
        if self.grid_n < 1:
            raise UsageError("--grid must be at least 1")
        if self.seed < 0:
            raise UsageError("--seed must be a non-negative integer")
        for name in self.suites:
            if name not in SUITES:
                raise UsageError(f"unknown suite {name!r}; see --list-suites")
        if "sl2r_uniqueness" in self.suites and self.space != "sl2r":
            raise UsageError("suite 'sl2r_uniqueness' runs on sl2r only")
        for name, val in self.tolerances.items():
            if name not in SUITES:
                raise UsageError(f"--tol names an unknown suite {name!r}")
            if not val > 0:
                raise UsageError(f"--tol {name} must be positive")

    def config_document(self) -> dict:
        return {
            "h_fd": self.h_fd,
            "grid_n": self.grid_n,
            "suites": list(self.suites),
            "tolerances": {k: self.tolerances[k] for k in sorted(self.tolerances)},
        }


def _select_suites(requested, space) -> tuple:
    names = []
    for item in requested or ["all"]:
        if item == "all":
            names.extend(_SUITE_ORDER)
        else:
            names.append(item)
    seen = []
    for n in names:
        if n not in seen:
            seen.append(n)
    if "all" in (requested or ["all"]) and space != "sl2r":
        seen = [n for n in seen if n != "sl2r_uniqueness"]
    return tuple(seen)


def run(config: RunConfig) -> int:
    """Execute the selected suites and write the requested artifacts."""
    config.validate()
    handle = build_handle(config.space, NumericsConfig(h_fd=config.h_fd,
                                                       h_fd2=5 * config.h_fd))
    reports = []
    for name in config.suites:
        rep = run_suite(handle, name, seed=config.seed,
                        tol_override=config.tolerances.get(name))
        reports.append(rep)
        print(f"[{config.space}] {name:22s} {rep.verdict:4s}  "
              f"({rep.runtime_ms:7.1f} ms, {len(rep.checks)} checks)")
        for c in rep.checks:
            if not c.passed:
                print(f"    FAIL {c.name}: max residual {c.max_residual:.6e} "
                      f">= tolerance {c.tolerance:.1e}")

    if config.out:
        doc = run_document(config.space, config.seed, config.config_document(), reports)
        with open(config.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(render_json(doc) + "\n")
        print(f"report written to {config.out}")

    if config.csv_dir:
        os.makedirs(config.csv_dir, exist_ok=True)
        header, rows = ray_table(handle, config.grid_n)
        csv_path = os.path.join(config.csv_dir, f"{config.space}_ray.csv")
        write_csv(csv_path, header, rows)
        print(f"table written to {csv_path}")
        from .figures import render_ray_figures

        for path in render_ray_figures(config.csv_dir, config.space, header, rows):
            print(f"figure written to {path}")

    return 0 if all(r.verdict == "pass" for r in reports) else 1


def _parse_tol(items) -> dict:
    out = {}
    for item in items or []:
        if "=" not in item:
            raise UsageError(f"--tol expects NAME=VALUE, got {item!r}")
        name, _, val = item.partition("=")
        try:
            out[name.strip()] = float(val)
        except ValueError as exc:
            raise UsageError(f"--tol {name}: {val!r} is not a number") from exc
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crownkit",
        description="Verify the adapted hyper-Kahler identities on a crown "
                    "domain by finite-difference exterior calculus.",
    )
    parser.add_argument("--space", help=f"one of: {', '.join(SUPPORTED_SPACES)}")
    parser.add_argument("--suite", action="append", metavar="NAME",
                        help="suite to run (repeatable); 'all' selects every suite")
    parser.add_argument("--seed", type=int, default=0, help="sampling seed")
    parser.add_argument("--h", type=float, default=1e-4, dest="h_fd",
                        help="finite-difference step (default 1e-4)")
    parser.add_argument("--tol", action="append", metavar="NAME=VAL",
                        help="override every tolerance of one suite (repeatable)")
    parser.add_argument("--grid", type=int, default=9, dest="grid_n",
                        help="grid points for the ray tables")
    parser.add_argument("--out", help="write the JSON report here")
    parser.add_argument("--csv-dir", help="write ray tables and figures here")
    parser.add_argument("--list-suites", action="store_true",
                        help="list suite names and exit")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.list_suites:
        for name in _SUITE_ORDER:
            scope = " (sl2r only)" if name == "sl2r_uniqueness" else ""
            print(f"{name}{scope}")
        return 0

    try:
        if not args.space:
            raise UsageError("--space is required (or use --list-suites)")
        config = RunConfig(
            space=args.space,
            suites=_select_suites(args.suite, args.space),
            seed=args.seed,
            h_fd=args.h_fd,
            tolerances=_parse_tol(args.tol),
            grid_n=args.grid_n,
            out=args.out,
            csv_dir=args.csv_dir,
        )
        return run(config)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except CrownkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
