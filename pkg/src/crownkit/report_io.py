"""Deterministic report serialization and plot-ready ray tables.

JSON reports are rendered by a purpose-built writer so that identical
(config, seed) runs produce byte-identical files: keys keep insertion order,
floats are printed with 17 significant digits, and no volatile data (timings,
paths, hostnames) enters the document.
"""
from __future__ import annotations

import numpy as np

from . import chart_calculus as cc
from . import crown_ops as co
from . import hk_structure as hk
from .verify_suites import VerificationReport, metric_gram

__all__ = [
    "render_json",
    "report_document",
    "run_document",
    "ray_table",
    "write_csv",
]


def _fmt_float(x: float) -> str:
    if x != x:
        return "NaN"
    if x == float("inf"):
        return "Infinity"
    if x == float("-inf"):
        return "-Infinity"
    if x == 0.0:
        x = 0.0  # normalize the sign of zero
    return format(float(x), ".17g")


def render_json(obj, indent: int = 0) -> str:
    """Minimal JSON writer with fixed float formatting and key order."""
    pad = "  " * indent
    pad_in = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{pad_in}"{k}": {render_json(v, indent + 1)}' for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{pad_in}{render_json(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, str):
        return '"' + obj.replace("\\", "\\\\").replace('"', '\\"') + '"'
    raise TypeError(f"cannot serialize {type(obj)}")


def report_document(report: VerificationReport) -> dict:
    """Schema of one suite report.  runtime_ms is serialized as null so that
    reports stay byte-identical across reruns; the measured value is printed
    to the console instead."""
    return {
        "space": report.space,
        "suite": report.suite,
        "seed": report.seed,
        "n_points": report.n_points,
        "checks": [
            {
                "name": c.name,
                "paper_ref": c.claim,
                "max_residual": c.max_residual,
                "mean_residual": c.mean_residual,
                "tolerance": c.tolerance,
                "pass": c.passed,
            }
            for c in report.checks
        ],
        "points": list(report.points),
        "verdict": report.verdict,
        "runtime_ms": None,
    }


def run_document(space: str, seed: int, config: dict, reports) -> dict:
    return {
        "space": space,
        "seed": seed,
        "config": config,
        "verdict": "pass" if all(r.verdict == "pass" for r in reports) else "fail",
        "reports": [report_document(r) for r in reports],
    }


# ---------------------------------------------------------------------------
# ray tables
# ---------------------------------------------------------------------------

RAY_COLUMNS = ("s", "rho_J", "rho_I", "rho_can", "metric_min_eig", "a3")


def _ray_direction(so) -> np.ndarray:
    # decreasing components keep the ray regular away from the origin
    return np.linspace(1.0, 0.6, so.rank)


def ray_table(h: hk.HKHandle, grid_n: int) -> tuple[list[str], list[list[float]]]:
    """Potentials, metric floor and the leading anti-linear entry along a ray
    from the origin to 90% of the cell boundary."""
    so = h.so
    u = _ray_direction(so)
    boundary = (np.pi / 2) / max(abs(float(b.ecoeffs @ u)) for b in so.blocks)
    svals = np.linspace(0.0, 0.9 * boundary, grid_n) if grid_n > 1 else np.array([0.0])

    header = ["s"] + [f"t_{j + 1}" for j in range(so.rank)] + list(RAY_COLUMNS[1:])
    rows = []
    a_vec = so.p_part(so.triples[0][2])
    p_vec = so.p_part(so.KP[0][1])
    bp = so.B[: so.dim_p, : so.dim_p]
    for s in svals:
        t = s * u
        point = cc.slice_point(so, t)
        gram = metric_gram(h, point)
        la = co.l_a(so, point.H)
        a3 = float(np.real(la.apply(a_vec.astype(complex)) @ bp @ p_vec)
                   / (p_vec @ bp @ p_vec))
        rows.append(
            [float(s)] + [float(v) for v in t]
            + [hk.rho_J(h, point), hk.rho_I(h, point), hk.rho_can(h, point),
               float(np.min(np.linalg.eigvalsh(gram))), a3]
        )
    return header, rows


def write_csv(path, header: list[str], rows: list[list[float]]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt_float(v) for v in row) + "\n")
