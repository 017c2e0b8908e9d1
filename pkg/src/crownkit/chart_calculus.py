"""The (X, C, H) chart around the slice and finite-difference exterior calculus.

Chart coordinates are the real vector [dX | dC | dH] of length 2 dim p, where
dX ranges over p, dC over the sum of the k-blocks, and dH over the cell
coordinates.  The coordinate vector fields commute, so the classical
coordinate formulas for d and d^c apply verbatim with central differences.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .crown_ops import CellPoint, cell_contains
from .errors import DomainError, FrameError
from .hk_structure import TangentVec
from .lie_core import SOSystem

__all__ = [
    "ChartPoint",
    "chart_point",
    "slice_point",
    "chart_step",
    "chart_frame",
    "frame_matrix",
    "frame_invert",
    "frame_condition",
    "fd_d_twoform",
    "fd_d_oneform",
    "fd_ddc",
    "make_coord_structure",
    "make_coord_form",
    "field_bracket",
    "orbit_point",
    "chart_invert",
    "complex_to_real",
    "real_to_complex",
]


@dataclass(frozen=True)
class ChartPoint:
    """A point exp(X) exp(C) exp(iH) K^C in chart coordinates."""

    X: np.ndarray    # (dim_p,) real
    Cc: np.ndarray   # (dim_k_perp,) real, coefficients over the k-blocks
    H: CellPoint

    def __post_init__(self):
        object.__setattr__(self, "X", np.asarray(self.X, dtype=float))
        object.__setattr__(self, "Cc", np.asarray(self.Cc, dtype=float))

    def coords(self) -> np.ndarray:
        return np.concatenate([self.X, self.Cc, self.H.t])


def chart_point(so: SOSystem, x, c, t, *, radius: float = 0.3,
                margin: float = 1e-9, reg_margin: float = 1e-6) -> ChartPoint:
    """Validated chart point; X and C must stay inside the validity radius."""
    x = np.asarray(x, dtype=float)
    c = np.asarray(c, dtype=float)
    if x.shape != (so.dim_p,) or c.shape != (so.dim_k_perp,):
        raise DomainError("chart coordinates have the wrong shape")
    cell = cell_contains(so, t, margin=margin, reg_margin=reg_margin)
    for vec, label in ((so.embed_p(x), "X"), (so.embed_k_perp(c), "C")):
        nm = so.btheta_norm(vec)
        if nm > radius:
            raise DomainError(f"chart leg {label} outside validity radius: {nm:.3g} > {radius}")
    return ChartPoint(X=x, Cc=c, H=cell)


def slice_point(so: SOSystem, t, **kwargs) -> ChartPoint:
    return chart_point(so, np.zeros(so.dim_p), np.zeros(so.dim_k_perp), t, **kwargs)


def chart_step(so: SOSystem, cp: ChartPoint, direction: np.ndarray, s: float,
               *, margin: float = 1e-9) -> ChartPoint:
    """Move along a coordinate direction; rejects steps that leave the cell."""
    d = np.asarray(direction, dtype=float)
    nx = cp.X + s * d[: so.dim_p]
    nc = cp.Cc + s * d[so.dim_p: so.dim_p + so.dim_k_perp]
    nt = cp.H.t + s * d[so.dim_p + so.dim_k_perp:]
    cell = cell_contains(so, nt, margin=margin)
    return ChartPoint(X=nx, Cc=nc, H=cell)


# ---------------------------------------------------------------------------
# the coordinate frame
# ---------------------------------------------------------------------------

def _frame_context(so: SOSystem, cp: ChartPoint):
    """Conjugation chain shared by all frame legs at one point."""
    x = so.embed_p(cp.X)
    c = so.embed_k_perp(cp.Cc)
    hvec = so.embed_a(cp.H.t)
    ad_a_inv = so.exp_ad(-1j * hvec)
    ad_c_inv = so.exp_ad(-c)
    tx = so.dexp_series(x)
    tc = so.dexp_series(c)
    return ad_a_inv, ad_c_inv, tx, tc


def chart_frame(so: SOSystem, cp: ChartPoint, direction: np.ndarray,
                _ctx=None) -> TangentVec:
    """Pushforward of a coordinate direction, in frame coordinates.

    The X-leg is conjugated through exp(-C) and exp(-iH), the C-leg through
    exp(-iH); the H-leg is i dH on the nose.
    """
    ad_a_inv, ad_c_inv, tx, tc = _ctx if _ctx is not None else _frame_context(so, cp)
    d = np.asarray(direction, dtype=float)
    dx = so.embed_p(d[: so.dim_p])
    dc = so.embed_k_perp(d[so.dim_p: so.dim_p + so.dim_k_perp])
    dh = d[so.dim_p + so.dim_k_perp:]
    z = (ad_a_inv @ (ad_c_inv @ (tx @ dx)))[: so.dim_p]
    z = z + (ad_a_inv @ (tc @ dc))[: so.dim_p]
    z = z + 1j * so.embed_a(dh)[: so.dim_p]
    return TangentVec(base=cp, Z=z)


def complex_to_real(z: np.ndarray) -> np.ndarray:
    return np.concatenate([np.real(z), np.imag(z)])


def real_to_complex(v: np.ndarray) -> np.ndarray:
    half = v.shape[0] // 2
    return v[:half] + 1j * v[half:]


def frame_matrix(so: SOSystem, cp: ChartPoint) -> np.ndarray:
    """Real 2 dim(p) x 2 dim(p) matrix of the coordinate frame."""
    dim = 2 * so.dim_p
    ctx = _frame_context(so, cp)
    cols = np.empty((dim, dim))
    eye = np.eye(dim)
    for k in range(dim):
        cols[:, k] = complex_to_real(chart_frame(so, cp, eye[k], _ctx=ctx).Z)
    return cols


def frame_condition(so: SOSystem, cp: ChartPoint) -> float:
    return float(np.linalg.cond(frame_matrix(so, cp)))


def frame_invert(so: SOSystem, cp: ChartPoint, v: TangentVec, *,
                 cond_max: float = 1e8, _mat=None) -> np.ndarray:
    """Coordinates of a tangent vector in the chart frame."""
    mat = frame_matrix(so, cp) if _mat is None else _mat
    cond = np.linalg.cond(mat)
    if not np.isfinite(cond) or cond > cond_max:
        raise FrameError(f"chart frame condition number {cond:.3g} exceeds {cond_max:.3g}")
    return np.linalg.solve(mat, complex_to_real(v.Z))


# ---------------------------------------------------------------------------
# finite-difference exterior calculus
# ---------------------------------------------------------------------------

def fd_d_twoform(so: SOSystem, form, cp: ChartPoint, d1, d2, d3,
                 h: float = 1e-4) -> float:
    """d(omega)(d1, d2, d3) for commuting coordinate fields:
    d_i omega(j,k) - d_j omega(i,k) + d_k omega(i,j), central differences."""

    def deriv(da, db, dc):
        plus = form(chart_step(so, cp, da, h), db, dc)
        minus = form(chart_step(so, cp, da, -h), db, dc)
        return (plus - minus) / (2 * h)

    return deriv(d1, d2, d3) - deriv(d2, d1, d3) + deriv(d3, d1, d2)


def fd_d_oneform(so: SOSystem, oneform, cp: ChartPoint, d1, d2,
                 h: float = 1e-4) -> float:
    """d(beta)(d1, d2) = d_1 beta(d2) - d_2 beta(d1) for a coordinate 1-form."""

    def deriv(da, db):
        plus = oneform(chart_step(so, cp, da, h), db)
        minus = oneform(chart_step(so, cp, da, -h), db)
        return (plus - minus) / (2 * h)

    return deriv(d1, d2) - deriv(d2, d1)


def fd_ddc(so: SOSystem, potential, structure, cp: ChartPoint, d1, d2,
           h: float = 1e-4, h_outer: float = 5e-4) -> float:
    """-d(d^c rho)(d1, d2) by nested central differences.

    ``structure(cp', d)`` must return the chart coordinates of the complex
    structure applied to the coordinate direction d at cp'; ``potential`` is a
    scalar function of chart points.  The returned sign is the one that makes
    the value equal the Kahler form of the potential.
    """

    def dc(point, d):
        c = structure(point, d)
        plus = potential(chart_step(so, point, c, h))
        minus = potential(chart_step(so, point, c, -h))
        return (plus - minus) / (2 * h)

    def outer(da, db):
        plus = dc(chart_step(so, cp, da, h_outer), db)
        minus = dc(chart_step(so, cp, da, -h_outer), db)
        return (plus - minus) / (2 * h_outer)

    return -(outer(d1, d2) - outer(d2, d1))


def make_coord_structure(so: SOSystem, apply_fn, *, cond_max: float = 1e8):
    """Express a tangent-space operator as a map on chart coordinates."""

    def structure(cp: ChartPoint, d: np.ndarray) -> np.ndarray:
        ctx = _frame_context(so, cp)
        mat = frame_matrix(so, cp)
        v = chart_frame(so, cp, d, _ctx=ctx)
        return frame_invert(so, cp, apply_fn(v), cond_max=cond_max, _mat=mat)

    return structure


def make_coord_form(so: SOSystem, omega_fn):
    """Express a 2-form on tangent vectors as a form on coordinate fields."""

    def form(cp: ChartPoint, da, db) -> float:
        ctx = _frame_context(so, cp)
        return omega_fn(chart_frame(so, cp, da, _ctx=ctx),
                        chart_frame(so, cp, db, _ctx=ctx))

    return form


def field_bracket(so: SOSystem, f_field, g_field, cp: ChartPoint,
                  h: float = 1e-4) -> np.ndarray:
    """Lie bracket of two vector fields given by chart-coordinate components:
    [F, G] = (DG) F - (DF) G, directional derivatives by central differences."""
    f0 = f_field(cp)
    g0 = g_field(cp)

    def directional(field, along):
        plus = field(chart_step(so, cp, along, h))
        minus = field(chart_step(so, cp, along, -h))
        return (plus - minus) / (2 * h)

    return directional(g_field, f0) - directional(f_field, g0)


# ---------------------------------------------------------------------------
# orbit embedding and chart inversion
# ---------------------------------------------------------------------------

def orbit_point(so: SOSystem, cp: ChartPoint) -> np.ndarray:
    """Image of the chart point in the adjoint orbit of Z0 in g^C."""
    x = so.embed_p(cp.X)
    c = so.embed_k_perp(cp.Cc)
    hvec = so.embed_a(cp.H.t)
    return so.exp_ad(x) @ (so.exp_ad(c) @ (so.exp_ad(1j * hvec) @ so.Z0.astype(complex)))


def chart_invert(so: SOSystem, target: np.ndarray, cp0: ChartPoint, *,
                 tol: float = 1e-12, max_iter: int = 30) -> ChartPoint:
    """Newton solve for the chart coordinates of a point given by its orbit
    image; the initial guess must be in the basin (small group moves)."""
    dim = 2 * so.dim_p
    coords = cp0.coords()

    def residual(u):
        cp = _from_coords(so, u)
        z = orbit_point(so, cp) - target
        return np.concatenate([z.real, z.imag])

    scale = max(1.0, float(np.max(np.abs(target))))
    for _ in range(max_iter):
        r = residual(coords)
        if np.max(np.abs(r)) < tol * scale:
            return _from_coords(so, coords)
        jac = np.empty((r.shape[0], dim))
        hstep = 1e-7
        for k in range(dim):
            e = np.zeros(dim)
            e[k] = hstep
            jac[:, k] = (residual(coords + e) - residual(coords - e)) / (2 * hstep)
        delta, *_ = np.linalg.lstsq(jac, -r, rcond=None)
        coords = coords + delta
    raise FrameError("chart inversion did not converge")


def _from_coords(so: SOSystem, u: np.ndarray) -> ChartPoint:
    x = u[: so.dim_p]
    c = u[so.dim_p: so.dim_p + so.dim_k_perp]
    t = u[so.dim_p + so.dim_k_perp:]
    return ChartPoint(X=x, Cc=c, H=cell_contains(so, t))
