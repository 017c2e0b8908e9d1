"""Operators attached to slice points of the crown domain.

All operators act on p^C coordinate vectors over the adapted basis.  The
spectral formulas are the primary implementations; the defining compositions
through Ad(exp iH) are available as cross-check routes and are exercised by
the verification suites.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SingularityError
from .lie_core import SOSystem, decompose_p_vector

__all__ = [
    "CellPoint",
    "FrameOperator",
    "cell_contains",
    "f_a",
    "f_a_adjoint_route",
    "e_a",
    "e_a_series_route",
    "psi",
    "psi_star",
    "l_a",
    "l_a_derivative_route",
    "compensator_element",
    "induced_slice_vector",
]

# below this root value the ratio alpha(Psi(H))/alpha(H) switches to its
# analytic continuation to avoid cancellation
_RATIO_SWITCH = 1e-4


@dataclass(frozen=True)
class CellPoint:
    """A point H = sum t_j A_j of the cell Omega, with its regularity flag."""

    t: np.ndarray
    regular: bool

    def __post_init__(self):
        object.__setattr__(self, "t", np.asarray(self.t, dtype=float))


def cell_contains(so: SOSystem, t, *, margin: float = 1e-9,
                  reg_margin: float = 1e-6) -> CellPoint:
    """Check |alpha(H)| < pi/2 for every root and build the cell point.

    Raises DomainError naming a violating root when H leaves the cell.
    """
    t = np.asarray(t, dtype=float)
    if t.shape != (so.rank,):
        raise DomainError(f"expected {so.rank} cell coordinates, got shape {t.shape}")
    min_abs = np.inf
    for blk in so.blocks:
        v = blk.value(t)
        if abs(v) >= np.pi / 2 - margin:
            raise DomainError(
                f"H outside the cell: |alpha(H)| = {abs(v):.6g} for root {tuple(blk.ecoeffs)}"
            )
        min_abs = min(min_abs, abs(v))
    return CellPoint(t=t, regular=bool(min_abs > reg_margin))


@dataclass(frozen=True)
class FrameOperator:
    """A (possibly anti-linear) operator on p^C in adapted coordinates.

    Anti-linear operators conjugate their argument before the matrix acts.
    """

    matrix: np.ndarray
    kind: str
    base: CellPoint
    antilinear: bool = False

    def apply(self, z: np.ndarray) -> np.ndarray:
        return self.matrix @ (np.conj(z) if self.antilinear else z)

    def inverse_apply(self, z: np.ndarray) -> np.ndarray:
        if self.antilinear:
            return np.conj(np.linalg.solve(self.matrix, z))
        return np.linalg.solve(self.matrix, z)


def _diagonal(so: SOSystem, a_values, block_value) -> np.ndarray:
    """Assemble a block-scalar diagonal on p: a_values(j) on the A_j coordinates,
    block_value(block) on each p-block."""
    d = np.empty(so.dim_p)
    for j in range(so.rank):
        d[j] = a_values(j)
    for blk in so.blocks:
        d[blk.p_slice] = block_value(blk)
    return d


def f_a(so: SOSystem, cell: CellPoint) -> FrameOperator:
    """Multiplication by cos alpha(H) on each p-block, identity on a."""
    d = _diagonal(so, lambda j: 1.0, lambda blk: np.cos(blk.value(cell.t)))
    return FrameOperator(matrix=np.diag(d), kind="F_a", base=cell)


def f_a_adjoint_route(so: SOSystem, cell: CellPoint) -> np.ndarray:
    """Definitional route: project Ad(exp(-iH)) to p^C."""
    h = so.embed_a(cell.t)
    ad_full = so.exp_ad(-1j * h)
    return ad_full[: so.dim_p, : so.dim_p]


def _sinc(x: float) -> float:
    return float(np.sinc(x / np.pi))


def e_a(so: SOSystem, cell: CellPoint) -> FrameOperator:
    """Multiplication by sin alpha(H)/alpha(H) on each p-block, identity on a."""
    d = _diagonal(so, lambda j: 1.0, lambda blk: _sinc(blk.value(cell.t)))
    return FrameOperator(matrix=np.diag(d), kind="E_a", base=cell)


def e_a_series_route(so: SOSystem, cell: CellPoint, tol: float = 1e-16) -> np.ndarray:
    """Definitional route: p^C-projection of sum_n (-1)^n/(n+1)! ad(iH)^n."""
    h = so.embed_a(cell.t)
    series = so.dexp_series(1j * h, tol=tol)
    return series[: so.dim_p, : so.dim_p]


def psi(so: SOSystem, y: np.ndarray) -> np.ndarray:
    """The fiber map on p, evaluated by its defining composition.

    Applies Ad(exp iY) to Z_0, projects to p^C, multiplies by i and applies
    -I0.  Input and output are real p-coordinate vectors.
    """
    y = np.asarray(y, dtype=float)
    if y.shape == (so.n,):
        y = so.p_part(y)
    adv = so.exp_ad(1j * so.embed_p(y)) @ so.Z0
    w = 1j * adv[: so.dim_p]
    out = -(so.I0 @ w)
    if np.max(np.abs(out.imag)) > 1e-10 * max(1.0, np.max(np.abs(out.real))):
        raise DomainError("fiber map produced a non-real result; input not in p?")
    return out.real


def psi_on_cell(so: SOSystem, t: np.ndarray) -> np.ndarray:
    """a-coefficients of psi at H = sum t_j A_j (composition route)."""
    return psi(so, so.p_part(so.embed_a(t)))[: so.rank]


def psi_star(so: SOSystem, cell: CellPoint) -> FrameOperator:
    """Differential of the fiber map at H, diagonal on the adapted blocks.

    Eigenvalues: cos(lambda_j(H)) on A_j; alpha(psi(H))/alpha(H) on each
    p-block, with the analytic continuation through alpha(H) = 0 used below
    the cancellation threshold.
    """
    psi_a = psi_on_cell(so, cell.t)

    def block_eig(blk):
        v = blk.value(cell.t)
        if abs(v) < _RATIO_SWITCH:
            beta = 0.0 if blk.partner < 0 else so.blocks[blk.partner].value(cell.t)
            return _sinc(v) * np.cos(beta)
        return float(blk.ecoeffs @ psi_a) / v

    d = _diagonal(so, lambda j: np.cos(2 * cell.t[j]), block_eig)
    return FrameOperator(matrix=np.diag(d), kind="PsiStar", base=cell)


def l_a(so: SOSystem, cell: CellPoint) -> FrameOperator:
    """The anti-linear operator F_a I0 F_a^{-1} (conjugate, then the matrix)."""
    fa = f_a(so, cell).matrix
    mat = fa @ so.I0 @ np.linalg.inv(fa)
    return FrameOperator(matrix=mat.astype(complex), kind="L_a", base=cell,
                         antilinear=True)


def l_a_derivative_route(so: SOSystem, cell: CellPoint) -> np.ndarray:
    """Alternative route I0 F_a^{-1} (Psi_*)_H E_a^{-1}; requires a regular point."""
    if not cell.regular:
        raise SingularityError("derivative route for L_a needs a regular point")
    fa = f_a(so, cell).matrix
    ea = e_a(so, cell).matrix
    ps = psi_star(so, cell).matrix
    return so.I0 @ np.linalg.solve(fa, ps @ np.linalg.inv(ea))


def compensator_element(so: SOSystem, cell: CellPoint, y: np.ndarray) -> np.ndarray:
    """The compensating k-element -sum cot(alpha(H)) K^alpha of a p-vector.

    Raises SingularityError at non-regular H (a cotangent blows up).
    """
    if not cell.regular:
        raise SingularityError("compensator needs a regular cell point")
    dec = decompose_p_vector(so, y)
    out = np.zeros(so.n)
    for blk, kv in zip(so.blocks, dec.k_partners):
        v = blk.value(cell.t)
        out -= (np.cos(v) / np.sin(v)) * kv
    return out


def induced_slice_vector(so: SOSystem, cell: CellPoint, w: np.ndarray) -> np.ndarray:
    """Trivialized coordinates of the induced field of w in g^C at the slice
    point exp(iH)K^C: the p^C-part of Ad(exp(-iH)) w."""
    h = so.embed_a(cell.t)
    return (so.exp_ad(-1j * h) @ w)[: so.dim_p]
