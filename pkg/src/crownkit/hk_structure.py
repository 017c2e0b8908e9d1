"""The three complex structures, their Kahler forms, potentials and moment maps.

Tangent vectors are carried in the trivialization by the group factor of the
base point ("frame coordinates"): a vector at exp(X)exp(C)exp(iH)K^C is a
p^C coordinate vector Z.  In this trivialization the second complex structure
is multiplication by i, the first acts by the anti-linear operator of
:func:`crownkit.crown_ops.l_a`, and all three 2-forms have closed bilinear
expressions depending on H only.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .crown_ops import CellPoint, cell_contains, e_a, f_a, l_a, psi, psi_star
from .errors import DomainError
from .lie_core import (
    LieAlgebraModel,
    RootDatum,
    SOSystem,
    build_algebra,
    build_so_system,
    restricted_root_decomposition,
)

__all__ = [
    "NumericsConfig",
    "HKHandle",
    "TangentVec",
    "build_handle",
    "J_apply",
    "I_apply",
    "K_apply",
    "omega_I",
    "omega_J",
    "omega_K",
    "omega_J_kernel_route",
    "omega_0_pullback",
    "omega_can",
    "omega_can_induced_route",
    "rho_J",
    "mu_J",
    "f_I",
    "f_I_prime",
    "f_tilde",
    "rho_I",
    "mu_general",
    "rho_can",
    "mu_can",
    "project_base",
    "frame_to_induced",
    "induced_to_frame",
    "induced_vector",
    "ad_group_inverse",
]


@dataclass(frozen=True)
class NumericsConfig:
    """Finite-difference steps, margins and conditioning limits."""

    h_fd: float = 1e-4          # single-derivative central differences
    h_fd2: float = 5e-4         # nested (two-derivative) differences
    chart_radius: float = 0.3   # validity radius for the X and C chart legs
    cell_margin: float = 1e-9
    reg_margin: float = 1e-6
    frame_cond_max: float = 1e8


@dataclass(frozen=True)
class HKHandle:
    """Bundles the triple system with the numerical configuration."""

    so: SOSystem
    config: NumericsConfig

    @property
    def name(self) -> str:
        return self.so.name


def build_handle(name: str, config: NumericsConfig | None = None) -> HKHandle:
    """Build the full structure chain for a named space."""
    model = build_algebra(name)
    roots = restricted_root_decomposition(model)
    so = build_so_system(model, roots)
    return HKHandle(so=so, config=config or NumericsConfig())


@dataclass(frozen=True)
class TangentVec:
    """Tangent vector in frame coordinates at a chart point.

    ``Z`` is the p^C coordinate vector of the vector in the trivialization by
    the base point's group factor; conversion to induced-field coordinates
    divides out the H-dependent frame operator (see :func:`frame_to_induced`).
    """

    base: object   # ChartPoint; only .H, .X, .Cc are used here
    Z: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "Z", np.asarray(self.Z, dtype=complex))


def _same_base(v: TangentVec, w: TangentVec) -> None:
    b1, b2 = v.base, w.base
    if not (np.allclose(b1.H.t, b2.H.t) and np.allclose(b1.X, b2.X)
            and np.allclose(b1.Cc, b2.Cc)):
        raise DomainError("tangent vectors live at different base points")


# ---------------------------------------------------------------------------
# complex structures
# ---------------------------------------------------------------------------

def J_apply(h: HKHandle, v: TangentVec) -> TangentVec:
    """Ambient complex structure: multiplication by i in frame coordinates."""
    return TangentVec(base=v.base, Z=1j * v.Z)


def I_apply(h: HKHandle, v: TangentVec) -> TangentVec:
    """The invariant structure adapted to the base metric: anti-linear on p^C."""
    op = l_a(h.so, v.base.H)
    return TangentVec(base=v.base, Z=op.apply(v.Z))


def K_apply(h: HKHandle, v: TangentVec) -> TangentVec:
    return I_apply(h, J_apply(h, v))


# ---------------------------------------------------------------------------
# the 2-forms
# ---------------------------------------------------------------------------

def omega_I(h: HKHandle, v: TangentVec, w: TangentVec) -> float:
    _same_base(v, w)
    so = h.so
    return float(np.real(so.b_p(so.I0 @ v.Z, w.Z)))


def omega_K(h: HKHandle, v: TangentVec, w: TangentVec) -> float:
    _same_base(v, w)
    so = h.so
    return float(-np.imag(so.b_p(so.I0 @ v.Z, w.Z)))


def omega_J(h: HKHandle, v: TangentVec, w: TangentVec) -> float:
    """-Im B(I0 Z, F_a I0 F_a^{-1} conj(W)) in frame coordinates."""
    _same_base(v, w)
    so = h.so
    la = l_a(so, v.base.H)
    return float(-np.imag(so.b_p(so.I0 @ v.Z, la.apply(w.Z))))


def omega_J_kernel_route(h: HKHandle, v: TangentVec, w: TangentVec) -> float:
    """Equivalent expression through the fiber-map differential, on induced
    coordinates; valid at regular base points."""
    _same_base(v, w)
    so = h.so
    cell = v.base.H
    zi = frame_to_induced(h, v)
    wi = frame_to_induced(h, w)
    ker = psi_star(so, cell).matrix @ np.linalg.inv(e_a(so, cell).matrix) \
        @ f_a(so, cell).matrix
    return float(-np.imag(so.b_p(zi, ker @ np.conj(wi))))


def omega_0_pullback(h: HKHandle, v: TangentVec, w: TangentVec) -> float:
    """Pull-back of the base Kahler form: B(I0 X, U) on the real parts of the
    induced coordinates."""
    _same_base(v, w)
    so = h.so
    x = np.real(frame_to_induced(h, v))
    u = np.real(frame_to_induced(h, w))
    return float(so.b_p(so.I0 @ x, u))


def omega_can(h: HKHandle, v: TangentVec, w: TangentVec) -> float:
    """Canonical symplectic form: -Im B(F_a^{-1} Z, E_a^{-1} conj(W))."""
    _same_base(v, w)
    so = h.so
    cell = v.base.H
    fz = np.linalg.solve(f_a(so, cell).matrix, v.Z)
    ew = np.linalg.solve(e_a(so, cell).matrix, np.conj(w.Z))
    return float(-np.imag(so.b_p(fz, ew)))


def omega_can_induced_route(h: HKHandle, v: TangentVec, w: TangentVec) -> float:
    """-Im B(Z, E_a^{-1} F_a conj(W)) on induced coordinates."""
    _same_base(v, w)
    so = h.so
    cell = v.base.H
    zi = frame_to_induced(h, v)
    wi = frame_to_induced(h, w)
    m = np.linalg.solve(e_a(so, cell).matrix, f_a(so, cell).matrix)
    return float(-np.imag(so.b_p(zi, m @ np.conj(wi))))


# ---------------------------------------------------------------------------
# potentials and moment maps
# ---------------------------------------------------------------------------

def rho_J(h: HKHandle, point) -> float:
    """-(C/4) sum_j cos(2 t_j)."""
    t = point.H.t
    return float(-(h.so.C_const / 4.0) * np.sum(np.cos(2.0 * t)))


def mu_J(h: HKHandle, point, x: np.ndarray) -> float:
    """B(Ad(g^{-1}) X, psi(H)) for the base point's group factor g."""
    so = h.so
    adg = ad_group_inverse(h, point)
    psi_h = so.embed_p(psi(so, so.p_part(so.embed_a(point.H.t))))
    return float(so.b_form(adg @ np.asarray(x, dtype=float), psi_h))


def f_I(t):
    """Potential profile: cos t - log(1 + cos t) + log 2 - 1, zero at 0."""
    t = np.asarray(t, dtype=float)
    if np.any(np.abs(t) >= np.pi / 2):
        raise DomainError("profile defined for |t| < pi/2")
    c = np.cos(t)
    return c - np.log1p(c) + np.log(2.0) - 1.0


def f_I_prime(t):
    """Closed-form derivative -sin t cos t / (1 + cos t)."""
    t = np.asarray(t, dtype=float)
    c = np.cos(t)
    return -np.sin(t) * c / (1.0 + c)


def f_tilde(f_prime, t: float) -> float:
    """The radial factor sin(t)/(t cos t) f'(t), with the removable zero."""
    s = np.sinc(t / np.pi) / np.cos(t)
    return float(s * f_prime(t))


def rho_I(h: HKHandle, point) -> float:
    """-(C/4) sum_j f_I(2 t_j)."""
    t = point.H.t
    return float(-(h.so.C_const / 4.0) * np.sum(f_I(2.0 * t)))


def mu_general(h: HKHandle, point, x: np.ndarray, f_prime) -> float:
    """(1/2) sum_j ftilde(2 t_j) B(Ad(g^{-1}) X, [I0 A_j, H]) for a radial
    potential -(1/4) sum f(2 t_j) B(A_j, A_j).  Requires a regular point."""
    from .errors import SingularityError

    if not point.H.regular:
        raise SingularityError("radial moment functions need a regular point")
    so = h.so
    t = point.H.t
    adg = ad_group_inverse(h, point)
    xg = adg @ np.asarray(x, dtype=float)
    hvec = so.embed_a(t)
    total = 0.0
    for j in range(so.rank):
        a_j = so.triples[j][2]
        i0a = so.embed_p(so.I0 @ so.p_part(a_j))
        total += f_tilde(f_prime, 2.0 * t[j]) * so.b_form(xg, so.bracket(i0a, hvec))
    return float(0.5 * total)


def rho_can(h: HKHandle, point) -> float:
    """(1/2) B(H, H)."""
    hvec = h.so.embed_a(point.H.t)
    return float(0.5 * h.so.b_form(hvec, hvec))


def mu_can(h: HKHandle, point, x: np.ndarray) -> float:
    """B(Ad(g^{-1}) X, H)."""
    so = h.so
    adg = ad_group_inverse(h, point)
    return float(so.b_form(adg @ np.asarray(x, dtype=float), so.embed_a(point.H.t)))


# ---------------------------------------------------------------------------
# base projection and trivialization plumbing
# ---------------------------------------------------------------------------

def project_base(h: HKHandle, point) -> np.ndarray:
    """Coordinates of the image under the equivariant base projection.

    The fiber factors exp(C) and exp(iH) are absorbed into the fiber, so the
    image is the point exp(X)K of the base, returned as its p-coordinate X.
    """
    return np.asarray(point.X, dtype=float).copy()


def ad_group_inverse(h: HKHandle, point) -> np.ndarray:
    """Ad(g^{-1}) for the group factor g = exp(X) exp(C) of the point."""
    so = h.so
    x = so.embed_p(np.asarray(point.X, dtype=float))
    c = so.embed_k_perp(np.asarray(point.Cc, dtype=float))
    return so.exp_ad(-c) @ so.exp_ad(-x)


def induced_vector(h: HKHandle, point, w: np.ndarray) -> TangentVec:
    """Frame coordinates of the induced field of w in g^C at the point:
    the p^C-part of Ad(exp(-iH)) Ad(g^{-1}) w."""
    so = h.so
    adg = ad_group_inverse(h, point)
    hvec = so.embed_a(point.H.t)
    z = (so.exp_ad(-1j * hvec) @ (adg @ np.asarray(w, dtype=complex)))[: so.dim_p]
    return TangentVec(base=point, Z=z)


def frame_to_induced(h: HKHandle, v: TangentVec) -> np.ndarray:
    """Induced-field coordinates F_a^{-1} Z of a frame-coordinate vector."""
    fa = f_a(h.so, v.base.H)
    return np.linalg.solve(fa.matrix, v.Z)


def induced_to_frame(h: HKHandle, point, z_induced: np.ndarray) -> TangentVec:
    """Inverse conversion: frame coordinates F_a Z."""
    fa = f_a(h.so, point.H)
    return TangentVec(base=point, Z=fa.matrix @ np.asarray(z_induced, dtype=complex))
