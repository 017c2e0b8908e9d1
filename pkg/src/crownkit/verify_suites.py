"""Executable identity checkers: every structural claim becomes a residual suite.

Each suite samples points deterministically from its seed, evaluates a family
of identities, and reports max/mean residuals against per-check tolerances.
Reports are pure functions of (space, seed, config).
"""
from __future__ import annotations

import time
import zlib
from dataclasses import dataclass
from functools import partial

import numpy as np
import scipy.integrate

from . import chart_calculus as cc
from . import crown_ops as co
from . import hk_structure as hk
from .errors import ConfigurationError, SamplingError
from .lie_core import decompose_p_vector

__all__ = [
    "metric_gram",
    "CheckResult",
    "VerificationReport",
    "SUITES",
    "run_suite",
    "suite_structure",
    "suite_operators",
    "suite_closedness",
    "suite_potential_J",
    "suite_potential_I",
    "suite_potential_can",
    "suite_moment_maps",
    "suite_quaternionic_metric",
    "suite_integrability",
    "suite_sl2r_uniqueness",
]


@dataclass(frozen=True)
class CheckResult:
    name: str
    claim: str
    max_residual: float
    mean_residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_residual < self.tolerance


@dataclass(frozen=True)
class VerificationReport:
    suite: str
    space: str
    seed: int
    n_points: int
    points: tuple
    checks: tuple
    runtime_ms: float

    @property
    def verdict(self) -> str:
        return "pass" if all(c.passed for c in self.checks) else "fail"


class _Collector:
    """Accumulates residuals per named check."""

    def __init__(self, tol_override=None):
        self._data: dict[str, tuple[str, float, list]] = {}
        self._order: list[str] = []
        self._tol_override = tol_override

    def add(self, name: str, claim: str, tol: float, residual):
        res = np.atleast_1d(np.abs(np.asarray(residual, dtype=float)))
        if name not in self._data:
            self._data[name] = (claim, tol, [])
            self._order.append(name)
        self._data[name][2].extend(float(r) for r in res)

    def results(self) -> tuple:
        out = []
        for name in self._order:
            claim, tol, values = self._data[name]
            if self._tol_override is not None:
                tol = self._tol_override
            arr = np.asarray(values)
            out.append(CheckResult(name=name, claim=claim,
                                   max_residual=float(np.max(arr)),
                                   mean_residual=float(np.mean(arr)),
                                   tolerance=tol))
        return tuple(out)


def _rng(seed: int, suite: str, space: str) -> np.random.Generator:
    key = zlib.crc32(f"{suite}:{space}".encode("utf-8"))
    return np.random.default_rng(np.random.SeedSequence([seed, key]))


def _sample_cell(so, rng, *, regular_gap=0.05, box=0.9, max_tries=200) -> np.ndarray:
    for _ in range(max_tries):
        t = rng.uniform(-np.pi / 4 * box, np.pi / 4 * box, size=so.rank)
        try:
            co.cell_contains(so, t)
        except Exception:
            continue
        if regular_gap and min(abs(b.value(t)) for b in so.blocks) <= regular_gap:
            continue
        return t
    raise SamplingError(f"{so.name}: could not sample a cell point")


def _sample_chart(h: hk.HKHandle, rng, *, scale=0.08, regular_gap=0.05) -> cc.ChartPoint:
    so = h.so
    t = _sample_cell(so, rng, regular_gap=regular_gap)
    x = rng.normal(0.0, scale, size=so.dim_p)
    c = rng.normal(0.0, scale, size=so.dim_k_perp)
    cap = h.config.chart_radius / 2
    for vec, emb in ((x, so.embed_p), (c, so.embed_k_perp)):
        nm = so.btheta_norm(emb(vec))
        if nm > cap:
            vec *= cap / nm
    return cc.chart_point(so, x, c, t, radius=h.config.chart_radius)


def _point_record(cp: cc.ChartPoint) -> dict:
    return {
        "t": [float(v) for v in cp.H.t],
        "x": [float(v) for v in cp.X],
        "c": [float(v) for v in cp.Cc],
    }


def _report(suite, h, seed, n_points, points, col, t0) -> VerificationReport:
    return VerificationReport(
        suite=suite,
        space=h.name,
        seed=seed,
        n_points=n_points,
        points=tuple(points),
        checks=col.results(),
        runtime_ms=(time.perf_counter() - t0) * 1000.0,
    )


# ---------------------------------------------------------------------------
# structure constants and the trigonometric identity
# ---------------------------------------------------------------------------

def suite_structure(h: hk.HKHandle, seed: int = 0, n_points: int = 100,
                    tol_override=None) -> VerificationReport:
    t0 = time.perf_counter()
    so = h.so
    rng = _rng(seed, "structure", h.name)
    col = _Collector(tol_override)

    for j, (e, te, a) in enumerate(so.triples):
        col.add("triple_normalization", "[A_j, E^j] = 2 E^j", 1e-12,
                np.max(np.abs(so.bracket(a, e) - 2 * e)))
        for l, (e2, te2, a2) in enumerate(so.triples):
            if l == j:
                continue
            col.add("strong_orthogonality", "[E^k, E^l] = [E^k, theta E^l] = 0, "
                    "lambda_l(A_k) = 0 for k != l", 1e-12,
                    [np.max(np.abs(so.bracket(e, e2))),
                     np.max(np.abs(so.bracket(e, te2))),
                     np.max(np.abs(so.bracket(a2, e)))])

    half_k = 0.5 * sum(k for (k, p) in so.KP)
    col.add("center_decomposition", "Z0 = S + (1/2) sum K^j with S in m", 1e-10,
            np.max(np.abs(so.Z0 - so.S - half_k)))
    s_off = so.S.copy()
    s_off[so.dim_p + so.dim_m:] = 0.0
    s_off[: so.dim_p] = 0.0
    col.add("center_decomposition", "Z0 = S + (1/2) sum K^j with S in m", 1e-10,
            np.max(np.abs(so.S - s_off)))

    for j, (k, p) in enumerate(so.KP):
        a = so.triples[j][2]
        col.add("rotation_on_triples", "I0 P^j = A_j and I0 A_j = -P^j", 1e-10,
                [np.max(np.abs(so.I0 @ so.p_part(p) - so.p_part(a))),
                 np.max(np.abs(so.I0 @ so.p_part(a) + so.p_part(p)))])

    # I0 maps each p-block into its partner block only
    for bi, blk in enumerate(so.blocks):
        img = np.abs(so.I0[:, blk.p_slice]).sum(axis=1)
        mask = np.ones(so.dim_p, dtype=bool)
        if blk.partner < 0:
            mask[: so.rank] = False
        else:
            mask[so.blocks[blk.partner].p_slice] = False
        col.add("block_rotation", "I0 exchanges the paired root blocks of p", 1e-10,
                np.max(img[mask]) if np.any(mask) else 0.0)

    col.add("square_minus_one", "I0^2 = -Id on p and Z0 centralizes k", 1e-10,
            [np.max(np.abs(so.I0 @ so.I0 + np.eye(so.dim_p))),
             np.max(np.abs(so.ad_of(so.Z0)[:, so.dim_p:]))])

    cvals = np.array([so.b_form(a, a) for (_, _, a) in so.triples])
    col.add("constant_norm", "B(A_j, A_j) is the same constant for all j", 1e-10,
            np.max(np.abs(cvals - so.C_const)) / abs(so.C_const))

    # Killing form from an independent brute-force adjoint trace
    n = so.n
    bf = np.empty((n, n))
    for i in range(n):
        adi = so.ad[i]
        for j in range(n):
            bf[i, j] = np.trace(adi @ so.ad[j])
    col.add("killing_from_adjoint", "stored Killing form equals adjoint traces", 1e-10,
            np.max(np.abs(bf - so.B)) / np.max(np.abs(so.B)))

    theta_vec = np.concatenate([-np.ones(so.dim_p), np.ones(n - so.dim_p)])
    col.add("involution_isometry", "the Cartan involution preserves the Killing form",
            1e-10, np.max(np.abs(so.B * np.outer(theta_vec, theta_vec) - so.B)))

    # cross-block orthogonality of the adapted decomposition
    mask = np.ones((n, n), dtype=bool)
    for sl in _all_block_slices(so):
        mask[sl, sl] = False
    col.add("block_orthogonality", "distinct blocks of the decomposition are "
            "B-orthogonal", 1e-10, np.max(np.abs(so.B[mask])) / np.max(np.abs(so.B)))

    # root property of the stored block bases
    for blk in so.blocks:
        for j in range(so.rank):
            a_j = so.triples[j][2]
            for idx in range(blk.p_slice.start, blk.p_slice.stop):
                v = np.zeros(n)
                v[idx] = 1.0
                kv = np.zeros(n)
                kv[blk.k_slice.start + (idx - blk.p_slice.start)] = 1.0
                val = blk.ecoeffs[j]
                col.add("root_action", "[H, P] = alpha(H) K block pairing", 1e-10,
                        [np.max(np.abs(so.bracket(a_j, v) - val * kv)),
                         np.max(np.abs(so.bracket(a_j, kv) - val * v))])

    col.add("dimension_count", "a + m + root blocks exhaust the algebra", 1e-12,
            abs(so.rank + so.dim_m + 2 * sum(b.mult for b in so.blocks) - n))
    col.add("paired_block_dims", "the k and p parts of each block have equal "
            "dimension", 1e-12,
            [abs((b.k_slice.stop - b.k_slice.start) - b.mult) for b in so.blocks])

    # trigonometric identity for the fiber map, on random cell points
    points = []
    for _ in range(n_points):
        t = _sample_cell(so, rng, regular_gap=0.0)
        points.append({"t": [float(v) for v in t]})
        psi_a = co.psi_on_cell(so, t)
        for blk in so.blocks:
            beta = 0.0 if blk.partner < 0 else so.blocks[blk.partner].value(t)
            lhs = float(blk.ecoeffs @ psi_a)
            rhs = np.sin(blk.value(t)) * np.cos(beta)
            col.add("fiber_trig_identity",
                    "alpha(psi(H)) = sin alpha(H) cos beta(H) for paired blocks",
                    1e-12, abs(lhs - rhs))

    # decomposition of random p-vectors
    for _ in range(10):
        x = rng.standard_normal(so.dim_p)
        dec = decompose_p_vector(so, x)
        recon = so.embed_a(dec.a_part) + sum(dec.p_components)
        col.add("p_decomposition", "X = X_a + sum P^alpha reconstructs X", 1e-10,
                np.max(np.abs(so.p_part(recon) - x)))
        hvec = so.embed_a(rng.standard_normal(so.rank))
        for blk, pv, kv in zip(so.blocks, dec.p_components, dec.k_partners):
            col.add("p_decomposition", "X = X_a + sum P^alpha reconstructs X", 1e-10,
                    np.max(np.abs(so.bracket(hvec, pv)
                                  - blk.value(hvec[: so.rank]) * kv)))

    return _report("structure", h, seed, n_points, points, col, t0)


def _all_block_slices(so):
    slices = [slice(0, so.rank)]
    slices += [b.p_slice for b in so.blocks]
    slices += [slice(so.dim_p, so.dim_p + so.dim_m)]
    slices += [b.k_slice for b in so.blocks]
    return slices


# ---------------------------------------------------------------------------
# the operator layer
# ---------------------------------------------------------------------------

def suite_operators(h: hk.HKHandle, seed: int = 0, n_points: int = 50,
                    tol_override=None) -> VerificationReport:
    t0 = time.perf_counter()
    so = h.so
    rng = _rng(seed, "operators", h.name)
    col = _Collector(tol_override)
    points = []

    for _ in range(n_points):
        t = _sample_cell(so, rng)
        points.append({"t": [float(v) for v in t]})
        cell = co.cell_contains(so, t)

        fa = co.f_a(so, cell)
        ea = co.e_a(so, cell)
        ps = co.psi_star(so, cell)
        col.add("frame_operator_routes", "spectral and adjoint-projection routes for "
                "the frame operators agree", 1e-10,
                [np.max(np.abs(fa.matrix - co.f_a_adjoint_route(so, cell))),
                 np.max(np.abs(ea.matrix - co.e_a_series_route(so, cell)))])

        smin = min(np.min(np.linalg.svd(fa.matrix, compute_uv=False)),
                   np.min(np.linalg.svd(ea.matrix, compute_uv=False)))
        col.add("frame_operators_real_invertible", "the frame operators are real "
                "and invertible on the cell", 1e-12,
                [np.max(np.abs(np.imag(fa.matrix))),
                 np.max(np.abs(np.imag(ea.matrix))),
                 max(0.0, 1e-6 - smin)])

        col.add("operators_commute", "the three diagonal frame operators commute",
                1e-12,
                [np.max(np.abs(fa.matrix @ ea.matrix - ea.matrix @ fa.matrix)),
                 np.max(np.abs(fa.matrix @ ps.matrix - ps.matrix @ fa.matrix)),
                 np.max(np.abs(ea.matrix @ ps.matrix - ps.matrix @ ea.matrix))])

        lhs = ps.matrix @ np.linalg.inv(ea.matrix)
        rhs = -so.I0 @ fa.matrix @ so.I0
        col.add("pushforward_factorization",
                "(fiber map differential) E_a^{-1} = -I0 F_a I0 on p", 1e-10,
                np.max(np.abs(lhs - rhs)))

        la = co.l_a(so, cell)
        col.add("antilinear_routes", "both routes to the anti-linear operator agree "
                "and it squares to -Id", 1e-10,
                [np.max(np.abs(la.matrix - co.l_a_derivative_route(so, cell))),
                 np.max(np.abs(la.matrix @ np.conj(la.matrix) + np.eye(so.dim_p)))])

        bp = so.B[: so.dim_p, : so.dim_p]
        col.add("pushforward_selfadjoint", "the fiber map differential is "
                "B-self-adjoint", 1e-12,
                np.max(np.abs(ps.matrix.T @ bp - bp @ ps.matrix)))

    # closed diagonal form of the fiber map on the flat directions
    for _ in range(10):
        t = _sample_cell(so, rng, regular_gap=0.0)
        psi_a = co.psi_on_cell(so, t)
        col.add("fiber_map_diagonal", "psi(H) = (1/2) sum sin(2 t_j) A_j", 1e-12,
                np.max(np.abs(psi_a - 0.5 * np.sin(2 * t))))

    # equivariance of the fiber map under the compact factor
    for _ in range(5):
        t = _sample_cell(so, rng, regular_gap=0.0)
        y = so.p_part(so.embed_a(t))
        kappa = np.zeros(so.n)
        kappa[so.dim_p:] = 0.3 * rng.standard_normal(so.n - so.dim_p)
        adk = so.exp_ad(kappa)
        lhs = co.psi(so, so.p_part(adk @ so.embed_p(y)))
        rhs = so.p_part(adk @ so.embed_p(co.psi(so, y)))
        col.add("fiber_map_equivariance", "the fiber map commutes with the compact "
                "factor action", 1e-10, np.max(np.abs(lhs - rhs)))

    # differential of the fiber map versus central differences
    hfd = h.config.h_fd
    for _ in range(5):
        t = _sample_cell(so, rng)
        cell = co.cell_contains(so, t)
        ps = co.psi_star(so, cell)
        hp = so.p_part(so.embed_a(t))
        for _ in range(3):
            d = rng.standard_normal(so.dim_p)
            fd = (co.psi(so, hp + hfd * d) - co.psi(so, hp - hfd * d)) / (2 * hfd)
            col.add("pushforward_fd", "diagonal differential matches central "
                    "differences of the fiber map", 1e-6,
                    np.max(np.abs(fd - np.real(ps.matrix @ d))))

    # analytic continuation of the block eigenvalues across alpha(H) = 0
    cont = _continuity_residuals(so)
    if cont:
        col.add("eigenvalue_continuity", "block eigenvalues extend continuously "
                "through non-regular points", 1e-8, cont)

    # derivative exchange for block directions (finite differences on the orbit)
    for _ in range(5):
        t = _sample_cell(so, rng)
        cell = co.cell_contains(so, t)
        hvec = so.embed_a(t)
        orbit = so.exp_ad(1j * hvec) @ so.Z0.astype(complex)
        for blk in so.blocks:
            idx = blk.p_slice.start
            pvec = np.zeros(so.n)
            pvec[idx] = 1.0
            kvec = np.zeros(so.n)
            kvec[blk.k_slice.start] = 1.0
            step = 1e-4
            fd = (so.exp_ad(1j * (hvec + step * pvec)) @ so.Z0
                  - so.exp_ad(1j * (hvec - step * pvec)) @ so.Z0) / (2 * step)
            exact = -so.ad_of(kvec / blk.value(t)) @ orbit
            col.add("block_direction_exchange", "moving H along a block direction "
                    "matches the compensating compact rotation", 1e-7,
                    np.max(np.abs(fd - exact)))

    # compensator identities through the induced-field conversions
    for _ in range(5):
        t = _sample_cell(so, rng)
        cell = co.cell_contains(so, t)
        y = rng.standard_normal(so.dim_p)
        dec = decompose_p_vector(so, y)
        for blk, pv, kv in zip(so.blocks, dec.p_components, dec.k_partners):
            v = blk.value(t)
            iq = co.induced_slice_vector(so, cell, 1j * pv.astype(complex))
            kt = co.induced_slice_vector(so, cell, kv.astype(complex))
            col.add("compensator_conversion", "induced compact directions convert "
                    "to -sin alpha(H) i Q^alpha", 1e-10,
                    [np.max(np.abs(kt + np.sin(v) * 1j * so.p_part(pv))),
                     np.max(np.abs(iq + (np.cos(v) / np.sin(v)) * kt))])
        # full compensator: curve derivative equals i Y-tilde; fourth-order
        # differences keep the large higher derivatives near the walls at bay
        cvec = co.compensator_element(so, cell, y)
        ya = so.embed_a(dec.a_part)

        def curve(s):
            return so.exp_ad(s * cvec) @ (so.exp_ad(1j * (so.embed_a(t) + s * ya)) @ so.Z0)

        step = 1e-3
        fd = (-curve(2 * step) + 8 * curve(step) - 8 * curve(-step)
              + curve(-2 * step)) / (12 * step)
        orbit0 = so.exp_ad(1j * so.embed_a(t)) @ so.Z0.astype(complex)
        exact = so.ad_of(1j * so.embed_p(y)) @ orbit0
        col.add("compensator_curve", "the compensated curve realizes i Y-tilde",
                1e-8, np.max(np.abs(fd - exact)))

    # frame round trips, conversions, conditioning
    for _ in range(5):
        cp = _sample_chart(h, rng)
        mat = cc.frame_matrix(so, cp)
        d = rng.standard_normal(2 * so.dim_p)
        v = cc.chart_frame(so, cp, d)
        col.add("frame_roundtrip", "coordinate frame inversion round-trips", 1e-10,
                np.max(np.abs(cc.frame_invert(so, cp, v, _mat=mat) - d)))
        z = rng.standard_normal(so.dim_p) + 1j * rng.standard_normal(so.dim_p)
        tv = hk.TangentVec(base=cp, Z=z)
        back = hk.induced_to_frame(h, cp, hk.frame_to_induced(h, tv))
        col.add("trivialization_roundtrip", "frame and induced coordinates "
                "round-trip", 1e-12, np.max(np.abs(back.Z - z)))

    grid = np.linspace(0.15, 0.85, 10)
    for s in grid:
        t = s * np.pi / 4 * np.linspace(1.0, 0.6, so.rank)
        cp = cc.slice_point(so, t)
        col.add("frame_conditioning", "slice frames stay well conditioned", 1e6,
                cc.frame_condition(so, cp))

    # chart frame reproduces the compensator statements at the slice
    for _ in range(5):
        t = _sample_cell(so, rng)
        cp = cc.slice_point(so, t)
        cell = cp.H
        y = rng.standard_normal(so.dim_p)
        dec = decompose_p_vector(so, y)
        cvec = co.compensator_element(so, cell, y)
        d = np.concatenate([np.zeros(so.dim_p), cvec[so.dim_p + so.dim_m:],
                            dec.a_part])
        lhs = cc.chart_frame(so, cp, d).Z
        fa = co.f_a(so, cell)
        col.add("chart_compensator", "the chart frame realizes the compensated "
                "vertical directions", 1e-8,
                np.max(np.abs(lhs - 1j * (fa.matrix @ y))))

    return _report("operators", h, seed, n_points, points, col, t0)


def _continuity_residuals(so):
    out = []
    for bi, blk in enumerate(so.blocks):
        if so.rank < 2 or blk.partner < 0:
            continue
        if not (np.any(blk.ecoeffs > 0) and np.any(blk.ecoeffs < 0)):
            continue
        # walk along the wall alpha(H) = 0 offset by a hair above the switch
        base = np.full(so.rank, 0.2)
        delta = 2.5e-4
        jpos = int(np.argmax(blk.ecoeffs))
        t = base.copy()
        t[jpos] += delta / blk.ecoeffs[jpos]
        cell = co.cell_contains(so, t)
        val = np.real(co.psi_star(so, cell).matrix[blk.p_slice.start,
                                                   blk.p_slice.start])
        beta = 0.0 if blk.partner < 0 else so.blocks[blk.partner].value(t)
        limit = np.sinc(blk.value(t) / np.pi) * np.cos(beta)
        out.append(abs(val - limit))
    return out


# ---------------------------------------------------------------------------
# closedness and potentials
# ---------------------------------------------------------------------------

def _form_triple(h, which):
    if which == "I":
        return partial(hk.omega_I, h)
    if which == "J":
        return partial(hk.omega_J, h)
    if which == "K":
        return partial(hk.omega_K, h)
    raise ConfigurationError(which)


def suite_closedness(h: hk.HKHandle, seed: int = 0, n_points: int = 20,
                     tol_override=None) -> VerificationReport:
    t0 = time.perf_counter()
    so = h.so
    rng = _rng(seed, "closedness", h.name)
    col = _Collector(tol_override)
    points = []
    dim = 2 * so.dim_p
    eye = np.eye(dim)
    forms = {w: cc.make_coord_form(so, _form_triple(h, w)) for w in "IJK"}
    for _ in range(n_points):
        cp = _sample_chart(h, rng)
        points.append(_point_record(cp))
        idx = rng.choice(dim, size=3, replace=False)
        for w in "IJK":
            val = cc.fd_d_twoform(so, forms[w], cp, eye[idx[0]], eye[idx[1]],
                                  eye[idx[2]], h=h.config.h_fd)
            col.add(f"d_omega_{w}", f"exterior derivative of the {w}-form vanishes",
                    1e-5, abs(val))
    return _report("closedness", h, seed, n_points, points, col, t0)


def _potential_suite(h, seed, n_points, tol_override, label, rho, structure_apply,
                     target_form, extra=None):
    t0 = time.perf_counter()
    so = h.so
    rng = _rng(seed, label, h.name)
    col = _Collector(tol_override)
    points = []
    dim = 2 * so.dim_p
    eye = np.eye(dim)
    struct = cc.make_coord_structure(so, structure_apply,
                                     cond_max=h.config.frame_cond_max)
    form = cc.make_coord_form(so, target_form)
    for _ in range(n_points):
        cp = _sample_chart(h, rng)
        points.append(_point_record(cp))
        for _ in range(2):
            i, j = rng.choice(dim, size=2, replace=False)
            lhs = cc.fd_ddc(so, rho, struct, cp, eye[i], eye[j],
                            h=h.config.h_fd, h_outer=h.config.h_fd2)
            rhs = form(cp, eye[i], eye[j])
            col.add(f"potential_identity_{label}",
                    "the Kahler form is the complex Hessian of its potential",
                    1e-5, abs(lhs - rhs))
    if extra is not None:
        extra(col, rng)
    return _report(label, h, seed, n_points, points, col, t0)


def suite_potential_J(h: hk.HKHandle, seed: int = 0, n_points: int = 20,
                      tol_override=None) -> VerificationReport:
    so = h.so

    def hessian_check(col, rng):
        step = 1e-4
        for _ in range(5):
            t = _sample_cell(so, rng, regular_gap=0.0)
            hess = np.empty((so.rank, so.rank))
            for i in range(so.rank):
                for j in range(so.rank):
                    ei = np.zeros(so.rank)
                    ej = np.zeros(so.rank)
                    ei[i] = step
                    ej[j] = step
                    vals = [_rho_j_of_t(h, t + ei + ej), -_rho_j_of_t(h, t + ei - ej),
                            -_rho_j_of_t(h, t - ei + ej), _rho_j_of_t(h, t - ei - ej)]
                    hess[i, j] = sum(vals) / (4 * step * step)
            col.add("radial_convexity", "the potential is strictly convex along "
                    "the cell", 1e-12, max(0.0, -np.min(np.linalg.eigvalsh(hess))))

    return _potential_suite(h, seed, n_points, tol_override, "potential_J",
                            partial(hk.rho_J, h), partial(hk.J_apply, h),
                            partial(hk.omega_J, h), extra=hessian_check)


def _rho_j_of_t(h, t):
    return float(-(h.so.C_const / 4.0) * np.sum(np.cos(2.0 * np.asarray(t))))


def suite_potential_I(h: hk.HKHandle, seed: int = 0, n_points: int = 20,
                      tol_override=None) -> VerificationReport:
    def target(v, w):
        return hk.omega_I(h, v, w) - hk.omega_0_pullback(h, v, w)

    def profile_checks(col, rng):
        # trigonometric first-order equation of the profile, derivative by a
        # fourth-order stencil of the closed form
        step = 1e-3
        for t in np.linspace(-0.95 * np.pi / 2, 0.95 * np.pi / 2, 101):
            fp = (-hk.f_I(t + 2 * step) + 8 * hk.f_I(t + step)
                  - 8 * hk.f_I(t - step) + hk.f_I(t - 2 * step)) / (12 * step)
            col.add("profile_equation", "the radial profile solves its "
                    "trigonometric first-order equation", 1e-10,
                    abs(np.tan(t) * fp - (np.cos(t) - 1.0)))
        # closed form against quadrature of the equation solved for f'
        for t in np.linspace(-1.4, 1.4, 9):
            val, err = scipy.integrate.quad(
                lambda s: (np.cos(s) - 1.0) * np.cos(s) / np.sin(s) if s != 0 else 0.0,
                0.0, t, epsabs=1e-13, epsrel=1e-13)
            col.add("profile_quadrature", "the closed profile matches quadrature "
                    "of its defining equation", 1e-9, abs(hk.f_I(t) - val))

    return _potential_suite(h, seed, n_points, tol_override, "potential_I",
                            partial(hk.rho_I, h), partial(hk.I_apply, h), target,
                            extra=profile_checks)


def suite_potential_can(h: hk.HKHandle, seed: int = 0, n_points: int = 20,
                        tol_override=None) -> VerificationReport:
    def extra(col, rng):
        # the two closed expressions for the canonical form agree
        for _ in range(10):
            cp = _sample_chart(h, rng)
            z = rng.standard_normal(h.so.dim_p) + 1j * rng.standard_normal(h.so.dim_p)
            w = rng.standard_normal(h.so.dim_p) + 1j * rng.standard_normal(h.so.dim_p)
            v1, v2 = hk.TangentVec(cp, z), hk.TangentVec(cp, w)
            col.add("canonical_form_routes", "frame and induced expressions of the "
                    "canonical form agree", 1e-12,
                    abs(hk.omega_can(h, v1, v2) - hk.omega_can_induced_route(h, v1, v2)))

    return _potential_suite(h, seed, n_points, tol_override, "potential_can",
                            partial(hk.rho_can, h), partial(hk.J_apply, h),
                            partial(hk.omega_can, h), extra=extra)


# ---------------------------------------------------------------------------
# moment maps
# ---------------------------------------------------------------------------

def _dc_rho_along(h, cp, tv, structure_apply, rho):
    """d^c rho evaluated on a tangent vector, by one central difference."""
    so = h.so
    rotated = structure_apply(tv)
    coords = cc.frame_invert(so, cp, rotated, cond_max=h.config.frame_cond_max)
    step = h.config.h_fd
    return (rho(cc.chart_step(so, cp, coords, step))
            - rho(cc.chart_step(so, cp, coords, -step))) / (2 * step)


def suite_moment_maps(h: hk.HKHandle, seed: int = 0, n_points: int = 10,
                      tol_override=None) -> VerificationReport:
    t0 = time.perf_counter()
    so = h.so
    rng = _rng(seed, "moment_maps", h.name)
    col = _Collector(tol_override)
    points = []
    dim = 2 * so.dim_p
    eye = np.eye(dim)

    for _ in range(n_points):
        cp = _sample_chart(h, rng)
        points.append(_point_record(cp))
        x = rng.standard_normal(so.n)
        x /= so.btheta_norm(x)
        xt = hk.induced_vector(h, cp, x)

        # closed formulas against the d^c route
        col.add("moment_formula_J", "the closed moment formula matches d^c of the "
                "potential", 1e-6,
                abs(hk.mu_J(h, cp, x)
                    - _dc_rho_along(h, cp, xt, partial(hk.J_apply, h), partial(hk.rho_J, h))))
        col.add("moment_formula_can", "the canonical moment formula matches d^c of "
                "its potential", 1e-6,
                abs(hk.mu_can(h, cp, x)
                    - _dc_rho_along(h, cp, xt, partial(hk.J_apply, h), partial(hk.rho_can, h))))
        col.add("moment_formula_radial", "the radial moment formula matches d^c for "
                "both potential profiles", 1e-6,
                [abs(hk.mu_general(h, cp, x, lambda t: -np.sin(t))
                     - _dc_rho_along(h, cp, xt, partial(hk.I_apply, h), partial(hk.rho_J, h))),
                 abs(hk.mu_general(h, cp, x, hk.f_I_prime)
                     - _dc_rho_along(h, cp, xt, partial(hk.I_apply, h), partial(hk.rho_I, h)))])

        # Hamiltonian property d mu^X = iota_X omega
        for mu_fn, omega_fn, tag in (
            (hk.mu_J, hk.omega_J, "J"),
            (hk.mu_can, hk.omega_can, "can"),
        ):
            i = int(rng.integers(dim))
            d = eye[i]
            step = h.config.h_fd
            dmu = (mu_fn(h, cc.chart_step(so, cp, d, step), x)
                   - mu_fn(h, cc.chart_step(so, cp, d, -step), x)) / (2 * step)
            rhs = omega_fn(h, xt, cc.chart_frame(so, cp, d))
            col.add(f"hamiltonian_{tag}", "the differential of the moment function "
                    "is the contraction of the form", 1e-5, abs(dmu - rhs))

    # equivariance through an honest chart re-location
    for _ in range(max(3, n_points // 3)):
        cp = _sample_chart(h, rng, scale=0.05)
        w = 0.05 * rng.standard_normal(so.n)
        x = rng.standard_normal(so.n)
        target = so.exp_ad(w) @ cc.orbit_point(so, cp)
        moved = cc.chart_invert(so, target, cp)
        adg_inv_x = so.exp_ad(-w) @ x
        col.add("equivariance", "moment maps transform by the coadjoint action",
                1e-8,
                [abs(hk.mu_J(h, moved, x) - hk.mu_J(h, cp, adg_inv_x)),
                 abs(hk.mu_can(h, moved, x) - hk.mu_can(h, cp, adg_inv_x))])

    # vanishing on the centralizer directions at the slice
    if so.dim_m > 0:
        t = _sample_cell(so, rng)
        sp = cc.slice_point(so, t)
        for i in range(so.dim_m):
            m = np.zeros(so.n)
            m[so.dim_p + i] = 1.0
            col.add("centralizer_vanishing", "moment functions vanish on the "
                    "centralizer of a at the slice", 1e-12,
                    [abs(hk.mu_J(h, sp, m)), abs(hk.mu_can(h, sp, m))])

    return _report("moment_maps", h, seed, n_points, points, col, t0)


# ---------------------------------------------------------------------------
# quaternionic algebra, metric, invariances
# ---------------------------------------------------------------------------

def suite_quaternionic_metric(h: hk.HKHandle, seed: int = 0, n_points: int = 50,
                              tol_override=None) -> VerificationReport:
    t0 = time.perf_counter()
    so = h.so
    rng = _rng(seed, "quaternionic_metric", h.name)
    col = _Collector(tol_override)
    points = []

    for _ in range(n_points):
        cp = _sample_chart(h, rng)
        points.append(_point_record(cp))
        z = rng.standard_normal(so.dim_p) + 1j * rng.standard_normal(so.dim_p)
        w = rng.standard_normal(so.dim_p) + 1j * rng.standard_normal(so.dim_p)
        v1, v2 = hk.TangentVec(cp, z), hk.TangentVec(cp, w)

        ii = hk.I_apply(h, hk.I_apply(h, v1))
        jj = hk.J_apply(h, hk.J_apply(h, v1))
        kk = hk.K_apply(h, hk.K_apply(h, v1))
        ijk = hk.I_apply(h, hk.J_apply(h, hk.K_apply(h, v1)))
        anti = hk.I_apply(h, hk.J_apply(h, v1)).Z + hk.J_apply(h, hk.I_apply(h, v1)).Z
        col.add("quaternion_relations", "I, J, K square to -Id and IJK = -Id",
                1e-10,
                [np.max(np.abs(ii.Z + z)), np.max(np.abs(jj.Z + z)),
                 np.max(np.abs(kk.Z + z)), np.max(np.abs(ijk.Z + z)),
                 np.max(np.abs(anti))])

        gi = hk.omega_I(h, v1, hk.I_apply(h, v1))
        gj = hk.omega_J(h, v1, hk.J_apply(h, v1))
        gk = hk.omega_K(h, v1, hk.K_apply(h, v1))
        col.add("metric_coincidence", "the three forms define one metric", 1e-10,
                [abs(gi - gj), abs(gi - gk)])

        col.add("form_invariance", "each form is invariant under its own "
                "structure", 1e-10,
                [abs(hk.omega_I(h, hk.I_apply(h, v1), hk.I_apply(h, v2))
                     - hk.omega_I(h, v1, v2)),
                 abs(hk.omega_J(h, hk.J_apply(h, v1), hk.J_apply(h, v2))
                     - hk.omega_J(h, v1, v2)),
                 abs(hk.omega_K(h, hk.K_apply(h, v1), hk.K_apply(h, v2))
                     - hk.omega_K(h, v1, v2))])

        holo = (hk.omega_I(h, v1, v2) - 1j * hk.omega_K(h, v1, v2)
                - so.b_p(so.I0 @ z, w))
        col.add("holomorphic_symplectic", "the complex combination of the first "
                "and third forms is the invariant pairing", 1e-12, abs(holo))

        xr = rng.standard_normal(so.dim_p).astype(complex)
        yr = rng.standard_normal(so.dim_p).astype(complex)
        col.add("real_directions_orthogonal", "real directions are orthogonal to "
                "their J-rotations for the first form", 1e-12,
                abs(hk.omega_I(h, hk.TangentVec(cp, xr),
                               hk.J_apply(h, hk.TangentVec(cp, yr)))))

    # Gram spectrum at slice points: diagonal block values cos(beta)/cos(alpha)
    for _ in range(5):
        t = _sample_cell(so, rng)
        sp = cc.slice_point(so, t)
        gram, expected = _slice_gram_and_expected(h, sp)
        col.add("metric_block_eigenvalues", "the slice metric is diagonal with "
                "the paired-cosine ratios", 1e-10,
                np.max(np.abs(np.sort(np.linalg.eigvalsh(gram))
                              - np.sort(expected))))
        col.add("metric_positivity", "the metric is positive definite", 1e-12,
                max(0.0, -np.min(np.linalg.eigvalsh(gram))))

    # positivity on full frames at generic chart points
    for _ in range(5):
        cp = _sample_chart(h, rng)
        gram = metric_gram(h, cp)
        col.add("metric_positivity", "the metric is positive definite", 1e-12,
                max(0.0, -np.min(np.linalg.eigvalsh(gram))))
        col.add("metric_symmetry", "the metric pairing is symmetric", 1e-10,
                np.max(np.abs(gram - gram.T)))

    # first-order invariance of the holomorphic-symplectic pair under the
    # complexified flows: d(iota_W omega) = 0 for induced directions W
    for _ in range(5):
        cp = _sample_chart(h, rng)
        wvec = 1j * so.embed_p(rng.standard_normal(so.dim_p))

        def one_form(which):
            def beta(point, d):
                wt = hk.induced_vector(h, point, wvec)
                return _form_triple(h, which)(wt, cc.chart_frame(so, point, d))
            return beta

        dim = 2 * so.dim_p
        eye = np.eye(dim)
        i, j = rng.choice(dim, size=2, replace=False)
        for which in "IK":
            val = cc.fd_d_oneform(so, one_form(which), cp, eye[i], eye[j],
                                  h=h.config.h_fd)
            col.add("complexified_invariance", "contractions of the invariant pair "
                    "with complexified flows are closed", 1e-7, abs(val))

    return _report("quaternionic_metric", h, seed, n_points, points, col, t0)


def metric_gram(h: hk.HKHandle, cp) -> np.ndarray:
    """Gram matrix of the metric on the standard frame of real and imaginary
    p-directions at a chart point."""
    so = h.so
    dim = 2 * so.dim_p
    vecs = []
    for k in range(dim):
        z = np.zeros(so.dim_p, dtype=complex)
        if k < so.dim_p:
            z[k] = 1.0
        else:
            z[k - so.dim_p] = 1j
        vecs.append(hk.TangentVec(cp, z))
    gram = np.empty((dim, dim))
    ivecs = [hk.I_apply(h, v) for v in vecs]
    for a in range(dim):
        for b in range(dim):
            gram[a, b] = hk.omega_I(h, vecs[a], ivecs[b])
    return gram


def _slice_gram_and_expected(h: hk.HKHandle, sp):
    so = h.so
    gram = metric_gram(h, sp)
    t = sp.H.t
    expected = []
    for j in range(so.rank):
        expected.append(so.C_const * np.cos(2 * t[j]))
    for blk in so.blocks:
        beta = 0.0 if blk.partner < 0 else so.blocks[blk.partner].value(t)
        ratio = np.cos(beta) / np.cos(blk.value(t))
        expected.extend([ratio] * blk.mult)
    expected = np.array(expected + expected)  # the i-legs repeat the spectrum
    return gram, expected


# ---------------------------------------------------------------------------
# integrability
# ---------------------------------------------------------------------------

def suite_integrability(h: hk.HKHandle, seed: int = 0, n_points: int = 10,
                        tol_override=None) -> VerificationReport:
    t0 = time.perf_counter()
    so = h.so
    rng = _rng(seed, "integrability", h.name)
    col = _Collector(tol_override)
    points = []
    dim = 2 * so.dim_p
    eye = np.eye(dim)

    struct = {
        "I": cc.make_coord_structure(so, partial(hk.I_apply, h),
                                     cond_max=h.config.frame_cond_max),
        "K": cc.make_coord_structure(so, partial(hk.K_apply, h),
                                     cond_max=h.config.frame_cond_max),
    }

    for _ in range(n_points):
        cp = _sample_chart(h, rng)
        points.append(_point_record(cp))
        i, j = rng.choice(dim, size=2, replace=False)
        for which, s_fn in struct.items():
            def field_i(point, _s=s_fn, _d=eye[i]):
                return _s(point, _d)

            def field_j(point, _s=s_fn, _d=eye[j]):
                return _s(point, _d)

            br_ss = cc.field_bracket(so, field_i, field_j, cp, h=h.config.h_fd)
            br_si = cc.field_bracket(so, field_i, lambda p, _d=eye[j]: _d, cp,
                                     h=h.config.h_fd)
            br_is = cc.field_bracket(so, lambda p, _d=eye[i]: _d, field_j, cp,
                                     h=h.config.h_fd)
            nij = br_ss - s_fn(cp, br_si) - s_fn(cp, br_is)
            col.add(f"nijenhuis_{which}", "the Nijenhuis tensor of the structure "
                    "vanishes", 1e-4, np.max(np.abs(nij)))

        # the ambient structure is constant multiplication by i: exact
        z = rng.standard_normal(so.dim_p) + 1j * rng.standard_normal(so.dim_p)
        jz = hk.J_apply(h, hk.TangentVec(cp, z)).Z
        col.add("ambient_constant", "the ambient structure is plain multiplication "
                "by i in the trivialization", 1e-15, np.max(np.abs(jz - 1j * z)))

        # base projection is holomorphic: dX-components intertwine the structures
        tx = so.dexp_series(so.embed_p(cp.X))[: so.dim_p, : so.dim_p]
        z = rng.standard_normal(so.dim_p) + 1j * rng.standard_normal(so.dim_p)
        v = hk.TangentVec(cp, z)
        u_v = cc.frame_invert(so, cp, v, cond_max=h.config.frame_cond_max)[: so.dim_p]
        u_iv = cc.frame_invert(so, cp, hk.I_apply(h, v),
                               cond_max=h.config.frame_cond_max)[: so.dim_p]
        predicted = np.linalg.solve(tx, so.I0 @ (tx @ u_v))
        col.add("projection_holomorphic", "the base projection intertwines the "
                "invariant structures", 1e-7, np.max(np.abs(u_iv - predicted)))

    # at the slice the projection differential picks the real induced part
    for _ in range(5):
        t = _sample_cell(so, rng)
        sp = cc.slice_point(so, t)
        z = rng.standard_normal(so.dim_p) + 1j * rng.standard_normal(so.dim_p)
        tv = hk.induced_to_frame(h, sp, z)
        coords = cc.frame_invert(so, sp, tv, cond_max=h.config.frame_cond_max)
        col.add("projection_differential", "induced fields project to the real "
                "part of their coordinates", 1e-7,
                np.max(np.abs(coords[: so.dim_p] - np.real(z))))

    return _report("integrability", h, seed, n_points, points, col, t0)


# ---------------------------------------------------------------------------
# the rank-one worked example
# ---------------------------------------------------------------------------

def suite_sl2r_uniqueness(h: hk.HKHandle, seed: int = 0, n_points: int = 20,
                     tol_override=None) -> VerificationReport:
    if h.name != "sl2r":
        raise ConfigurationError("the rank-one uniqueness suite runs on sl2r only")
    t0 = time.perf_counter()
    so = h.so
    col = _Collector(tol_override)
    points = []

    a_vec = so.p_part(so.triples[0][2])
    p_vec = so.p_part(so.KP[0][1])
    grid = np.linspace(-0.9 * np.pi / 4, 0.9 * np.pi / 4, n_points)
    for t in grid:
        points.append({"t": [float(t)]})
        cell = co.cell_contains(so, [t])
        entries = _anti_operator_entries(so, cell, a_vec, p_vec)
        a1, a2, a3, b1, pattern_res = entries
        col.add("vanishing_entries", "the off-pattern entries of the anti-linear "
                "operator vanish", 1e-12, [abs(a1), abs(b1)])
        col.add("cosine_entry", "the surviving entry is minus the cosine of the "
                "root value", 1e-12, abs(a3 + np.cos(2 * t)))
        col.add("entry_reciprocity", "the two off-diagonal entries are negative "
                "reciprocals", 1e-12, abs(a2 + 1.0 / a3))
        col.add("involution_constraint", "the anti-involution constraint holds",
                1e-12, abs(b1 * b1 + a1 * a1 + a2 * a3 + 1.0))
        col.add("operator_pattern", "the full operator matches the constrained "
                "matrix pattern", 1e-12, pattern_res)

    # the three closedness identities on the chart coordinate fields
    form_j = cc.make_coord_form(so, partial(hk.omega_J, h))
    d_a = np.concatenate([a_vec, np.zeros(so.dim_k_perp), np.zeros(1)])
    d_p = np.concatenate([p_vec, np.zeros(so.dim_k_perp), np.zeros(1)])
    d_k = np.concatenate([np.zeros(so.dim_p), so.k_part(so.KP[0][0])[so.dim_m:],
                          np.zeros(1)])
    d_ia = np.concatenate([np.zeros(so.dim_p), np.zeros(so.dim_k_perp), np.ones(1)])
    for t in np.linspace(0.12, 0.6, 5):
        cp = cc.slice_point(so, [t])
        for (u, v, w, tag) in ((d_a, d_p, d_ia, "flat_pair"),
                               (d_a, d_k, d_ia, "mixed_pair"),
                               (d_p, d_k, d_ia, "vertical_pair")):
            val = cc.fd_d_twoform(so, form_j, cp, u, v, w, h=h.config.h_fd)
            col.add("uniqueness_identities", "the three chart-field closedness "
                    "identities vanish", 1e-5, abs(val))

    # perturbed first-order systems blow up at the stated reciprocal-square rates
    for name, rate_fn, rhs, t_span, t0_val in (
        ("growth_top", lambda t: 1.0 / np.cos(2 * t) ** 2,
         lambda t, y: 4.0 * np.tan(2 * t) * y, (0.1, 0.72), 1e-6),
        ("growth_origin", lambda t: 1.0 / np.sin(2 * t) ** 2,
         lambda t, y: -4.0 / np.tan(2 * t) * y, (0.5, 0.02), 1e-6),
    ):
        sol = scipy.integrate.solve_ivp(rhs, t_span, [t0_val], rtol=1e-12,
                                        atol=1e-300, dense_output=True)
        ts = np.linspace(*t_span, 40)
        ys = np.abs(sol.sol(ts)[0])
        lx = np.log(np.array([rate_fn(t) for t in ts]))
        ly = np.log(ys)
        slope = np.polyfit(lx, ly, 1)[0]
        col.add(f"perturbation_{name}", "perturbed solutions grow at the "
                "reciprocal-square trigonometric rate", 0.1, abs(slope - 1.0))

    return _report("sl2r_uniqueness", h, seed, n_points, points, col, t0)


def _anti_operator_entries(so, cell, a_vec, p_vec):
    la = co.l_a(so, cell)
    bp = so.B[: so.dim_p, : so.dim_p]
    na = a_vec @ bp @ a_vec
    npv = p_vec @ bp @ p_vec

    def expand(z):
        """complex (A, P)-coefficients of a p^C vector"""
        return np.array([(z @ bp @ a_vec) / na, (z @ bp @ p_vec) / npv])

    cols = []
    for basis_vec in (a_vec, p_vec, 1j * a_vec, 1j * p_vec):
        image = la.apply(basis_vec.astype(complex))
        coeff = expand(image)
        cols.append(np.concatenate([coeff.real, coeff.imag]))
    mat = np.stack(cols, axis=1)  # rows A, P, iA, iP
    a1, a2, b1 = mat[0, 0], mat[0, 1], mat[0, 2]
    a3 = mat[1, 0]
    pattern = np.array([
        [a1, a2, b1, 0.0],
        [a3, -a1, 0.0, b1],
        [b1, 0.0, -a1, -a2],
        [0.0, b1, -a3, a1],
    ])
    return a1, a2, a3, b1, float(np.max(np.abs(mat - pattern)))


# ---------------------------------------------------------------------------
# registry
# ---------------------------------------------------------------------------

SUITES = {
    "structure": suite_structure,
    "operators": suite_operators,
    "closedness": suite_closedness,
    "potential_J": suite_potential_J,
    "potential_I": suite_potential_I,
    "potential_can": suite_potential_can,
    "moment_maps": suite_moment_maps,
    "quaternionic_metric": suite_quaternionic_metric,
    "integrability": suite_integrability,
    "sl2r_uniqueness": suite_sl2r_uniqueness,
}


def run_suite(h: hk.HKHandle, name: str, seed: int = 0, n_points=None,
              tol_override=None) -> VerificationReport:
    if name not in SUITES:
        raise ConfigurationError(f"unknown suite {name!r}; known: {', '.join(SUITES)}")
    kwargs = {"seed": seed, "tol_override": tol_override}
    if n_points is not None:
        kwargs["n_points"] = n_points
    return SUITES[name](h, **kwargs)
