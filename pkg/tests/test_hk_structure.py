import numpy as np
import pytest
import scipy.integrate

from crownkit import (
    DomainError,
    TangentVec,
    I_apply,
    J_apply,
    K_apply,
    f_I,
    mu_J,
    mu_can,
    mu_general,
    omega_0_pullback,
    omega_I,
    omega_J,
    omega_K,
    omega_can,
    rho_I,
    rho_J,
    rho_can,
    slice_point,
)
from crownkit import crown_ops as co
from crownkit import hk_structure as hk
from crownkit.chart_calculus import chart_point


def _vec(h, point, z):
    return TangentVec(base=point, Z=np.asarray(z, dtype=complex))


def test_J_is_multiplication_by_i(sl2r):
    sp = slice_point(sl2r.so, [0.2])
    z = np.array([0.3 + 1j, -2.0 + 0.25j])
    v = _vec(sl2r, sp, z)
    assert np.allclose(J_apply(sl2r, v).Z, 1j * z)
    assert np.allclose(J_apply(sl2r, J_apply(sl2r, v)).Z, -z)


def test_I_at_origin_is_base_rotation(sl2r):
    so = sl2r.so
    sp = slice_point(so, [0.0])
    x = np.array([0.7, -0.4])
    v = _vec(sl2r, sp, x)
    assert np.allclose(I_apply(sl2r, v).Z, so.I0 @ x, atol=1e-14)


def test_I_example_at_pi_8(sl2r):
    so = sl2r.so
    sp = slice_point(so, [np.pi / 8])
    a1 = so.p_part(so.triples[0][2])
    p1 = so.p_part(so.KP[0][1])
    got = I_apply(sl2r, _vec(sl2r, sp, a1)).Z
    assert np.allclose(got, -np.cos(np.pi / 4) * p1, atol=1e-12)


def test_anticommutation_and_K(sl2r):
    sp = slice_point(sl2r.so, [0.31])
    rng = np.random.default_rng(1)
    for _ in range(10):
        z = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        v = _vec(sl2r, sp, z)
        ij = I_apply(sl2r, J_apply(sl2r, v)).Z
        ji = J_apply(sl2r, I_apply(sl2r, v)).Z
        assert np.max(np.abs(ij + ji)) < 1e-12
        kk = K_apply(sl2r, K_apply(sl2r, v)).Z
        assert np.max(np.abs(kk + z)) < 1e-12
        ijk = I_apply(sl2r, J_apply(sl2r, K_apply(sl2r, v))).Z
        assert np.max(np.abs(ijk + z)) < 1e-10
    # at the origin: K a_*X = -i a_* I0 X
    so = sl2r.so
    sp0 = slice_point(so, [0.0])
    x = np.array([1.2, 0.4])
    got = K_apply(sl2r, _vec(sl2r, sp0, x)).Z
    assert np.allclose(got, -1j * (so.I0 @ x), atol=1e-14)


def test_omega_I_frozen_value(sl2r):
    # oracle: Re B(I0 A, P) = B(-P, P) = -8, any H
    so = sl2r.so
    a1 = so.p_part(so.triples[0][2])
    p1 = so.p_part(so.KP[0][1])
    for t in (0.0, np.pi / 8, 0.4):
        sp = slice_point(so, [t])
        val = omega_I(sl2r, _vec(sl2r, sp, a1), _vec(sl2r, sp, p1))
        assert abs(val + 8.0) < 1e-12
        assert abs(omega_K(sl2r, _vec(sl2r, sp, a1), _vec(sl2r, sp, p1))) < 1e-14


def test_omega_antisymmetry(sl2r):
    sp = slice_point(sl2r.so, [0.22])
    z = np.array([0.4 + 0.9j, 1.1 - 0.3j])
    v = _vec(sl2r, sp, z)
    for form in (omega_I, omega_J, omega_K, omega_can):
        assert abs(form(sl2r, v, v)) < 1e-12


def test_omega_J_frozen_value(sl2r):
    # oracle computed from the definition route: omega_I(J a_*A, I a_*iA) with
    # the diagonal frame action written out by hand; the value is 8 cos(pi/4)
    so = sl2r.so
    t = np.pi / 8
    alpha = 2 * t
    a1 = so.p_part(so.triples[0][2])
    p1 = so.p_part(so.KP[0][1])
    bp = so.B[: so.dim_p, : so.dim_p]
    # J a_*A = a_*(iA); I a_*(iA) = a_*(L conj(iA)) = a_* (i cos(alpha) P)
    lhs_vec = 1j * a1
    rhs_vec = 1j * np.cos(alpha) * p1
    oracle = np.real((so.I0 @ lhs_vec) @ bp @ rhs_vec)
    assert abs(oracle - 8 * np.cos(alpha)) < 1e-12

    sp = slice_point(so, [t])
    val = omega_J(sl2r, _vec(sl2r, sp, a1), _vec(sl2r, sp, 1j * a1))
    assert abs(val - oracle) < 1e-12
    assert abs(val - 4 * np.sqrt(2.0)) < 1e-12


def test_omega_J_routes_agree(su21):
    so = su21.so
    sp = slice_point(so, [0.37])
    rng = np.random.default_rng(8)
    for _ in range(5):
        z = rng.standard_normal(so.dim_p) + 1j * rng.standard_normal(so.dim_p)
        w = rng.standard_normal(so.dim_p) + 1j * rng.standard_normal(so.dim_p)
        v1, v2 = _vec(su21, sp, z), _vec(su21, sp, w)
        direct = omega_J(su21, v1, v2)
        via_def = omega_I(su21, J_apply(su21, v1), I_apply(su21, v2))
        via_kernel = hk.omega_J_kernel_route(su21, v1, v2)
        assert abs(direct - via_def) < 1e-12
        assert abs(direct - via_kernel) < 1e-10


def test_omega_J_on_mixed_real_directions(sp4r):
    # the pairing of a real direction with the J-rotation of an imaginary one
    # vanishes, making the metric block-diagonal
    so = sp4r.so
    sp = slice_point(so, [0.3, 0.14])
    rng = np.random.default_rng(2)
    x = rng.standard_normal(so.dim_p).astype(complex)
    v = rng.standard_normal(so.dim_p).astype(complex)
    val = omega_J(sp4r, _vec(sp4r, sp, x), J_apply(sp4r, _vec(sp4r, sp, 1j * v)))
    assert abs(val) < 1e-12


def test_omega_0_pullback_examples(sl2r):
    so = sl2r.so
    sp = slice_point(so, [np.pi / 8])
    a1 = so.p_part(so.triples[0][2]).astype(complex)
    p1 = so.p_part(so.KP[0][1]).astype(complex)
    fa = co.f_a(so, sp.H).matrix
    # arguments are induced fields: convert to frame coordinates first
    v = _vec(sl2r, sp, fa @ a1)
    w = _vec(sl2r, sp, fa @ p1)
    assert abs(omega_0_pullback(sl2r, v, w) + 8.0) < 1e-12
    # purely imaginary induced fields pull back to zero
    vi = _vec(sl2r, sp, fa @ (1j * a1))
    wi = _vec(sl2r, sp, fa @ (1j * p1))
    assert abs(omega_0_pullback(sl2r, vi, wi)) < 1e-14
    # at the origin the first form restricts to the base form on real fields
    sp0 = slice_point(so, [0.0])
    v0, w0 = _vec(sl2r, sp0, a1), _vec(sl2r, sp0, p1)
    assert abs(omega_I(sl2r, v0, w0) - omega_0_pullback(sl2r, v0, w0)) < 1e-14


def test_base_mismatch_rejected(sl2r):
    so = sl2r.so
    v = _vec(sl2r, slice_point(so, [0.1]), [1.0, 0.0])
    w = _vec(sl2r, slice_point(so, [0.2]), [1.0, 0.0])
    with pytest.raises(DomainError):
        omega_I(sl2r, v, w)


def test_potentials_frozen_values(sl2r):
    so = sl2r.so
    sp0 = slice_point(so, [0.0])
    sp = slice_point(so, [np.pi / 8])
    assert abs(rho_J(sl2r, sp0) + 2.0) < 1e-12
    assert abs(rho_J(sl2r, sp) + np.sqrt(2.0)) < 1e-12
    assert abs(rho_can(sl2r, sp) - np.pi ** 2 / 16) < 1e-12
    assert abs(rho_I(sl2r, sp0)) < 1e-14
    assert abs(rho_I(sl2r, sp) - 0.2690920699861551) < 1e-12


def test_f_I_profile():
    assert f_I(0.0) == pytest.approx(0.0, abs=1e-15)
    # oracle: quadrature of the equation solved for the derivative
    val, _ = scipy.integrate.quad(
        lambda s: (np.cos(s) - 1.0) * np.cos(s) / np.sin(s) if s else 0.0,
        0.0, np.pi / 4, epsabs=1e-14, epsrel=1e-14)
    assert abs(f_I(np.pi / 4) - val) < 1e-12
    assert abs(f_I(np.pi / 4) + 0.1345460349930775) < 1e-12
    with pytest.raises(DomainError):
        f_I(np.pi / 2)


def test_f_I_equation_residual():
    ts = np.linspace(-0.95 * np.pi / 2, 0.95 * np.pi / 2, 81)
    res = np.abs(np.tan(ts) * hk.f_I_prime(ts) - (np.cos(ts) - 1.0))
    assert np.max(res) < 1e-12


def test_mu_J_frozen_value(sl2r):
    so = sl2r.so
    sp = slice_point(so, [np.pi / 8])
    val = mu_J(sl2r, sp, so.triples[0][2])
    assert abs(val - 2 * np.sqrt(2.0)) < 1e-12
    # k-directions pair to zero at the slice
    val_k = mu_J(sl2r, sp, so.KP[0][0])
    assert abs(val_k) < 1e-12


def test_mu_can_frozen_value(sl2r):
    so = sl2r.so
    sp = slice_point(so, [np.pi / 8])
    assert abs(mu_can(sl2r, sp, so.triples[0][2]) - np.pi) < 1e-12


def test_mu_general_examples(su21, sl2r):
    so = su21.so
    sp = slice_point(so, [0.3])
    # centralizer directions vanish
    m = np.zeros(so.n)
    m[so.dim_p] = 1.0
    assert abs(mu_general(su21, sp, m, hk.f_I_prime)) < 1e-12
    # constant profiles have zero moment
    rng = np.random.default_rng(4)
    x = rng.standard_normal(so.n)
    assert abs(mu_general(su21, sp, x, lambda t: 0.0)) < 1e-15

    # direct evaluation oracle on the rank-one space
    so1 = sl2r.so
    t = np.pi / 8
    sp1 = slice_point(so1, [t])
    k1 = so1.KP[0][0]
    a1 = so1.triples[0][2]
    i0a = so1.embed_p(so1.I0 @ so1.p_part(a1))
    hvec = so1.embed_a(np.array([t]))
    ft = (np.cos(2 * t) - 1.0) / (2 * t)
    oracle = 0.5 * ft * so1.b_form(k1, so1.bracket(i0a, hvec))
    assert abs(mu_general(sl2r, sp1, k1, hk.f_I_prime) - oracle) < 1e-12


def test_omega_can_frozen_values(sl2r):
    so = sl2r.so
    sp = slice_point(so, [np.pi / 8])
    a1 = so.p_part(so.triples[0][2])
    p1 = so.p_part(so.KP[0][1])
    va, wa = _vec(sl2r, sp, a1), _vec(sl2r, sp, 1j * a1)
    assert abs(omega_can(sl2r, va, wa) - 8.0) < 1e-12
    vp, wp = _vec(sl2r, sp, p1), _vec(sl2r, sp, 1j * p1)
    assert abs(omega_can(sl2r, vp, wp) - 4 * np.pi) < 1e-12
    assert abs(omega_can(sl2r, vp, wp)
               - hk.omega_can_induced_route(sl2r, vp, wp)) < 1e-12


def test_kernel_consistency_between_forms(sp4r):
    # the two closed kernels are the same operator product, at slice points
    so = sp4r.so
    for t in ([0.3, 0.17], [0.41, 0.08]):
        cell = co.cell_contains(so, t)
        fa = co.f_a(so, cell).matrix
        ea = co.e_a(so, cell).matrix
        ps = co.psi_star(so, cell).matrix
        k1 = ps @ np.linalg.inv(ea) @ fa
        k2 = np.linalg.inv(ea) @ fa @ ps
        assert np.max(np.abs(k1 - k2)) < 1e-12


def test_trivialization_roundtrip(su21):
    so = su21.so
    sp = slice_point(so, [0.28])
    rng = np.random.default_rng(9)
    z = rng.standard_normal(so.dim_p) + 1j * rng.standard_normal(so.dim_p)
    v = TangentVec(base=sp, Z=z)
    zi = hk.frame_to_induced(su21, v)
    back = hk.induced_to_frame(su21, sp, zi)
    assert np.max(np.abs(back.Z - z)) < 1e-12
    # J acts as i on induced fields too
    jv = J_apply(su21, v)
    assert np.max(np.abs(hk.frame_to_induced(su21, jv) - 1j * zi)) < 1e-12


def test_metric_floor_degenerates_like_cosine(sl2r):
    # toward the cell boundary the smallest metric eigenvalue vanishes like
    # B(A, A) cos(2t)
    from crownkit.verify_suites import metric_gram

    so = sl2r.so
    for t in (0.72, 0.75, 0.78):
        gram = metric_gram(sl2r, slice_point(so, [t]))
        floor = np.min(np.linalg.eigvalsh(gram))
        assert abs(floor / np.cos(2 * t) - so.C_const) < 1e-10


def test_project_base(sl2r):
    so = sl2r.so
    cp = chart_point(so, [0.1, -0.05], [0.02], [0.3])
    assert np.allclose(hk.project_base(sl2r, cp), [0.1, -0.05])
