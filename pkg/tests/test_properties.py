"""Property-based checks of the invariants that hold at every cell point."""
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from crownkit import TangentVec, I_apply, J_apply, K_apply, omega_I, omega_K
from crownkit import cell_contains, decompose_p_vector, slice_point
from crownkit import crown_ops as co


def _handle(handles, name):
    return handles[name]


@pytest.mark.parametrize("space", ["sl2r", "su21", "sp4r"])
@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_fiber_trig_identity_everywhere(handles, space, data):
    h = _handle(handles, space)
    so = h.so
    t = np.array([data.draw(st.floats(-0.9 * np.pi / 4, 0.9 * np.pi / 4))
                  for _ in range(so.rank)])
    psi_a = co.psi_on_cell(so, t)
    for blk in so.blocks:
        beta = 0.0 if blk.partner < 0 else so.blocks[blk.partner].value(t)
        assert abs(float(blk.ecoeffs @ psi_a)
                   - np.sin(blk.value(t)) * np.cos(beta)) < 1e-12


@pytest.mark.parametrize("space", ["su21", "sp4r"])
@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2 ** 31 - 1))
def test_decomposition_reconstructs(handles, space, seed):
    so = _handle(handles, space).so
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(so.dim_p)
    dec = decompose_p_vector(so, x)
    recon = so.embed_a(dec.a_part) + sum(dec.p_components)
    assert np.max(np.abs(so.p_part(recon) - x)) < 1e-10


@pytest.mark.parametrize("space", ["sl2r", "sp4r"])
@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2 ** 31 - 1))
def test_quaternion_algebra_random_points(handles, space, seed):
    h = _handle(handles, space)
    so = h.so
    rng = np.random.default_rng(seed)
    t = rng.uniform(-0.9 * np.pi / 4, 0.9 * np.pi / 4, size=so.rank)
    sp = slice_point(so, t)
    z = rng.standard_normal(so.dim_p) + 1j * rng.standard_normal(so.dim_p)
    v = TangentVec(base=sp, Z=z)
    assert np.max(np.abs(I_apply(h, I_apply(h, v)).Z + z)) < 1e-10
    assert np.max(np.abs(K_apply(h, K_apply(h, v)).Z + z)) < 1e-10
    ijk = I_apply(h, J_apply(h, K_apply(h, v))).Z
    assert np.max(np.abs(ijk + z)) < 1e-10


@pytest.mark.parametrize("space", ["su21"])
@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2 ** 31 - 1))
def test_holomorphic_pairing_is_invariant_bilinear(handles, space, seed):
    h = _handle(handles, space)
    so = h.so
    rng = np.random.default_rng(seed)
    t = rng.uniform(-0.9 * np.pi / 4, 0.9 * np.pi / 4, size=so.rank)
    sp = slice_point(so, t)
    z = rng.standard_normal(so.dim_p) + 1j * rng.standard_normal(so.dim_p)
    w = rng.standard_normal(so.dim_p) + 1j * rng.standard_normal(so.dim_p)
    v1, v2 = TangentVec(base=sp, Z=z), TangentVec(base=sp, Z=w)
    pair = omega_I(h, v1, v2) - 1j * omega_K(h, v1, v2)
    assert abs(pair - so.b_p(so.I0 @ z, w)) < 1e-12


@settings(max_examples=50, deadline=None)
@given(t=st.floats(-2.0, 2.0))
def test_cell_membership_boundary(handles, t):
    so = handles["sl2r"].so
    if abs(2 * t) < np.pi / 2 - 1e-9:
        cell = cell_contains(so, [t])
        assert cell.regular == (abs(2 * t) > 1e-6)
    else:
        with pytest.raises(Exception):
            cell_contains(so, [t])
