"""Acceptance gate: each numbered criterion runs at its stated tolerance and
prints one pass/fail line (visible with pytest -s or -rA)."""
import numpy as np
import pytest
import scipy.integrate

from crownkit import build_handle, f_I, run_suite
from crownkit.cli import main
from crownkit.hk_structure import f_I_prime
from crownkit.lie_core import SUPPORTED_SPACES

from conftest import ACCEPTANCE_SPACES


def _verdict(num: int, label: str, failures: list) -> None:
    status = "PASS" if not failures else "FAIL"
    print(f"ACCEPTANCE {num:2d} [{label}]: {status}")
    for f in failures:
        print(f"    {f}")
    assert not failures, f"criterion {num} failed: {failures}"


def _gate(report, wanted: dict, failures: list) -> None:
    by_name = {c.name: c for c in report.checks}
    for name, tol in wanted.items():
        c = by_name[name]
        if not (c.max_residual < tol):
            failures.append(f"{report.space}/{report.suite}/{name}: "
                            f"max {c.max_residual:.3e} >= {tol:.1e}")


def test_criterion_1_structure_constants():
    failures = []
    for space in SUPPORTED_SPACES:
        handle = build_handle(space)
        rep = run_suite(handle, "structure", seed=7, n_points=5)
        wanted = {
            "triple_normalization": 1e-12,
            "center_decomposition": 1e-10,
            "rotation_on_triples": 1e-10,
            "block_rotation": 1e-10,
            "square_minus_one": 1e-10,
        }
        if handle.so.rank >= 2:  # vacuous for rank one
            wanted["strong_orthogonality"] = 1e-12
        _gate(rep, wanted, failures)
    _verdict(1, "structure constants on all supported spaces", failures)


def test_criterion_2_trig_identity():
    failures = []
    for space in SUPPORTED_SPACES:
        rep = run_suite(build_handle(space), "structure", seed=7, n_points=100)
        _gate(rep, {"fiber_trig_identity": 1e-12}, failures)
    _verdict(2, "fiber-map trigonometric identity, 100 points per space", failures)


def test_criterion_3_closedness(handles):
    failures = []
    for space in ACCEPTANCE_SPACES:
        rep = run_suite(handles[space], "closedness", seed=7, n_points=20)
        _gate(rep, {"d_omega_I": 1e-5, "d_omega_J": 1e-5, "d_omega_K": 1e-5},
              failures)
    _verdict(3, "closedness of the three forms at 20 chart points", failures)


def test_criterion_4_potentials(handles):
    failures = []
    for space in ACCEPTANCE_SPACES:
        h = handles[space]
        for suite, check in (("potential_J", "potential_identity_potential_J"),
                             ("potential_I", "potential_identity_potential_I"),
                             ("potential_can", "potential_identity_potential_can")):
            rep = run_suite(h, suite, seed=7, n_points=20)
            _gate(rep, {check: 1e-5}, failures)
    _verdict(4, "complex Hessians of the three potentials", failures)


def test_criterion_5_moment_maps(handles):
    failures = []
    for space in ACCEPTANCE_SPACES:
        rep = run_suite(handles[space], "moment_maps", seed=7)
        _gate(rep, {
            "moment_formula_J": 1e-6,
            "moment_formula_can": 1e-6,
            "moment_formula_radial": 1e-6,
            "hamiltonian_J": 1e-5,
            "hamiltonian_can": 1e-5,
            "equivariance": 1e-8,
        }, failures)
    _verdict(5, "moment map formulas, Hamiltonian property, equivariance",
             failures)


def test_criterion_6_quaternionic_and_metric(handles):
    failures = []
    for space in ACCEPTANCE_SPACES:
        rep = run_suite(handles[space], "quaternionic_metric", seed=7)
        _gate(rep, {
            "quaternion_relations": 1e-10,
            "metric_coincidence": 1e-10,
            "form_invariance": 1e-10,
            "metric_block_eigenvalues": 1e-10,
            "metric_positivity": 1e-12,
            "holomorphic_symplectic": 1e-12,
        }, failures)
    _verdict(6, "quaternion relations, shared metric, invariant pairing",
             failures)


def test_criterion_7_integrability(handles):
    failures = []
    for space in ACCEPTANCE_SPACES:
        rep = run_suite(handles[space], "integrability", seed=7, n_points=10)
        _gate(rep, {
            "nijenhuis_I": 1e-4,
            "nijenhuis_K": 1e-4,
            "projection_holomorphic": 1e-7,
            "projection_differential": 1e-7,
        }, failures)
    _verdict(7, "vanishing Nijenhuis tensors and holomorphic projection",
             failures)


def test_criterion_8_rank_one_uniqueness(sl2r):
    failures = []
    rep = run_suite(sl2r, "sl2r_uniqueness", seed=7, n_points=20)
    _gate(rep, {
        "vanishing_entries": 1e-12,
        "cosine_entry": 1e-12,
        "entry_reciprocity": 1e-12,
        "involution_constraint": 1e-12,
        "operator_pattern": 1e-12,
        "uniqueness_identities": 1e-5,
        "perturbation_growth_top": 0.1,
        "perturbation_growth_origin": 0.1,
    }, failures)
    _verdict(8, "rank-one anti-linear operator and perturbation growth rates",
             failures)


def test_criterion_9_profile_equation():
    failures = []
    ts = np.linspace(-0.95 * np.pi / 2, 0.95 * np.pi / 2, 201)
    res_closed = np.abs(np.tan(ts) * f_I_prime(ts) - (np.cos(ts) - 1.0))
    if np.max(res_closed) >= 1e-10:
        failures.append(f"closed-form residual {np.max(res_closed):.3e} >= 1e-10")
    step = 1e-3
    for t in ts[::10]:
        fp = (-f_I(t + 2 * step) + 8 * f_I(t + step)
              - 8 * f_I(t - step) + f_I(t - 2 * step)) / (12 * step)
        if abs(np.tan(t) * fp - (np.cos(t) - 1.0)) >= 1e-10:
            failures.append(f"finite-difference residual at t={t:.3f}")
    for t in np.linspace(-1.45, 1.45, 13):
        val, _ = scipy.integrate.quad(
            lambda s: (np.cos(s) - 1.0) * np.cos(s) / np.sin(s) if s else 0.0,
            0.0, t, epsabs=1e-13, epsrel=1e-13)
        if abs(f_I(t) - val) >= 1e-9:
            failures.append(f"quadrature mismatch at t={t:.3f}: "
                            f"{abs(f_I(t) - val):.3e}")
    _verdict(9, "radial profile equation and quadrature cross-check", failures)


def test_criterion_10_determinism(tmp_path):
    failures = []
    paths = [tmp_path / "run1.json", tmp_path / "run2.json"]
    for p in paths:
        code = main(["--space", "su21", "--suite", "structure", "--suite",
                     "moment_maps", "--seed", "13", "--out", str(p)])
        if code != 0:
            failures.append(f"run exited with {code}")
    if paths[0].read_bytes() != paths[1].read_bytes():
        failures.append("reports differ between identical runs")
    _verdict(10, "byte-identical reports for identical config and seed", failures)
