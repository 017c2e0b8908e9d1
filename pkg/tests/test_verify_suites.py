import numpy as np
import pytest

from crownkit import ConfigurationError, run_suite
from crownkit.verify_suites import SUITES


def test_reports_are_deterministic(sl2r):
    r1 = run_suite(sl2r, "closedness", seed=42, n_points=4)
    r2 = run_suite(sl2r, "closedness", seed=42, n_points=4)
    assert r1.points == r2.points
    for c1, c2 in zip(r1.checks, r2.checks):
        assert c1.max_residual == c2.max_residual
        assert c1.mean_residual == c2.mean_residual


def test_different_seeds_sample_differently(sl2r):
    r1 = run_suite(sl2r, "closedness", seed=1, n_points=3)
    r2 = run_suite(sl2r, "closedness", seed=2, n_points=3)
    assert r1.points != r2.points


def test_tolerance_override_fails_below_fd_floor(sl2r):
    rep = run_suite(sl2r, "closedness", seed=0, n_points=4, tol_override=1e-12)
    assert rep.verdict == "fail"
    assert all(c.tolerance == 1e-12 for c in rep.checks)


def test_verdict_matches_checks(sl2r):
    rep = run_suite(sl2r, "quaternionic_metric", seed=0, n_points=5)
    assert rep.verdict == ("pass" if all(c.passed for c in rep.checks) else "fail")
    for c in rep.checks:
        assert c.passed == (c.max_residual < c.tolerance)
        assert c.mean_residual <= c.max_residual + 1e-300


def test_uniqueness_suite_guards_space(su21):
    with pytest.raises(ConfigurationError):
        run_suite(su21, "sl2r_uniqueness")


def test_unknown_suite_rejected(sl2r):
    with pytest.raises(ConfigurationError):
        run_suite(sl2r, "nonexistent")


def test_points_recorded_with_coordinates(sl2r):
    rep = run_suite(sl2r, "closedness", seed=5, n_points=3)
    assert len(rep.points) == 3
    for pt in rep.points:
        assert set(pt) == {"t", "x", "c"}
        assert all(abs(v) < np.pi / 4 for v in pt["t"])


def test_suite_registry_complete():
    assert set(SUITES) == {
        "structure", "operators", "closedness", "potential_J", "potential_I",
        "potential_can", "moment_maps", "quaternionic_metric", "integrability",
        "sl2r_uniqueness",
    }
