"""
Tests for the cyclic G2' Higgs data, the multiplication frame and the Newton solver.
"""

import math

import numpy as np
import pytest

from src.errors import ConvergenceError, DegenerateInputError, DomainError
from src.hitchin import (
    GridMode,
    HiggsPoint,
    HitchinGrid,
    check_frame_w,
    curvature_consistency,
    flat_constants,
    flat_instance,
    flat_sensitivity,
    higgs_data,
    hyperbolic_instance,
    jacobian,
    linearization_definiteness,
    local_residual,
    newton_solve,
    residual,
    residual_oracle,
    sensitivity_scan,
    torus_closed_form,
    verify_bounds,
)


@pytest.fixture
def rng():
    """Deterministic generator."""
    return np.random.default_rng(17)


def random_grid(rng, nx=8, ny=6, mode=GridMode.PERIODIC) -> HitchinGrid:
    """Grid with random unknowns and data of moderate size."""
    shape = (nx, ny)
    return HitchinGrid(
        psi1=0.3 * rng.normal(size=shape),
        psi2=0.3 * rng.normal(size=shape),
        sigma=np.exp(0.2 * rng.normal(size=shape)),
        q=rng.normal(size=shape) + 1j * rng.normal(size=shape),
        kappa=rng.normal(size=shape),
        hx=1.0 / nx,
        hy=1.0 / ny,
        mode=mode,
    )


def stacked(pair) -> np.ndarray:
    return np.concatenate([pair[0].ravel(), pair[1].ravel()])


def test_higgs_real_structure(rng):
    for _ in range(5):
        data = higgs_data(HiggsPoint.random(rng))
        assert data.passed, (data.tau_involution_residual, data.tau_phi_residual)


def test_multiplication_frame(rng):
    for _ in range(5):
        check = check_frame_w(HiggsPoint.random(rng))
        assert check.passed(1e-9), check


def test_frame_norms_follow_the_signature():
    check = check_frame_w(HiggsPoint(0.5 + 0.5j, 1.0, 1.0))
    assert np.allclose(check.norms, [1, 1, 1, -1, -1, -1, -1])


def test_metric_must_be_positive():
    with pytest.raises(DomainError):
        HiggsPoint(1.0, 0.0, 1.0)


@pytest.mark.parametrize("mode", [GridMode.PERIODIC, GridMode.DIRICHLET])
def test_residual_matches_oracle(rng, mode):
    worst = 0.0
    for _ in range(50):
        grid = random_grid(rng, mode=mode)
        fast = stacked(residual(grid))
        slow = stacked(residual_oracle(grid))
        worst = max(worst, np.max(np.abs(fast - slow)) / max(1.0, np.max(np.abs(slow))))
    assert worst < 1e-13, f"relative gap {worst:.2e} over 50 fields"


def test_dirichlet_boundary_residual_is_zero(rng):
    r1, r2 = residual(random_grid(rng, mode=GridMode.DIRICHLET))
    assert np.all(r1[0, :] == 0) and np.all(r2[:, -1] == 0)


def test_jacobian_matches_finite_differences(rng):
    grid = random_grid(rng, nx=5, ny=4)
    direction = rng.normal(size=2 * 5 * 4)
    h = 1e-6
    base = grid.unknowns()
    plus = stacked(residual(grid.from_unknowns(base + h * direction)))
    minus = stacked(residual(grid.from_unknowns(base - h * direction)))
    fd = (plus - minus) / (2 * h)
    assert np.allclose(jacobian(grid) @ direction, fd, rtol=1e-5, atol=1e-5)


def test_grid_validation():
    good = np.zeros((4, 4))
    with pytest.raises(DegenerateInputError):
        HitchinGrid(good, np.zeros((4, 3)), np.ones((4, 4)), good, good, 0.1, 0.1)
    with pytest.raises(DomainError):
        HitchinGrid(good, good, -np.ones((4, 4)), good, good, 0.1, 0.1)
    thin = np.zeros((2, 4))
    with pytest.raises(DegenerateInputError):
        HitchinGrid(thin, thin, np.ones((2, 4)), thin, thin, 0.1, 0.1)


def test_flat_constants_solve_the_system():
    q0 = 1.3
    grid = flat_instance(8, 8, q0=q0, initial=flat_constants(q0**2))
    assert max(np.max(np.abs(r)) for r in residual(grid)) < 1e-12
    assert max(np.max(np.abs(r)) for r in local_residual(grid)) < 1e-12


def test_flat_constants_saturate_both_bounds():
    grid = flat_instance(6, 6, q0=1.0, initial=flat_constants(1.0))
    report = verify_bounds(grid)
    assert report.passed
    assert abs(report.first_margin) < 1e-12
    assert abs(report.second_margin) < 1e-12


def test_flat_constants_need_positive_c():
    with pytest.raises(DomainError):
        flat_constants(0.0)


def test_hyperbolic_zero_solution_is_exact():
    grid = hyperbolic_instance(10, 10)
    r1, r2 = residual(grid)
    assert np.all(r1 == 0) and np.all(r2 == 0)
    solved, report = newton_solve(grid)
    assert report.converged and report.iterations == 0


def test_newton_recovers_hyperbolic_solution():
    grid = hyperbolic_instance(12, 12, initial=(0.4, -0.3))
    solved, report = newton_solve(grid, tol=1e-10)
    assert report.converged
    assert report.residual <= 1e-10
    assert max(np.max(np.abs(solved.psi1)), np.max(np.abs(solved.psi2))) < 1e-8
    assert report.bounds is not None and report.bounds.passed


def test_newton_reaches_flat_constants():
    solved, report = newton_solve(flat_instance(8, 8, q0=1.0), tol=1e-10)
    psi1, psi2 = flat_constants(1.0)
    assert np.allclose(solved.psi1, psi1, atol=1e-8)
    assert np.allclose(solved.psi2, psi2, atol=1e-8)
    assert report.steps[-1] == 1.0, "final Newton steps should be undamped"
    assert report.history[-1] < report.history[0]


def test_newton_is_bit_identical_across_runs():
    grid = flat_instance(10, 10, q0=1.0, perturbation=0.2)
    first, report_a = newton_solve(grid, tol=1e-10)
    second, report_b = newton_solve(grid, tol=1e-10)
    assert np.array_equal(first.psi1, second.psi1)
    assert np.array_equal(first.psi2, second.psi2)
    assert report_a.history == report_b.history
    assert report_a.steps == report_b.steps


def test_hyperbolic_64_converges_within_budget():
    starts = np.random.default_rng([0, 6]).uniform(-1.0, 1.0, size=(3, 2))
    for start in starts:
        solved, report = newton_solve(hyperbolic_instance(64, 64, initial=tuple(start)), tol=1e-10)
        assert report.iterations <= 12, f"{report.iterations} iterations from {start}"
        assert report.residual <= 1e-10
        assert max(np.max(np.abs(solved.psi1)), np.max(np.abs(solved.psi2))) < 1e-9


def test_newton_iteration_cap():
    with pytest.raises(ConvergenceError) as excinfo:
        newton_solve(flat_instance(8, 8, q0=1.0), max_iter=1)
    assert excinfo.value.report is not None
    assert excinfo.value.report.iterations == 1


def test_newton_requires_positive_tolerance():
    with pytest.raises(DomainError):
        newton_solve(flat_instance(6, 6), tol=0.0)


def test_flat_instance_validation():
    with pytest.raises(DomainError):
        flat_instance(6, 6, q0=0.0)
    assert flat_instance(6, 6).synthetic, "tori are not hyperbolic surfaces"
    conformal = flat_instance(6, 6, perturbation=0.2)
    assert conformal.label == "conformal-torus"
    assert np.all(conformal.q == 1.0), "q stays constant (holomorphic)"
    assert np.ptp(conformal.q_norm2) > 0, "|q|²_σ varies with σ"
    assert curvature_consistency(conformal) == 0.0


def test_conformal_torus_closed_form_is_exact():
    grid = flat_instance(8, 8, q0=1.3, perturbation=0.3)
    psi1, psi2 = torus_closed_form(grid)
    exact = grid.with_psi(psi1, psi2)
    assert max(np.max(np.abs(r)) for r in residual(exact)) < 1e-11
    assert max(np.max(np.abs(r)) for r in local_residual(exact)) < 1e-11


def test_conformal_torus_saturates_without_violating_bounds():
    grid = flat_instance(8, 8, q0=1.0, perturbation=0.2)
    report = verify_bounds(grid.with_psi(*torus_closed_form(grid)))
    assert report.passed, f"{report.violations} violating nodes"
    assert abs(report.first_margin) < 1e-12
    assert abs(report.second_margin) < 1e-12


def test_newton_solves_conformal_torus():
    grid = flat_instance(12, 12, q0=1.0, perturbation=0.2)
    solved, report = newton_solve(grid, tol=1e-10)
    psi1, psi2 = torus_closed_form(grid)
    assert np.allclose(solved.psi1, psi1, atol=1e-8)
    assert np.allclose(solved.psi2, psi2, atol=1e-8)
    assert report.bounds is not None and report.bounds.passed


def test_torus_closed_form_rejects_other_grids():
    with pytest.raises(DegenerateInputError):
        torus_closed_form(hyperbolic_instance(6, 6))
    grid = flat_instance(6, 6)
    with pytest.raises(DegenerateInputError):
        torus_closed_form(grid.with_q(np.linspace(1.0, 2.0, 36).reshape(6, 6)))


def test_hyperbolic_curvature_is_consistent():
    grid = hyperbolic_instance(16, 16)
    assert curvature_consistency(grid) < 2 * grid.hy**2


def test_det_iii_gap_equals_first_margin(rng):
    report = verify_bounds(random_grid(rng))
    assert math.isclose(report.det_gap, report.first_margin, rel_tol=1e-9, abs_tol=1e-9)


def test_linearization_sign_tracks_second_bound(rng):
    grid = random_grid(rng)
    second = 1.2 - np.exp(grid.psi1 - 5.0 * grid.psi2)
    assert np.array_equal(linearization_definiteness(grid) > 0, second > 0)


def test_sensitivity_matches_derivative():
    grid = flat_instance(6, 6, q0=1.0)
    report = sensitivity_scan(grid, 1.0, eps_steps=(1e-3, 1e-4), tol=1e-11)
    expected = max(flat_sensitivity(1.0))
    assert report.stabilized
    assert abs(report.ratios[-1] - expected) < 1e-2 * expected


def test_sensitivity_of_zero_perturbation():
    grid = flat_instance(6, 6, q0=1.0)
    report = sensitivity_scan(grid, 0.0, eps_steps=(1e-2,), tol=1e-11)
    assert report.ratios == (0.0,)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
