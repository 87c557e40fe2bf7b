"""
Tests for the Fuchsian almost-complex curve, its Frenet frame, the developing map and the
classification of null sextics.
"""

import math
from fractions import Fraction

import numpy as np
import pytest

from src.errors import DegenerateInputError, DomainError, NonNullError
from src.fuchsian import (
    FRAME_SIGNS,
    K_REPRESENTATIVES,
    Q6_GRAM,
    SYM6_TO_M,
    DevPoint,
    FiberStatus,
    HPoint,
    boundary_annihilator,
    boundary_transverse,
    brute_force_preimages,
    degenerate_set,
    dev,
    dev_lift,
    dev_rank,
    divides,
    extended_rank,
    f_hat,
    fiber_degenerate_set,
    frame_reference_check,
    frenet,
    g_hat,
    g_jet,
    g_jet_exact,
    g_rational,
    g_x,
    g_y,
    geodesic_triple_q6,
    gw_trivialization,
    invert_fiber,
    j_invariance_residual,
    k5_witness,
    osculating_intersect,
    projective_gap,
    random_null_sextic,
    root_pattern,
    root_preimages,
    sextic_classify,
    sigma_infinity,
    sigma_zero,
)
from src.g2 import X, Y, Moebius, Sextic, binary_form, psl2_embed, q6
from src.octonion import quad_array


@pytest.fixture
def rng():
    """Deterministic generator."""
    return np.random.default_rng(5)


@pytest.fixture
def i_point():
    """z = i."""
    return HPoint(0, 1)


def sym_coords(d: DevPoint) -> np.ndarray:
    """Monomial coordinates of a developed point."""
    return np.linalg.solve(SYM6_TO_M, dev_lift(d))


def test_points_must_lie_in_upper_half_plane():
    with pytest.raises(DomainError):
        HPoint(0.0, 0.0)
    with pytest.raises(DomainError):
        HPoint(1, -2)


def test_g_hat_jet_at_i(i_point):
    r2 = math.sqrt(2.0)
    assert np.allclose(g_hat(i_point).to_array(), np.array([1, 0, 1]) / r2)
    assert np.allclose(g_x(i_point).to_array(), [0, r2, 0])
    assert np.allclose(g_y(i_point).to_array(), np.array([1, 0, -1]) / r2)


def test_g_jet_matches_central_differences(rng):
    h = 1e-5
    for _ in range(5):
        p = HPoint.random(rng)
        x, y = float(p.x), float(p.y)
        g, gx, gy, gxx, gxy, gyy = g_jet(p)
        plus_x, minus_x = g_jet(HPoint(x + h, y)), g_jet(HPoint(x - h, y))
        plus_y, minus_y = g_jet(HPoint(x, y + h)), g_jet(HPoint(x, y - h))
        d_dx = [(a - b) / (2 * h) for a, b in zip(plus_x, minus_x)]
        d_dy = [(a - b) / (2 * h) for a, b in zip(plus_y, minus_y)]
        assert np.allclose(d_dx[0], gx, atol=1e-7)
        assert np.allclose(d_dy[0], gy, atol=1e-7)
        assert np.allclose(d_dx[1], gxx, atol=1e-7)
        assert np.allclose(d_dy[1], gxy, atol=1e-7)
        assert np.allclose(d_dy[2], gyy, atol=1e-7)


def test_exact_jet_at_rational_points():
    p = HPoint(Fraction(1, 2), Fraction(3, 2))
    jet = g_jet_exact(p)
    assert jet[0] == (Fraction(5, 3), Fraction(2, 3), Fraction(2, 3))
    assert all(isinstance(c, Fraction) for row in jet for c in row)
    for exact, numeric in zip(jet, g_jet(p)):
        assert np.allclose(np.array([float(c) for c in exact]) / math.sqrt(2.0), numeric)
    with pytest.raises(DomainError):
        g_jet_exact(HPoint(0.5, 1.5))


def test_f_hat_at_i(i_point):
    expected = ((X**2 + Y**2) ** 3).to_array() * math.sqrt(5.0) / 4.0
    assert np.allclose(f_hat(i_point).to_array(), expected, atol=1e-12)


def test_f_hat_is_unit(rng):
    for _ in range(10):
        assert abs(q6(f_hat(HPoint.random(rng))) - 1.0) < 1e-10


def test_frame_matches_closed_form_at_i():
    assert frame_reference_check().passed(1e-10)


def test_frame_is_alternating_orthonormal(rng):
    for _ in range(10):
        rows = frenet(HPoint.random(rng)).rows()
        assert np.allclose(rows @ Q6_GRAM @ rows.T, np.diag(FRAME_SIGNS), atol=1e-10)


def test_second_fundamental_form_is_j_invariant(rng):
    for _ in range(10):
        assert j_invariance_residual(frenet(HPoint.random(rng))) < 1e-9


def test_curve_is_equivariant(rng):
    for _ in range(5):
        g, p = Moebius.random(rng), HPoint.random(rng)
        moved = f_hat(HPoint.from_complex(g.act(p.z))).to_array()
        image = psl2_embed(g).apply(f_hat(p).to_im()).to_array()
        assert np.allclose(image, moved, rtol=1e-9, atol=1e-9)


def test_osculating_planes_are_divisibility_planes(i_point):
    g = g_rational(i_point)
    assert divides(g, g * X**4)
    assert divides(g, g * binary_form([1, -2, 0, 3, 1]))
    assert not divides(g, X**6)


def test_osculating_intersections():
    report = osculating_intersect(HPoint(0, 1), HPoint(1, 2))
    assert report.exact
    assert (report.dimension, report.signature) == (3, (1, 2))
    same = osculating_intersect(HPoint(0, 1), HPoint(0, 1))
    assert (same.dimension, same.signature) == (5, (3, 2))


def test_degenerate_set_examples():
    below = fiber_degenerate_set(2)
    above = fiber_degenerate_set(4)
    assert below.agrees and above.agrees
    assert below.orthogonal and below.u_timelike
    assert below.count == 0
    assert above.count == 2


def test_degenerate_set_matches_frame_count():
    base = HPoint(0.0, 1.0)
    assert degenerate_set(base, HPoint(0.0, 2.0)).tn_p_in_q == 0
    assert degenerate_set(base, HPoint(0.0, 4.0)).tn_p_in_q == 2


def test_degenerate_set_rejects_bad_t():
    with pytest.raises(DegenerateInputError):
        fiber_degenerate_set(1)
    with pytest.raises(DomainError):
        fiber_degenerate_set(-2)


def test_degenerate_set_bound(rng):
    for _ in range(5):
        assert degenerate_set(HPoint.random(rng), HPoint.random(rng)).total <= 4


def test_developed_points_are_null_and_immersed(rng):
    for _ in range(5):
        theta, alpha = rng.uniform(0.0, 2 * math.pi, size=2)
        d = DevPoint(HPoint.random(rng), float(theta), float(alpha), float(rng.uniform(0.5, 2)))
        lift = dev_lift(d)
        assert abs(quad_array(lift, lift)) / float(lift @ lift) < 1e-12
        assert dev_rank(d) > 1e-6


def test_dev_point_needs_positive_radius(i_point):
    with pytest.raises(DomainError):
        DevPoint(i_point, 0.0, 0.0, 0.0)


def test_fiber_inversion_round_trip(rng):
    p = HPoint.random(rng)
    d = DevPoint(p, 0.4, 2.5, 1.3)
    inversion = invert_fiber(p, sym_coords(d))
    assert inversion.status is FiberStatus.REGULAR
    assert abs(inversion.theta - 0.4) < 1e-8
    assert abs(inversion.alpha - 2.5) < 1e-8
    assert abs(inversion.r - 1.3) < 1e-8
    assert dev(inversion.dev_point(p)).same_as(dev(d))


def test_fiber_inversion_boundary_cases(i_point):
    rows = frenet(i_point).rows()
    assert invert_fiber(i_point, rows[0] + rows[1]).status is FiberStatus.PI_N_ZERO
    assert invert_fiber(i_point, rows[1] + rows[3]).status is FiberStatus.PI_L_ZERO
    assert invert_fiber(i_point, rows[5]).status is FiberStatus.OUTSIDE


def test_fiber_inversion_rejects_non_null(i_point):
    rows = frenet(i_point).rows()
    inversion = invert_fiber(i_point, rows[0] + 2 * rows[1] + rows[3])
    assert inversion.status is FiberStatus.NOT_NULL
    assert abs(inversion.residual - 1 / 3) < 1e-12
    with pytest.raises(DegenerateInputError):
        inversion.dev_point(i_point)


def test_brute_force_ignores_non_null_sextics(i_point):
    rows = frenet(i_point).rows()
    assert brute_force_preimages(rows[0] + 2 * rows[1] + rows[3]) == []
    assert root_preimages(rows[0] + 2 * rows[1] + rows[3]) == []


def test_brute_force_recovers_developed_points(rng):
    for _ in range(3):
        p = HPoint.random(rng)
        theta, alpha = rng.uniform(0.0, 2 * math.pi, size=2)
        d = DevPoint(p, float(theta), float(alpha), float(rng.uniform(0.3, 3.0)))
        found = brute_force_preimages(sym_coords(d))
        assert any(abs(pre.p.z - p.z) < 1e-6 for pre in found), f"{p} missing from {found}"
        for pre in found:
            developed = dev_lift(pre.inversion.dev_point(pre.p))
            assert projective_gap(developed, dev_lift(d)) <= 1e-6


def test_extension_drops_rank_on_the_boundary(rng):
    sv = extended_rank(HPoint.random(rng), 0.0, 0.0, 1.1)
    assert sv[-1] / sv[0] < 1e-8


def test_fiber_boundary_circles(rng):
    p = HPoint.random(rng)
    sigma_zero(p, 0.7)
    u, n = (math.cos(0.3), math.sin(0.3)), (math.cos(1.9), math.sin(1.9))
    flipped = sigma_infinity(p, (-u[0], -u[1]), (-n[0], -n[1]))
    assert sigma_infinity(p, u, n).same_as(flipped, tol=0.0)


def test_k_representatives_are_classified():
    for k, rep in enumerate(K_REPRESENTATIVES, start=1):
        record = sextic_classify(rep)
        assert record.is_null, f"K{k} should be null"
        assert record.gw_member
        assert record.k_stratum == k
        assert record.predicted_preimages == (1 if k == 5 else 0)


def test_three_quadratics_have_three_preimages():
    P = (X**2 + Y**2) * binary_form([2, 0, 1]) * binary_form([1, 0, 3])
    record = sextic_classify(P)
    assert record.predicted_preimages == 3
    assert record.omega_sector == 3
    assert not record.gw_member


def test_root_pattern_exact():
    pattern = root_pattern(X**4 * Y * (X - Y))
    assert pattern.real == (4, 1, 1)
    assert pattern.complex_pairs == ()


def test_random_null_sextics(rng):
    for _ in range(5):
        P = random_null_sextic(rng)
        assert q6(P) == 0
        assert sextic_classify(P).is_null


def test_base_points_on_the_infinity_boundary_are_not_counted(i_point):
    rows = frenet(i_point).rows()
    P = Sextic(tuple(float(c) for c in rows[1] + rows[3]))
    record = sextic_classify(P)
    found = brute_force_preimages(P)
    assert record.is_null
    assert record.predicted_preimages == 1
    assert len(found) == 1
    assert all(abs(pre.p.z - 1j) > 1e-3 for pre in found), "z = i only reaches r = ∞"


def test_classification_matches_brute_force_on_random_sextics():
    rng = np.random.default_rng(11)
    for n in range(40):
        P = random_null_sextic(rng)
        predicted = sextic_classify(P).predicted_preimages
        assert len(brute_force_preimages(P)) == predicted, f"draw {n}: {P}"
        assert len(root_preimages(P)) == predicted, f"draw {n}: {P}"


def test_k_representatives_match_brute_force():
    for k, rep in enumerate(K_REPRESENTATIVES, start=1):
        assert len(brute_force_preimages(rep)) == sextic_classify(rep).predicted_preimages, f"K{k}"


def test_k5_certificate():
    cert = k5_witness()
    assert cert.exact
    assert cert.coefficients == (Fraction(3, 8), Fraction(-1, 2), Fraction(1, 8))
    assert cert.in_family


def test_boundary_points():
    assert boundary_transverse(X, Y)
    assert not boundary_transverse(X, X.scale(3))
    assert boundary_annihilator(binary_form([1, Fraction(1, 2)]))


def test_geodesic_triples_are_spacelike():
    assert geodesic_triple_q6(HPoint(0.0, 1.0), HPoint(0.0, 2.0), HPoint(0.0, 3.0)) > 0


def test_gw_trivialization():
    assert gw_trivialization(X**2, (1, 0, 1)) == X**4 * (X**2 + Y**2)
    with pytest.raises(NonNullError):
        gw_trivialization(X**2 + Y**2, (1, 0, 0))


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
