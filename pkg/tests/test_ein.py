"""
Tests for null lines of Ein^{2,3}, annihilator planes, (3,2)-planes and the torus families.
"""

import math

import numpy as np
import pytest

from src import linalg
from src.errors import DegenerateInputError, DomainError, NonNullError, ZeroVectorError
from src.ein import (
    NullLine,
    OsculatingPlane,
    ann_plane,
    annihilators_transverse,
    distribution_at,
    family_membership,
    family_point,
    full_flag,
    is_cross_trivial_isotropic,
    model_family,
    negative_to_positive,
    recover_line,
    signature,
    splitting_witness,
    transverse,
    verify_unique_splitting,
)
from src.g2 import random_g2_exact, random_g2_float
from src.octonion import ImVector, quad, random_null_vector


@pytest.fixture
def rng():
    """Deterministic generator."""
    return np.random.default_rng(3)


@pytest.fixture
def family():
    """Family through x̂ = i with T = span(l, li) and N = span(j, k)."""
    return model_family()


def im(label: str) -> ImVector:
    return ImVector.unit(label)


def test_null_line_normalization():
    x = im("i") + im("li")
    assert NullLine(x.scale(3)) == NullLine(x)
    assert NullLine(x.scale(-2)) == NullLine(x), "lines ignore the sign of the representative"


def test_null_line_rejects_bad_input():
    with pytest.raises(NonNullError):
        NullLine(im("i"))
    with pytest.raises(ZeroVectorError):
        NullLine(ImVector((0,) * 7))


def test_transverse_examples():
    a = NullLine(im("i") + im("li"))
    b = NullLine(im("i") - im("li"))
    c = NullLine(im("j") + im("lj"))
    assert transverse(a, b)
    assert not transverse(a, c)
    assert not transverse(a, a)


def test_transversality_matches_annihilators(rng):
    for _ in range(10):
        a, b = NullLine(random_null_vector(rng)), NullLine(random_null_vector(rng))
        assert transverse(a, b) == transverse(b, a)
        assert transverse(a, b) == annihilators_transverse(a, b)


def test_ann_plane_is_g2_equivariant(rng):
    g = random_g2_exact(rng)
    line = NullLine(random_null_vector(rng))
    moved = NullLine(g.apply(line.rep))
    image = [list(g.apply(v).coords) for v in ann_plane(line)]
    assert linalg.same_span_exact([list(v.coords) for v in ann_plane(moved)], image)


def test_annihilator_of_highest_weight_line():
    x3 = im("i") + im("li")
    x2 = im("lj") - im("j")
    x1 = im("k") - im("lk")
    ann = [list(v.coords) for v in ann_plane(NullLine(x3))]
    assert linalg.same_span_exact(ann, [list(v.coords) for v in (x3, x2, x1)])
    dist = distribution_at(NullLine(x3))
    assert len(dist) == 2
    assert linalg.rank_exact([list(x3.coords)] + [list(v.coords) for v in dist]) == 3


def test_full_flag_dimensions():
    assert full_flag(im("i") + im("li"), im("lj") - im("j")) == [1, 2, 3, 4, 5, 6]


def test_cross_trivial_isotropic_plane():
    assert is_cross_trivial_isotropic([im("i") + im("li"), im("lj") - im("j")])
    assert not is_cross_trivial_isotropic([im("i") + im("li"), im("j") + im("lj")])


def test_negative_to_positive_triple():
    assert negative_to_positive(im("l"), im("li"), im("j")) == (im("i"), im("j"), im("l"))


def test_signature_of_spans():
    assert signature([im("i"), im("j"), im("l")]) == (2, 1, 0)
    assert signature([im("i") + im("li"), im("i") + im("li")]) == (0, 0, 1)


def test_family_example(family):
    point = family_point(family, 0.0, 0.0, 1.0).to_array()
    expected = np.array([1.0, 1.0, 0, math.sqrt(2.0), 0, 0, 0]) / math.sqrt(2.0)
    assert np.allclose(point, expected, atol=1e-12)


def test_family_points_are_members(family, rng):
    for _ in range(20):
        theta, alpha = rng.uniform(0.0, 2 * math.pi, size=2)
        r = float(np.exp(rng.uniform(-1.5, 1.5)))
        ray = family_point(family, float(theta), float(alpha), r)
        assert abs(quad(ray.rep)) < 1e-10
        assert family_membership(family, ray.line())
        assert family.projections(ray.to_array())[0] > 0, "rays keep a positive x̂ component"


def test_point_without_normal_part_is_excluded(family):
    outside = NullLine(ImVector.from_array(family.xhat + family.u_T(0.3)))
    assert not family_membership(family, outside)


def test_family_radius_must_be_positive(family):
    with pytest.raises(DomainError):
        family_point(family, 0.0, 0.0, 0.0)


def test_osculating_plane_signature_enforced():
    OsculatingPlane(np.eye(7)[:5])
    with pytest.raises(DegenerateInputError):
        OsculatingPlane(np.eye(7)[[0, 1, 3, 4, 5]])
    with pytest.raises(DegenerateInputError):
        OsculatingPlane(np.eye(7)[:4])


def test_recover_line_standard_plane():
    v = recover_line(OsculatingPlane(np.eye(7)[:5])).to_array()
    assert linalg.same_span_float(v, np.eye(7)[0])


def test_recover_line_is_equivariant(rng):
    g = random_g2_float(rng).to_array()
    moved = recover_line(OsculatingPlane(np.eye(7)[:5] @ g.T)).to_array()
    assert linalg.same_span_float(moved, g[:, 0])


def test_recover_line_from_family_samples(family, rng):
    points = [
        family_point(family, *rng.uniform(0.0, 2 * math.pi, size=2), 1.0 + k / 10).to_array()
        for k in range(30)
    ]
    recovered = recover_line(OsculatingPlane.from_spanning_set(np.array(points))).to_array()
    assert linalg.same_span_float(recovered, family.xhat)


def test_splitting_witness(family):
    witness = splitting_witness(family, 0.6)
    assert witness is not None
    assert witness.in_mixed_family
    assert not witness.in_original_family
    assert splitting_witness(family, 0.0) is None


def test_verify_unique_splitting(family, rng):
    report = verify_unique_splitting(family, 5, rng)
    assert report.trials == 5
    assert report.all_found
    no_mix = verify_unique_splitting(family, 1, rng, mixes=[0.0])
    assert not no_mix.witnesses
    assert not no_mix.all_found


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
