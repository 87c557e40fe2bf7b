"""
Tests for G2' matrices, the principal PSL₂ embedding and the basis identifications.
"""

import math
from fractions import Fraction

import numpy as np
import pytest

from src.errors import DegenerateInputError, InvalidTripleError, UnsupportedBasisError
from src.g2 import (
    X,
    Y,
    G2Matrix,
    Moebius,
    Sextic,
    basis_convert,
    basis_gram,
    binary_form,
    exp_nilpotent,
    is_g2,
    psl2_embed,
    q6,
    random_g2_exact,
    random_g2_float,
    rotation_bprime,
    stiefel_to_g2,
    torus_bprime,
)
from src.linalg import signature_exact
from src.octonion import (
    BasisTag,
    ImVector,
    ScalarModel,
    quad,
    random_im_vector,
    random_null_vector,
    triple_form,
)


@pytest.fixture
def rng():
    """Deterministic generator."""
    return np.random.default_rng(11)


def im(label: str) -> ImVector:
    return ImVector.unit(label)


def relative_g2_residual(m: G2Matrix) -> float:
    check = is_g2(m, 1.0)
    scale = max(1.0, float(np.max(np.abs(m.to_array())))) ** 2
    return max(check.cross_residual, check.quad_residual) / scale


def test_stiefel_standard_triple_is_identity():
    m = stiefel_to_g2(im("i"), im("j"), im("l"), tol=0.0)
    assert np.array_equal(m.to_array(), np.eye(7))


def test_stiefel_flipped_triple():
    m = stiefel_to_g2(im("i"), im("j"), -im("l"), tol=0.0)
    assert np.array_equal(m.to_array(), np.diag([1.0, 1, 1, -1, -1, -1, -1]))


def test_stiefel_rejects_bad_triple():
    with pytest.raises(InvalidTripleError):
        stiefel_to_g2(im("i"), im("i"), im("l"), tol=0.0)
    with pytest.raises(InvalidTripleError):
        stiefel_to_g2(im("i"), im("j"), im("k"), tol=0.0)


def test_non_member_rejected():
    assert not is_g2(G2Matrix(np.diag([2.0, 1, 1, 1, 1, 1, 0.5]))).ok


def test_exact_products_are_exactly_g2(rng):
    for _ in range(5):
        m = random_g2_exact(rng)
        check = is_g2(m, 0.0)
        assert check.cross_residual == 0 and check.quad_residual == 0
        assert m.det() == 1


def test_long_exact_products_keep_null_vectors_null(rng):
    for _ in range(20):
        m = random_g2_exact(rng, factors=8)
        assert all(type(x.numerator) is int for x in m.entries.flat), "numpy ints in entries"
        v = random_null_vector(rng)
        image = m.apply(v)
        assert quad(image) == 0, f"q(g·v) = {quad(image)}"
        assert all(type(c.numerator) is int for c in image.coords)
    check = is_g2(m, 0.0)
    assert check.cross_residual == 0 and check.quad_residual == 0


def test_numpy_integer_entries_become_python_ints():
    m = G2Matrix(np.eye(7, dtype=np.int64), ScalarModel.EXACT)
    assert all(type(x.numerator) is int for x in m.entries.flat)
    assert G2Matrix.identity().det() == 1


def test_exact_elements_preserve_three_form(rng):
    m = random_g2_exact(rng)
    x, y, z = (random_im_vector(rng) for _ in range(3))
    assert triple_form(m.apply(x), m.apply(y), m.apply(z)) == triple_form(x, y, z)


def test_float_elements_are_g2(rng):
    for _ in range(5):
        m = random_g2_float(rng)
        assert relative_g2_residual(m) < 1e-10
        assert abs(m.det() - 1.0) < 1e-8


def test_stiefel_recovers_float_frame(rng):
    frame = random_g2_float(rng).to_array()
    x, y, z = (ImVector.from_array(frame[:, c]) for c in (0, 1, 3))
    m = stiefel_to_g2(x, y, z, tol=1e-8)
    assert np.allclose(m.to_array()[:, [0, 1, 3]], frame[:, [0, 1, 3]])


def test_moebius_requires_unit_determinant():
    with pytest.raises(DegenerateInputError):
        Moebius(1, 1, 1, 1)


def test_moebius_sign_is_canonical():
    assert Moebius(-1, 0, 0, -1) == Moebius(1, 0, 0, 1)
    assert Moebius(0, -1, 1, 0) == Moebius(0, 1, -1, 0)


def test_embedding_is_a_homomorphism():
    g = Moebius.torus(Fraction(2))
    h = Moebius.unipotent(Fraction(1, 3))
    product = psl2_embed(g).entries.dot(psl2_embed(h).entries)
    assert (product == psl2_embed(g * h).entries).all()


def test_embedding_preserves_q6_exactly():
    g = Moebius.unipotent(Fraction(2, 5)) * Moebius.torus(Fraction(3))
    p = binary_form([1, -2, 0, Fraction(1, 3), 4, 0, -1])
    assert q6(g.act_form(p)) == q6(p)


def test_generator_matrices():
    torus = psl2_embed(Moebius.torus(Fraction(3, 2))).convert(BasisTag.BPRIME).to_array()
    assert np.allclose(torus, torus_bprime(1.5), atol=1e-12)
    shear = psl2_embed(Moebius.unipotent(Fraction(7, 10))).convert(BasisTag.BPRIME).to_array()
    assert np.allclose(shear, exp_nilpotent(0.7), atol=1e-12)
    rotation = psl2_embed(Moebius(0, -1, 1, 0)).convert(BasisTag.BPRIME).to_array()
    assert np.allclose(rotation, rotation_bprime(), atol=1e-12)


def test_embedded_rotation_is_g2():
    m = psl2_embed(Moebius.rotation(0.3))
    assert relative_g2_residual(m) < 1e-10


def test_veronese_q6_value():
    assert q6((X**2 + Y**2) ** 3) == Fraction(16, 5)
    assert q6(X**6) == 0, "boundary points are null"


def test_x6_identification():
    v = basis_convert(X**6, BasisTag.SYM6, BasisTag.M_IMAG).to_array()
    expected = np.array([1.0, 0, 0, 0, 1.0, 0, 0]) / math.sqrt(2.0)
    assert np.allclose(v, expected, atol=1e-12)


def test_q_matches_q6(rng):
    for _ in range(10):
        p = Sextic(tuple(rng.normal(size=7)))
        v = basis_convert(p, BasisTag.SYM6, BasisTag.M_IMAG)
        assert abs(quad(v) - q6(p)) < 1e-10 * max(1.0, float(np.sum(p.to_array() ** 2)))


def test_round_trip_between_bases(rng):
    v = ImVector.from_array(rng.normal(size=7))
    for tag in (BasisTag.BPRIME, BasisTag.SYM6):
        back = basis_convert(basis_convert(v, BasisTag.M_IMAG, tag), tag, BasisTag.M_IMAG)
        assert np.allclose(back.to_array(), v.to_array())


def test_real_bases_have_signature_three_four():
    for tag in (BasisTag.M_IMAG, BasisTag.BPRIME, BasisTag.SYM6):
        assert signature_exact(basis_gram(tag)) == (3, 4, 0), tag


def test_u_basis_has_no_real_gram():
    with pytest.raises(UnsupportedBasisError):
        basis_gram(BasisTag.BARAGLIA_U)


def test_sextic_needs_seven_coefficients():
    with pytest.raises(ValueError):
        Sextic((1, 2, 3))


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
