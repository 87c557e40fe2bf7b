"""
Tests for split-octonion arithmetic, the cross product and the 3-form on Im(O').
"""

from fractions import Fraction

import numpy as np
import pytest

from src.errors import ModelMismatchError, ZeroVectorError
from src.octonion import (
    CROSS_TENSOR,
    MULT_TABLE,
    OCT_LABELS,
    ImVector,
    ScalarModel,
    SplitOct,
    annihilator,
    coerce,
    cross,
    cross_array,
    cross_matrix,
    oct_mul,
    oct_mul_cd,
    quad,
    quad8,
    quad_array,
    quad_pair,
    random_im_vector,
    random_null_vector,
    random_split_oct,
    triple_form,
)


@pytest.fixture
def rng():
    """Deterministic generator for rational samples."""
    return np.random.default_rng(7)


def im(label: str) -> ImVector:
    return ImVector.unit(label)


def test_table_agrees_with_cayley_dickson():
    """Stored table and recursion agree on all 64 unit products."""
    units = [SplitOct.unit(label) for label in OCT_LABELS]
    for a in units:
        for b in units:
            assert oct_mul(a, b) == oct_mul_cd(a, b), f"{a} * {b} differs between routes"


def test_basic_products():
    one, i, j, k, l = (SplitOct.unit(x) for x in ("1", "i", "j", "k", "l"))
    assert oct_mul(i, j) == k
    assert oct_mul(j, i) == -k
    assert oct_mul(l, l) == one, "l squares to +1 in the split algebra"
    assert oct_mul(i, i) == -one


def test_split_products_from_table():
    one, i, l, li, lj, lk, k = (SplitOct.unit(x) for x in ("1", "i", "l", "li", "lj", "lk", "k"))
    assert oct_mul(li, lj) == k
    assert oct_mul(lj, li) == -k
    assert oct_mul(i, li) == l
    assert oct_mul(li, li) == one, "li squares to +1"
    assert oct_mul(lk, lk) == one


def test_table_rows_are_signed_permutations():
    for a, row in enumerate(MULT_TABLE):
        assert sorted(idx for idx, _ in row) == list(range(8)), f"row {a} repeats an index"
        assert all(sign in (1, -1) for _, sign in row)


def test_numpy_integers_coerce_to_python_fractions():
    value = coerce(np.int64(3), ScalarModel.EXACT)
    assert value == 3 and type(value.numerator) is int
    big = coerce(Fraction(np.int64(2**40), 1), ScalarModel.EXACT)
    assert type(big.numerator) is int
    assert big * big == 2**80, "products must not wrap around at 2**63"


def test_quadratic_form_examples():
    assert quad(im("i")) == 1
    assert quad(im("l")) == -1
    assert quad(im("lk")) == -1
    assert quad(im("i") + im("lj")) == 0, "i + lj should be null"


def test_triple_form_examples():
    assert triple_form(im("i"), im("j"), im("k")) == 1
    assert triple_form(im("i"), im("j"), im("l")) == 0


def test_composition_and_alternativity(rng):
    """q(xy) = q(x)q(y) and the alternative laws hold exactly on random rationals."""
    for _ in range(40):
        x, y = random_split_oct(rng), random_split_oct(rng)
        assert quad8(x * y) == quad8(x) * quad8(y)
        assert (x * x) * y == x * (x * y)
        assert (y * x) * x == y * (x * x)


def test_cross_product_identities(rng):
    for _ in range(40):
        u, v, w = random_im_vector(rng), random_im_vector(rng), random_im_vector(rng)
        assert cross(u, cross(u, v)) == v.scale(-quad(u)) + u.scale(quad_pair(u, v))
        assert quad(cross(u, v)) == quad(u) * quad(v) - quad_pair(u, v) ** 2
        omega = triple_form(u, v, w)
        assert omega == -triple_form(v, u, w)
        assert omega == triple_form(v, w, u)


def test_cross_is_orthogonal_to_factors(rng):
    u, v = random_im_vector(rng), random_im_vector(rng)
    uv = cross(u, v)
    assert quad_pair(uv, u) == 0
    assert quad_pair(uv, v) == 0


def test_annihilator_of_null_vector(rng):
    """Null u: Ann(u) is a 3-dimensional null subspace and C_u is nilpotent of order 3."""
    for _ in range(10):
        u = random_null_vector(rng)
        assert quad(u) == 0, "sampler must return null vectors"
        basis = annihilator(u)
        assert len(basis) == 3, f"expected dim 3, got {len(basis)}"
        for v in basis:
            assert quad(v) == 0
            assert cross(u, v).is_zero()
        c = np.array(cross_matrix(u), dtype=object)
        cube = c.dot(c).dot(c)
        assert all(x == 0 for x in cube.flat)


def test_annihilator_of_non_null_vector():
    basis = annihilator(im("i") + im("l").scale(2))
    assert len(basis) == 1


def test_annihilator_float_route():
    u = (im("i") + im("lj")).to_float()
    basis = annihilator(u)
    assert len(basis) == 3
    for v in basis:
        assert abs(quad(v)) < 1e-12


def test_annihilator_rejects_zero():
    with pytest.raises(ZeroVectorError):
        annihilator(ImVector((0,) * 7))


def test_mixed_models_rejected():
    with pytest.raises(ModelMismatchError):
        im("i") + im("j").to_float()


def test_float_given_to_exact_vector():
    with pytest.raises(ModelMismatchError):
        ImVector((0.5, 0, 0, 0, 0, 0, 0), ScalarModel.EXACT)


def test_wrong_length():
    with pytest.raises(ValueError):
        SplitOct((1, 2, 3))


def test_array_routes_match_exact(rng):
    u, v = random_im_vector(rng), random_im_vector(rng)
    expected = cross(u, v).to_array()
    got = cross_array(u.to_array(), v.to_array())
    assert np.allclose(got, expected)
    assert np.isclose(quad_array(u.to_array(), v.to_array()), float(quad_pair(u, v)))


def test_cross_tensor_is_antisymmetric():
    assert np.array_equal(CROSS_TENSOR, -np.transpose(CROSS_TENSOR, (1, 0, 2)))


def test_random_fraction_entries(rng):
    x = random_split_oct(rng)
    assert all(isinstance(c, Fraction) for c in x.coords)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
