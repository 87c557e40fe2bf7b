"""
Tests for exact and float kernels, intersections and signatures.
"""

from fractions import Fraction

import numpy as np
import pytest

from src.linalg import (
    intersect_exact,
    intersect_float,
    nullspace_exact,
    nullspace_float,
    orthogonal_complement_exact,
    rank_exact,
    rank_float,
    same_span_exact,
    signature_exact,
    signature_float,
)


def F(*values):
    return tuple(Fraction(v) for v in values)


def test_nullspace_exact_simple():
    kernel = nullspace_exact([F(1, 1, 0), F(0, 0, 1)])
    assert kernel == [F(-1, 1, 0)]


def test_rank_exact_and_float_agree():
    rows = [F(1, 2, 3), F(2, 4, 6), F(0, 1, 1)]
    assert rank_exact(rows) == 2
    assert rank_float(np.array(rows, dtype=float)) == 2


def test_nullspace_float_is_orthonormal():
    kernel = nullspace_float(np.array([[1.0, 1.0, 0.0]]))
    assert kernel.shape == (2, 3)
    assert np.allclose(kernel @ kernel.T, np.eye(2))
    assert np.allclose(kernel @ np.array([1.0, 1.0, 0.0]), 0.0)


def test_intersect_exact_of_coordinate_planes():
    a = [F(1, 0, 0), F(0, 1, 0)]
    b = [F(0, 1, 0), F(0, 0, 1)]
    meet = intersect_exact(a, b)
    assert len(meet) == 1
    assert same_span_exact(meet, [F(0, 1, 0)])


def test_intersect_float_of_coordinate_planes():
    a = np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
    b = np.array([[0.0, 1.0, 1.0], [0.0, 0.0, 1.0]])
    meet = intersect_float(a, b)
    assert meet.shape[0] == 1
    assert abs(meet[0, 0]) < 1e-12 and abs(meet[0, 2]) < 1e-12


def test_intersect_transverse_is_empty():
    assert intersect_exact([F(1, 0)], [F(0, 1)]) == []


def test_signature_exact_diagonal():
    gram = [F(1, 0, 0, 0), F(0, -1, 0, 0), F(0, 0, 0, 0), F(0, 0, 0, 2)]
    assert signature_exact(gram) == (2, 1, 1)


def test_signature_exact_hyperbolic_plane():
    assert signature_exact([F(0, 1), F(1, 0)]) == (1, 1, 0)


def test_signature_float_matches_exact():
    gram = [F(2, 1, 0), F(1, 2, 0), F(0, 0, -3)]
    assert signature_float(np.array(gram, dtype=float)) == signature_exact(gram)


def test_orthogonal_complement_in_lorentz_plane():
    gram = [F(1, 0), F(0, -1)]
    complement = orthogonal_complement_exact([F(1, 1)], gram)
    assert same_span_exact(complement, [F(1, 1)]), "null line is its own complement"


def test_exact_routines_reject_floats():
    with pytest.raises(TypeError):
        rank_exact([[0.5, 1.0]])


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
