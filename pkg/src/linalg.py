"""Kernels, ranks, intersections and signatures over exact rationals and float64."""

from fractions import Fraction
from typing import List, Sequence, Tuple

import numpy as np
import sympy

RationalRows = Sequence[Sequence[Fraction]]

# Relative singular-value cutoff used by every float kernel/rank computation
SVD_REL_TOL = 1e-10


def to_rational(value) -> sympy.Rational:
    """Convert an int or Fraction to a sympy Rational."""
    if isinstance(value, Fraction):
        return sympy.Rational(value.numerator, value.denominator)
    if isinstance(value, (int, np.integer)):
        return sympy.Rational(int(value))
    raise TypeError(f"exact routines take int or Fraction, got {type(value).__name__}")


def to_fraction(value) -> Fraction:
    """Convert a sympy Rational (or int) back to a Fraction."""
    r = sympy.Rational(value)
    return Fraction(int(r.p), int(r.q))


def to_sympy_matrix(rows: RationalRows) -> sympy.Matrix:
    return sympy.Matrix([[to_rational(v) for v in row] for row in rows])


def nullspace_exact(rows: RationalRows) -> List[Tuple[Fraction, ...]]:
    """
    Exact kernel of a rational matrix.

    Args:
        rows: Matrix as a sequence of rows of Fractions/ints

    Returns:
        Kernel basis vectors, in the reduced row-echelon order sympy produces
    """
    matrix = to_sympy_matrix(rows)
    return [tuple(to_fraction(x) for x in vec) for vec in matrix.nullspace()]


def rank_exact(rows: RationalRows) -> int:
    return int(to_sympy_matrix(rows).rank())


def nullspace_float(matrix: np.ndarray, rel_tol: float = SVD_REL_TOL) -> np.ndarray:
    """
    Kernel of a float (or complex) matrix by singular-value thresholding.

    Args:
        matrix: m x n array
        rel_tol: Singular values below rel_tol * largest count as zero

    Returns:
        Array of shape (k, n) whose rows span the kernel (orthonormal)
    """
    a = np.atleast_2d(np.asarray(matrix))
    _, s, vh = np.linalg.svd(a)
    rank = _numerical_rank(s, rel_tol)
    return vh[rank:].conj()


def rank_float(matrix: np.ndarray, rel_tol: float = SVD_REL_TOL) -> int:
    a = np.atleast_2d(np.asarray(matrix))
    if a.size == 0:
        return 0
    return _numerical_rank(np.linalg.svd(a, compute_uv=False), rel_tol)


def _numerical_rank(singular_values: np.ndarray, rel_tol: float) -> int:
    if singular_values.size == 0 or singular_values[0] == 0.0:
        return 0
    return int(np.sum(singular_values > rel_tol * singular_values[0]))


def intersect_exact(
    basis_a: RationalRows, basis_b: RationalRows
) -> List[Tuple[Fraction, ...]]:
    """
    Basis of the intersection of two row-spans (each given by independent rows).

    Args:
        basis_a: Independent vectors spanning A
        basis_b: Independent vectors spanning B

    Returns:
        Independent vectors spanning A ∩ B
    """
    if not basis_a or not basis_b:
        return []
    n = len(basis_a[0])
    # Columns a_1..a_p, -b_1..-b_q; a kernel vector c gives sum c_i a_i in both spans
    columns = [list(v) for v in basis_a] + [[-x for x in v] for v in basis_b]
    rows = [[columns[j][i] for j in range(len(columns))] for i in range(n)]
    result = []
    for coeffs in nullspace_exact(rows):
        vec = [Fraction(0)] * n
        for c, a in zip(coeffs[: len(basis_a)], basis_a):
            if c:
                vec = [v + c * x for v, x in zip(vec, a)]
        result.append(tuple(vec))
    return result


def intersect_float(
    basis_a: np.ndarray, basis_b: np.ndarray, rel_tol: float = SVD_REL_TOL
) -> np.ndarray:
    """Float counterpart of intersect_exact; rows in, rows out."""
    a = np.atleast_2d(np.asarray(basis_a, dtype=float))
    b = np.atleast_2d(np.asarray(basis_b, dtype=float))
    kernel = nullspace_float(np.hstack([a.T, -b.T]), rel_tol)
    if kernel.shape[0] == 0:
        return np.zeros((0, a.shape[1]))
    return kernel[:, : a.shape[0]].real @ a


def orthogonal_complement_exact(
    basis: RationalRows, gram: RationalRows
) -> List[Tuple[Fraction, ...]]:
    """Vectors v with B(w, v) = 0 for every w in basis, where B has matrix gram."""
    n = len(gram)
    rows = []
    for w in basis:
        rows.append([sum((w[i] * gram[i][j] for i in range(n)), Fraction(0)) for j in range(n)])
    return nullspace_exact(rows)


def orthogonal_complement_float(
    basis: np.ndarray, gram: np.ndarray, rel_tol: float = SVD_REL_TOL
) -> np.ndarray:
    return nullspace_float(np.atleast_2d(basis) @ np.asarray(gram), rel_tol)


def gram_exact(vectors: RationalRows, gram: RationalRows) -> List[List[Fraction]]:
    """Matrix of the bilinear form restricted to the span of `vectors`."""
    n = len(gram)
    out = []
    for v in vectors:
        gv = [sum((gram[i][j] * v[j] for j in range(n)), Fraction(0)) for i in range(n)]
        out.append([sum((w[i] * gv[i] for i in range(n)), Fraction(0)) for w in vectors])
    return out


def signature_exact(gram: RationalRows) -> Tuple[int, int, int]:
    """
    Signature of a symmetric rational matrix without computing eigenvalues.

    The characteristic polynomial of a real symmetric matrix has only real roots, so
    Descartes' rule of signs counts its positive roots exactly.

    Args:
        gram: Symmetric matrix of Fractions

    Returns:
        (n_positive, n_negative, n_zero)
    """
    n = len(gram)
    if n == 0:
        return (0, 0, 0)
    lam = sympy.Symbol("lam")
    coeffs = [to_fraction(c) for c in to_sympy_matrix(gram).charpoly(lam).all_coeffs()]
    n_zero = 0
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
        n_zero += 1
    signs = [1 if c > 0 else -1 for c in coeffs if c != 0]
    n_pos = sum(1 for a, b in zip(signs, signs[1:]) if a != b)
    return (n_pos, n - n_zero - n_pos, n_zero)


def signature_float(gram: np.ndarray, tol: float = 1e-9) -> Tuple[int, int, int]:
    """Signature from eigenvalues; |λ| <= tol * max(1, max|λ|) counts as zero."""
    g = np.asarray(gram)
    if g.size == 0:
        return (0, 0, 0)
    eig = np.linalg.eigvalsh(0.5 * (g + g.conj().T))
    cutoff = tol * max(1.0, float(np.max(np.abs(eig))))
    return (
        int(np.sum(eig > cutoff)),
        int(np.sum(eig < -cutoff)),
        int(np.sum(np.abs(eig) <= cutoff)),
    )


def same_span_exact(basis_a: RationalRows, basis_b: RationalRows) -> bool:
    rank_a, rank_b = rank_exact(basis_a), rank_exact(basis_b)
    return rank_a == rank_b == rank_exact(list(basis_a) + list(basis_b))


def same_span_float(
    basis_a: np.ndarray, basis_b: np.ndarray, rel_tol: float = 1e-8
) -> bool:
    a, b = np.atleast_2d(basis_a), np.atleast_2d(basis_b)
    rank_a, rank_b = rank_float(a, rel_tol), rank_float(b, rel_tol)
    return rank_a == rank_b == rank_float(np.vstack([a, b]), rel_tol)
