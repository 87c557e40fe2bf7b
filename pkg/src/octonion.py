"""Split octonion arithmetic: Cayley-Dickson product, quadratic form, cross product, annihilators.

Coordinates are taken in the multiplication basis M = (1, i, j, k, l, li, lj, lk). A split octonion
a + l b is stored as the quaternion pair (a, b) and multiplied by

    (a, b)(c, d) = (ac + d b*, a* d + c b)

so that l² = +1 and q(a + l b) = |a|² - |b|².
"""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import List, Sequence, Tuple, Union

import numpy as np

from . import linalg
from .errors import BasisMismatchError, ModelMismatchError, ZeroVectorError

Number = Union[Fraction, float]


class ScalarModel(str, Enum):
    """Scalar model of a vector: exact rationals or binary doubles."""

    EXACT = "exact"
    FLOAT = "float"


class BasisTag(str, Enum):
    """Bases in which 7-dimensional vectors may be expressed."""

    M_IMAG = "m_imag"
    BARAGLIA_U = "baraglia_u"
    BPRIME = "bprime"
    SYM6 = "sym6"


OCT_LABELS = ("1", "i", "j", "k", "l", "li", "lj", "lk")
IM_LABELS = OCT_LABELS[1:]
OCT_SIGNS = (1, 1, 1, 1, -1, -1, -1, -1)
IM_SIGNS = OCT_SIGNS[1:]


def coerce(value, model: ScalarModel) -> Number:
    """
    Convert a raw value into the given scalar model.

    Args:
        value: int, Fraction, str (exact) or float
        model: Target scalar model

    Returns:
        Fraction for EXACT, float for FLOAT
    """
    if model is ScalarModel.EXACT:
        if isinstance(value, (float, np.floating)):
            raise ModelMismatchError(f"float {value!r} given to an exact vector")
        if isinstance(value, np.integer):
            return Fraction(int(value))
        if isinstance(value, Fraction):
            # numpy integer parts would wrap around at 2**63
            return Fraction(int(value.numerator), int(value.denominator))
        return Fraction(value)
    return float(value)


def is_zero(value: Number, tol: float = 0.0) -> bool:
    """Zero test; exact values compare exactly, floats against tol."""
    if isinstance(value, Fraction):
        return value == 0
    return abs(value) <= tol


# ---------------------------------------------------------------------------
# Quaternion pairs and the two product routes
# ---------------------------------------------------------------------------


def _quat_mul(p: Sequence, q: Sequence) -> Tuple:
    a1, b1, c1, d1 = p
    a2, b2, c2, d2 = q
    return (
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    )


def _quat_conj(p: Sequence) -> Tuple:
    return (p[0], -p[1], -p[2], -p[3])


def cd_product(x: Sequence, y: Sequence) -> Tuple:
    """Product of two 8-tuples by the split Cayley-Dickson recursion."""
    a, b = x[:4], x[4:]
    c, d = y[:4], y[4:]
    first = tuple(u + v for u, v in zip(_quat_mul(a, c), _quat_mul(d, _quat_conj(b))))
    second = tuple(u + v for u, v in zip(_quat_mul(_quat_conj(a), d), _quat_mul(c, b)))
    return first + second


# e_a e_b = sign * e_index, rows a and columns b in M order
MULT_TABLE = (
    ((0, 1), (1, 1), (2, 1), (3, 1), (4, 1), (5, 1), (6, 1), (7, 1)),
    ((1, 1), (0, -1), (3, 1), (2, -1), (5, -1), (4, 1), (7, -1), (6, 1)),
    ((2, 1), (3, -1), (0, -1), (1, 1), (6, -1), (7, 1), (4, 1), (5, -1)),
    ((3, 1), (2, 1), (1, -1), (0, -1), (7, -1), (6, -1), (5, 1), (4, 1)),
    ((4, 1), (5, 1), (6, 1), (7, 1), (0, 1), (1, 1), (2, 1), (3, 1)),
    ((5, 1), (4, -1), (7, -1), (6, 1), (1, -1), (0, 1), (3, 1), (2, -1)),
    ((6, 1), (7, 1), (4, -1), (5, -1), (2, -1), (3, -1), (0, 1), (1, 1)),
    ((7, 1), (6, -1), (5, 1), (4, -1), (3, -1), (2, 1), (1, -1), (0, 1)),
)


def structure_constants() -> np.ndarray:
    """8x8x8 integer tensor C with e_a e_b = sum_c C[a, b, c] e_c."""
    tensor = np.zeros((8, 8, 8), dtype=np.int64)
    for a in range(8):
        for b in range(8):
            idx, sign = MULT_TABLE[a][b]
            tensor[a, b, idx] = sign
    return tensor


# Cross product on Im(O'): e_a x e_b = Im(e_a e_b)
CROSS_TENSOR = structure_constants()[1:, 1:, 1:]
IM_GRAM = np.diag(np.array(IM_SIGNS, dtype=float))


def table_product(x: Sequence, y: Sequence) -> Tuple:
    """Product of two 8-tuples through the stored multiplication table."""
    zero = x[0] * 0
    out = [zero] * 8
    for a, xa in enumerate(x):
        if xa == 0:
            continue
        for b, yb in enumerate(y):
            if yb == 0:
                continue
            idx, sign = MULT_TABLE[a][b]
            out[idx] = out[idx] + sign * xa * yb
    return tuple(out)


# ---------------------------------------------------------------------------
# Value types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SplitOct:
    """Element of O' in the multiplication basis M."""

    coords: Tuple[Number, ...]
    model: ScalarModel = ScalarModel.EXACT

    def __post_init__(self):
        if len(self.coords) != 8:
            raise ValueError(f"SplitOct needs 8 coordinates, got {len(self.coords)}")
        object.__setattr__(self, "coords", tuple(coerce(c, self.model) for c in self.coords))

    @classmethod
    def unit(cls, label: str, model: ScalarModel = ScalarModel.EXACT) -> "SplitOct":
        idx = OCT_LABELS.index(label)
        return cls(tuple(1 if n == idx else 0 for n in range(8)), model)

    @classmethod
    def from_pair(cls, a: Sequence, b: Sequence, model: ScalarModel = ScalarModel.EXACT):
        """Build a + l b from two quaternions."""
        return cls(tuple(a) + tuple(b), model)

    def __add__(self, other: "SplitOct") -> "SplitOct":
        _same_model(self, other)
        return SplitOct(tuple(u + v for u, v in zip(self.coords, other.coords)), self.model)

    def __sub__(self, other: "SplitOct") -> "SplitOct":
        _same_model(self, other)
        return SplitOct(tuple(u - v for u, v in zip(self.coords, other.coords)), self.model)

    def __neg__(self) -> "SplitOct":
        return SplitOct(tuple(-u for u in self.coords), self.model)

    def __mul__(self, other: "SplitOct") -> "SplitOct":
        return oct_mul(self, other)

    def scale(self, c) -> "SplitOct":
        c = coerce(c, self.model)
        return SplitOct(tuple(c * u for u in self.coords), self.model)

    def conjugate(self) -> "SplitOct":
        return SplitOct((self.coords[0],) + tuple(-u for u in self.coords[1:]), self.model)

    @property
    def real(self) -> Number:
        return self.coords[0]

    def imag(self) -> "ImVector":
        return ImVector(self.coords[1:], self.model)

    def to_array(self) -> np.ndarray:
        return np.array([float(c) for c in self.coords])


@dataclass(frozen=True)
class ImVector:
    """
    Element of Im(O') ≅ R^{3,4} in a declared basis.

    Coordinates are real. Complex frames (the Baraglia u-basis) are handled as complex numpy
    arrays through cross_array / quad_array instead.
    """

    coords: Tuple[Number, ...]
    model: ScalarModel = ScalarModel.EXACT
    basis: BasisTag = BasisTag.M_IMAG

    def __post_init__(self):
        if len(self.coords) != 7:
            raise ValueError(f"ImVector needs 7 coordinates, got {len(self.coords)}")
        if self.basis is BasisTag.BARAGLIA_U:
            raise BasisMismatchError("the u-basis is complex; use numpy arrays for it")
        object.__setattr__(self, "coords", tuple(coerce(c, self.model) for c in self.coords))

    @classmethod
    def unit(
        cls,
        label: str,
        model: ScalarModel = ScalarModel.EXACT,
    ) -> "ImVector":
        idx = IM_LABELS.index(label)
        return cls(tuple(1 if n == idx else 0 for n in range(7)), model)

    @classmethod
    def from_array(cls, arr, basis: BasisTag = BasisTag.M_IMAG) -> "ImVector":
        return cls(tuple(float(v) for v in np.asarray(arr).real), ScalarModel.FLOAT, basis)

    def __add__(self, other: "ImVector") -> "ImVector":
        _compatible(self, other)
        return ImVector(
            tuple(u + v for u, v in zip(self.coords, other.coords)), self.model, self.basis
        )

    def __sub__(self, other: "ImVector") -> "ImVector":
        _compatible(self, other)
        return ImVector(
            tuple(u - v for u, v in zip(self.coords, other.coords)), self.model, self.basis
        )

    def __neg__(self) -> "ImVector":
        return ImVector(tuple(-u for u in self.coords), self.model, self.basis)

    def scale(self, c) -> "ImVector":
        c = coerce(c, self.model)
        return ImVector(tuple(c * u for u in self.coords), self.model, self.basis)

    def is_zero(self, tol: float = 0.0) -> bool:
        return all(is_zero(c, tol) for c in self.coords)

    def to_array(self) -> np.ndarray:
        return np.array([float(c) for c in self.coords])

    def to_float(self) -> "ImVector":
        return ImVector(tuple(float(c) for c in self.coords), ScalarModel.FLOAT, self.basis)

    def as_oct(self) -> SplitOct:
        if self.basis is not BasisTag.M_IMAG:
            raise BasisMismatchError("only M-basis vectors embed in O'")
        return SplitOct((0,) + self.coords, self.model)


def _same_model(*values) -> None:
    models = {v.model for v in values}
    if len(models) > 1:
        raise ModelMismatchError(f"mixed scalar models: {sorted(m.value for m in models)}")


def _compatible(*vectors: ImVector) -> None:
    _same_model(*vectors)
    bases = {v.basis for v in vectors}
    if len(bases) > 1:
        raise BasisMismatchError(f"mixed bases: {sorted(b.value for b in bases)}")


def _to_m(v: ImVector) -> ImVector:
    if v.basis is BasisTag.M_IMAG:
        return v
    if v.model is ScalarModel.EXACT:
        raise ModelMismatchError(
            f"cross products in basis {v.basis.value} involve surds; use float vectors"
        )
    from .g2 import basis_convert

    return basis_convert(v, v.basis, BasisTag.M_IMAG)


def _from_m(v: ImVector, basis: BasisTag) -> ImVector:
    if basis is BasisTag.M_IMAG:
        return v
    from .g2 import basis_convert

    return basis_convert(v, BasisTag.M_IMAG, basis)


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------


def oct_mul(a: SplitOct, b: SplitOct) -> SplitOct:
    """Product in O' via the multiplication table."""
    _same_model(a, b)
    return SplitOct(table_product(a.coords, b.coords), a.model)


def oct_mul_cd(a: SplitOct, b: SplitOct) -> SplitOct:
    """Product in O' via the Cayley-Dickson recursion."""
    _same_model(a, b)
    return SplitOct(cd_product(a.coords, b.coords), a.model)


def quad8_pair(a: SplitOct, b: SplitOct) -> Number:
    """q(a, b) = Re(a b*) on the full algebra."""
    _same_model(a, b)
    return sum((s * x * y for s, x, y in zip(OCT_SIGNS, a.coords, b.coords)), a.coords[0] * 0)


def quad8(a: SplitOct) -> Number:
    return quad8_pair(a, a)


def quad_pair(a: ImVector, b: ImVector) -> Number:
    """
    Polarized quadratic form q(a, b) on Im(O').

    Args:
        a: First vector
        b: Second vector, same basis and scalar model

    Returns:
        q(a, b) in the common scalar model
    """
    _compatible(a, b)
    zero = a.coords[0] * 0
    if a.basis is BasisTag.M_IMAG:
        return sum((s * x * y for s, x, y in zip(IM_SIGNS, a.coords, b.coords)), zero)

    from .g2 import basis_gram

    gram = basis_gram(a.basis)
    total = zero
    for i, x in enumerate(a.coords):
        if x == 0:
            continue
        for j, y in enumerate(b.coords):
            if gram[i][j] != 0 and y != 0:
                total = total + coerce(gram[i][j], a.model) * x * y
    return total


def quad(a: ImVector) -> Number:
    return quad_pair(a, a)


def _cross_coords(x: Sequence, y: Sequence) -> Tuple:
    zero = x[0] * 0
    out = [zero] * 7
    for a, xa in enumerate(x):
        if xa == 0:
            continue
        for b, yb in enumerate(y):
            if yb == 0:
                continue
            idx, sign = MULT_TABLE[a + 1][b + 1]
            if idx != 0:
                out[idx - 1] = out[idx - 1] + sign * xa * yb
    return tuple(out)


def cross(u: ImVector, v: ImVector) -> ImVector:
    """Cross product u x v = Im(uv)."""
    _compatible(u, v)
    um, vm = _to_m(u), _to_m(v)
    result = ImVector(_cross_coords(um.coords, vm.coords), um.model)
    return _from_m(result, u.basis)


def triple_form(x: ImVector, y: ImVector, z: ImVector) -> Number:
    """3-form Ω(x, y, z) = q(x × y, z)."""
    _compatible(x, y, z)
    return quad_pair(cross(x, y), z)


def cross_matrix(u: ImVector) -> List[List[Number]]:
    """Matrix of C_u: v -> u × v, so that column b is u × e_b."""
    um = _to_m(u)
    zero = um.coords[0] * 0
    rows = [[zero] * 7 for _ in range(7)]
    for a, ua in enumerate(um.coords):
        if ua == 0:
            continue
        for b in range(7):
            idx, sign = MULT_TABLE[a + 1][b + 1]
            if idx != 0:
                rows[idx - 1][b] = rows[idx - 1][b] + sign * ua
    return rows


def annihilator(u: ImVector) -> List[ImVector]:
    """
    Basis of Ann(u) = ker C_u.

    Exact vectors get the exact kernel in reduced row-echelon order; float vectors use
    singular-value thresholding.

    Args:
        u: Nonzero vector

    Returns:
        Three null vectors when q(u) = 0, otherwise a single vector spanning ℝu
    """
    if u.is_zero():
        raise ZeroVectorError("annihilator of the zero vector")
    um = _to_m(u)
    matrix = cross_matrix(um)
    if um.model is ScalarModel.EXACT:
        kernel = [ImVector(vec, ScalarModel.EXACT) for vec in linalg.nullspace_exact(matrix)]
    else:
        kernel = [
            ImVector.from_array(row.real)
            for row in linalg.nullspace_float(np.array(matrix, dtype=float))
        ]
    return [_from_m(v, u.basis) for v in kernel]


# ---------------------------------------------------------------------------
# numpy routes (float or complex, batched over leading axes)
# ---------------------------------------------------------------------------


def cross_array(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Complex-bilinear cross product on arrays of M-basis coordinates."""
    return np.einsum("...a,...b,abc->...c", x, y, CROSS_TENSOR)


def quad_array(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Complex-bilinear q(x, y) (no conjugation) on arrays of M-basis coordinates."""
    return np.einsum("...a,a,...a->...", x, np.array(IM_SIGNS, dtype=float), y)


def cross_matrix_array(u: np.ndarray) -> np.ndarray:
    return np.einsum("a,abc->cb", u, CROSS_TENSOR)


# ---------------------------------------------------------------------------
# Random rational samples
# ---------------------------------------------------------------------------


def random_fraction(rng: np.random.Generator, bound: int = 9) -> Fraction:
    return Fraction(int(rng.integers(-bound, bound + 1)), int(rng.integers(1, bound + 1)))


def random_split_oct(rng: np.random.Generator, bound: int = 9) -> SplitOct:
    return SplitOct(tuple(random_fraction(rng, bound) for _ in range(8)))


def random_im_vector(rng: np.random.Generator, bound: int = 9) -> ImVector:
    return ImVector(tuple(random_fraction(rng, bound) for _ in range(7)))


def _rational_sphere_point(params: Sequence[Fraction]) -> List[Fraction]:
    # Inverse stereographic projection keeps rational points rational
    norm2 = sum(p * p for p in params)
    return [2 * p / (norm2 + 1) for p in params] + [(norm2 - 1) / (norm2 + 1)]


def random_null_vector(rng: np.random.Generator, bound: int = 9) -> ImVector:
    """Nonzero rational null vector: equal-length points on S² (i,j,k) and S³ (l,...,lk)."""
    positive = _rational_sphere_point([random_fraction(rng, bound) for _ in range(2)])
    negative = _rational_sphere_point([random_fraction(rng, bound) for _ in range(3)])
    scale = random_fraction(rng, bound)
    if scale == 0:
        scale = Fraction(1)
    return ImVector(tuple(scale * c for c in positive + negative))
