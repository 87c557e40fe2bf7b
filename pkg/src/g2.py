"""G2' group elements, binary forms with the invariant pairing, and basis identifications.

Sextics are identified with Im(O') monomial by monomial:

    X^{6-k} Y^k  <->  x_{3-k} / n_k,   n = (1, √6, √15, -√20, √15, √6, 1)

where x_3, ..., x_{-3} is the cross-product basis B' below. The identification is an isometry
between (Sym⁶ℝ², Q₆) and (Im(O'), q).
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import (
    DegenerateInputError,
    InvalidTripleError,
    UnsupportedBasisError,
)
from .octonion import (
    CROSS_TENSOR,
    IM_LABELS,
    IM_GRAM,
    IM_SIGNS,
    BasisTag,
    ImVector,
    Number,
    ScalarModel,
    coerce,
    cross,
    is_zero,
    quad,
    quad_pair,
)

SQRT2 = math.sqrt(2.0)

# ---------------------------------------------------------------------------
# Binary forms
# ---------------------------------------------------------------------------


def _coerce_coeff(value) -> Number:
    if isinstance(value, (float, np.floating)):
        return float(value)
    return coerce(value, ScalarModel.EXACT)


@dataclass(frozen=True)
class BinaryForm:
    """Real binary form; coeffs[k] multiplies X^{n-k} Y^k."""

    coeffs: Tuple[Number, ...]

    def __post_init__(self):
        if len(self.coeffs) == 0:
            raise ValueError("a binary form needs at least one coefficient")
        object.__setattr__(self, "coeffs", tuple(_coerce_coeff(c) for c in self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def model(self) -> ScalarModel:
        if any(isinstance(c, float) for c in self.coeffs):
            return ScalarModel.FLOAT
        return ScalarModel.EXACT

    def __add__(self, other: "BinaryForm") -> "BinaryForm":
        _same_degree(self, other)
        return binary_form(u + v for u, v in zip(self.coeffs, other.coeffs))

    def __sub__(self, other: "BinaryForm") -> "BinaryForm":
        _same_degree(self, other)
        return binary_form(u - v for u, v in zip(self.coeffs, other.coeffs))

    def __neg__(self) -> "BinaryForm":
        return binary_form(-u for u in self.coeffs)

    def scale(self, c) -> "BinaryForm":
        return binary_form(c * u for u in self.coeffs)

    def __mul__(self, other: "BinaryForm") -> "BinaryForm":
        out = [self.coeffs[0] * 0] * (self.degree + other.degree + 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return binary_form(out)

    def __pow__(self, n: int) -> "BinaryForm":
        result = binary_form([1])
        for _ in range(n):
            result = result * self
        return result

    def evaluate(self, x, y):
        n = self.degree
        return sum(c * x ** (n - k) * y**k for k, c in enumerate(self.coeffs))

    def substitute(self, a, b, c, d) -> "BinaryForm":
        """P(aX + cY, bX + dY)."""
        gx = binary_form([a, c])
        gy = binary_form([b, d])
        n = self.degree
        total = binary_form([0] * (n + 1))
        for k, coeff in enumerate(self.coeffs):
            if coeff == 0:
                continue
            total = total + ((gx ** (n - k)) * (gy**k)).scale(coeff)
        return total

    def is_zero(self, tol: float = 0.0) -> bool:
        return all(is_zero(c, tol) for c in self.coeffs)

    def to_array(self) -> np.ndarray:
        return np.array([float(c) for c in self.coeffs])

    def to_float(self) -> "BinaryForm":
        return binary_form(float(c) for c in self.coeffs)

    def canonical_sign(self) -> "BinaryForm":
        """Multiply by ±1 so the first nonzero coefficient is positive."""
        for c in self.coeffs:
            if c != 0:
                return self if c > 0 else -self
        return self


class Sextic(BinaryForm):
    """Element of Sym⁶ℝ² in the monomial basis (X⁶, X⁵Y, ..., Y⁶)."""

    def __post_init__(self):
        super().__post_init__()
        if len(self.coeffs) != 7:
            raise ValueError(f"a sextic has 7 coefficients, got {len(self.coeffs)}")

    def to_im(self) -> ImVector:
        """Same coordinates, tagged as a Sym⁶ vector."""
        return ImVector(self.coeffs, self.model, BasisTag.SYM6)

    @classmethod
    def from_im(cls, v: ImVector) -> "Sextic":
        if v.basis is not BasisTag.SYM6:
            v = basis_convert(v, v.basis, BasisTag.SYM6)
        return cls(v.coords)


def binary_form(coeffs) -> BinaryForm:
    coeffs = tuple(coeffs)
    if len(coeffs) == 7:
        return Sextic(coeffs)
    return BinaryForm(coeffs)


def monomial(n: int, k: int) -> BinaryForm:
    """X^{n-k} Y^k."""
    return binary_form(1 if m == k else 0 for m in range(n + 1))


X = binary_form([1, 0])
Y = binary_form([0, 1])


def _same_degree(a: BinaryForm, b: BinaryForm) -> None:
    if a.degree != b.degree:
        raise ValueError(f"degree mismatch: {a.degree} vs {b.degree}")


def qn_gram(n: int) -> List[List[Fraction]]:
    """Gram matrix of the invariant pairing on Symⁿ: entry (k, n-k) is (-1)^k / C(n, k)."""
    gram = [[Fraction(0)] * (n + 1) for _ in range(n + 1)]
    for k in range(n + 1):
        gram[k][n - k] = Fraction((-1) ** k, math.comb(n, k))
    return gram


def qn_pair(p: BinaryForm, r: BinaryForm) -> Number:
    """Invariant symmetric pairing Q_n(p, r) of two forms of the same even degree n."""
    _same_degree(p, r)
    n = p.degree
    total = p.coeffs[0] * 0
    for k in range(n + 1):
        a, b = p.coeffs[k], r.coeffs[n - k]
        if a != 0 and b != 0:
            w = Fraction((-1) ** k, math.comb(n, k))
            total = total + (a * b * w if isinstance(a * b, Fraction) else a * b * float(w))
    return total


def q6_pair(p: BinaryForm, r: BinaryForm) -> Number:
    if p.degree != 6 or r.degree != 6:
        raise ValueError("Q6 pairs sextics")
    return qn_pair(p, r)


def q6(p: BinaryForm) -> Number:
    return q6_pair(p, p)


def q2(p: BinaryForm) -> Number:
    if p.degree != 2:
        raise ValueError("Q2 pairs quadratics")
    return qn_pair(p, p)


# ---------------------------------------------------------------------------
# Moebius transformations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Moebius:
    """Element of PSL₂ℝ; (g) and (-g) are stored identically."""

    a: Number
    b: Number
    c: Number
    d: Number

    def __post_init__(self):
        entries = [_coerce_coeff(v) for v in (self.a, self.b, self.c, self.d)]
        det = entries[0] * entries[3] - entries[1] * entries[2]
        if not is_zero(det - 1, 1e-9):
            raise DegenerateInputError(f"Moebius determinant must be 1, got {det}")
        first = next(v for v in entries if v != 0)
        if first < 0:
            entries = [-v for v in entries]
        for name, value in zip("abcd", entries):
            object.__setattr__(self, name, value)

    @classmethod
    def rotation(cls, theta: float) -> "Moebius":
        ct, st = math.cos(theta), math.sin(theta)
        return cls(ct, -st, st, ct)

    @classmethod
    def torus(cls, lam) -> "Moebius":
        return cls(lam, 0, 0, 1 / _coerce_coeff(lam))

    @classmethod
    def unipotent(cls, s) -> "Moebius":
        return cls(1, s, 0, 1)

    @classmethod
    def random(cls, rng: np.random.Generator) -> "Moebius":
        """K A N product with moderate parameters."""
        k = cls.rotation(float(rng.uniform(0.0, 2 * math.pi)))
        a = cls.torus(float(np.exp(rng.uniform(-0.7, 0.7))))
        n = cls.unipotent(float(rng.uniform(-1.5, 1.5)))
        return k * a * n

    def __mul__(self, other: "Moebius") -> "Moebius":
        return Moebius(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def act(self, z: complex) -> complex:
        return (self.a * z + self.b) / (self.c * z + self.d)

    def act_form(self, p: BinaryForm) -> BinaryForm:
        """(g·P)(X, Y) = P(aX + cY, bX + dY)."""
        return p.substitute(self.a, self.b, self.c, self.d)


# ---------------------------------------------------------------------------
# Bases of Im(O')
# ---------------------------------------------------------------------------


def bprime_scaling() -> np.ndarray:
    """n_k with X^{6-k}Y^k <-> x_{3-k} / n_k."""
    return np.array(
        [1.0, math.sqrt(6), math.sqrt(15), -math.sqrt(20), math.sqrt(15), math.sqrt(6), 1.0]
    )


def _bprime_columns() -> np.ndarray:
    cols = np.zeros((7, 7))
    # Order (i, j, k, l, li, lj, lk)
    cols[:, 0] = [1, 0, 0, 0, 1, 0, 0]
    cols[:, 1] = [0, -1, 0, 0, 0, 1, 0]
    cols[:, 2] = [0, 0, 1, 0, 0, 0, -1]
    cols[:, 4] = [0, 0, 1, 0, 0, 0, 1]
    cols[:, 5] = [0, 1, 0, 0, 0, 1, 0]
    cols[:, 6] = [1, 0, 0, 0, -1, 0, 0]
    cols /= SQRT2
    cols[:, 3] = [0, 0, 0, 1, 0, 0, 0]
    return cols


def _baraglia_columns() -> np.ndarray:
    cols = np.zeros((7, 7), dtype=complex)
    cols[:, 0] = [0, 0, 0, 0, 0, -1, -1j]
    cols[:, 1] = [0, 1, 1j, 0, 0, 0, 0]
    cols[:, 2] = [0, 0, 0, 1, -1j, 0, 0]
    cols[:, 4] = [0, 0, 0, 1, 1j, 0, 0]
    cols[:, 5] = [0, 1, -1j, 0, 0, 0, 0]
    cols[:, 6] = [0, 0, 0, 0, 0, -1, 1j]
    cols /= SQRT2
    cols[:, 3] = [1, 0, 0, 0, 0, 0, 0]
    return cols


def basis_matrix(tag: BasisTag) -> np.ndarray:
    """
    Columns are the M-basis coordinates of the basis vectors of `tag`.

    Args:
        tag: Basis to describe

    Returns:
        7x7 float array (complex for the u-basis)
    """
    if tag is BasisTag.M_IMAG:
        return np.eye(7)
    if tag is BasisTag.BPRIME:
        return _bprime_columns()
    if tag is BasisTag.SYM6:
        return _bprime_columns() / bprime_scaling()
    if tag is BasisTag.BARAGLIA_U:
        return _baraglia_columns()
    raise UnsupportedBasisError(f"no basis matrix for {tag}")


def basis_gram(tag: BasisTag) -> List[List[Fraction]]:
    """Rational Gram matrix of q in the real bases."""
    if tag is BasisTag.M_IMAG:
        return [
            [Fraction(IM_SIGNS[i]) if i == j else Fraction(0) for j in range(7)] for i in range(7)
        ]
    if tag is BasisTag.SYM6:
        return qn_gram(6)
    if tag is BasisTag.BPRIME:
        return [
            [Fraction((-1) ** i) if i + j == 6 else Fraction(0) for j in range(7)]
            for i in range(7)
        ]
    raise UnsupportedBasisError(f"no real Gram matrix for {tag}")


VectorLike = Union[ImVector, BinaryForm, np.ndarray]


def basis_convert(
    v: VectorLike, source: BasisTag, target: BasisTag
) -> Union[ImVector, np.ndarray]:
    """
    Re-express a vector of Im(O') in another basis.

    ImVector and Sextic inputs come back as ImVector (float unless source == target);
    numpy inputs, and anything involving the complex u-basis, come back as arrays.

    Args:
        v: Vector, sextic (read as Sym⁶ coordinates) or coordinate array
        source: Basis the coordinates of v refer to
        target: Basis to convert to

    Returns:
        Converted vector
    """
    if isinstance(v, BinaryForm):
        if v.degree != 6:
            raise ValueError("only sextics convert to Im(O')")
        if source is not BasisTag.SYM6:
            raise UnsupportedBasisError("sextic coordinates are always Sym⁶ coordinates")
        v = v.to_im()
    if isinstance(v, ImVector) and v.basis is not source:
        raise UnsupportedBasisError(f"vector is tagged {v.basis.value}, not {source.value}")

    if isinstance(v, ImVector) and source is target:
        return v

    coords = v.to_array() if isinstance(v, ImVector) else np.asarray(v)
    m_coords = basis_matrix(source) @ coords
    out = np.linalg.solve(basis_matrix(target), m_coords)
    if isinstance(v, ImVector) and target is not BasisTag.BARAGLIA_U:
        return ImVector.from_array(out.real, target)
    return out


def im_from_sextic(p: BinaryForm) -> np.ndarray:
    """M-basis coordinates (float) of the Im(O') vector identified with a sextic."""
    return basis_matrix(BasisTag.SYM6) @ p.to_array()


def sextic_from_im(m_coords: np.ndarray) -> Sextic:
    return Sextic(tuple(np.linalg.solve(basis_matrix(BasisTag.SYM6), np.asarray(m_coords).real)))


# ---------------------------------------------------------------------------
# G2 matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class G2Matrix:
    """7x7 matrix of a cross-product preserving map, in a declared basis."""

    entries: np.ndarray
    model: ScalarModel = ScalarModel.FLOAT
    basis: BasisTag = BasisTag.M_IMAG

    def __post_init__(self):
        arr = np.asarray(self.entries)
        if arr.shape != (7, 7):
            raise ValueError(f"G2Matrix needs shape (7, 7), got {arr.shape}")
        if self.model is ScalarModel.EXACT:
            arr = np.array(
                [[coerce(x, ScalarModel.EXACT) for x in row] for row in arr], dtype=object
            )
        else:
            arr = arr.astype(float)
        object.__setattr__(self, "entries", arr)

    @classmethod
    def identity(cls, model: ScalarModel = ScalarModel.EXACT) -> "G2Matrix":
        rows = [[1 if a == b else 0 for b in range(7)] for a in range(7)]
        return cls(np.array(rows, dtype=object), model)

    def __matmul__(self, other: "G2Matrix") -> "G2Matrix":
        if self.basis is not other.basis:
            other = other.convert(self.basis)
        model = self.model if self.model is other.model else ScalarModel.FLOAT
        if model is ScalarModel.FLOAT:
            return G2Matrix(self.to_array() @ other.to_array(), model, self.basis)
        return G2Matrix(self.entries.dot(other.entries), model, self.basis)

    def apply(self, v: ImVector) -> ImVector:
        if v.basis is not self.basis:
            v = basis_convert(v, v.basis, self.basis)
        if self.model is ScalarModel.EXACT and v.model is ScalarModel.EXACT:
            image = self.entries.dot(np.array(v.coords, dtype=object))
            return ImVector(tuple(image), v.model, v.basis)
        return ImVector.from_array(self.to_array() @ v.to_array(), v.basis)

    def to_array(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.entries])

    def convert(self, target: BasisTag) -> "G2Matrix":
        if target is self.basis:
            return self
        src = basis_matrix(self.basis)
        dst = basis_matrix(target)
        mat = np.linalg.solve(dst, src @ self.to_array() @ np.linalg.solve(src, dst))
        return G2Matrix(mat.real, ScalarModel.FLOAT, target)

    def column(self, k: int) -> ImVector:
        return ImVector(tuple(self.entries[:, k]), self.model, self.basis)

    def det(self) -> Number:
        if self.model is ScalarModel.EXACT:
            from .linalg import to_fraction, to_sympy_matrix

            return to_fraction(to_sympy_matrix(self.entries.tolist()).det())
        return float(np.linalg.det(self.to_array()))


@dataclass
class G2Check:
    """Result of a G2 membership test."""

    ok: bool
    cross_residual: float
    quad_residual: float


def _check_triple(x: ImVector, y: ImVector, z: ImVector, tol: float) -> None:
    conditions = {
        "q(x) = 1": quad(x) - 1,
        "q(y) = 1": quad(y) - 1,
        "q(z) = -1": quad(z) + 1,
        "q(x, y) = 0": quad_pair(x, y),
        "q(x, z) = 0": quad_pair(x, z),
        "q(y, z) = 0": quad_pair(y, z),
        "q(z, x × y) = 0": quad_pair(z, cross(x, y)),
    }
    for name, residual in conditions.items():
        if not is_zero(residual, tol):
            raise InvalidTripleError(
                f"Stiefel condition {name} fails (residual {float(residual):.3g})"
            )


def stiefel_to_g2(x: ImVector, y: ImVector, z: ImVector, tol: float = 1e-10) -> G2Matrix:
    """
    G2' element sending (i, j, l) to (x, y, z).

    Args:
        x: Unit positive vector
        y: Unit positive vector orthogonal to x
        z: Unit negative vector orthogonal to x, y and x × y
        tol: Tolerance for float triples (exact triples are checked exactly)

    Returns:
        Matrix with columns (x, y, x×y, z, z×x, z×y, z×(x×y)) in the M basis
    """
    vectors = [
        v if v.basis is BasisTag.M_IMAG else basis_convert(v, v.basis, BasisTag.M_IMAG)
        for v in (x, y, z)
    ]
    x, y, z = vectors
    _check_triple(x, y, z, tol)
    xy = cross(x, y)
    columns = [x, y, xy, z, cross(z, x), cross(z, y), cross(z, xy)]
    entries = np.array([list(c.coords) for c in columns], dtype=object).T
    return G2Matrix(entries, x.model, BasisTag.M_IMAG)


def is_g2(m: G2Matrix, tol: float = 1e-10) -> G2Check:
    """
    Test cross-product and q preservation on all basis pairs.

    Args:
        m: Matrix in any real basis
        tol: Maximum residual allowed

    Returns:
        G2Check with the largest cross and q residuals
    """
    if m.basis is not BasisTag.M_IMAG:
        m = m.convert(BasisTag.M_IMAG)
    if m.model is ScalarModel.EXACT:
        cols = [m.column(k) for k in range(7)]
        cross_res = Fraction(0)
        for a in range(7):
            for b in range(a + 1, 7):
                e_cross = [int(CROSS_TENSOR[a, b, c]) for c in range(7)]
                terms = (cols[c].scale(e_cross[c]) for c in range(7) if e_cross[c])
                lhs = sum(terms, ImVector((0,) * 7))
                rhs = cross(cols[a], cols[b])
                cross_res = max([cross_res] + [abs(u - v) for u, v in zip(lhs.coords, rhs.coords)])
        quad_res = max(
            abs(quad_pair(cols[a], cols[b]) - (IM_SIGNS[a] if a == b else 0))
            for a in range(7)
            for b in range(7)
        )
        cross_res, quad_res = float(cross_res), float(quad_res)
    else:
        arr = m.to_array()
        image_of_cross = np.einsum("ck,abk->abc", arr, CROSS_TENSOR)
        cross_of_images = np.einsum("ia,jb,ijc->abc", arr, arr, CROSS_TENSOR)
        cross_res = float(np.max(np.abs(image_of_cross - cross_of_images)))
        quad_res = float(np.max(np.abs(arr.T @ IM_GRAM @ arr - IM_GRAM)))
    return G2Check(
        ok=max(cross_res, quad_res) <= tol, cross_residual=cross_res, quad_residual=quad_res
    )


def psl2_embed(g: Moebius) -> G2Matrix:
    """
    Matrix of the action of g on Sym⁶ℝ² in the monomial basis.

    Column k holds the coefficients of (aX + cY)^{6-k} (bX + dY)^k.
    """
    columns = [g.act_form(monomial(6, k)).coeffs for k in range(7)]
    exact = not any(isinstance(v, float) for v in (g.a, g.b, g.c, g.d))
    model = ScalarModel.EXACT if exact else ScalarModel.FLOAT
    entries = np.array(columns, dtype=object).T
    return G2Matrix(entries, model, BasisTag.SYM6)


def nilpotent_bprime() -> np.ndarray:
    """Generator of the unipotent subgroup in B' coordinates."""
    n = np.zeros((7, 7))
    for k, value in enumerate([6, 10, -12, -12, 10, 6]):
        n[k, k + 1] = math.copysign(math.sqrt(abs(value)), value)
    return n


def exp_nilpotent(s: float, generator: Optional[np.ndarray] = None) -> np.ndarray:
    """exp(s N) as the finite series sum_{k<7} (sN)^k / k!."""
    n = nilpotent_bprime() if generator is None else generator
    term = np.eye(7)
    total = np.eye(7)
    for k in range(1, 7):
        term = term @ (s * n) / k
        total = total + term
    return total


def torus_bprime(lam: float) -> np.ndarray:
    return np.diag([lam ** (6 - 2 * k) for k in range(7)])


def rotation_bprime() -> np.ndarray:
    """Antidiagonal ±1 image of the quarter turn."""
    r = np.zeros((7, 7))
    for k in range(7):
        r[6 - k, k] = (-1) ** k
    return r


def veronese_boundary(line: BinaryForm) -> Sextic:
    """[L] -> [L⁶] on ℝP¹."""
    if line.degree != 1:
        raise ValueError("boundary map takes a linear form")
    return line**6


# ---------------------------------------------------------------------------
# Rational sample elements
# ---------------------------------------------------------------------------

_PYTHAGOREAN = [
    (Fraction(3, 5), Fraction(4, 5)),
    (Fraction(5, 13), Fraction(12, 13)),
    (Fraction(8, 17), Fraction(15, 17)),
]
_HYPERBOLIC = [
    (Fraction(5, 4), Fraction(3, 4)),
    (Fraction(13, 12), Fraction(5, 12)),
    (Fraction(17, 15), Fraction(8, 15)),
]


def _im(*pairs: Tuple[str, Fraction]) -> ImVector:
    coords = [Fraction(0)] * 7
    for label, value in pairs:
        coords[IM_LABELS.index(label)] += value
    return ImVector(tuple(coords))


def elementary_triples() -> List[Tuple[ImVector, ImVector, ImVector]]:
    """Exact Stiefel triples: rotations in span(i, j), boosts in span(i, l) and span(j, lk)."""
    triples = []
    for cs, sn in _PYTHAGOREAN:
        for sign in (1, -1):
            triples.append(
                (_im(("i", cs), ("j", sign * sn)), _im(("i", -sign * sn), ("j", cs)), _im(("l", 1)))
            )
    for ch, sh in _HYPERBOLIC:
        for sign in (1, -1):
            triples.append(
                (_im(("i", ch), ("l", sign * sh)), _im(("j", 1)), _im(("i", sign * sh), ("l", ch)))
            )
            triples.append((_im(("i", 1)), _im(("j", ch), ("lk", sign * sh)), _im(("l", 1))))
    return triples


def random_g2_exact(rng: np.random.Generator, factors: int = 3) -> G2Matrix:
    """Product of `factors` exact elementary G2' elements."""
    triples = elementary_triples()
    m = G2Matrix.identity(ScalarModel.EXACT)
    for _ in range(factors):
        x, y, z = triples[int(rng.integers(len(triples)))]
        m = m @ stiefel_to_g2(x, y, z, tol=0.0)
    return m


def random_g2_float(rng: np.random.Generator) -> G2Matrix:
    """Float G2' element from continuous rotation and boost parameters."""
    m = np.eye(7)
    for _ in range(3):
        theta = rng.uniform(0, 2 * math.pi)
        t1, t2 = rng.uniform(-1.0, 1.0, size=2)
        rot = stiefel_to_g2(
            ImVector.from_array([math.cos(theta), math.sin(theta), 0, 0, 0, 0, 0]),
            ImVector.from_array([-math.sin(theta), math.cos(theta), 0, 0, 0, 0, 0]),
            ImVector.from_array([0, 0, 0, 1, 0, 0, 0]),
        )
        boost = stiefel_to_g2(
            ImVector.from_array([math.cosh(t1), 0, 0, math.sinh(t1), 0, 0, 0]),
            ImVector.from_array([0, 1, 0, 0, 0, 0, 0]),
            ImVector.from_array([math.sinh(t1), 0, 0, math.cosh(t1), 0, 0, 0]),
        )
        boost2 = stiefel_to_g2(
            ImVector.from_array([1, 0, 0, 0, 0, 0, 0]),
            ImVector.from_array([0, math.cosh(t2), 0, 0, 0, 0, math.sinh(t2)]),
            ImVector.from_array([0, 0, 0, 1, 0, 0, 0]),
        )
        m = m @ rot.to_array() @ boost.to_array() @ boost2.to_array()
    return G2Matrix(m)
