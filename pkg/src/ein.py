"""Null geometry of Ein^{2,3}: null lines and rays, annihilator planes, (3,2)-planes and
(S¹×S¹×ℝ₊)-families with their orthogonal splittings."""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import linalg
from .errors import DegenerateInputError, DomainError, NonNullError, ZeroVectorError
from .octonion import (
    IM_GRAM,
    BasisTag,
    ImVector,
    ScalarModel,
    annihilator,
    cross,
    cross_array,
    quad,
    quad_array,
    quad_pair,
)

NULL_TOL = 1e-12
EXACT_IM_GRAM = [[Fraction(int(v)) for v in row] for row in IM_GRAM]


def _m_vector(v: ImVector) -> ImVector:
    if v.basis is BasisTag.M_IMAG:
        return v
    from .g2 import basis_convert

    return basis_convert(v, v.basis, BasisTag.M_IMAG)


def _null_residual(v: ImVector) -> float:
    """|q(v)| relative to the Euclidean norm² of the coordinates."""
    norm2 = float(sum(float(c) ** 2 for c in v.coords))
    return abs(float(quad(v))) / norm2


def _check_null(v: ImVector, tol: float) -> None:
    if v.is_zero():
        raise ZeroVectorError("null lines need a nonzero representative")
    if v.model is ScalarModel.EXACT:
        if quad(v) != 0:
            raise NonNullError(f"q(v) = {quad(v)} is not zero")
    elif _null_residual(v) > tol:
        raise NonNullError(f"|q(v)| / |v|² = {_null_residual(v):.3g} exceeds {tol:g}")


@dataclass(frozen=True)
class NullLine:
    """Point of Ein^{2,3}; the representative has its largest-magnitude coordinate equal to +1."""

    rep: ImVector
    tol: float = field(default=NULL_TOL, compare=False)

    def __post_init__(self):
        _check_null(self.rep, self.tol)
        coords = self.rep.coords
        # First index of maximal magnitude
        pivot = max(range(7), key=lambda n: (abs(coords[n]), -n))
        object.__setattr__(self, "rep", self.rep.scale(1 / coords[pivot]))

    def to_array(self) -> np.ndarray:
        return self.rep.to_array()

    def same_as(self, other: "NullLine", tol: float = 1e-9) -> bool:
        if self.rep.model is ScalarModel.EXACT and other.rep.model is ScalarModel.EXACT:
            return self.rep == other.rep
        return bool(np.max(np.abs(self.to_array() - other.to_array())) <= tol)


@dataclass(frozen=True)
class NullRay:
    """Point of the double cover of Ein^{2,3}; representative scaled positively to sup-norm 1."""

    rep: ImVector
    tol: float = field(default=NULL_TOL, compare=False)

    def __post_init__(self):
        _check_null(self.rep, self.tol)
        sup = max(abs(c) for c in self.rep.coords)
        object.__setattr__(self, "rep", self.rep.scale(1 / sup))

    def line(self) -> NullLine:
        return NullLine(self.rep, self.tol)

    def to_array(self) -> np.ndarray:
        return self.rep.to_array()


# ---------------------------------------------------------------------------
# Transversality and annihilators
# ---------------------------------------------------------------------------


def transverse(l1: NullLine, l2: NullLine, tol: float = 1e-12) -> bool:
    """ℓ₁ ⊕ ℓ₂ has signature (1,1) iff the representatives pair nontrivially."""
    pairing = quad_pair(_m_vector(l1.rep), _m_vector(l2.rep))
    if isinstance(pairing, Fraction):
        return pairing != 0
    return abs(pairing) > tol


def ann_plane(line: NullLine) -> List[ImVector]:
    """Basis of Ann(ℓ), a 3-dimensional totally null subspace."""
    basis = annihilator(_m_vector(line.rep))
    if len(basis) != 3:
        raise DegenerateInputError(f"annihilator of a null line has dimension {len(basis)}")
    return basis


def _rows(vectors: Sequence[ImVector]):
    if all(v.model is ScalarModel.EXACT for v in vectors):
        return [list(v.coords) for v in vectors], True
    return np.array([v.to_array() for v in vectors]), False


def _rank(vectors: Sequence[ImVector]) -> int:
    rows, exact = _rows(vectors)
    return linalg.rank_exact(rows) if exact else linalg.rank_float(rows, 1e-9)


def distribution_at(line: NullLine) -> List[ImVector]:
    """
    The (2,3,5)-distribution at ℓ, represented as two vectors of Ann(ℓ) independent mod ℓ.

    Args:
        line: Point of Ein^{2,3}

    Returns:
        Two vectors spanning a complement of ℓ inside Ann(ℓ)
    """
    rep = _m_vector(line.rep)
    chosen: List[ImVector] = []
    for v in ann_plane(line):
        if _rank([rep] + chosen + [v]) == len(chosen) + 2:
            chosen.append(v)
        if len(chosen) == 2:
            break
    return chosen


def annihilators_transverse(l1: NullLine, l2: NullLine) -> bool:
    """Ann(ℓ₁) ∩ Ann(ℓ₂) = 0 (equivalent to transversality of ℓ₁ and ℓ₂)."""
    return _rank(ann_plane(l1) + ann_plane(l2)) == 6


def signature(vectors: Sequence[ImVector]) -> Tuple[int, int, int]:
    """Signature of q restricted to the span of `vectors` (M basis)."""
    vectors = [_m_vector(v) for v in vectors]
    rows, exact = _rows(vectors)
    if exact:
        pos, neg, zero = linalg.signature_exact(linalg.gram_exact(rows, EXACT_IM_GRAM))
    else:
        pos, neg, zero = linalg.signature_float(rows @ IM_GRAM @ rows.T)
    # Null directions coming from dependent spanning vectors are not part of the signature
    dependent = len(vectors) - _rank(vectors)
    return (pos, neg, zero - dependent)


def is_cross_trivial_isotropic(plane: Sequence[ImVector]) -> bool:
    """Totally null 2-plane whose cross products vanish (the planes of the (2,3,5) picture)."""
    a, b = (_m_vector(v) for v in plane)
    if _rank([a, b]) != 2:
        return False
    forms = [quad(a), quad(b), quad_pair(a, b)]
    if a.model is ScalarModel.EXACT:
        return all(f == 0 for f in forms) and cross(a, b).is_zero()
    return all(abs(f) < 1e-10 for f in forms) and cross(a, b).is_zero(1e-10)


def full_flag(x3: ImVector, x2: ImVector) -> List[int]:
    """
    Dimensions of [x₃] ⊂ ⟨x₃,x₂⟩ ⊂ Ann(x₃) ⊂ Ann(x₃)^⊥ ⊂ ⟨x₃,x₂⟩^⊥ ⊂ x₃^⊥.

    Returns:
        List of the six dimensions (1, 2, 3, 4, 5, 6 for a genuine flag)
    """
    x3, x2 = _m_vector(x3), _m_vector(x2)
    ann = annihilator(x3)
    if x3.model is ScalarModel.EXACT:
        gram = EXACT_IM_GRAM
        ann_rows = [list(v.coords) for v in ann]
        dims = [
            1,
            linalg.rank_exact([x3.coords, x2.coords]),
            linalg.rank_exact(ann_rows),
            len(linalg.orthogonal_complement_exact(ann_rows, gram)),
            len(linalg.orthogonal_complement_exact([x3.coords, x2.coords], gram)),
            len(linalg.orthogonal_complement_exact([x3.coords], gram)),
        ]
    else:
        ann_rows = np.array([v.to_array() for v in ann])
        pair = np.array([x3.to_array(), x2.to_array()])
        dims = [
            1,
            linalg.rank_float(pair),
            linalg.rank_float(ann_rows),
            linalg.orthogonal_complement_float(ann_rows, IM_GRAM).shape[0],
            linalg.orthogonal_complement_float(pair, IM_GRAM).shape[0],
            linalg.orthogonal_complement_float(x3.to_array(), IM_GRAM).shape[0],
        ]
    return dims


def negative_to_positive(u: ImVector, v: ImVector, w: ImVector) -> Tuple[ImVector, ...]:
    """V(-,-,+) -> V(+,+,-): (u, v, w) -> (u × v, w, u)."""
    return (cross(u, v), w, u)


# ---------------------------------------------------------------------------
# (3,2)-planes
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class OsculatingPlane:
    """5-dimensional subspace of signature (3,2), stored as float M-basis rows."""

    basis: np.ndarray

    def __post_init__(self):
        rows = np.atleast_2d(np.asarray(self.basis, dtype=float))
        if rows.shape != (5, 7):
            raise DegenerateInputError(f"need 5 spanning vectors, got shape {rows.shape}")
        sig = linalg.signature_float(rows @ IM_GRAM @ rows.T)
        if sig != (3, 2, 0):
            raise DegenerateInputError(f"plane has signature {sig}, expected (3, 2)")
        object.__setattr__(self, "basis", rows)

    @classmethod
    def from_vectors(cls, vectors: Sequence[ImVector]) -> "OsculatingPlane":
        return cls(np.array([_m_vector(v).to_array() for v in vectors]))

    @classmethod
    def from_spanning_set(cls, points: np.ndarray, rel_tol: float = 1e-8) -> "OsculatingPlane":
        """Orthonormal (Euclidean) basis of the span of many sample vectors."""
        _, s, vh = np.linalg.svd(np.atleast_2d(points))
        rank = int(np.sum(s > rel_tol * s[0]))
        if rank != 5:
            raise DegenerateInputError(f"sample points span a {rank}-dimensional space")
        return cls(vh[:5])

    def complement(self) -> np.ndarray:
        return linalg.orthogonal_complement_float(self.basis, IM_GRAM)


def recover_line(plane: OsculatingPlane, rel_tol: float = 1e-10) -> ImVector:
    """
    The unique positive line ℓ ⊂ U with ℓ × U ⊂ U.

    Solves for coefficients c with v = Σ c_j u_j and q(v × u_i, w) = 0 for every basis vector
    u_i of U and w of U^⊥.

    Args:
        plane: (3,2)-plane
        rel_tol: Singular-value threshold for the kernel

    Returns:
        Representative of ℓ scaled to q = +1
    """
    u = plane.basis
    w = plane.complement()
    products = cross_array(u[:, None, :], u[None, :, :])  # [j, i] -> u_j × u_i
    system = np.einsum("jic,c,mc->imj", products, np.diag(IM_GRAM), w).reshape(-1, 5)
    kernel = linalg.nullspace_float(system, rel_tol)
    if kernel.shape[0] != 1:
        raise DegenerateInputError(f"closure kernel has dimension {kernel.shape[0]}, expected 1")
    v = kernel[0].real @ u
    norm = float(quad_array(v, v))
    if norm <= 0:
        raise DegenerateInputError(f"recovered line has q = {norm:.3g}, expected positive")
    return ImVector.from_array(v / math.sqrt(norm))


# ---------------------------------------------------------------------------
# (S¹×S¹×ℝ₊)-families
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class RTFamily:
    """
    Family S(ℓ, T, N) of null lines [x̂ + √(r²+1) u + r v], u ∈ Q₋(T), v ∈ Q₊(N).

    T and N are stored as q-orthonormal ordered bases (rows) in M coordinates.
    """

    xhat: np.ndarray
    T: np.ndarray
    N: np.ndarray
    tol: float = field(default=1e-9, compare=False)

    def __post_init__(self):
        xhat = np.asarray(self.xhat, dtype=float)
        T = _gram_schmidt(np.asarray(self.T, dtype=float), sign=-1.0)
        N = _gram_schmidt(np.asarray(self.N, dtype=float), sign=1.0)
        object.__setattr__(self, "xhat", xhat)
        object.__setattr__(self, "T", T)
        object.__setattr__(self, "N", N)
        self._validate()

    def _validate(self) -> None:
        if abs(quad_array(self.xhat, self.xhat) - 1.0) > self.tol:
            raise DegenerateInputError("x̂ must satisfy q(x̂) = 1")
        frame = np.vstack([self.xhat[None, :], self.T, self.N])
        gram = frame @ IM_GRAM @ frame.T
        if np.max(np.abs(gram - np.diag([1.0, -1.0, -1.0, 1.0, 1.0]))) > self.tol:
            raise DegenerateInputError("x̂, T, N are not mutually q-orthogonal")
        for plane, name in ((self.T, "T"), (self.N, "N")):
            images = cross_array(self.xhat[None, :], plane)
            coeffs = np.linalg.lstsq(plane.T, images.T, rcond=None)[0]
            if np.max(np.abs(plane.T @ coeffs - images.T)) > self.tol:
                raise DegenerateInputError(f"x̂ × {name} is not contained in {name}")

    @classmethod
    def from_vectors(cls, xhat: ImVector, T: Sequence[ImVector], N: Sequence[ImVector]):
        return cls(
            _m_vector(xhat).to_array(),
            np.array([_m_vector(v).to_array() for v in T]),
            np.array([_m_vector(v).to_array() for v in N]),
        )

    def u_T(self, theta: float) -> np.ndarray:
        return math.cos(theta) * self.T[0] + math.sin(theta) * self.T[1]

    def v_N(self, alpha: float) -> np.ndarray:
        return math.cos(alpha) * self.N[0] + math.sin(alpha) * self.N[1]

    def span(self) -> np.ndarray:
        return np.vstack([self.xhat[None, :], self.T, self.N])

    def projections(self, v: np.ndarray) -> Tuple[float, np.ndarray, np.ndarray, np.ndarray]:
        """(ℓ-coefficient, T-coefficients, N-coefficients, residual outside U)."""
        a = float(quad_array(v, self.xhat))
        t = -np.array([quad_array(v, e) for e in self.T])
        n = np.array([quad_array(v, e) for e in self.N])
        residual = v - a * self.xhat - t @ self.T - n @ self.N
        return a, t, n, residual


def _gram_schmidt(rows: np.ndarray, sign: float) -> np.ndarray:
    """q-orthonormalize a definite 2-plane basis; q(e) = sign on the output."""
    e0 = rows[0] / math.sqrt(sign * quad_array(rows[0], rows[0]))
    second = rows[1] - sign * quad_array(rows[1], e0) * e0
    norm2 = sign * quad_array(second, second)
    if norm2 <= 0:
        raise DegenerateInputError("plane is not definite of the expected sign")
    return np.vstack([e0, second / math.sqrt(norm2)])


def model_family() -> RTFamily:
    """x̂ = i, T = span(l, li), N = span(j, k)."""
    e = np.eye(7)
    return RTFamily(e[0], np.vstack([e[3], e[4]]), np.vstack([e[1], e[2]]))


def family_point(family: RTFamily, theta: float, alpha: float, r: float) -> NullRay:
    """[x̂ + √(r²+1) u_T(θ) + r v_N(α)]."""
    if r <= 0:
        raise DomainError(f"family radius must be positive, got {r}")
    v = family.xhat + math.sqrt(r * r + 1.0) * family.u_T(theta) + r * family.v_N(alpha)
    return NullRay(ImVector.from_array(v), tol=1e-10)


def family_membership(family: RTFamily, line: NullLine, tol: float = 1e-9) -> bool:
    """ℓ ∈ ℙQ₀(U) with nonzero projections onto ℓ, T and N."""
    v = _m_vector(line.rep).to_array()
    a, t, n, residual = family.projections(v)
    scale = float(np.max(np.abs(v)))
    if np.max(np.abs(residual)) > tol * scale or abs(quad_array(v, v)) > tol * scale**2:
        return False
    nonzero = [abs(a), float(np.linalg.norm(t)), float(np.linalg.norm(n))]
    return all(p > tol * scale for p in nonzero)


# ---------------------------------------------------------------------------
# Uniqueness of the orthogonal splitting
# ---------------------------------------------------------------------------


def mixed_family(family: RTFamily, c1: float, beta: float = 0.0, gamma: float = 0.0) -> RTFamily:
    """
    Another splitting ℓ ⊕ T' ⊕ N' of the same U, with x̂ × T' = T' and x̂ × N' = N'.

    With v_T = u_T(β), v_N = v_N(γ) and c₂ = √(1 + c₁²):
    N' = span(v, x̂ × v) for v = c₁ v_T + c₂ v_N, and T' = span(u, x̂ × u) for
    u = c₂ v_T + c₁ v_N.
    """
    v_t, v_n = family.u_T(beta), family.v_N(gamma)
    c2 = math.sqrt(1.0 + c1 * c1)
    v = c1 * v_t + c2 * v_n
    u = c2 * v_t + c1 * v_n
    x = family.xhat[None, :]
    T = np.vstack([u, cross_array(x, u[None, :])[0]])
    N = np.vstack([v, cross_array(x, v[None, :])[0]])
    return RTFamily(family.xhat, T, N, tol=family.tol)


@dataclass
class SplittingWitness:
    """Point of S(ℓ, T', N') whose N-projection in S(ℓ, T, N) vanishes."""

    c1: float
    beta: float
    gamma: float
    point: np.ndarray
    in_mixed_family: bool
    in_original_family: bool


@dataclass
class UniqueSplittingReport:
    """Outcome of verify_unique_splitting."""

    trials: int
    witnesses: List[SplittingWitness]
    no_witness_cases: int

    @property
    def all_found(self) -> bool:
        return self.no_witness_cases == 0


def splitting_witness(
    family: RTFamily, c1: float, beta: float = 0.0, gamma: float = 0.0
) -> Optional[SplittingWitness]:
    """
    Witness that S(ℓ, T', N') ≠ S(ℓ, T, N), or None when the splittings agree (c₁ = 0).

    The point p = [x̂ + √(t²+1) u - t v] with t = c₁ has no N-component.
    """
    if abs(c1) < 1e-12:
        return None
    mixed = mixed_family(family, c1, beta, gamma)
    # -t v with t = c₁ is |c₁| times -sign(c₁) v
    alpha = math.pi if c1 > 0 else 0.0
    point = family_point(mixed, 0.0, alpha, abs(c1))
    line = point.line()
    return SplittingWitness(
        c1=c1,
        beta=beta,
        gamma=gamma,
        point=point.to_array(),
        in_mixed_family=family_membership(mixed, line),
        in_original_family=family_membership(family, line),
    )


def verify_unique_splitting(
    family: RTFamily,
    trials: int,
    rng: Optional[np.random.Generator] = None,
    mixes: Optional[Sequence[float]] = None,
) -> UniqueSplittingReport:
    """
    Exhibit, for each alternative splitting, a point of the new family outside the old one.

    Args:
        family: Base family S(ℓ, T, N)
        trials: Number of random mixes (ignored when `mixes` is given)
        rng: Generator for mixes and basis rotations
        mixes: Explicit c₁ values

    Returns:
        Report listing witnesses; a mix of 0 reproduces the family and yields no witness
    """
    rng = rng if rng is not None else np.random.default_rng(0)
    if mixes is None:
        mixes = [float(rng.uniform(0.05, 3.0) * rng.choice([-1.0, 1.0])) for _ in range(trials)]
    witnesses = []
    missing = 0
    for c1 in mixes:
        beta, gamma = rng.uniform(0.0, 2 * math.pi, size=2)
        witness = splitting_witness(family, c1, float(beta), float(gamma))
        if witness is None or witness.in_original_family or not witness.in_mixed_family:
            missing += 1
        if witness is not None:
            witnesses.append(witness)
    return UniqueSplittingReport(trials=len(mixes), witnesses=witnesses, no_witness_cases=missing)
