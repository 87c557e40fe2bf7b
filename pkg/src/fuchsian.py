"""The G2'-Fuchsian almost-complex curve: the Veronese cube of the hyperbolic-plane map into
Sym²ℝ², its Frenet frame, the developing map over it, and the root-pattern analysis of null
sextics.

Points of H² are z = x + iy with y > 0. The curve is f̂(z) = c·ĝ(z)³ with

    ĝ(z) = (zX + Y)(z̄X + Y) / (√2 y),    Q₂(ĝ) = 1,

and c fixed by Q₆(f̂) = 1. Frames and developed points are float; osculating intersections,
the degenerate-set polynomial and root patterns of rational sextics are exact.
"""

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import reduce
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
import sympy
from scipy import optimize

from . import linalg
from .ein import NullLine, RTFamily, ann_plane, family_membership
from .errors import DegenerateInputError, DomainError, G2EinError, NonNullError, ZeroVectorError
from .g2 import (
    X,
    Y,
    BinaryForm,
    Sextic,
    basis_matrix,
    binary_form,
    monomial,
    q2,
    q6,
    q6_pair,
    qn_gram,
    veronese_boundary,
)
from .octonion import (
    IM_GRAM,
    BasisTag,
    ImVector,
    Number,
    ScalarModel,
    coerce,
    cross_array,
    quad_array,
)

SQRT2 = math.sqrt(2.0)

# Monomial coordinates -> M coordinates
SYM6_TO_M = basis_matrix(BasisTag.SYM6)
Q6_GRAM = np.array(qn_gram(6), dtype=float)
Q6_GRAM_EXACT = qn_gram(6)

# Q₆((X²+Y²)³) = 16/5 and ĝ(i)³ = (X²+Y²)³ / (2√2)
VERONESE_CONSTANT = 2 * SQRT2 / math.sqrt(float(q6((X**2 + Y**2) ** 3)))

# Frenet frame order (f, t1, t2, n1, n2, b1, b2) and the sign of q on each vector
FRAME_SIGNS = np.array([1.0, -1.0, -1.0, 1.0, 1.0, -1.0, -1.0])

FD_STEP = 1e-5
IMMERSION_TOL = 1e-6
RANK_DROP_TOL = 1e-8

# ĝ and its derivatives are quadratics
Quadratic = BinaryForm


# ---------------------------------------------------------------------------
# Points of H²
# ---------------------------------------------------------------------------


def _scalar(value) -> Number:
    if isinstance(value, (float, np.floating)):
        return float(value)
    return coerce(value, ScalarModel.EXACT)


@dataclass(frozen=True)
class HPoint:
    """z = x + iy in the upper half-plane."""

    x: Number
    y: Number

    def __post_init__(self):
        x, y = _scalar(self.x), _scalar(self.y)
        if y <= 0:
            raise DomainError(f"points of H² need y > 0, got y = {y}")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def exact(self) -> bool:
        return isinstance(self.x, Fraction) and isinstance(self.y, Fraction)

    @property
    def z(self) -> complex:
        return complex(float(self.x), float(self.y))

    @classmethod
    def from_complex(cls, z: complex) -> "HPoint":
        return cls(float(z.real), float(z.imag))

    @classmethod
    def random(cls, rng: np.random.Generator, spread: float = 0.7) -> "HPoint":
        return cls(float(rng.uniform(-1.0, 1.0)), float(np.exp(rng.uniform(-spread, spread))))

    @classmethod
    def random_rational(cls, rng: np.random.Generator, bound: int = 9) -> "HPoint":
        x = Fraction(int(rng.integers(-bound, bound + 1)), int(rng.integers(1, bound + 1)))
        y = Fraction(int(rng.integers(1, bound + 1)), int(rng.integers(1, bound + 1)))
        return cls(x, y)

    def as_float(self) -> "HPoint":
        return HPoint(float(self.x), float(self.y))


# ---------------------------------------------------------------------------
# ĝ and its derivatives
# ---------------------------------------------------------------------------


_PX, _PY = sympy.symbols("x y", real=True)
# √2·ĝ(z) has Laurent coefficients in (x, y, 1/y)
_ROOT2_G = ((_PX**2 + _PY**2) / _PY, 2 * _PX / _PY, 1 / _PY)
JET_ORDERS = ((0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2))
_JET = tuple(
    tuple(sympy.diff(c, (_PX, nx), (_PY, ny)) for c in _ROOT2_G) for nx, ny in JET_ORDERS
)
_JET_NUMERIC = sympy.lambdify((_PX, _PY), _JET, "math")


def g_jet_exact(p: HPoint) -> Tuple[Tuple[Fraction, ...], ...]:
    """√2 times the jet of ĝ at a rational point, in (X², XY, Y²) coefficients."""
    if not p.exact:
        raise DomainError("the exact jet needs a rational point")
    at = {_PX: linalg.to_rational(p.x), _PY: linalg.to_rational(p.y)}
    return tuple(
        tuple(Fraction(int(v.p), int(v.q)) for v in (sympy.Rational(c.subs(at)) for c in row))
        for row in _JET
    )


def g_jet(p: HPoint) -> Tuple[np.ndarray, ...]:
    """
    Coefficient arrays of ĝ, ĝ_x, ĝ_y, ĝ_xx, ĝ_xy, ĝ_yy in (X², XY, Y²).

    The partials are taken symbolically on the Laurent coefficients of √2·ĝ; the 1/√2 is
    applied last, in floats.
    """
    rows = _JET_NUMERIC(float(p.x), float(p.y))
    return tuple(np.array(row, dtype=float) / SQRT2 for row in rows)


def g_hat(p: HPoint) -> Quadratic:
    """ĝ(z) = (|z|²X² + 2xXY + Y²) / (√2 y)."""
    return binary_form(g_jet(p)[0])


def g_x(p: HPoint) -> Quadratic:
    return binary_form(g_jet(p)[1])


def g_y(p: HPoint) -> Quadratic:
    return binary_form(g_jet(p)[2])


def g_rational(p: HPoint) -> Quadratic:
    """Positive multiple √2 y·ĝ(z) = |z|²X² + 2xXY + Y², exact for rational points."""
    return binary_form([p.x * p.x + p.y * p.y, 2 * p.x, 1])


def _mul(*factors: np.ndarray) -> np.ndarray:
    return reduce(np.convolve, factors)


def f_hat(p: HPoint) -> Sextic:
    g = g_jet(p)[0]
    return Sextic(tuple(VERONESE_CONSTANT * _mul(g, g, g)))


# ---------------------------------------------------------------------------
# Frenet frame
# ---------------------------------------------------------------------------


def _q(a: np.ndarray, b: np.ndarray) -> float:
    return float(a @ Q6_GRAM @ b)


def _unit(v: np.ndarray, sign: float) -> np.ndarray:
    norm2 = sign * _q(v, v)
    if norm2 <= 0:
        raise DegenerateInputError(f"expected q of sign {sign:+.0f}, got {_q(v, v):.3g}")
    return v / math.sqrt(norm2)


def _project_out(v: np.ndarray, frame: Sequence[Tuple[np.ndarray, float]]) -> np.ndarray:
    for e, sign in frame:
        v = v - sign * _q(v, e) * e
    return v


def _orthonormal(
    generators: Sequence[np.ndarray], sign: float, against: Sequence[Tuple[np.ndarray, float]]
) -> List[np.ndarray]:
    out: List[np.ndarray] = []
    for v in generators:
        e = _unit(_project_out(v, list(against) + [(w, sign) for w in out]), sign)
        out.append(e)
    return out


@dataclass(frozen=True, eq=False)
class FrenetFrame:
    """
    q-orthonormal frame 𝓛 ⊕ T ⊕ N ⊕ B of Sym⁶ℝ² along f̂ at one point.

    Tb = (f̂_x, f̂_y) normalized; Nb = (II(∂x,∂x), II(∂x,∂y)) normalized; Bb spans the
    binormal plane. ii_xx, ii_xy, ii_yy keep the unnormalized second fundamental form.
    """

    point: HPoint
    f: Sextic
    Tb: Tuple[Sextic, Sextic]
    Nb: Tuple[Sextic, Sextic]
    Bb: Tuple[Sextic, Sextic]
    ii_xx: Sextic
    ii_xy: Sextic
    ii_yy: Sextic

    def rows(self) -> np.ndarray:
        """7x7 array of monomial coordinates in the order (f, t1, t2, n1, n2, b1, b2)."""
        vectors = (self.f,) + self.Tb + self.Nb + self.Bb
        return np.array([v.to_array() for v in vectors])

    def m_rows(self) -> np.ndarray:
        return self.rows() @ SYM6_TO_M.T

    def coordinates(self, v: np.ndarray) -> np.ndarray:
        """Coefficients of a monomial-coordinate vector in the frame."""
        return FRAME_SIGNS * (self.rows() @ Q6_GRAM @ np.asarray(v, dtype=float))

    def tangent(self, theta: float) -> np.ndarray:
        t = self.rows()
        return math.cos(theta) * t[1] + math.sin(theta) * t[2]

    def normal(self, phi: float) -> np.ndarray:
        n = self.rows()
        return math.cos(phi) * n[3] + math.sin(phi) * n[4]

    def family(self) -> RTFamily:
        """The (S¹×S¹×ℝ₊)-family S(𝓛, T, N) carried by this frame."""
        m = self.m_rows()
        return RTFamily(m[0], m[1:3], m[3:5])


def frenet(p: HPoint) -> FrenetFrame:
    """
    Frenet frame of f̂ at p.

    𝓛 = ⟨ĝ³⟩, T = ⟨ĝ²ĝ_x, ĝ²ĝ_y⟩, N = ⟨ĝĝ_xĝ_y, ĝĝ_x²⟩ mod 𝓛 ⊕ T and
    B = ⟨ĝ_x²ĝ_y, ĝ_y²ĝ_x⟩ mod 𝓛 ⊕ T ⊕ N.
    """
    g, gx, gy, gxx, gxy, gyy = g_jet(p)
    c = VERONESE_CONSTANT
    f = c * _mul(g, g, g)
    t1 = _unit(_mul(g, g, gx), -1.0)
    t2 = _unit(_mul(g, g, gy), -1.0)
    osc = [(f, 1.0), (t1, -1.0), (t2, -1.0)]
    normal_basis = _orthonormal([_mul(g, gx, gy), _mul(g, gx, gx)], 1.0, osc)

    def second_form(first: np.ndarray, mixed: np.ndarray) -> np.ndarray:
        # f̂_ab = 3c(2ĝĝ_aĝ_b + ĝ²ĝ_ab), projected onto N
        full = 3 * c * (2 * _mul(g, *first) + _mul(g, g, mixed))
        return sum(_q(full, e) * e for e in normal_basis)

    ii_xx = second_form((gx, gx), gxx)
    ii_xy = second_form((gx, gy), gxy)
    ii_yy = second_form((gy, gy), gyy)
    n1, n2 = _unit(ii_xx, 1.0), _unit(ii_xy, 1.0)
    b1, b2 = _orthonormal(
        [_mul(gx, gx, gy), _mul(gy, gy, gx)], -1.0, osc + [(n1, 1.0), (n2, 1.0)]
    )
    return FrenetFrame(
        point=p,
        f=Sextic(tuple(f)),
        Tb=(Sextic(tuple(t1)), Sextic(tuple(t2))),
        Nb=(Sextic(tuple(n1)), Sextic(tuple(n2))),
        Bb=(Sextic(tuple(b1)), Sextic(tuple(b2))),
        ii_xx=Sextic(tuple(ii_xx)),
        ii_xy=Sextic(tuple(ii_xy)),
        ii_yy=Sextic(tuple(ii_yy)),
    )


def j_invariance_residual(frame: FrenetFrame) -> float:
    """
    max |f̂ × II(∂x,∂x) - s·II(∂x,∂y)| where s = ±1 is fixed by f̂ × t1 = s·t2.

    J(∂x) = s·∂y, so this is II(JX, X) = f̂ × II(X, X) at X = ∂x.
    """
    m = frame.m_rows()
    f = m[0]
    s = -float(quad_array(cross_array(f, m[1]), m[2]))
    ii_xx = SYM6_TO_M @ frame.ii_xx.to_array()
    ii_xy = SYM6_TO_M @ frame.ii_xy.to_array()
    return float(np.max(np.abs(cross_array(f, ii_xx) - s * ii_xy)))


# ---------------------------------------------------------------------------
# Developing map
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DevPoint:
    """Point (p, θ, α, r) of UTH² ⊕ UTH² ⊕ ℝ₊; the radial coordinate is g_R(p, r) = r."""

    p: HPoint
    theta: float
    alpha: float
    r: float

    def __post_init__(self):
        if not self.r > 0:
            raise DomainError(f"radial coordinate must be positive, got {self.r}")

    def params(self) -> np.ndarray:
        return np.array([float(self.p.x), float(self.p.y), self.theta, self.alpha, self.r])


def _dev_lift_sym(frame: FrenetFrame, theta: float, alpha: float, r: float) -> np.ndarray:
    rows = frame.rows()
    return rows[0] + math.sqrt(r * r + 1.0) * frame.tangent(theta) + r * frame.normal(theta + alpha)


def dev_lift(d: DevPoint) -> np.ndarray:
    """M coordinates of f̂ + √(r²+1)·T(θ) + r·N(θ+α), N(θ+α) ∝ II(u(θ), u(α))."""
    return SYM6_TO_M @ _dev_lift_sym(frenet(d.p), d.theta, d.alpha, d.r)


def dev(d: DevPoint) -> NullLine:
    return NullLine(ImVector.from_array(dev_lift(d)))


def _chart_singular_values(
    lift: Callable[[np.ndarray], np.ndarray], params: np.ndarray, h: float = FD_STEP
) -> np.ndarray:
    """
    Singular values of the derivative of [lift] in an orthonormal chart of Ein^{2,3}.

    The chart at [v₀] is the affine slice ⟨v, v₀⟩ = 1 with tangent space
    v₀^⊥ ∩ (q-orthogonal of v₀); derivatives use the five-point central stencil.
    """
    base = lift(params)
    base = base / np.linalg.norm(base)
    chart = linalg.nullspace_float(np.vstack([base, IM_GRAM @ base]))
    if chart.shape[0] != 5:
        raise DegenerateInputError("lift is not a nonzero null vector")

    def normalized(values: np.ndarray) -> np.ndarray:
        v = lift(values)
        return v / float(v @ base)

    jac = np.zeros((5, len(params)))
    for k in range(len(params)):
        step = np.zeros(len(params))
        step[k] = h
        deriv = (
            -normalized(params + 2 * step)
            + 8 * normalized(params + step)
            - 8 * normalized(params - step)
            + normalized(params - 2 * step)
        ) / (12 * h)
        jac[:, k] = chart.real @ deriv
    return np.linalg.svd(jac, compute_uv=False)


def dev_rank(d: DevPoint, h: float = FD_STEP) -> float:
    """Smallest singular value of the 5x5 chart Jacobian of dev in (x, y, θ, α, r)."""

    def lift(values: np.ndarray) -> np.ndarray:
        x, y, theta, alpha, r = values
        return SYM6_TO_M @ _dev_lift_sym(frenet(HPoint(float(x), float(y))), theta, alpha, r)

    return float(_chart_singular_values(lift, d.params(), h)[-1])


def angle_vector(theta: float) -> Tuple[float, float]:
    return (math.cos(theta), math.sin(theta))


def sigma_zero(p: HPoint, theta: float) -> NullLine:
    """[f̂ + T(θ)]: the fiber circle ℙQ₀(𝓛 ⊕ T) reached as r → 0."""
    frame = frenet(p)
    return NullLine(ImVector.from_array(SYM6_TO_M @ (frame.rows()[0] + frame.tangent(theta))))


def sigma_infinity(p: HPoint, u: Sequence[float], n: Sequence[float]) -> NullLine:
    """
    [u + n] with u = u₀t1 + u₁t2 ∈ Q₋(T) and n = n₀n1 + n₁n2 ∈ Q₊(N), the r → ∞ limit.

    (u, n) and (-u, -n) give the same line, so the fiber torus covers ℙQ₀(T ⊕ N) twice.
    In angles, n = N(θ + α) and (θ, α) ~ (θ + π, α).
    """
    rows = frenet(p).rows()
    lift = u[0] * rows[1] + u[1] * rows[2] + n[0] * rows[3] + n[1] * rows[4]
    return NullLine(ImVector.from_array(SYM6_TO_M @ lift))


def _extended_lift_sym(frame: FrenetFrame, a: float, b: float, theta: float) -> np.ndarray:
    rest = 1.0 - a * a - b * b
    if rest < 0:
        raise DomainError(f"need a² + b² <= 1, got {a * a + b * b}")
    rows = frame.rows()
    return math.sqrt(rest) * rows[0] + a * rows[3] + b * rows[4] + frame.tangent(theta)


def extended_point(p: HPoint, a: float, b: float, theta: float) -> NullLine:
    """[√(1-a²-b²) f̂ + a n1 + b n2 + T(θ)]; a = b = 0 is the Π_N = 0 locus."""
    return NullLine(ImVector.from_array(SYM6_TO_M @ _extended_lift_sym(frenet(p), a, b, theta)))


def extended_rank(p: HPoint, a: float, b: float, theta: float, h: float = FD_STEP) -> np.ndarray:
    """Chart singular values of extended_point in (x, y, a, b, θ), largest first."""

    def lift(values: np.ndarray) -> np.ndarray:
        x, y, a_, b_, t = values
        return SYM6_TO_M @ _extended_lift_sym(frenet(HPoint(float(x), float(y))), a_, b_, t)

    params = np.array([float(p.x), float(p.y), a, b, theta])
    return _chart_singular_values(lift, params, h)


# ---------------------------------------------------------------------------
# Fiber inversion
# ---------------------------------------------------------------------------


class FiberStatus(str, Enum):
    REGULAR = "regular"
    OUTSIDE = "outside"  # not in U_p = 𝓛 ⊕ T ⊕ N
    PI_L_ZERO = "pi_l_zero"  # in ℙQ₀(T ⊕ N), the r → ∞ boundary
    PI_N_ZERO = "pi_n_zero"  # in ℙQ₀(𝓛 ⊕ T), the r → 0 boundary
    NOT_NULL = "not_null"  # in U_p but off the quadric


@dataclass
class FiberInversion:
    """(θ, α, r) with dev(p, θ, α, r) = [P], or the reason none exists."""

    status: FiberStatus
    theta: Optional[float] = None
    alpha: Optional[float] = None
    r: Optional[float] = None
    residual: float = 0.0

    def dev_point(self, p: HPoint) -> DevPoint:
        if self.status is not FiberStatus.REGULAR:
            raise DegenerateInputError(f"no fiber point: {self.status.value}")
        return DevPoint(p, self.theta, self.alpha, self.r)


def _sym_coords(P) -> np.ndarray:
    if isinstance(P, BinaryForm):
        return P.to_array()
    return np.asarray(P, dtype=float)


def _as_sextic(P) -> Sextic:
    if isinstance(P, Sextic):
        return P
    if isinstance(P, BinaryForm):
        return Sextic(tuple(P.coeffs))
    return Sextic(tuple(float(c) for c in np.asarray(P, dtype=float)))


def invert_fiber(p: HPoint, P, tol: float = 1e-6, frame: Optional[FrenetFrame] = None):
    """
    Locate [P] in the developed fiber over p.

    Args:
        p: Base point
        P: Null sextic (or its monomial coordinates)
        tol: Relative threshold on frame coefficients and on |q(P)| / |P|²
        frame: Precomputed frenet(p)

    Returns:
        FiberInversion; status REGULAR carries θ ∈ (-π, π], α ∈ [0, 2π), r > 0 and a
        residual at most tol
    """
    frame = frame if frame is not None else frenet(p)
    c = frame.coordinates(_sym_coords(P))
    scale = float(np.linalg.norm(c))
    if scale == 0:
        raise ZeroVectorError("cannot invert the zero sextic")
    outside = float(np.linalg.norm(c[5:])) / scale
    if outside > tol:
        return FiberInversion(FiberStatus.OUTSIDE, residual=outside)
    if abs(c[0]) <= tol * scale:
        return FiberInversion(FiberStatus.PI_L_ZERO, residual=outside)
    if float(np.linalg.norm(c[3:5])) <= tol * scale:
        return FiberInversion(FiberStatus.PI_N_ZERO, residual=outside)
    c = c / c[0]
    r = float(np.linalg.norm(c[3:5]))
    t2 = float(c[1] ** 2 + c[2] ** 2)
    # Null vectors have |T-part|² = r² + 1
    residual = max(outside, abs(1.0 + r * r - t2) / (1.0 + r * r + t2))
    if residual > tol:
        return FiberInversion(FiberStatus.NOT_NULL, residual=residual)
    theta = math.atan2(c[2], c[1])
    phi = math.atan2(c[4], c[3])
    alpha = (phi - theta) % (2 * math.pi)
    return FiberInversion(FiberStatus.REGULAR, theta, alpha, r, residual)


def _finite_roots(coeffs: np.ndarray, lead_tol: float = 1e-14) -> Tuple[int, np.ndarray]:
    """Roots of P(x, 1) and the multiplicity of the root [1:0]."""
    scale = float(np.max(np.abs(coeffs)))
    at_infinity = 0
    while at_infinity < len(coeffs) - 1 and abs(coeffs[at_infinity]) <= lead_tol * scale:
        at_infinity += 1
    return at_infinity, np.roots(coeffs[at_infinity:])


def _unit_vector(v: np.ndarray) -> np.ndarray:
    norm = float(np.linalg.norm(v))
    if norm == 0:
        raise ZeroVectorError("cannot normalize the zero vector")
    return v / norm


def projective_gap(a: np.ndarray, b: np.ndarray) -> float:
    """Distance between the lines [a] and [b]: min |â ∓ b̂| over unit representatives."""
    a, b = _unit_vector(np.asarray(a, dtype=float)), _unit_vector(np.asarray(b, dtype=float))
    return float(min(np.linalg.norm(a - b), np.linalg.norm(a + b)))


@dataclass
class Preimage:
    p: HPoint
    inversion: FiberInversion


def _pair_base_points(P: BinaryForm, cluster_tol: float = 1e-8) -> List[HPoint]:
    """
    Base points z = -1/ρ for the simple roots ρ of P(x, 1) in the upper half-plane.

    These are the p with ĝ(p) | P and ĝ(p)² ∤ P. Rational input takes the roots of the
    multiplicity-one squarefree factor; float input clusters companion-matrix roots.
    """
    roots: List[complex] = []
    if P.model is ScalarModel.EXACT:
        xs, ys, factors = _sqf_factors(P)
        for factor, mult in factors:
            affine = sympy.Poly(factor.as_expr().subs(ys, 1), xs)
            if mult == 1 and affine.degree() > 0:
                roots.extend(complex(rho) for rho in affine.nroots(n=30))
        return [HPoint.from_complex(-1.0 / rho) for rho in roots if rho.imag > 0]
    coeffs = P.to_array()
    at_infinity, raw = _finite_roots(coeffs)
    affine = coeffs[at_infinity:]
    slope = np.polyder(affine)
    for center, mult in _cluster(list(raw), cluster_tol):
        if mult != 1 or center.imag <= cluster_tol * max(1.0, abs(center)):
            continue
        rho = center
        for _ in range(3):
            d = np.polyval(slope, rho)
            if d == 0:
                break
            rho = rho - np.polyval(affine, rho) / d
        roots.append(rho)
    return [HPoint.from_complex(-1.0 / rho) for rho in roots]


def root_preimages(P, tol: float = 1e-6, cluster_tol: float = 1e-8) -> List[Preimage]:
    """
    Preimages of [P] from the roots of P: each base point with ĝ(p) | P, ĝ(p)² ∤ P is
    inverted in its fiber and kept when the developed point matches [P] within tol.
    """
    form = _as_sextic(P)
    coeffs = form.to_array()
    target = SYM6_TO_M @ coeffs
    found = []
    for p in _pair_base_points(form, cluster_tol):
        inversion = invert_fiber(p, coeffs, tol)
        if inversion.status is not FiberStatus.REGULAR:
            continue
        if projective_gap(dev_lift(inversion.dev_point(p)), target) <= tol:
            found.append(Preimage(p, inversion))
    return found


# Dense search: hyperbolic radii and angles of the base grid around i, fiber samples
ORACLE_RADII = tuple(float(rho) for rho in np.linspace(0.5, 7.0, 14))
ORACLE_ANGLES = 16
FIBER_ANGLES = np.linspace(0.0, 2 * math.pi, 16, endpoint=False)
FIBER_RADII = np.geomspace(0.05, 20.0, 10)
ORACLE_SEEDS = 12
ORACLE_MAX_EVALS = 600


def oracle_grid() -> List[List[HPoint]]:
    """Rings of base points at the ORACLE_RADII hyperbolic distances from i."""
    rings = []
    for rho in ORACLE_RADII:
        radius = math.tanh(rho / 2)
        ring = []
        for k in range(ORACLE_ANGLES):
            w = radius * cmath.exp(2j * math.pi * k / ORACLE_ANGLES)
            ring.append(HPoint.from_complex(1j * (1 + w) / (1 - w)))
        rings.append(ring)
    return rings


def fiber_scan(frame: FrenetFrame, target: np.ndarray) -> Tuple[float, np.ndarray]:
    """
    Closest sampled fiber point over frame.point to the line [target] (M coordinates).

    Returns the projective gap and its (θ, α, r).
    """
    rows = frame.m_rows()
    unit = _unit_vector(target)
    th = FIBER_ANGLES[:, None, None]
    al = FIBER_ANGLES[None, :, None]
    r = FIBER_RADII[None, None, :]
    tangent = np.cos(th)[..., None] * rows[1] + np.sin(th)[..., None] * rows[2]
    normal = np.cos(th + al)[..., None] * rows[3] + np.sin(th + al)[..., None] * rows[4]
    lifts = rows[0] + np.sqrt(r * r + 1.0)[..., None] * tangent + r[..., None] * normal
    lifts = lifts / np.linalg.norm(lifts, axis=-1, keepdims=True)
    gaps = np.minimum(
        np.linalg.norm(lifts - unit, axis=-1), np.linalg.norm(lifts + unit, axis=-1)
    )
    k = np.unravel_index(int(np.argmin(gaps)), gaps.shape)
    fiber = np.array([FIBER_ANGLES[k[0]], FIBER_ANGLES[k[1]], FIBER_RADII[k[2]]])
    return float(gaps[k]), fiber


def _refine(p: HPoint, fiber: np.ndarray, target: np.ndarray) -> Tuple[DevPoint, float]:
    """Least-squares polish of (x, log y, θ, α, log r) against the line [target]."""
    unit = _unit_vector(target)
    miss = np.full(7, 2.0)

    def residual(params: np.ndarray) -> np.ndarray:
        x, log_y, theta, alpha, log_r = params
        try:
            point = HPoint(float(x), math.exp(min(log_y, 30.0)))
            with np.errstate(all="ignore"):
                frame = frenet(point)
            lift = SYM6_TO_M @ _dev_lift_sym(frame, theta, alpha, math.exp(min(log_r, 30.0)))
        except (G2EinError, ArithmeticError):
            return miss
        norm = float(np.linalg.norm(lift))
        if not math.isfinite(norm) or norm == 0:
            return miss
        u = lift / norm
        return u - unit if float(u @ unit) >= 0 else u + unit

    start = np.array([float(p.x), math.log(float(p.y)), fiber[0], fiber[1], math.log(fiber[2])])
    fit = optimize.least_squares(
        residual,
        start,
        method="lm",
        xtol=1e-15,
        ftol=1e-15,
        gtol=1e-15,
        max_nfev=ORACLE_MAX_EVALS,
    )
    x, log_y, theta, alpha, log_r = fit.x
    if max(abs(log_y), abs(log_r)) >= 30.0:
        return DevPoint(p, fiber[0], fiber[1], fiber[2]), math.inf
    point = DevPoint(HPoint(float(x), math.exp(log_y)), theta, alpha, math.exp(log_r))
    return point, projective_gap(dev_lift(point), target)


def _grid_seeds(rings: List[List[HPoint]], target: np.ndarray):
    center = HPoint(0.0, 1.0)
    seeds = [(*fiber_scan(frenet(center), target), center)]
    gaps = np.zeros((len(rings), ORACLE_ANGLES))
    fibers = {}
    for i, ring in enumerate(rings):
        for j, p in enumerate(ring):
            gaps[i, j], fibers[i, j] = fiber_scan(frenet(p), target)
    for i in range(len(rings)):
        for j in range(ORACLE_ANGLES):
            neighbors = [
                gaps[a, b % ORACLE_ANGLES]
                for a in (i - 1, i, i + 1)
                for b in (j - 1, j, j + 1)
                if 0 <= a < len(rings) and (a, b) != (i, j)
            ]
            if gaps[i, j] <= min(neighbors):
                seeds.append((gaps[i, j], fibers[i, j], rings[i][j]))
    seeds.sort(key=lambda seed: seed[0])
    return seeds[:ORACLE_SEEDS]


def brute_force_preimages(P, tol: float = 1e-6) -> List[Preimage]:
    """
    All (p, θ, α, r) developing onto [P], found without using the roots of P.

    Fibers over a grid of base points are sampled densely in (θ, α, r); local minima of
    the sampled distance to [P] seed a least-squares polish in all five parameters, and
    a polished point counts when it develops onto [P] within tol and inverts to a
    regular fiber point. Base points closer than √tol are merged.
    """
    coeffs = _sym_coords(P)
    if not np.any(coeffs):
        raise ZeroVectorError("the zero sextic has no preimages")
    target = SYM6_TO_M @ coeffs
    found: List[Preimage] = []
    for _, fiber, p in _grid_seeds(oracle_grid(), target):
        point, gap = _refine(p, fiber, target)
        if gap > tol:
            continue
        z = point.p.z
        merge = [abs(z - seen.p.z) <= math.sqrt(tol) * max(1.0, abs(seen.p.z)) for seen in found]
        if any(merge):
            continue
        inversion = invert_fiber(point.p, coeffs, tol)
        if inversion.status is FiberStatus.REGULAR:
            found.append(Preimage(point.p, inversion))
    return found


# ---------------------------------------------------------------------------
# Osculating 5-planes and their intersections
# ---------------------------------------------------------------------------


def osculating_basis_exact(p: HPoint) -> List[Sextic]:
    """Basis of U_p = {P : ĝ(p) | P}: ĝ(p)·X^{4-k}Y^k."""
    if not p.exact:
        raise DomainError("exact osculating planes need a rational point")
    g = g_rational(p)
    return [g * monomial(4, k) for k in range(5)]


def divides(divisor: BinaryForm, P: BinaryForm) -> bool:
    """Exact divisibility of rational binary forms."""
    xs, ys = sympy.symbols("X Y")

    def expr(form: BinaryForm):
        n = form.degree
        return sum(linalg.to_rational(c) * xs ** (n - k) * ys**k for k, c in enumerate(form.coeffs))

    _, remainder = sympy.div(expr(P), expr(divisor), xs, ys)
    return sympy.expand(remainder) == 0


@dataclass
class IntersectionReport:
    dimension: int
    signature: Tuple[int, int]
    basis: list
    exact: bool


def osculating_intersect(p: HPoint, q: HPoint) -> IntersectionReport:
    """
    dim and signature of U_p ∩ U_q.

    Rational points use exact divisibility bases; otherwise the float Frenet frames.
    """
    if p.exact and q.exact:
        rows_p = [list(s.coeffs) for s in osculating_basis_exact(p)]
        rows_q = [list(s.coeffs) for s in osculating_basis_exact(q)]
        basis = linalg.intersect_exact(rows_p, rows_q)
        pos, neg, _ = linalg.signature_exact(linalg.gram_exact(basis, Q6_GRAM_EXACT))
        return IntersectionReport(len(basis), (pos, neg), [Sextic(v) for v in basis], True)
    basis = linalg.intersect_float(frenet(p).rows()[:5], frenet(q).rows()[:5], 1e-9)
    if basis.shape[0] == 0:
        return IntersectionReport(0, (0, 0), [], False)
    pos, neg, _ = linalg.signature_float(basis @ Q6_GRAM @ basis.T)
    return IntersectionReport(basis.shape[0], (pos, neg), [Sextic(tuple(v)) for v in basis], False)


# ---------------------------------------------------------------------------
# Degenerate set of two fibers
# ---------------------------------------------------------------------------


def q6_w_closed_form(t: Number) -> Number:
    t2 = t * t
    poly = 3 - 24 * t2 - 86 * t2**2 - 24 * t2**3 + 3 * t2**4
    if isinstance(t, Fraction):
        return Fraction(4, 15) * poly
    return 4.0 / 15.0 * poly


def _count_from_sign(value: Number, tol: float = 0.0) -> int:
    if abs(value) <= tol:
        return 1
    return 2 if value > 0 else 0


@dataclass
class DegenerateSetReport:
    """ℙQ₀(W_{1,t}) for W_{1,t} = (T_i ⊕ N_i) ∩ U_{it}, spanned by u and w."""

    t: Number
    q6_direct: Number
    q6_closed: Number
    agrees: bool
    orthogonal: bool
    u_timelike: bool
    count: int


def fiber_degenerate_set(t, tol: float = 1e-9) -> DegenerateSetReport:
    """
    Q₆(w) for w = P₁P_t((3+t²)X² - (1+3t²)Y²), P₁ = X²+Y², P_t = t²X²+Y².

    The null-line count of W_{1,t} follows the sign of Q₆(w): positive 2, zero 1,
    negative 0. Exact when t is rational.
    """
    t = _scalar(t)
    if t <= 0:
        raise DomainError(f"t must be positive, got {t}")
    if t == 1:
        raise DegenerateInputError("t = 1 is the same base point")
    t2 = t * t
    base = (X**2 + Y**2) * binary_form([t2, 0, 1])
    w = base * binary_form([3 + t2, 0, -(1 + 3 * t2)])
    u = base * binary_form([0, 1, 0])
    direct = q6(w)
    closed = q6_w_closed_form(t)
    if isinstance(t, Fraction):
        agrees = direct == closed
        orthogonal = q6_pair(w, u) == 0
        count = _count_from_sign(direct)
    else:
        scale = max(1.0, abs(closed))
        agrees = abs(direct - closed) <= tol * scale
        orthogonal = abs(q6_pair(w, u)) <= tol * scale
        count = _count_from_sign(direct, tol * scale)
    return DegenerateSetReport(t, direct, closed, agrees, orthogonal, q6(u) < 0, count)


def _null_line_count(basis: np.ndarray, tol: float) -> int:
    """Number of null lines in a subspace of dimension <= 2."""
    dim = basis.shape[0]
    if dim == 0:
        return 0
    gram = basis @ Q6_GRAM @ basis.T
    if dim == 1:
        return 1 if abs(gram[0, 0]) <= tol * float(basis[0] @ basis[0]) else 0
    if dim == 2:
        pos, neg, zero = linalg.signature_float(gram, tol)
        if zero == 2:
            raise DegenerateInputError("totally null plane has infinitely many null lines")
        if zero == 1:
            return 1
        return 2 if pos == neg == 1 else 0
    raise DegenerateInputError(f"intersection of dimension {dim} is not a finite set")


@dataclass
class DegenerateSetCount:
    """Null lines in the four pieces of the degenerate set D of two fibers."""

    lt_p_in_q: int
    lt_q_in_p: int
    tn_p_in_q: int
    tn_q_in_p: int

    @property
    def total(self) -> int:
        return self.lt_p_in_q + self.lt_q_in_p + self.tn_p_in_q + self.tn_q_in_p


def degenerate_set(p: HPoint, q: HPoint, tol: float = 1e-8) -> DegenerateSetCount:
    """
    Count ℙQ₀((𝓛_p ⊕ T_p) ∩ U_q), ℙQ₀((T_p ⊕ N_p) ∩ U_q) and the same with p, q swapped,
    from the float frames.
    """
    rows_p, rows_q = frenet(p).rows(), frenet(q).rows()

    def piece(sub: np.ndarray, osc: np.ndarray) -> int:
        return _null_line_count(linalg.intersect_float(sub, osc, 1e-9), tol)

    return DegenerateSetCount(
        lt_p_in_q=piece(rows_p[:3], rows_q[:5]),
        lt_q_in_p=piece(rows_q[:3], rows_p[:5]),
        tn_p_in_q=piece(rows_p[1:5], rows_q[:5]),
        tn_q_in_p=piece(rows_q[1:5], rows_p[:5]),
    )


# ---------------------------------------------------------------------------
# Root patterns of sextics
# ---------------------------------------------------------------------------

# Representatives of the five PSL₂ℝ-orbits of sextics with a real root of multiplicity >= 4
K_REPRESENTATIVES = (
    X**6,
    X**5 * Y,
    X**4 * Y**2,
    X**4 * Y * (X - Y),
    X**4 * (X**2 + Y**2),
)

_K_PATTERNS = {
    ((6,), ()): 1,
    ((5, 1), ()): 2,
    ((4, 2), ()): 3,
    ((4, 1, 1), ()): 4,
    ((4,), (1,)): 5,
}


@dataclass
class RootPattern:
    """Multiplicities of the distinct real roots and of the distinct complex-conjugate pairs."""

    real: Tuple[int, ...]
    complex_pairs: Tuple[int, ...]


def _sqf_factors(P: BinaryForm):
    """Squarefree factors of a rational form, with multiplicities, as polynomials in X, Y."""
    xs, ys = sympy.symbols("X Y")
    n = P.degree
    expr = sum(linalg.to_rational(c) * xs ** (n - k) * ys**k for k, c in enumerate(P.coeffs))
    _, factors = sympy.Poly(expr, xs, ys).sqf_list()
    return xs, ys, factors


def _pattern_exact(P: BinaryForm) -> RootPattern:
    xs, ys, factors = _sqf_factors(P)
    real: List[int] = []
    pairs: List[int] = []
    for factor, mult in factors:
        degree = factor.total_degree()
        affine = sympy.Poly(factor.as_expr().subs(ys, 1), xs)
        finite = affine.degree()
        finite_real = affine.count_roots() if finite > 0 else 0
        # Lost degree is the root [1:0]
        real.extend([mult] * (degree - finite + finite_real))
        pairs.extend([mult] * ((finite - finite_real) // 2))
    return RootPattern(tuple(sorted(real, reverse=True)), tuple(sorted(pairs, reverse=True)))


def _cluster(values: Sequence[complex], tol: float) -> List[Tuple[complex, int]]:
    clusters: List[List[complex]] = []
    for v in sorted(values, key=lambda c: (c.real, c.imag)):
        for cluster in clusters:
            if abs(v - cluster[0]) <= tol * max(1.0, abs(cluster[0])):
                cluster.append(v)
                break
        else:
            clusters.append([v])
    return [(complex(np.mean(c)), len(c)) for c in clusters]


def _pattern_float(P: BinaryForm, cluster_tol: float) -> RootPattern:
    at_infinity, roots = _finite_roots(P.to_array())
    real = [at_infinity] if at_infinity else []
    pairs = []
    for center, mult in _cluster(list(roots), cluster_tol):
        if abs(center.imag) <= cluster_tol * max(1.0, abs(center)):
            real.append(mult)
        elif center.imag > 0:
            pairs.append(mult)
    return RootPattern(tuple(sorted(real, reverse=True)), tuple(sorted(pairs, reverse=True)))


def root_pattern(P: BinaryForm, cluster_tol: float = 1e-8) -> RootPattern:
    """
    Root multiplicities of a binary form on ℝP¹ and ℂP¹ \\ ℝP¹.

    Rational input: squarefree decomposition and Sturm counts, exact. Float input:
    companion-matrix roots clustered at cluster_tol (multiple roots scatter like eps^{1/m}).
    """
    if P.is_zero():
        raise ZeroVectorError("the zero form has no roots")
    if P.model is ScalarModel.EXACT:
        return _pattern_exact(P)
    return _pattern_float(P, cluster_tol)


@dataclass
class SexticClass:
    """Classification record of a sextic; gw_member marks the complement K of the GW domain."""

    is_null: bool
    gw_member: bool
    k_stratum: Optional[int]
    omega_sector: Optional[int]
    predicted_preimages: int
    pattern: RootPattern


def sextic_classify(P: BinaryForm, cluster_tol: float = 1e-8) -> SexticClass:
    """
    Root-pattern classification of a nonzero sextic.

    gw_member: some real root has multiplicity >= 4 (then Q₆(P) = 0 automatically).
    k_stratum: which of the five K representatives shares the pattern.
    omega_sector: number of complex pairs when all roots are simple.
    predicted_preimages: number of complex pairs of multiplicity one, i.e. base points p with
    ĝ(p) | P and ĝ(p)² ∤ P, less those where Π_𝓛(P) = 0 (there [P] lies on the r → ∞
    boundary of the fiber, outside the image). Generically this gives 1 for QR⁴,
    2 for Q₁Q₂R₁R₂, 3 for Q₁Q₂Q₃ and 0 without irreducible quadratic factors.
    """
    if not isinstance(P, Sextic):
        P = Sextic(tuple(P.coeffs))
    pattern = root_pattern(P, cluster_tol)
    value = q6(P)
    if P.model is ScalarModel.EXACT:
        is_null = value == 0
    else:
        is_null = abs(value) <= 1e-9 * float(np.max(np.abs(P.to_array()))) ** 2
    gw_member = any(m >= 4 for m in pattern.real)
    k_stratum = _K_PATTERNS.get((pattern.real, pattern.complex_pairs)) if gw_member else None
    simple = all(m == 1 for m in pattern.real + pattern.complex_pairs)
    omega_sector = len(pattern.complex_pairs) if simple else None
    coeffs = P.to_array()
    preimages = sum(
        1
        for p in _pair_base_points(P, cluster_tol)
        if invert_fiber(p, coeffs).status is not FiberStatus.PI_L_ZERO
    )
    return SexticClass(is_null, gw_member, k_stratum, omega_sector, preimages, pattern)


def random_null_sextic(rng: np.random.Generator, bound: int = 5) -> Sextic:
    """
    Rational null sextic: second intersection of the quadric with the line from a boundary
    point L⁶ in a random rational direction v, i.e. 2Q₆(L⁶, v)·v - Q₆(v)·L⁶.
    """
    while True:
        line = binary_form(
            [int(rng.integers(-bound, bound + 1)), int(rng.integers(1, bound + 1))]
        )
        anchor = veronese_boundary(line)
        v = Sextic(tuple(Fraction(int(rng.integers(-bound, bound + 1))) for _ in range(7)))
        pairing = q6_pair(anchor, v)
        if pairing != 0:
            return v.scale(2 * pairing) - anchor.scale(q6(v))


# ---------------------------------------------------------------------------
# The K₅ certificate and the boundary
# ---------------------------------------------------------------------------


@dataclass
class K5Certificate:
    """(X²+Y²)Y⁴ as a combination of 𝓛, T and N generators at z = i."""

    target: Sextic
    generators: Tuple[Sextic, Sextic, Sextic]
    coefficients: Tuple[Fraction, Fraction, Fraction]
    residual: Sextic
    in_family: bool

    @property
    def exact(self) -> bool:
        return self.residual.is_zero()


def k5_witness() -> K5Certificate:
    """
    Solve (X²+Y²)Y⁴ = c₁(X²+Y²)³ + c₂(X⁶+X⁴Y²-X²Y⁴-Y⁶) + c₃(X⁶-5X⁴Y²-5X²Y⁴+Y⁶) exactly
    and test the line against the fiber family over i.
    """
    p1 = X**2 + Y**2
    target = p1 * Y**4
    generators = (
        p1**3,
        p1**2 * (X**2 - Y**2),
        binary_form([1, 0, -5, 0, -5, 0, 1]),
    )
    matrix = sympy.Matrix(
        [[linalg.to_rational(g.coeffs[k]) for g in generators] for k in range(7)]
    )
    rhs = sympy.Matrix([linalg.to_rational(c) for c in target.coeffs])
    solution, _ = matrix.gauss_jordan_solve(rhs)
    coefficients = tuple(linalg.to_fraction(v) for v in solution)
    combination = reduce(
        lambda a, b: a + b, (g.scale(c) for g, c in zip(generators, coefficients))
    )
    residual = target - combination
    family = frenet(HPoint(0.0, 1.0)).family()
    line = NullLine(ImVector.from_array(SYM6_TO_M @ target.to_array()))
    return K5Certificate(
        target, generators, coefficients, residual, family_membership(family, line)
    )


def boundary_transverse(l1: BinaryForm, l2: BinaryForm) -> bool:
    """[L₁⁶] and [L₂⁶] are transverse iff Q₆(L₁⁶, L₂⁶) ≠ 0 iff [L₁] ≠ [L₂]."""
    value = q6_pair(veronese_boundary(l1), veronese_boundary(l2))
    return value != 0 if isinstance(value, Fraction) else abs(value) > 1e-12


def boundary_annihilator(line: BinaryForm, rel_tol: float = 1e-8) -> bool:
    """Ann([L⁶]) = {L⁴Q : Q ∈ Sym²ℝ²}, compared numerically in M coordinates."""
    sextic = veronese_boundary(line)
    null = NullLine(ImVector.from_array(SYM6_TO_M @ sextic.to_array()))
    ann = np.array([v.to_array() for v in ann_plane(null)])
    l4 = line**4
    expected = np.array([SYM6_TO_M @ (l4 * monomial(2, k)).to_array() for k in range(3)])
    return linalg.same_span_float(ann, expected, rel_tol)


def gw_trivialization(square: BinaryForm, abc: Sequence[Number]) -> Sextic:
    """
    τ([P²], [a:b:c]) = [P⁴(aX² + bXY + cY²)] for a null quadratic P², a point of K.
    """
    if square.degree != 2:
        raise ValueError("expected a quadratic")
    value = q2(square)
    if (value != 0) if isinstance(value, Fraction) else abs(value) > 1e-12:
        raise NonNullError(f"Q₂(P²) = {value} is not zero")
    if all(c == 0 for c in abc):
        raise ZeroVectorError("[a:b:c] must be a nonzero quadratic")
    return square * square * binary_form(abc)


def geodesic_triple_q6(u: HPoint, v: HPoint, w: HPoint) -> float:
    """Q₆(ĝ_u ĝ_v ĝ_w); positive whenever u, v, w lie on one geodesic."""
    return float(q6(g_hat(u) * g_hat(v) * g_hat(w)))


# ---------------------------------------------------------------------------
# Reference frame at z = i
# ---------------------------------------------------------------------------


def reference_frame_at_i() -> List[Tuple[str, BinaryForm, Optional[int]]]:
    """
    Closed-form frame generators at z = i as (name, sextic, q-value).

    The first five are unit vectors; b1 and b2 only span the binormal plane and carry no
    stated norm.
    """
    p1 = X**2 + Y**2
    return [
        ("f", (p1**3).scale(math.sqrt(5.0) / 4.0), 1),
        ("t1", binary_form([0, 1, 0, 2, 0, 1, 0]).scale(math.sqrt(15.0 / 8.0)), -1),
        ("t2", binary_form([1, 0, 1, 0, -1, 0, -1]).scale(math.sqrt(15.0 / 32.0)), -1),
        ("n1", binary_form([1, 0, -5, 0, -5, 0, 1]).scale(math.sqrt(3.0) / 4.0), 1),
        ("n2", binary_form([0, 1, 0, 0, 0, -1, 0]).scale(math.sqrt(3.0)), 1),
        ("b1", binary_form([1, 0, -15, 0, 15, 0, -1]), None),
        ("b2", binary_form([0, 3, 0, -10, 0, 3, 0]), None),
    ]


@dataclass
class FrameReferenceCheck:
    """Largest deviations of frenet(i) from the closed-form generators."""

    vector_residual: float
    norm_residual: float
    binormal_residual: float

    def passed(self, tol: float = 1e-12) -> bool:
        return max(self.vector_residual, self.norm_residual, self.binormal_residual) <= tol


def frame_reference_check() -> FrameReferenceCheck:
    """
    Compare frenet(i) with reference_frame_at_i.

    Unit generators are compared up to sign; b1, b2 are checked to lie in the computed
    binormal plane.
    """
    frame = frenet(HPoint(0.0, 1.0))
    rows = frame.rows()
    vector_res = norm_res = binormal_res = 0.0
    for k, (_, form, value) in enumerate(reference_frame_at_i()):
        if value is not None:
            expected = form.to_array()
            gap = min(np.max(np.abs(rows[k] - expected)), np.max(np.abs(rows[k] + expected)))
            vector_res = max(vector_res, float(gap))
            norm_res = max(norm_res, abs(float(q6(form)) - value))
        else:
            coords = frame.coordinates(form.to_array())
            binormal_res = max(
                binormal_res, float(np.linalg.norm(coords[:5]) / np.linalg.norm(coords))
            )
    return FrameReferenceCheck(vector_res, norm_res, binormal_res)
