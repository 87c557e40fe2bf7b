"""Cyclic G2' Hitchin system: Higgs data with the diagonal harmonic metric, the h-unitary
multiplication frame, and a damped Newton solver for the global elliptic system

    2Δ_σψ₁ =  5e^{ψ₁-3ψ₂} - 2|q|²_σ e^{-2ψ₁} + (5/2)κ_σ
    2Δ_σψ₂ = -5e^{ψ₁-3ψ₂} + 6e^{2ψ₂}        + (1/2)κ_σ

on uniform grids (periodic tori or rectangles with Dirichlet data), with Δ_σ = L / (4σ) for the
5-point Laplacian L and |q|²_σ = |q|² / σ⁶.
"""

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import List, Optional, Sequence, Tuple

import numpy as np
from rich.console import Console
from scipy import sparse
from scipy.sparse.linalg import spsolve

from .errors import ConvergenceError, DegenerateInputError, DomainError, LinearSolverError
from .g2 import basis_matrix
from .octonion import CROSS_TENSOR, IM_SIGNS, BasisTag, cross_array, quad_array

console = Console()

SQRT2 = math.sqrt(2.0)

# Armijo backtracking on the residual sup-norm
ARMIJO_C = 1e-4
MIN_STEP = 2.0**-20

# Maximum-principle bounds
FIRST_BOUND = 3.0
SECOND_BOUND = 6.0 / 5.0

# B-pairing in the frame (dz³, ..., dz⁻³)
Q_MATRIX = np.fliplr(np.eye(7))

PHI_SUBDIAGONAL = (
    math.sqrt(3),
    math.sqrt(5),
    -1j * math.sqrt(6),
    -1j * math.sqrt(6),
    math.sqrt(5),
    math.sqrt(3),
)


# ---------------------------------------------------------------------------
# Pointwise Higgs data
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HiggsPoint:
    """Value q of the sextic differential and the metric functions r, s at one point."""

    q_value: complex
    r: float
    s: float

    def __post_init__(self):
        if not (self.r > 0 and self.s > 0):
            raise DomainError(f"the harmonic metric needs r, s > 0, got r={self.r}, s={self.s}")
        object.__setattr__(self, "q_value", complex(self.q_value))
        object.__setattr__(self, "r", float(self.r))
        object.__setattr__(self, "s", float(self.s))

    @property
    def metric_diagonal(self) -> np.ndarray:
        r, s = self.r, self.s
        return np.array([1.0 / (r * s), 1.0 / r, 1.0 / s, 1.0, s, r, r * s])

    @classmethod
    def random(cls, rng: np.random.Generator, spread: float = 1.0) -> "HiggsPoint":
        q = complex(rng.normal(), rng.normal())
        r, s = np.exp(rng.uniform(-spread, spread, size=2))
        return cls(q, float(r), float(s))


@dataclass(frozen=True, eq=False)
class HiggsData:
    phi: np.ndarray
    metric: np.ndarray
    tau_involution_residual: float
    tau_phi_residual: float

    @property
    def passed(self) -> bool:
        return max(self.tau_involution_residual, self.tau_phi_residual) <= 1e-12


def higgs_field(q_value: complex) -> np.ndarray:
    """Φ in the frame (dz³, ..., dz⁻³): the principal nilpotent plus q in the two corners."""
    phi = np.zeros((7, 7), dtype=complex)
    for k, entry in enumerate(PHI_SUBDIAGONAL):
        phi[k + 1, k] = entry
    phi[0, 5] = q_value
    phi[1, 6] = q_value
    return phi


def h_adjoint(p: HiggsPoint, a: np.ndarray) -> np.ndarray:
    """A^{*h} = H⁻¹ Āᵀ H."""
    d = p.metric_diagonal
    return (np.conj(a).T * d[None, :]) / d[:, None]


def tau_vector(p: HiggsPoint, x: np.ndarray) -> np.ndarray:
    """τ̂(x) = H⁻¹ Q x̄."""
    return (Q_MATRIX @ np.conj(x)) / p.metric_diagonal


def tau_endomorphism(p: HiggsPoint, a: np.ndarray) -> np.ndarray:
    """Conjugation of A by the antilinear involution τ̂: H⁻¹ Q Ā H⁻¹ Q."""
    h_inv_q = Q_MATRIX / p.metric_diagonal[:, None]
    return h_inv_q @ np.conj(a) @ h_inv_q


def higgs_data(p: HiggsPoint) -> HiggsData:
    """
    Higgs field, metric and the real-structure checks at one point.

    Args:
        p: Pointwise data (q, r, s)

    Returns:
        HiggsData with Φ, H = diag(r⁻¹s⁻¹, r⁻¹, s⁻¹, 1, s, r, rs) and the residuals of
        τ̂∘τ̂ = id and τ̂(Φ + Φ^{*h}) = Φ + Φ^{*h}
    """
    phi = higgs_field(p.q_value)
    metric = np.diag(p.metric_diagonal)
    h_inv_q = Q_MATRIX / p.metric_diagonal[:, None]
    # τ̂² x = (H⁻¹Q)(H⁻¹Q) x since H⁻¹Q is real
    involution = float(np.max(np.abs(h_inv_q @ h_inv_q - np.eye(7))))
    hermitian_part = phi + h_adjoint(p, phi)
    fixed = float(np.max(np.abs(tau_endomorphism(p, hermitian_part) - hermitian_part)))
    return HiggsData(phi, metric, involution, fixed)


# ---------------------------------------------------------------------------
# h-unitary multiplication frame
# ---------------------------------------------------------------------------


def frame_w(p: HiggsPoint) -> np.ndarray:
    """
    The frame w₁, ..., w₇ spanning the τ̂-real sub-bundle.

    Args:
        p: Pointwise data; only r and s enter

    Returns:
        7x7 complex array, row i holding the coordinates of w_{i+1} in (u₃, ..., u₋₃)
    """
    a, b, c = math.sqrt(p.r), math.sqrt(p.s), math.sqrt(p.r * p.s)
    w = np.zeros((7, 7), dtype=complex)
    w[0, 3] = 1.0
    w[1, [1, 5]] = (a / SQRT2, 1.0 / (a * SQRT2))
    w[2, [1, 5]] = (-1j * a / SQRT2, 1j / (a * SQRT2))
    w[3, [2, 4]] = (b / SQRT2, 1.0 / (b * SQRT2))
    w[4, [2, 4]] = (1j * b / SQRT2, -1j / (b * SQRT2))
    w[5, [0, 6]] = (-c / SQRT2, -1.0 / (c * SQRT2))
    w[6, [0, 6]] = (1j * c / SQRT2, -1j / (c * SQRT2))
    return w


def frame_w_m(p: HiggsPoint) -> np.ndarray:
    """Rows of frame_w in M coordinates (complex)."""
    return frame_w(p) @ basis_matrix(BasisTag.BARAGLIA_U).T


@dataclass(frozen=True)
class FrameCheck:
    norms: Tuple[float, ...]
    gram_residual: float
    cross_residual: float
    unitary_residual: float
    tau_residual: float
    closure_residual: float

    def passed(self, tol: float = 1e-9) -> bool:
        return (
            max(
                self.gram_residual,
                self.cross_residual,
                self.unitary_residual,
                self.tau_residual,
                self.closure_residual,
            )
            <= tol
        )


def _closure_residual(xhat: np.ndarray, plane: np.ndarray) -> float:
    """Distance of x̂ × plane from the complex span of plane."""
    images = cross_array(xhat[None, :], plane)
    coeffs = np.linalg.lstsq(plane.T, images.T, rcond=None)[0]
    return float(np.max(np.abs(plane.T @ coeffs - images.T)))


def check_frame_w(p: HiggsPoint) -> FrameCheck:
    """
    Verify that m_i ↦ w_i is a complex G2 map, h-unitary and τ̂-real.

    The closure residual covers x̂ = w₁ with T = span(w₄, w₅), N = span(w₂, w₃) and
    B = span(w₆, w₇).
    """
    w_u = frame_w(p)
    w = frame_w_m(p)
    gram = quad_array(w[:, None, :], w[None, :, :])
    norms = tuple(float(v) for v in np.real(np.diag(gram)))
    gram_residual = float(np.max(np.abs(gram - np.diag(np.array(IM_SIGNS, dtype=float)))))

    products = cross_array(w[:, None, :], w[None, :, :])
    expected = np.einsum("abc,cd->abd", CROSS_TENSOR, w)
    cross_residual = float(np.max(np.abs(products - expected)))

    unitary = np.conj(w_u) @ np.diag(p.metric_diagonal) @ w_u.T
    unitary_residual = float(np.max(np.abs(unitary - np.eye(7))))
    tau_residual = float(max(np.max(np.abs(tau_vector(p, row) - row)) for row in w_u))

    closure = max(_closure_residual(w[0], w[rows]) for rows in ([3, 4], [1, 2], [5, 6]))
    return FrameCheck(norms, gram_residual, cross_residual, unitary_residual, tau_residual, closure)


# ---------------------------------------------------------------------------
# Local form of the equations
# ---------------------------------------------------------------------------


def local_rhs(r, s, q) -> Tuple[np.ndarray, np.ndarray]:
    """Right-hand sides of ∂∂̄log r = 5r/s - 3s - |q|²/(r²s) and ∂∂̄log s = 6s - 5r/s."""
    r, s = np.asarray(r, dtype=float), np.asarray(s, dtype=float)
    q2 = np.abs(np.asarray(q)) ** 2
    return 5.0 * r / s - 3.0 * s - q2 / (r * r * s), 6.0 * s - 5.0 * r / s


def global_to_local(psi1, psi2, sigma) -> Tuple[np.ndarray, np.ndarray]:
    """(r, s) with s = e^{2ψ₂}σ and r = e^{ψ₁-ψ₂}σ²."""
    psi1, psi2, sigma = (np.asarray(v, dtype=float) for v in (psi1, psi2, sigma))
    return np.exp(psi1 - psi2) * sigma**2, np.exp(2.0 * psi2) * sigma


def det_iii(r, s, q) -> np.ndarray:
    """det III = |q|²/(r²s) - 3s; negative exactly where the developing map is immersive."""
    r, s = np.asarray(r, dtype=float), np.asarray(s, dtype=float)
    return np.abs(np.asarray(q)) ** 2 / (r * r * s) - 3.0 * s


# ---------------------------------------------------------------------------
# Grids
# ---------------------------------------------------------------------------


class GridMode(str, Enum):
    PERIODIC = "periodic"
    DIRICHLET = "dirichlet"


@dataclass(frozen=True, eq=False)
class HitchinGrid:
    """
    Uniform grid carrying the unknowns ψ₁, ψ₂ and the data σ, q, κ_σ.

    Arrays have shape (nx, ny) with node (ix, iy) at (x0 + ix·hx, y0 + iy·hy). In dirichlet mode
    the boundary values of ψ are fixed data.
    """

    psi1: np.ndarray
    psi2: np.ndarray
    sigma: np.ndarray
    q: np.ndarray
    kappa: np.ndarray
    hx: float
    hy: float
    mode: GridMode = GridMode.PERIODIC
    origin: Tuple[float, float] = (0.0, 0.0)
    synthetic: bool = False
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "mode", GridMode(self.mode))
        for name in ("psi1", "psi2", "sigma", "kappa"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))
        object.__setattr__(self, "q", np.asarray(self.q, dtype=complex))
        shape = self.psi1.shape
        if len(shape) != 2 or min(shape) < 3:
            raise DegenerateInputError(f"grids need shape (nx, ny) with nx, ny >= 3, got {shape}")
        for name in ("psi2", "sigma", "q", "kappa"):
            if getattr(self, name).shape != shape:
                raise DegenerateInputError(
                    f"{name} has shape {getattr(self, name).shape}, expected {shape}"
                )
        if not (self.hx > 0 and self.hy > 0):
            raise DomainError("grid spacings must be positive")
        if not np.all(self.sigma > 0):
            raise DomainError("the conformal factor σ must be positive everywhere")

    @property
    def shape(self) -> Tuple[int, int]:
        return self.psi1.shape

    @property
    def nx(self) -> int:
        return self.shape[0]

    @property
    def ny(self) -> int:
        return self.shape[1]

    @property
    def q_norm2(self) -> np.ndarray:
        """|q|²_σ = |q|² / σ⁶."""
        return np.abs(self.q) ** 2 / self.sigma**6

    @property
    def interior(self) -> np.ndarray:
        mask = np.ones(self.shape, dtype=bool)
        if self.mode is GridMode.DIRICHLET:
            mask[0, :] = mask[-1, :] = False
            mask[:, 0] = mask[:, -1] = False
        return mask

    def coordinates(self) -> Tuple[np.ndarray, np.ndarray]:
        x = self.origin[0] + self.hx * np.arange(self.nx)
        y = self.origin[1] + self.hy * np.arange(self.ny)
        return np.meshgrid(x, y, indexing="ij")

    def with_psi(self, psi1: np.ndarray, psi2: np.ndarray) -> "HitchinGrid":
        return replace(self, psi1=psi1, psi2=psi2)

    def with_q(self, q: np.ndarray) -> "HitchinGrid":
        return replace(self, q=np.broadcast_to(np.asarray(q, dtype=complex), self.shape).copy())

    def unknowns(self) -> np.ndarray:
        return np.concatenate([self.psi1.ravel(), self.psi2.ravel()])

    def from_unknowns(self, vec: np.ndarray) -> "HitchinGrid":
        n = self.nx * self.ny
        return self.with_psi(vec[:n].reshape(self.shape), vec[n:].reshape(self.shape))


def stencil_laplacian(f: np.ndarray, hx: float, hy: float) -> np.ndarray:
    """5-point Laplacian with periodic wrap; wrapped values on a Dirichlet boundary are unused."""
    return (np.roll(f, -1, 0) - 2.0 * f + np.roll(f, 1, 0)) / hx**2 + (
        np.roll(f, -1, 1) - 2.0 * f + np.roll(f, 1, 1)
    ) / hy**2


def discrete_curvature(
    sigma: np.ndarray, hx: float, hy: float, mode: GridMode = GridMode.PERIODIC
) -> np.ndarray:
    """κ_σ = -(2/σ)∂∂̄log σ with the same stencil as Δ_σ; boundary nodes copy their neighbours."""
    kappa = -stencil_laplacian(np.log(sigma), hx, hy) / (2.0 * sigma)
    if GridMode(mode) is GridMode.DIRICHLET:
        kappa[0, :], kappa[-1, :] = kappa[1, :], kappa[-2, :]
        kappa[:, 0], kappa[:, -1] = kappa[:, 1], kappa[:, -2]
    return kappa


def curvature_consistency(grid: HitchinGrid) -> float:
    """Largest interior gap between the stored κ_σ and its discrete value from σ."""
    discrete = discrete_curvature(grid.sigma, grid.hx, grid.hy, grid.mode)
    return float(np.max(np.abs(grid.kappa - discrete)[grid.interior]))


# ---------------------------------------------------------------------------
# Residual and Jacobian
# ---------------------------------------------------------------------------


def residual(grid: HitchinGrid) -> Tuple[np.ndarray, np.ndarray]:
    """
    Discrete residual of the global system at every node.

    Args:
        grid: Grid with current ψ and data

    Returns:
        (R₁, R₂), zero on Dirichlet boundary nodes
    """
    scale = 1.0 / (2.0 * grid.sigma)
    e = np.exp(grid.psi1 - 3.0 * grid.psi2)
    r1 = (
        scale * stencil_laplacian(grid.psi1, grid.hx, grid.hy)
        - 5.0 * e
        + 2.0 * grid.q_norm2 * np.exp(-2.0 * grid.psi1)
        - 2.5 * grid.kappa
    )
    r2 = (
        scale * stencil_laplacian(grid.psi2, grid.hx, grid.hy)
        + 5.0 * e
        - 6.0 * np.exp(2.0 * grid.psi2)
        - 0.5 * grid.kappa
    )
    boundary = ~grid.interior
    r1[boundary] = 0.0
    r2[boundary] = 0.0
    return r1, r2


def residual_oracle(grid: HitchinGrid) -> Tuple[np.ndarray, np.ndarray]:
    """Node-by-node evaluation of the same residual, used to cross-check the vectorised one."""
    nx, ny = grid.shape
    hx2, hy2 = grid.hx**2, grid.hy**2
    q_norm2 = grid.q_norm2
    r1 = np.zeros(grid.shape)
    r2 = np.zeros(grid.shape)
    interior = grid.interior
    for i in range(nx):
        for j in range(ny):
            if not interior[i, j]:
                continue
            values = []
            for f in (grid.psi1, grid.psi2):
                lap = (f[(i + 1) % nx, j] - 2.0 * f[i, j] + f[(i - 1) % nx, j]) / hx2 + (
                    f[i, (j + 1) % ny] - 2.0 * f[i, j] + f[i, (j - 1) % ny]
                ) / hy2
                values.append(2.0 * lap / (4.0 * grid.sigma[i, j]))
            p1, p2 = float(grid.psi1[i, j]), float(grid.psi2[i, j])
            kappa = float(grid.kappa[i, j])
            e = math.exp(p1 - 3.0 * p2)
            decay = q_norm2[i, j] * math.exp(-2.0 * p1)
            r1[i, j] = values[0] - (5.0 * e - 2.0 * decay + 2.5 * kappa)
            r2[i, j] = values[1] - (-5.0 * e + 6.0 * math.exp(2.0 * p2) + 0.5 * kappa)
    return r1, r2


def local_residual(grid: HitchinGrid) -> Tuple[np.ndarray, np.ndarray]:
    """Residual of the local (r, s) system, ∂∂̄ = L/4, evaluated through global_to_local."""
    r, s = global_to_local(grid.psi1, grid.psi2, grid.sigma)
    rhs1, rhs2 = local_rhs(r, s, grid.q)
    out1 = stencil_laplacian(np.log(r), grid.hx, grid.hy) / 4.0 - rhs1
    out2 = stencil_laplacian(np.log(s), grid.hx, grid.hy) / 4.0 - rhs2
    boundary = ~grid.interior
    out1[boundary] = 0.0
    out2[boundary] = 0.0
    return out1, out2


def _second_difference(n: int, h: float, periodic: bool) -> sparse.csr_matrix:
    off = np.ones(n - 1)
    d = sparse.diags([off, -2.0 * np.ones(n), off], [-1, 0, 1], shape=(n, n), format="lil")
    if periodic:
        d[0, n - 1] = 1.0
        d[n - 1, 0] = 1.0
    return d.tocsr() / h**2


def laplacian_matrix(grid: HitchinGrid) -> sparse.csr_matrix:
    """Sparse 5-point Laplacian on the flattened (nx, ny) grid, C order."""
    periodic = grid.mode is GridMode.PERIODIC
    dxx = _second_difference(grid.nx, grid.hx, periodic)
    dyy = _second_difference(grid.ny, grid.hy, periodic)
    return (
        sparse.kron(dxx, sparse.identity(grid.ny)) + sparse.kron(sparse.identity(grid.nx), dyy)
    ).tocsr()


def jacobian(grid: HitchinGrid) -> sparse.csr_matrix:
    """
    Jacobian of (R₁, R₂) with respect to (ψ₁, ψ₂) as a sparse 2x2 block matrix.

    Dirichlet boundary rows are replaced by identity rows so boundary updates vanish.
    """
    lap = sparse.diags((1.0 / (2.0 * grid.sigma)).ravel()) @ laplacian_matrix(grid)
    psi1, psi2 = grid.psi1.ravel(), grid.psi2.ravel()
    e = np.exp(psi1 - 3.0 * psi2)
    d11 = -5.0 * e - 4.0 * grid.q_norm2.ravel() * np.exp(-2.0 * psi1)
    d12 = 15.0 * e
    d21 = 5.0 * e
    d22 = -15.0 * e - 12.0 * np.exp(2.0 * psi2)
    jac = sparse.bmat(
        [
            [lap + sparse.diags(d11), sparse.diags(d12)],
            [sparse.diags(d21), lap + sparse.diags(d22)],
        ],
        format="csr",
    )
    if grid.mode is GridMode.DIRICHLET:
        keep = np.tile(grid.interior.ravel(), 2).astype(float)
        jac = (sparse.diags(keep) @ jac + sparse.diags(1.0 - keep)).tocsr()
    return jac


def _sup_norm(grid: HitchinGrid) -> float:
    r1, r2 = residual(grid)
    return float(max(np.max(np.abs(r1)), np.max(np.abs(r2))))


# ---------------------------------------------------------------------------
# Bounds
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BoundReport:
    """Minimum margins of the two global bounds and of the det III gap over all nodes."""

    first_margin: float
    second_margin: float
    det_gap: float
    violations: int
    tol: float

    @property
    def passed(self) -> bool:
        return self.violations == 0

    @property
    def strict(self) -> bool:
        return min(self.first_margin, self.second_margin, self.det_gap) > 0.0


def verify_bounds(grid: HitchinGrid, tol: float = 1e-9) -> BoundReport:
    """
    Check |q|²_σ e^{-2ψ₁-2ψ₂} < 3 and e^{ψ₁-5ψ₂} < 6/5 at every node.

    The det III gap 3 - |q|²/(r²s²) is computed independently from the local functions r, s.
    Margins below -tol count as violations.

    Args:
        grid: Converged solution
        tol: Slack before a negative margin is a violation

    Returns:
        BoundReport
    """
    first = FIRST_BOUND - grid.q_norm2 * np.exp(-2.0 * grid.psi1 - 2.0 * grid.psi2)
    second = SECOND_BOUND - np.exp(grid.psi1 - 5.0 * grid.psi2)
    r, s = global_to_local(grid.psi1, grid.psi2, grid.sigma)
    gap = -det_iii(r, s, grid.q) / s
    violations = int(np.sum((first < -tol) | (second < -tol) | (gap < -tol)))
    return BoundReport(
        float(np.min(first)), float(np.min(second)), float(np.min(gap)), violations, tol
    )


def linearization_definiteness(grid: HitchinGrid) -> np.ndarray:
    """(12/5)e^{5ψ₂-ψ₁} - 2 at every node; positive exactly where the second bound holds."""
    return 2.4 * np.exp(5.0 * grid.psi2 - grid.psi1) - 2.0


# ---------------------------------------------------------------------------
# Newton solver
# ---------------------------------------------------------------------------


@dataclass
class SolveReport:
    converged: bool
    iterations: int
    residual: float
    history: List[float] = field(default_factory=list)
    steps: List[float] = field(default_factory=list)
    bounds: Optional[BoundReport] = None
    label: str = ""
    synthetic: bool = False


def newton_solve(
    grid: HitchinGrid,
    tol: float = 1e-10,
    max_iter: int = 30,
    verbose: bool = False,
) -> Tuple[HitchinGrid, SolveReport]:
    """
    Damped Newton iteration for the global system.

    Each step solves J δ = -R with a sparse direct factorization and backtracks by halving
    until the residual sup-norm drops by the Armijo factor (1 - 1e-4·step).

    Args:
        grid: Initial guess together with the data σ, q, κ_σ
        tol: Stop once the residual sup-norm is <= tol
        max_iter: Maximum number of Newton steps
        verbose: Print one line per iteration

    Returns:
        (solution grid, SolveReport with the bound margins of the solution)

    Raises:
        ConvergenceError: max_iter reached or the line search stalled; carries the report
        LinearSolverError: the sparse solve failed or produced non-finite values
    """
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol}")
    current = grid
    norm = _sup_norm(current)
    report = SolveReport(False, 0, norm, [norm], label=grid.label, synthetic=grid.synthetic)
    if verbose:
        console.print(f"[cyan]newton {grid.label or ''}[/cyan] start |R|∞={norm:.3e}")

    while norm > tol:
        if report.iterations >= max_iter:
            raise ConvergenceError(
                f"no convergence in {max_iter} iterations (|R|∞={norm:.3e})", report
            )
        r1, r2 = residual(current)
        try:
            delta = spsolve(jacobian(current).tocsc(), -np.concatenate([r1.ravel(), r2.ravel()]))
        except (RuntimeError, np.linalg.LinAlgError) as exc:
            raise LinearSolverError(f"sparse solve failed: {exc}") from exc
        if not np.all(np.isfinite(delta)):
            raise LinearSolverError("sparse solve returned non-finite values")

        base = current.unknowns()
        step = 1.0
        while True:
            trial = current.from_unknowns(base + step * delta)
            with np.errstate(over="ignore", invalid="ignore"):
                trial_norm = _sup_norm(trial)
            if np.isfinite(trial_norm) and trial_norm <= (1.0 - ARMIJO_C * step) * norm:
                break
            step /= 2.0
            if step < MIN_STEP:
                raise ConvergenceError(
                    f"line search stalled at iteration {report.iterations + 1}", report
                )

        current, norm = trial, trial_norm
        report.iterations += 1
        report.history.append(norm)
        report.steps.append(step)
        report.residual = norm
        if verbose:
            console.print(f"  it={report.iterations:2d} |R|∞={norm:.3e} step={step:g}")

    report.converged = True
    report.bounds = verify_bounds(current)
    if verbose:
        console.print(f"[green]✓ converged in {report.iterations} iterations[/green]")
    return current, report


# ---------------------------------------------------------------------------
# Instances
# ---------------------------------------------------------------------------


def hyperbolic_instance(
    nx: int = 64,
    ny: int = 64,
    epsilon: complex = 0.0,
    x_range: Tuple[float, float] = (-0.5, 0.5),
    y_range: Tuple[float, float] = (1.0, 2.0),
    initial: Tuple[float, float] = (0.0, 0.0),
    discrete_kappa: bool = False,
) -> HitchinGrid:
    """
    Rectangle in H² with σ = 1/(2y²) (curvature -2), q = ε and Dirichlet data ψ = 0.

    Args:
        nx, ny: Nodes including the boundary
        epsilon: Constant value of q in the coordinate z
        x_range, y_range: Rectangle; y_range must lie in y > 0
        initial: Constant initial guess (ψ₁, ψ₂) on interior nodes
        discrete_kappa: Use the stencil curvature of σ instead of the exact value -2

    Returns:
        HitchinGrid in dirichlet mode
    """
    if y_range[0] <= 0:
        raise DomainError("the rectangle must lie in the upper half-plane")
    hx = (x_range[1] - x_range[0]) / (nx - 1)
    hy = (y_range[1] - y_range[0]) / (ny - 1)
    y = y_range[0] + hy * np.arange(ny)
    sigma = np.broadcast_to(1.0 / (2.0 * y**2), (nx, ny)).copy()
    if discrete_kappa:
        kappa = discrete_curvature(sigma, hx, hy, GridMode.DIRICHLET)
    else:
        kappa = np.full((nx, ny), -2.0)
    psi1 = np.zeros((nx, ny))
    psi2 = np.zeros((nx, ny))
    psi1[1:-1, 1:-1] = initial[0]
    psi2[1:-1, 1:-1] = initial[1]
    return HitchinGrid(
        psi1,
        psi2,
        sigma,
        np.full((nx, ny), complex(epsilon)),
        kappa,
        hx,
        hy,
        GridMode.DIRICHLET,
        origin=(x_range[0], y_range[0]),
        label="hyperbolic",
    )


def flat_instance(
    nx: int = 32,
    ny: int = 32,
    q0: complex = 1.0,
    perturbation: float = 0.0,
    initial: Tuple[float, float] = (0.0, 0.0),
) -> HitchinGrid:
    """
    Unit torus with constant q = q₀ and conformal factor σ = exp(δ sin 2πx cos 2πy).

    δ = 0 is the flat torus (σ = 1, κ = 0). Otherwise κ_σ is the stencil curvature of σ, so
    |q|²_σ = |q₀|²/σ⁶ varies while q stays holomorphic. Tori are not hyperbolic surfaces,
    so every torus instance is marked synthetic.
    """
    if q0 == 0:
        raise DomainError("the flat torus has no solution for q = 0")
    hx, hy = 1.0 / nx, 1.0 / ny
    x, y = np.meshgrid(hx * np.arange(nx), hy * np.arange(ny), indexing="ij")
    sigma = np.exp(perturbation * np.sin(2 * np.pi * x) * np.cos(2 * np.pi * y))
    if perturbation:
        kappa = discrete_curvature(sigma, hx, hy, GridMode.PERIODIC)
    else:
        kappa = np.zeros((nx, ny))
    return HitchinGrid(
        np.full((nx, ny), float(initial[0])),
        np.full((nx, ny), float(initial[1])),
        sigma,
        np.full((nx, ny), complex(q0)),
        kappa,
        hx,
        hy,
        GridMode.PERIODIC,
        synthetic=True,
        label="conformal-torus" if perturbation else "flat",
    )


def torus_closed_form(grid: HitchinGrid) -> Tuple[np.ndarray, np.ndarray]:
    """
    Exact solution on a periodic grid with constant q and stencil curvature κ_σ.

    The local (r, s) system does not see σ, so ψ = flat_constants(|q₀|²) - (5/2, 1/2)·log σ
    solves the discrete system exactly and saturates both bounds at every node.

    Raises:
        DegenerateInputError: q is not constant or the grid is not periodic
    """
    if grid.mode is not GridMode.PERIODIC:
        raise DegenerateInputError("the closed form needs a periodic grid")
    q0 = grid.q.flat[0]
    if not np.all(grid.q == q0):
        raise DegenerateInputError("the closed form needs constant q")
    psi1, psi2 = flat_constants(abs(q0) ** 2)
    log_sigma = np.log(grid.sigma)
    return psi1 - 2.5 * log_sigma, psi2 - 0.5 * log_sigma


def flat_constants(c: float) -> Tuple[float, float]:
    """
    Constant solution on a flat torus with |q|²_σ ≡ c.

    With a = e^{ψ₁}, b = e^{ψ₂}: b = (25c/108)^{1/12} and a = (6/5)b⁵. Both global bounds are
    attained with equality.
    """
    if not c > 0:
        raise DomainError(f"|q|²_σ must be positive on a flat torus, got {c}")
    psi2 = math.log(25.0 * c / 108.0) / 12.0
    return math.log(1.2) + 5.0 * psi2, psi2


def flat_sensitivity(q0: float) -> Tuple[float, float]:
    """(dψ₁/d|q₀|, dψ₂/d|q₀|) for the flat constant solution with σ = 1."""
    q0 = abs(q0)
    if q0 == 0:
        raise DomainError("derivative is undefined at q = 0")
    return 5.0 / (6.0 * q0), 1.0 / (6.0 * q0)


# ---------------------------------------------------------------------------
# Sensitivity
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SensitivityReport:
    eps: Tuple[float, ...]
    ratios: Tuple[float, ...]
    rel_tol: float = 0.05

    @property
    def stabilized(self) -> bool:
        if len(self.ratios) < 2:
            return True
        last, prev = self.ratios[-1], self.ratios[-2]
        scale = max(abs(last), abs(prev))
        if scale < 1e-8:
            return True
        return abs(last - prev) <= self.rel_tol * scale


def sensitivity_scan(
    grid: HitchinGrid,
    delta_q,
    eps_steps: Sequence[float] = (1e-2, 1e-3, 1e-4),
    tol: float = 1e-12,
    max_iter: int = 30,
) -> SensitivityReport:
    """
    Difference quotients ‖ψ(q + ε·δq) - ψ(q)‖∞ / ε for decreasing ε.

    The base solution is first re-polished at `tol`, and every perturbed solve starts from it,
    so δq = 0 gives exactly zero change.

    Args:
        grid: Converged (or nearly converged) base solution
        delta_q: Perturbation of q, scalar or array of the grid shape
        eps_steps: Step sizes, decreasing
        tol: Newton tolerance for all re-solves
        max_iter: Newton iteration cap for all re-solves

    Returns:
        SensitivityReport; solver failures propagate
    """
    base, _ = newton_solve(grid, tol=tol, max_iter=max_iter)
    delta = np.broadcast_to(np.asarray(delta_q, dtype=complex), base.shape)
    ratios = []
    for eps in eps_steps:
        perturbed, _ = newton_solve(base.with_q(base.q + eps * delta), tol=tol, max_iter=max_iter)
        change = max(
            np.max(np.abs(perturbed.psi1 - base.psi1)), np.max(np.abs(perturbed.psi2 - base.psi2))
        )
        ratios.append(float(change) / eps)
    return SensitivityReport(tuple(float(e) for e in eps_steps), tuple(ratios))
