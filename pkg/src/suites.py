"""Invariant suites behind `verify`, and the PDE and Fuchsian runs behind `solve` and `fuchsian`."""

import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from rich.console import Console

from . import linalg
from .config import Config, Settings
from .ein import (
    NullLine,
    annihilators_transverse,
    ann_plane,
    distribution_at,
    family_membership,
    family_point,
    full_flag,
    is_cross_trivial_isotropic,
    model_family,
    negative_to_positive,
    OsculatingPlane,
    recover_line,
    splitting_witness,
    transverse,
    verify_unique_splitting,
)
from .errors import ConvergenceError, DegenerateInputError, LinearSolverError
from .fuchsian import (
    FRAME_SIGNS,
    K_REPRESENTATIVES,
    Q6_GRAM,
    DevPoint,
    HPoint,
    SexticClass,
    boundary_annihilator,
    boundary_transverse,
    brute_force_preimages,
    degenerate_set,
    dev_lift,
    dev_rank,
    extended_rank,
    f_hat,
    fiber_degenerate_set,
    frame_reference_check,
    frenet,
    g_hat,
    g_rational,
    g_x,
    g_y,
    geodesic_triple_q6,
    j_invariance_residual,
    k5_witness,
    osculating_intersect,
    random_null_sextic,
    sextic_classify,
    sigma_infinity,
    sigma_zero,
)
from .g2 import (
    X,
    Y,
    BinaryForm,
    G2Matrix,
    Moebius,
    Sextic,
    basis_convert,
    basis_gram,
    basis_matrix,
    binary_form,
    exp_nilpotent,
    im_from_sextic,
    is_g2,
    monomial,
    psl2_embed,
    q6,
    random_g2_exact,
    random_g2_float,
    rotation_bprime,
    stiefel_to_g2,
    torus_bprime,
)
from .hitchin import (
    GridMode,
    HiggsPoint,
    HitchinGrid,
    check_frame_w,
    curvature_consistency,
    det_iii,
    flat_constants,
    flat_instance,
    flat_sensitivity,
    frame_w_m,
    global_to_local,
    higgs_data,
    hyperbolic_instance,
    linearization_definiteness,
    local_residual,
    newton_solve,
    residual,
    residual_oracle,
    sensitivity_scan,
    torus_closed_form,
    verify_bounds,
)
from .octonion import (
    IM_GRAM,
    OCT_LABELS,
    BasisTag,
    ImVector,
    SplitOct,
    annihilator,
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
from .reports import (
    CLASSIFICATION_HEADER,
    FIBER_HEADER,
    FIELD_HEADER,
    SIGN_TABLE_HEADER,
    CheckResult,
    Provenance,
    Report,
    SolveSummary,
    above,
    below,
    holds,
    write_csv,
    write_report,
)

console = Console()

SUITE_KEYS = {"octonion": 1, "g2": 2, "ein": 3, "fuchsian": 4, "hitchin": 5, "solve": 6}

# Newton tolerance for the re-solves of the sensitivity scan; the 5-point stencil loses
# about 4/h² ulps, so 1e-12 is not reliably reachable on 64x64 grids
SENSITIVITY_TOL = 1e-11

# Newton steps allowed on the q = 0 hyperbolic rectangle from starts in [-1, 1]²
HYPERBOLIC_NEWTON_BUDGET = 12

Suite = Callable[[Settings, np.random.Generator], List[CheckResult]]


def suite_rng(seed: int, suite: str) -> np.random.Generator:
    """Independent PCG64 stream per suite, so toggling one suite leaves the others unchanged."""
    return np.random.default_rng([seed, SUITE_KEYS[suite]])


def _provenance(command: str, config: Config) -> Provenance:
    return Provenance(
        command=command, config_hash=config.config_hash, seed=config.settings.sampling.seed
    )


def _sup(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


def _im(label: str) -> ImVector:
    return ImVector.unit(label)


# ---------------------------------------------------------------------------
# octonion_core
# ---------------------------------------------------------------------------


def _matmul(a: List[List], b: List[List]) -> List[List]:
    n = len(a)
    return [
        [sum((a[i][k] * b[k][j] for k in range(n)), Fraction(0)) for j in range(n)]
        for i in range(n)
    ]


def octonion_checks(settings: Settings, rng: np.random.Generator) -> List[CheckResult]:
    """Exact identities of O' and Im(O'), plus float invariance of Ω under G2'."""
    s, tol = settings.sampling, settings.tolerances
    checks = []

    units = [SplitOct.unit(label) for label in OCT_LABELS]
    mismatches = sum(1 for a in units for b in units if oct_mul(a, b) != oct_mul_cd(a, b))
    checks.append(holds("octonion.table_vs_cd", mismatches == 0, f"{mismatches}/64 differ"))

    one, i, j, k, l = units[:5]
    sample = random_split_oct(rng)
    checks.append(
        holds(
            "octonion.examples",
            oct_mul(i, j) == k and oct_mul(l, l) == one and oct_mul(one, sample) == sample,
            "ij = k, l² = 1, 1x = x",
        )
    )
    checks.append(
        holds(
            "octonion.quad_examples",
            quad(_im("i")) == 1 and quad(_im("l")) == -1 and quad(_im("i") + _im("lj")) == 0,
            "q(i) = 1, q(l) = -1, q(i + lj) = 0",
        )
    )
    checks.append(
        holds(
            "octonion.triple_form_examples",
            triple_form(_im("i"), _im("j"), _im("k")) == 1
            and triple_form(_im("i"), _im("j"), _im("l")) == 0,
            "Ω(i, j, k) = 1, Ω(i, j, l) = 0",
        )
    )

    composition = alternativity = double_cross = cross_norm = antisymmetry = 0
    for _ in range(s.octonion_pairs):
        x, y = random_split_oct(rng), random_split_oct(rng)
        composition += quad8(x * y) != quad8(x) * quad8(y)
        alternativity += (x * x) * y != x * (x * y) or (y * x) * x != y * (x * x)
        u, v = x.imag(), y.imag()
        lhs = cross(u, cross(u, v))
        rhs = v.scale(-quad(u)) + u.scale(quad_pair(u, v))
        double_cross += lhs != rhs
        cross_norm += quad(cross(u, v)) != quad(u) * quad(v) - quad_pair(u, v) ** 2
        w = random_im_vector(rng)
        omega = triple_form(u, v, w)
        antisymmetry += omega != -triple_form(v, u, w) or omega != triple_form(v, w, u)
    n = s.octonion_pairs
    checks.append(holds("octonion.composition", composition == 0, f"{composition}/{n} fail"))
    checks.append(holds("octonion.alternativity", alternativity == 0, f"{alternativity}/{n} fail"))
    checks.append(holds("octonion.double_cross", double_cross == 0, f"{double_cross}/{n} fail"))
    checks.append(holds("octonion.cross_norm", cross_norm == 0, f"{cross_norm}/{n} fail"))
    checks.append(
        holds("octonion.omega_alternating", antisymmetry == 0, f"{antisymmetry}/{n} fail")
    )

    null_bad = nonnull_bad = 0
    for _ in range(s.annihilator_samples):
        u = random_null_vector(rng)
        basis = annihilator(u)
        c_u = cross_matrix(u)
        nilpotent = all(x == 0 for row in _matmul(_matmul(c_u, c_u), c_u) for x in row)
        if len(basis) != 3 or any(quad(v) != 0 for v in basis) or not nilpotent:
            null_bad += 1
        w = random_im_vector(rng)
        if quad(w) != 0 and len(annihilator(w)) != 1:
            nonnull_bad += 1
    m = s.annihilator_samples
    checks.append(holds("octonion.annihilator_null", null_bad == 0, f"{null_bad}/{m} fail"))
    checks.append(
        holds("octonion.annihilator_nonnull", nonnull_bad == 0, f"{nonnull_bad}/{m} fail")
    )

    worst = 0.0
    for _ in range(s.g2_triples):
        g = random_g2_float(rng).to_array()
        x, y, z = rng.normal(size=(3, 7))
        before = quad_array(cross_array(x, y), z)
        after = quad_array(cross_array(g @ x, g @ y), g @ z)
        scale = float(np.max(np.abs(g))) ** 3 * np.prod([np.linalg.norm(v) for v in (x, y, z)])
        worst = max(worst, abs(after - before) / scale)
    checks.append(below("octonion.omega_invariance", worst, tol.algebra, "relative"))

    exact_bad = 0
    for _ in range(min(s.g2_triples, 10)):
        g = random_g2_exact(rng)
        x, y, z = (random_im_vector(rng) for _ in range(3))
        exact_bad += triple_form(g.apply(x), g.apply(y), g.apply(z)) != triple_form(x, y, z)
    checks.append(holds("octonion.omega_invariance_exact", exact_bad == 0, f"{exact_bad} fail"))
    return checks


# ---------------------------------------------------------------------------
# g2_linear
# ---------------------------------------------------------------------------


def _relative(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs(a - b)) / max(1.0, float(np.max(np.abs(b)))))


def g2_checks(settings: Settings, rng: np.random.Generator) -> List[CheckResult]:
    """Stiefel construction, membership test, principal embedding and basis identifications."""
    s, tol = settings.sampling, settings.tolerances
    checks = []

    ident = stiefel_to_g2(_im("i"), _im("j"), _im("l"), tol=0.0)
    flip = stiefel_to_g2(_im("i"), _im("j"), -_im("l"), tol=0.0)
    checks.append(
        holds(
            "g2.stiefel_examples",
            np.array_equal(ident.to_array(), np.eye(7))
            and np.array_equal(flip.to_array(), np.diag([1.0, 1, 1, -1, -1, -1, -1])),
            "(i, j, l) -> 1, (i, j, -l) -> diag(1, 1, 1, -1, -1, -1, -1)",
        )
    )
    checks.append(
        holds(
            "g2.non_member_rejected",
            not is_g2(G2Matrix(np.diag([2.0, 1, 1, 1, 1, 1, 0.5])), tol.g2).ok,
        )
    )

    worst = det_gap = unique_gap = 0.0
    for _ in range(s.g2_triples):
        frame = random_g2_float(rng).to_array()
        x, y, z = (ImVector.from_array(frame[:, c]) for c in (0, 1, 3))
        m = stiefel_to_g2(x, y, z, tol=1e-8)
        check = is_g2(m, tol.g2)
        scale = max(1.0, float(np.max(np.abs(frame)))) ** 2
        worst = max(worst, max(check.cross_residual, check.quad_residual) / scale)
        det_gap = max(det_gap, abs(m.det() - 1.0))
        cols = m.to_array()
        unique_gap = max(unique_gap, _relative(cols[:, [0, 1, 3]], frame[:, [0, 1, 3]]))
    checks.append(below("g2.stiefel_is_g2", worst, tol.g2, "relative to |M|²"))
    checks.append(below("g2.stiefel_det", det_gap, tol.g2))
    checks.append(below("g2.stiefel_unique", unique_gap, tol.g2))

    exact_bad = 0
    for _ in range(min(s.g2_triples, 10)):
        m = random_g2_exact(rng)
        check = is_g2(m, 0.0)
        exact_bad += not (check.cross_residual == 0 and check.quad_residual == 0 and m.det() == 1)
    checks.append(holds("g2.exact_products", exact_bad == 0, f"{exact_bad} fail"))

    lam, shear = 1.5, 0.7
    generators = [
        ("torus", psl2_embed(Moebius.torus(Fraction(3, 2))), torus_bprime(lam)),
        ("unipotent", psl2_embed(Moebius.unipotent(Fraction(7, 10))), exp_nilpotent(shear)),
        ("rotation", psl2_embed(Moebius(0, -1, 1, 0)), rotation_bprime()),
    ]
    gen_gap = gen_g2 = 0.0
    for _, image, expected in generators:
        gen_gap = max(gen_gap, _sup(image.convert(BasisTag.BPRIME).to_array(), expected))
        check = is_g2(image, tol.g2)
        gen_g2 = max(gen_g2, check.cross_residual, check.quad_residual)
    checks.append(below("g2.generator_matrices", gen_gap, tol.frame, "torus, unipotent, rotation"))
    checks.append(below("g2.generator_cross", gen_g2, tol.g2))

    hom = embed_g2 = q6_gap = 0.0
    for _ in range(s.g2_triples):
        g, h = Moebius.random(rng), Moebius.random(rng)
        embed_g = psl2_embed(g)
        mg, mh = embed_g.to_array(), psl2_embed(h).to_array()
        hom = max(hom, _relative(mg @ mh, psl2_embed(g * h).to_array()))
        check = is_g2(embed_g, 1.0)
        scale = max(1.0, float(np.max(np.abs(embed_g.convert(BasisTag.M_IMAG).to_array()))))
        embed_g2 = max(embed_g2, max(check.cross_residual, check.quad_residual) / scale**2)
        p, r = rng.normal(size=(2, 7))
        before = p @ Q6_GRAM @ r
        after = (mg @ p) @ Q6_GRAM @ (mg @ r)
        size = max(1.0, float(np.max(np.abs(mg)))) ** 2 * np.linalg.norm(p) * np.linalg.norm(r)
        q6_gap = max(q6_gap, abs(after - before) / size)
    checks.append(below("g2.embed_homomorphism", hom, tol.equivariance, "relative"))
    checks.append(below("g2.embed_is_g2", embed_g2, tol.equivariance, "relative to |M|²"))
    checks.append(below("g2.q6_invariance", q6_gap, tol.algebra, "relative to |M|²"))

    x6 = basis_convert(X**6, BasisTag.SYM6, BasisTag.M_IMAG).to_array()
    expected = np.array([1.0, 0, 0, 0, 1.0, 0, 0]) / math.sqrt(2.0)
    checks.append(below("g2.table_identification", float(np.max(np.abs(x6 - expected))), tol.frame))

    round_trip = q_gap = 0.0
    for _ in range(s.g2_triples):
        v = ImVector.from_array(rng.normal(size=7))
        for tag in (BasisTag.BPRIME, BasisTag.SYM6):
            back = basis_convert(basis_convert(v, BasisTag.M_IMAG, tag), tag, BasisTag.M_IMAG)
            round_trip = max(round_trip, _relative(back.to_array(), v.to_array()))
        p = Sextic(tuple(rng.normal(size=7)))
        as_im = basis_convert(p, BasisTag.SYM6, BasisTag.M_IMAG)
        q_gap = max(q_gap, abs(quad(as_im) - q6(p)) / max(1.0, float(np.sum(p.to_array() ** 2))))
    checks.append(below("g2.round_trip", round_trip, tol.frame))
    checks.append(below("g2.q_matches_q6", q_gap, tol.algebra))

    cols = basis_matrix(BasisTag.BPRIME)
    spread = 0
    for a in range(7):
        for b in range(a + 1, 7):
            coords = np.linalg.solve(cols, cross_array(cols[:, a], cols[:, b]))
            spread += int(np.sum(np.abs(coords) > 1e-12) > 1)
    checks.append(holds("g2.bprime_cross_basis", spread == 0, f"{spread} pairs off a single line"))

    real_bases = (BasisTag.M_IMAG, BasisTag.BPRIME, BasisTag.SYM6)
    signatures = {tag: linalg.signature_exact(basis_gram(tag)) for tag in real_bases}
    checks.append(
        holds(
            "g2.basis_signatures",
            all(sig == (3, 4, 0) for sig in signatures.values()),
            ", ".join(f"{t.value}={sig}" for t, sig in signatures.items()),
        )
    )
    return checks


# ---------------------------------------------------------------------------
# ein_geometry
# ---------------------------------------------------------------------------


def _sextic_line(p: BinaryForm) -> NullLine:
    return NullLine(ImVector.from_array(im_from_sextic(p)))


def ein_checks(settings: Settings, rng: np.random.Generator) -> List[CheckResult]:
    """Transversality, annihilator planes, families, (3,2)-planes and unique splittings."""
    s, tol = settings.sampling, settings.tolerances
    checks = []

    x6, y6, x5y = _sextic_line(X**6), _sextic_line(Y**6), _sextic_line(X**5 * Y)
    l_line = NullLine(_im("i") + _im("li"))
    checks.append(
        holds(
            "ein.transverse_examples",
            transverse(x6, y6) and not transverse(x6, x5y) and not transverse(l_line, l_line),
        )
    )

    samples = min(s.annihilator_samples, 50)
    asym = equiv_bad = ann_equiv_bad = 0
    for _ in range(samples):
        a, b = NullLine(random_null_vector(rng)), NullLine(random_null_vector(rng))
        asym += transverse(a, b) != transverse(b, a)
        asym += transverse(a, b) != annihilators_transverse(a, b)
        g = random_g2_exact(rng)
        ga, gb = NullLine(g.apply(a.rep)), NullLine(g.apply(b.rep))
        equiv_bad += transverse(ga, gb) != transverse(a, b)
        image = [list(g.apply(v).coords) for v in ann_plane(a)]
        ann_equiv_bad += not linalg.same_span_exact([list(v.coords) for v in ann_plane(ga)], image)
    checks.append(holds("ein.transverse_symmetric", asym == 0, f"{asym} fail"))
    checks.append(holds("ein.transverse_equivariant", equiv_bad == 0, f"{equiv_bad} fail"))
    checks.append(holds("ein.ann_plane_equivariant", ann_equiv_bad == 0, f"{ann_equiv_bad} fail"))

    x3 = _im("i") + _im("li")
    x2 = _im("lj") - _im("j")
    x1 = _im("k") - _im("lk")
    line = NullLine(x3)
    ann = [list(v.coords) for v in ann_plane(line)]
    dist = distribution_at(line)
    checks.append(
        holds(
            "ein.ann_x3",
            linalg.same_span_exact(ann, [list(v.coords) for v in (x3, x2, x1)])
            and linalg.rank_exact([list(x3.coords)] + [list(v.coords) for v in dist]) == 3,
            "Ann(x₃) = ⟨x₃, x₂, x₁⟩",
        )
    )
    checks.append(holds("ein.full_flag", full_flag(x3, x2) == [1, 2, 3, 4, 5, 6]))
    checks.append(holds("ein.cross_trivial_plane", is_cross_trivial_isotropic([x3, x2])))
    checks.append(
        holds(
            "ein.negative_to_positive",
            negative_to_positive(_im("l"), _im("li"), _im("j")) == (_im("i"), _im("j"), _im("l")),
        )
    )

    boundary_bad = 0
    for _ in range(min(samples, 20)):
        c = Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 10)))
        boundary_bad += not boundary_annihilator(binary_form([1, c]))
    checks.append(holds("ein.boundary_annihilator", boundary_bad == 0, f"{boundary_bad} fail"))

    family = model_family()
    example = family_point(family, 0.0, 0.0, 1.0).to_array()
    expected = np.array([1.0, 1.0, 0, math.sqrt(2.0), 0, 0, 0]) / math.sqrt(2.0)
    checks.append(below("ein.family_example", float(np.max(np.abs(example - expected))), tol.frame))

    member_bad = coherence_bad = 0
    points = []
    for _ in range(max(s.frame_points, 50)):
        theta, alpha = rng.uniform(0.0, 2 * math.pi, size=2)
        r = float(np.exp(rng.uniform(-1.5, 1.5)))
        ray = family_point(family, float(theta), float(alpha), r)
        points.append(ray.to_array())
        member_bad += not family_membership(family, ray.line())
        coherence_bad += family.projections(ray.to_array())[0] <= 0
    outside = NullLine(ImVector.from_array(family.xhat + family.u_T(0.3)))
    checks.append(holds("ein.family_membership", member_bad == 0, f"{member_bad} fail"))
    checks.append(holds("ein.ray_coherence", coherence_bad == 0, f"{coherence_bad} fail"))
    checks.append(holds("ein.pi_n_zero_excluded", not family_membership(family, outside)))

    recovered = recover_line(OsculatingPlane.from_spanning_set(np.array(points))).to_array()
    checks.append(
        holds("ein.recover_from_family", linalg.same_span_float(recovered, family.xhat))
    )
    u0 = np.eye(7)[:5]
    g = random_g2_float(rng).to_array()
    moved = recover_line(OsculatingPlane(u0 @ g.T)).to_array()
    checks.append(
        holds(
            "ein.recover_line",
            linalg.same_span_float(recover_line(OsculatingPlane(u0)).to_array(), np.eye(7)[0])
            and linalg.same_span_float(moved, g[:, 0]),
            "U₀ -> [i], M·U₀ -> [M·i]",
        )
    )
    planes = rejected = 0
    for _ in range(500):
        if planes == 10:
            break
        try:
            plane = OsculatingPlane(rng.normal(size=(5, 7)))
        except DegenerateInputError:
            continue
        planes += 1
        try:
            recover_line(plane)
        except DegenerateInputError:
            rejected += 1
    checks.append(holds("ein.generic_plane_rejected", planes > 0 and rejected == planes))

    report = verify_unique_splitting(family, s.osculating_pairs, rng)
    no_mix = verify_unique_splitting(family, 1, rng, mixes=[0.0])
    witness = splitting_witness(family, 0.6)
    checks.append(
        holds(
            "ein.unique_splitting",
            report.all_found
            and not no_mix.witnesses
            and witness is not None
            and witness.in_mixed_family
            and not witness.in_original_family,
            f"{len(report.witnesses)}/{report.trials} witnesses",
        )
    )
    return checks


# ---------------------------------------------------------------------------
# fuchsian_curve
# ---------------------------------------------------------------------------


@dataclass
class ClassifiedSextic:
    """One row of the classification table."""

    index: int
    source: str
    sextic: BinaryForm
    record: SexticClass
    brute_force: Optional[int]


def classify_sample(count: int, rng: np.random.Generator) -> List[ClassifiedSextic]:
    """Random null sextics, then the five K representatives and a product of three quadratics."""
    items = [("random", random_null_sextic(rng)) for _ in range(count)]
    items += [(f"K{k}", rep) for k, rep in enumerate(K_REPRESENTATIVES, start=1)]
    items.append(
        ("three_quadratics", (X**2 + Y**2) * binary_form([2, 0, 1]) * binary_form([1, 0, 3]))
    )
    rows = []
    for index, (source, sextic) in enumerate(items):
        record = sextic_classify(sextic)
        brute = len(brute_force_preimages(sextic)) if record.is_null else None
        rows.append(ClassifiedSextic(index, source, sextic, record, brute))
    return rows


def classification_checks(rows: List[ClassifiedSextic]) -> List[CheckResult]:
    randoms = [r for r in rows if r.source == "random"]
    strata = {r.source: r.record for r in rows if r.source.startswith("K")}
    mismatches = [
        r.index
        for r in rows
        if r.brute_force is not None and r.brute_force != r.record.predicted_preimages
    ]
    k_bad = [
        name
        for k, name in enumerate(("K1", "K2", "K3", "K4", "K5"), start=1)
        if strata[name].k_stratum != k or not strata[name].gw_member
    ]
    three = next(r for r in rows if r.source == "three_quadratics")
    return [
        holds("fuchsian.random_sextics_null", all(r.record.is_null for r in randoms)),
        holds(
            "fuchsian.preimages_match_brute_force",
            not mismatches,
            f"mismatched rows: {mismatches[:10]}" if mismatches else f"{len(rows)} rows",
        ),
        holds("fuchsian.k_strata", not k_bad, f"wrong: {k_bad}" if k_bad else ""),
        holds(
            "fuchsian.k_strata_not_in_image",
            all(strata[f"K{k}"].predicted_preimages == 0 for k in range(1, 5))
            and all(
                r.record.predicted_preimages == 0
                for r in rows
                if r.record.k_stratum in (1, 2, 3, 4)
            ),
        ),
        holds("fuchsian.k5_one_preimage", strata["K5"].predicted_preimages == 1),
        holds("fuchsian.three_quadratics", three.record.predicted_preimages == 3),
    ]


@dataclass
class SignRow:
    t: Fraction
    q6_closed: Fraction
    q6_direct: Fraction
    count: int
    brute_force: int

    @property
    def sign(self) -> int:
        return (self.q6_closed > 0) - (self.q6_closed < 0)


def sign_table(t_values) -> List[SignRow]:
    """Q₆(w) over a t-grid, exact, with the null-line count of the float frame intersection."""
    rows = []
    base = HPoint(0.0, 1.0)
    for t in t_values:
        t = Fraction(f"{float(t):.12g}") if not isinstance(t, Fraction) else t
        if t == 1:
            continue
        report = fiber_degenerate_set(t)
        brute = degenerate_set(base, HPoint(0.0, float(t))).tn_p_in_q
        rows.append(SignRow(t, report.q6_closed, report.q6_direct, report.count, brute))
    return rows


def _sign_changes(values: List[int]) -> int:
    nonzero = [v for v in values if v != 0]
    return sum(1 for a, b in zip(nonzero, nonzero[1:]) if a != b)


def sign_table_checks(rows: List[SignRow]) -> List[CheckResult]:
    direct_signs = [(r.q6_direct > 0) - (r.q6_direct < 0) for r in rows]
    closed_signs = [r.sign for r in rows]
    return [
        holds("fuchsian.q6_w_closed_form", all(r.q6_direct == r.q6_closed for r in rows)),
        holds(
            "fuchsian.q6_w_sign_changes",
            _sign_changes(direct_signs) == _sign_changes(closed_signs),
            value=float(_sign_changes(closed_signs)),
        ),
        holds(
            "fuchsian.degenerate_counts_match",
            all(r.count == r.brute_force for r in rows),
            f"{sum(r.count != r.brute_force for r in rows)}/{len(rows)} differ",
        ),
    ]


def fuchsian_checks(settings: Settings, rng: np.random.Generator) -> List[CheckResult]:
    """Curve, frame, developing map, osculating planes, degenerate sets and root patterns."""
    s, tol = settings.sampling, settings.tolerances
    checks = []
    i = HPoint(0.0, 1.0)
    r2 = math.sqrt(2.0)

    jet_gap = max(
        float(np.max(np.abs(g_hat(i).to_array() - np.array([1, 0, 1]) / r2))),
        float(np.max(np.abs(g_x(i).to_array() - np.array([0, r2, 0])))),
        float(np.max(np.abs(g_y(i).to_array() - np.array([1, 0, -1]) / r2))),
    )
    checks.append(below("fuchsian.g_hat_at_i", jet_gap, tol.frame))
    expected_f = ((X**2 + Y**2) ** 3).to_array() * math.sqrt(5.0) / 4.0
    checks.append(
        below("fuchsian.f_hat_at_i", _sup(f_hat(i).to_array(), expected_f), tol.frame)
    )
    checks.append(holds("fuchsian.q6_veronese_exact", q6((X**2 + Y**2) ** 3) == Fraction(16, 5)))

    reference = frame_reference_check()
    checks.append(
        below(
            "fuchsian.frame_at_i",
            max(reference.vector_residual, reference.norm_residual, reference.binormal_residual),
            tol.frame,
        )
    )

    unit_gap = j_gap = gram_gap = 0.0
    for _ in range(s.curve_points):
        p = HPoint.random(rng)
        unit_gap = max(unit_gap, abs(float(q6(f_hat(p))) - 1.0))
        frame = frenet(p)
        j_gap = max(j_gap, j_invariance_residual(frame))
        rows = frame.rows()
        gram_gap = max(gram_gap, _sup(rows @ Q6_GRAM @ rows.T, np.diag(FRAME_SIGNS)))
    checks.append(below("fuchsian.q6_f_hat", unit_gap, tol.algebra))
    checks.append(below("fuchsian.j_invariance", j_gap, tol.equivariance))
    checks.append(below("fuchsian.alternating_frame", gram_gap, tol.algebra))

    equiv = 0.0
    for _ in range(s.frame_points):
        g, p = Moebius.random(rng), HPoint.random(rng)
        moved = f_hat(HPoint.from_complex(g.act(p.z))).to_array()
        image = psl2_embed(g).apply(f_hat(p).to_im()).to_array()
        equiv = max(equiv, _relative(image, moved))
    checks.append(below("fuchsian.equivariance", equiv, tol.equivariance))

    divisibility_bad = 0
    for _ in range(min(s.osculating_pairs, 20)):
        p = HPoint.random_rational(rng, bound=3)
        g = g_rational(p)
        rows = frenet(p).rows()
        osc = np.array([(g * monomial(4, k)).to_array() for k in range(5)])
        lt = np.array([(g * g * monomial(2, k)).to_array() for k in range(3)])
        divisibility_bad += not (
            linalg.same_span_float(rows[:5], osc) and linalg.same_span_float(rows[:3], lt)
        )
    checks.append(holds("fuchsian.divisibility", divisibility_bad == 0, f"{divisibility_bad} fail"))

    intersect_bad = 0
    for _ in range(s.osculating_pairs):
        p = HPoint.random_rational(rng)
        q = HPoint.random_rational(rng)
        while q == p:
            q = HPoint.random_rational(rng)
        report = osculating_intersect(p, q)
        intersect_bad += (report.dimension, report.signature) != (3, (1, 2))
    same = osculating_intersect(HPoint(0, 1), HPoint(0, 1))
    checks.append(
        holds(
            "fuchsian.osculating_intersections",
            intersect_bad == 0 and (same.dimension, same.signature) == (5, (3, 2)),
            f"{intersect_bad}/{s.osculating_pairs} off (3, (1, 2))",
        )
    )
    axis = osculating_intersect(HPoint(0, 1), HPoint(0, 2))
    timelike = (X**2 + Y**2) * binary_form([4, 0, 1]) * (X * Y)
    rows_exact = [list(b.coeffs) for b in axis.basis]
    checks.append(
        holds(
            "fuchsian.timelike_intersection",
            linalg.rank_exact(rows_exact + [list(timelike.coeffs)]) == 3 and q6(timelike) < 0,
            "P₁P_t·XY ∈ U_i ∩ U_2i with Q₆ < 0",
        )
    )

    t_values = []
    while len(t_values) < s.degenerate_t:
        t = Fraction(int(rng.integers(1, 40)), int(rng.integers(1, 10)))
        if t != 1:
            t_values.append(t)
    checks.extend(sign_table_checks(sign_table(t_values)))
    examples = fiber_degenerate_set(2).count == 0 and fiber_degenerate_set(4).count == 2
    checks.append(holds("fuchsian.degenerate_examples", examples, "t = 2 -> 0, t = 4 -> 2"))

    d_max = 0
    for _ in range(s.osculating_pairs):
        d_max = max(d_max, degenerate_set(HPoint.random(rng), HPoint.random(rng)).total)
    checks.append(holds("fuchsian.degenerate_bound", d_max <= 4, value=float(d_max)))

    null_gap, rank_min = 0.0, math.inf
    for _ in range(s.dev_samples):
        theta, alpha = rng.uniform(0.0, 2 * math.pi, size=2)
        r = float(np.exp(rng.uniform(-1, 1)))
        d = DevPoint(HPoint.random(rng), float(theta), float(alpha), r)
        lift = dev_lift(d)
        null_gap = max(null_gap, abs(float(quad_array(lift, lift))) / float(lift @ lift))
        rank_min = min(rank_min, dev_rank(d))
    checks.append(below("fuchsian.dev_null", null_gap, tol.null))
    checks.append(above("fuchsian.dev_immersion", rank_min, tol.immersion))

    drop = 0.0
    for _ in range(5):
        sv = extended_rank(HPoint.random(rng), 0.0, 0.0, float(rng.uniform(0, 2 * math.pi)))
        drop = max(drop, float(sv[-1] / sv[0]))
    checks.append(below("fuchsian.extension_rank_drop", drop, tol.rank_drop, "Π_N = 0 locus"))

    symmetry_bad = zero_bad = 0
    for _ in range(s.frame_points):
        p = HPoint.random(rng)
        a, b = rng.uniform(0.0, 2 * math.pi, size=2)
        u, n = (math.cos(a), math.sin(a)), (math.cos(b), math.sin(b))
        flipped = sigma_infinity(p, (-u[0], -u[1]), (-n[0], -n[1]))
        symmetry_bad += not sigma_infinity(p, u, n).same_as(flipped, tol=0.0)
        try:
            sigma_zero(p, float(a))
        except ValueError:
            zero_bad += 1
    checks.append(holds("fuchsian.sigma_infinity_two_to_one", symmetry_bad == 0))
    checks.append(holds("fuchsian.sigma_zero_null", zero_bad == 0))

    boundary_bad = 0
    for _ in range(20):
        a = binary_form([1, Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 10)))])
        shift = Fraction(int(rng.integers(1, 10)), int(rng.integers(1, 10)))
        b = binary_form([1, a.coeffs[1] + shift])
        boundary_bad += not boundary_transverse(a, b) or boundary_transverse(a, a.scale(3))
    checks.append(holds("fuchsian.boundary_transverse", boundary_bad == 0))

    geodesic_min = math.inf
    for _ in range(20):
        g = Moebius.random(rng)
        heights = np.exp(rng.uniform(-1.5, 1.5, size=3))
        points = [HPoint.from_complex(g.act(complex(0.0, float(h)))) for h in heights]
        geodesic_min = min(geodesic_min, geodesic_triple_q6(*points))
    checks.append(above("fuchsian.geodesic_triple", geodesic_min, 0.0))

    cert = k5_witness()
    checks.append(
        holds(
            "fuchsian.k5_witness",
            cert.coefficients == (Fraction(3, 8), Fraction(-1, 2), Fraction(1, 8))
            and cert.exact
            and cert.in_family,
        )
    )
    checks.extend(classification_checks(classify_sample(s.sextics, rng)))
    return checks


# ---------------------------------------------------------------------------
# hitchin_pde (pointwise and small-grid checks)
# ---------------------------------------------------------------------------


def _random_grid(rng: np.random.Generator, mode: GridMode, shape=(8, 6)) -> HitchinGrid:
    fields = rng.uniform(-0.3, 0.3, size=(2,) + shape)
    sigma = np.exp(rng.uniform(-0.2, 0.2, size=shape))
    q = rng.normal(size=shape) + 1j * rng.normal(size=shape)
    kappa = rng.uniform(-1.0, 1.0, size=shape)
    return HitchinGrid(fields[0], fields[1], sigma, q, kappa, 0.1, 0.15, mode)


def hitchin_checks(settings: Settings, rng: np.random.Generator) -> List[CheckResult]:
    """Higgs data, the unitary frame, residual oracle and bound identities."""
    s, tol = settings.sampling, settings.tolerances
    checks = []

    data = higgs_data(HiggsPoint(2.0 + 1.0j, 1.0, 1.0))
    phi = data.phi
    checks.append(
        holds(
            "hitchin.higgs_entries",
            math.isclose(phi[1, 0].real, math.sqrt(3))
            and math.isclose(phi[2, 1].real, math.sqrt(5))
            and phi[0, 5] == 2.0 + 1.0j
            and phi[1, 6] == 2.0 + 1.0j
            and np.array_equal(data.metric, np.eye(7)),
        )
    )
    w = frame_w_m(HiggsPoint(0.0, 1.0, 1.0))
    e = np.eye(7)
    checks.append(
        below("hitchin.frame_w_unit", max(_sup(w[0], e[0]), _sup(w[3], e[3])), tol.frame)
    )

    tau_gap = frame_gap = 0.0
    pattern_bad = 0
    for _ in range(s.frame_points):
        p = HiggsPoint.random(rng)
        data = higgs_data(p)
        tau_gap = max(tau_gap, data.tau_involution_residual, data.tau_phi_residual)
        frame = check_frame_w(p)
        frame_gap = max(
            frame_gap,
            frame.gram_residual,
            frame.cross_residual,
            frame.unitary_residual,
            frame.tau_residual,
            frame.closure_residual,
        )
        pattern_bad += tuple(int(round(v)) for v in frame.norms) != (1, 1, 1, -1, -1, -1, -1)
    checks.append(below("hitchin.tau_real_structure", tau_gap, tol.frame))
    checks.append(below("hitchin.frame_w", frame_gap, tol.equivariance))
    checks.append(holds("hitchin.frame_signature", pattern_bad == 0))

    oracle_gap = 0.0
    for n in range(s.oracle_fields):
        grid = _random_grid(rng, (GridMode.PERIODIC, GridMode.DIRICHLET)[n % 2])
        fast, slow = residual(grid), residual_oracle(grid)
        scale = max(1.0, float(np.max(np.abs(slow[0]))), float(np.max(np.abs(slow[1]))))
        gap = max(_sup(f, o) for f, o in zip(fast, slow))
        oracle_gap = max(oracle_gap, gap / scale)
    checks.append(below("hitchin.residual_oracle", oracle_gap, tol.residual_oracle, "relative"))

    c = settings.grid.q0**2
    flat = flat_instance(8, 8, settings.grid.q0, 0.0, flat_constants(c))
    flat_res = max(float(np.max(np.abs(r))) for r in residual(flat))
    local_res = max(float(np.max(np.abs(r))) for r in local_residual(flat))
    checks.append(below("hitchin.flat_closed_form_residual", flat_res, tol.frame))
    checks.append(below("hitchin.local_global_agree", local_res, tol.frame))
    bounds = verify_bounds(flat, tol.bound_slack)
    checks.append(
        holds(
            "hitchin.flat_saturates_bounds",
            bounds.passed and abs(bounds.first_margin) < 1e-9 and abs(bounds.second_margin) < 1e-9,
        )
    )
    zero = hyperbolic_instance(8, 8)
    exact_zero = all(not np.any(r) for r in residual(zero))
    checks.append(holds("hitchin.hyperbolic_zero_residual", exact_zero))
    analytic = hyperbolic_instance(settings.grid.nx, settings.grid.ny)
    gap = curvature_consistency(analytic)
    checks.append(below("hitchin.curvature_consistency", gap, 2.0 * analytic.hy**2, "O(h²)"))

    grid = _random_grid(rng, GridMode.PERIODIC)
    first = 3.0 - grid.q_norm2 * np.exp(-2.0 * grid.psi1 - 2.0 * grid.psi2)
    r, s_local = global_to_local(grid.psi1, grid.psi2, grid.sigma)
    gap = -det_iii(r, s_local, grid.q) / s_local
    checks.append(below("hitchin.det_iii_matches_bound", _relative(gap, first), tol.frame))
    second = 1.2 - np.exp(grid.psi1 - 5.0 * grid.psi2)
    checks.append(
        holds(
            "hitchin.linearization_sign",
            bool(np.all((linearization_definiteness(grid) > 0) == (second > 0))),
        )
    )
    return checks


VERIFY_SUITES: Dict[str, Suite] = {
    "octonion": octonion_checks,
    "g2": g2_checks,
    "ein": ein_checks,
    "fuchsian": fuchsian_checks,
    "hitchin": hitchin_checks,
}


def run_verify(config: Config) -> Report:
    """
    Run the enabled invariant suites and write the verify report.

    Args:
        config: Loaded configuration (seed and output directory already overridden)

    Returns:
        Report whose status is fail iff some check failed
    """
    settings = config.settings
    report = Report(suite="verify", provenance=_provenance("verify", config))
    for name, suite in VERIFY_SUITES.items():
        if not getattr(settings.suites, name):
            continue
        console.print(f"[cyan]▶ {name} suite[/cyan]")
        checks = suite(settings, suite_rng(settings.sampling.seed, name))
        failed = [c.name for c in checks if not c.passed]
        if failed:
            console.print(f"[red]✗ {name}: {len(failed)} of {len(checks)} checks failed[/red]")
        else:
            console.print(f"[green]✓ {name}: {len(checks)} checks passed[/green]")
        report.checks.extend(checks)

    out = Path(settings.output.directory)
    path = write_report(report, out / settings.output.verify_report)
    report.files.append(path.name)
    return report


# ---------------------------------------------------------------------------
# solve
# ---------------------------------------------------------------------------


def build_instance(name: str, settings: Settings, rng: np.random.Generator) -> HitchinGrid:
    g = settings.grid
    if name == "hyperbolic":
        initial = tuple(rng.uniform(-1.0, 1.0, size=2)) if g.random_initial else g.initial
        return hyperbolic_instance(
            g.nx, g.ny, g.epsilon, initial=initial, discrete_kappa=g.discrete_kappa
        )
    if name == "flat":
        return flat_instance(g.nx, g.ny, g.q0, 0.0, g.initial)
    if name == "perturbed":
        return flat_instance(g.nx, g.ny, g.q0, g.perturbation, g.initial)
    raise ValueError(f"unknown instance {name!r}")


def _closed_form_error(name: str, solution: HitchinGrid, settings: Settings) -> Optional[float]:
    g = settings.grid
    if name == "hyperbolic" and g.epsilon == 0 and not g.discrete_kappa:
        return float(max(np.max(np.abs(solution.psi1)), np.max(np.abs(solution.psi2))))
    if name in ("flat", "perturbed"):
        psi1, psi2 = torus_closed_form(solution)
        return max(_sup(solution.psi1, psi1), _sup(solution.psi2, psi2))
    return None


def field_rows(grid: HitchinGrid):
    x, y = grid.coordinates()
    for ix in range(grid.nx):
        for iy in range(grid.ny):
            yield (
                ix,
                iy,
                float(x[ix, iy]),
                float(y[ix, iy]),
                float(grid.psi1[ix, iy]),
                float(grid.psi2[ix, iy]),
            )


def solve_instance(
    name: str, settings: Settings, rng: np.random.Generator, out: Path
) -> Tuple[SolveSummary, List[CheckResult]]:
    """Solve one instance, write its fields and collect its checks."""
    g, tol = settings.grid, settings.tolerances
    grid = build_instance(name, settings, rng)
    summary = SolveSummary(
        label=grid.label,
        mode=grid.mode.value,
        nx=grid.nx,
        ny=grid.ny,
        synthetic=grid.synthetic,
        converged=False,
        iterations=0,
        residual=math.nan,
    )
    console.print(f"[cyan]▶ solving {grid.label} ({grid.nx}x{grid.ny}, {grid.mode.value})[/cyan]")
    if grid.synthetic:
        console.print(f"[yellow]{grid.label}: synthetic (torus, not a hyperbolic surface)[/yellow]")
    try:
        solution, result = newton_solve(grid, tol=g.newton_tol, max_iter=g.max_iter, verbose=True)
    except ConvergenceError as exc:
        if exc.report is not None:
            summary.iterations = exc.report.iterations
            summary.residual = exc.report.residual
            summary.history = list(exc.report.history)
            summary.steps = list(exc.report.steps)
        summary.error = str(exc)
        console.print(f"[red]✗ {grid.label}: {exc}[/red]")
        return summary, [holds(f"solve.{grid.label}.converged", False, str(exc))]
    except LinearSolverError as exc:
        summary.error = str(exc)
        console.print(f"[red]✗ {grid.label}: {exc}[/red]")
        return summary, [holds(f"solve.{grid.label}.converged", False, str(exc))]

    bounds = verify_bounds(solution, tol.bound_slack)
    summary.converged = True
    summary.iterations = result.iterations
    summary.residual = result.residual
    summary.history = list(result.history)
    summary.steps = list(result.steps)
    summary.first_margin = bounds.first_margin
    summary.second_margin = bounds.second_margin
    summary.det_gap = bounds.det_gap
    summary.violations = bounds.violations
    summary.strict = bounds.strict
    summary.psi_sup = float(max(np.max(np.abs(solution.psi1)), np.max(np.abs(solution.psi2))))
    summary.closed_form_error = _closed_form_error(name, solution, settings)

    label = grid.label
    checks = [
        holds(f"solve.{label}.converged", True, f"{result.iterations} iterations", result.residual),
        holds(f"solve.{label}.bounds", bounds.passed, f"{bounds.violations} violating nodes"),
        holds(
            f"solve.{label}.quadratic_tail",
            sum(1 for h in result.history if g.newton_tol < h < 1e-3) <= 4,
        ),
    ]
    if name == "hyperbolic":
        checks.append(
            holds(
                f"solve.{label}.iteration_budget",
                result.iterations <= HYPERBOLIC_NEWTON_BUDGET,
                f"{result.iterations} of {HYPERBOLIC_NEWTON_BUDGET}",
            )
        )
    if float(np.max(solution.kappa)) < 0:
        checks.append(holds(f"solve.{label}.strict_bounds", bounds.strict))
    elif not bounds.strict:
        margins = f"{bounds.first_margin:.2e}, {bounds.second_margin:.2e}"
        console.print(f"[yellow]{label}: bounds saturated (margins {margins})[/yellow]")
    if summary.closed_form_error is not None:
        error = summary.closed_form_error
        checks.append(below(f"solve.{label}.closed_form", error, tol.closed_form))

    if name in ("flat", "perturbed"):
        checks.extend(_sensitivity_checks(solution, summary, settings))

    csv_name = settings.output.fields_csv.format(label=label)
    summary.fields_csv = write_csv(out / csv_name, FIELD_HEADER, field_rows(solution)).name
    return summary, checks


def _sensitivity_checks(
    solution: HitchinGrid, summary: SolveSummary, settings: Settings
) -> List[CheckResult]:
    """Difference quotients in |q₀| on the torus instances; q = 0 hyperbolic data has none."""
    g, label = settings.grid, solution.label
    try:
        scan = sensitivity_scan(
            solution, 1.0, g.sensitivity_eps, tol=SENSITIVITY_TOL, max_iter=g.max_iter
        )
    except (ConvergenceError, LinearSolverError) as exc:
        return [holds(f"solve.{label}.sensitivity_stable", False, str(exc))]
    summary.sensitivity_eps = list(scan.eps)
    summary.sensitivity_ratios = list(scan.ratios)
    summary.stabilized = scan.stabilized
    checks = [holds(f"solve.{label}.sensitivity_stable", scan.stabilized)]
    # σ shifts the torus solution additively in ψ, so every torus shares the flat derivative
    expected = max(flat_sensitivity(g.q0))
    summary.expected_ratio = expected
    gap = abs(scan.ratios[-1] - expected) / expected
    checks.append(
        below(f"solve.{label}.sensitivity_derivative", gap, settings.tolerances.sensitivity_match)
    )
    return checks


def run_solve(config: Config) -> Report:
    """Solve every configured instance; fields go to CSV, margins and histories to the report."""
    settings = config.settings
    out = Path(settings.output.directory)
    rng = suite_rng(settings.sampling.seed, "solve")
    report = Report(suite="solve", provenance=_provenance("solve", config))
    for name in settings.grid.instances:
        summary, checks = solve_instance(name, settings, rng, out)
        report.solves.append(summary)
        report.checks.extend(checks)
        if summary.fields_csv:
            report.files.append(summary.fields_csv)
        if summary.synthetic:
            report.notes.append(f"{summary.label}: synthetic (torus, not a hyperbolic surface)")
    path = write_report(report, out / settings.output.solve_report)
    report.files.append(path.name)
    return report


# ---------------------------------------------------------------------------
# fuchsian
# ---------------------------------------------------------------------------


def fiber_rows(settings: Settings) -> List[Tuple]:
    """Developed fiber over the configured base point on a (θ, α, r) grid."""
    s = settings.sampling
    p = HPoint(*s.fiber_base)
    thetas = 2 * math.pi * np.arange(s.fiber_theta_steps) / s.fiber_theta_steps
    alphas = 2 * math.pi * np.arange(s.fiber_alpha_steps) / s.fiber_alpha_steps
    rows = []
    for theta in thetas:
        for alpha in alphas:
            for r in s.fiber_radii:
                lift = dev_lift(DevPoint(p, float(theta), float(alpha), float(r)))
                line = NullLine(ImVector.from_array(lift))
                params = (float(p.x), float(p.y), float(theta), float(alpha), float(r))
                rows.append(params + tuple(line.to_array()))
    return rows


def run_fuchsian(config: Config) -> Report:
    """Fiber point cloud, sextic classification table and the Q₆(w) sign table."""
    settings = config.settings
    s, tol, files = settings.sampling, settings.tolerances, settings.output
    out = Path(settings.output.directory)
    rng = suite_rng(settings.sampling.seed, "fuchsian")
    report = Report(suite="fuchsian", provenance=_provenance("fuchsian", config))

    console.print("[cyan]▶ developed fiber[/cyan]")
    rows = fiber_rows(settings)
    vectors = np.array([row[5:] for row in rows])
    norms = np.einsum("na,ab,nb->n", vectors, IM_GRAM, vectors)
    null_gap = float(np.max(np.abs(norms) / np.sum(vectors**2, axis=1)))
    family = frenet(HPoint(*s.fiber_base)).family()
    outside = sum(
        1 for v in vectors if not family_membership(family, NullLine(ImVector.from_array(v)))
    )
    report.checks.append(below("fuchsian.fiber_null", null_gap, tol.null))
    report.checks.append(
        holds("fuchsian.fiber_in_family", outside == 0, f"{outside}/{len(rows)} outside")
    )
    report.files.append(write_csv(out / files.fiber_csv, FIBER_HEADER, rows).name)

    console.print("[cyan]▶ sextic classification[/cyan]")
    classified = classify_sample(s.sextics, rng)
    report.checks.extend(classification_checks(classified))
    table = [
        (
            c.index,
            c.source,
            c.record.is_null,
            c.record.gw_member,
            c.record.k_stratum,
            c.record.omega_sector,
            c.record.predicted_preimages,
            c.brute_force,
            ";".join(str(m) for m in c.record.pattern.real),
            ";".join(str(m) for m in c.record.pattern.complex_pairs),
        )
        for c in classified
    ]
    classes_csv = write_csv(out / files.classification_csv, CLASSIFICATION_HEADER, table)
    report.files.append(classes_csv.name)

    console.print("[cyan]▶ Q₆(w) sign table[/cyan]")
    signs = sign_table(np.linspace(s.t_min, s.t_max, s.t_steps))
    report.checks.extend(sign_table_checks(signs))
    sign_rows = [
        (float(r.t), float(r.q6_closed), float(r.q6_direct), r.sign, r.count) for r in signs
    ]
    report.files.append(write_csv(out / files.sign_table_csv, SIGN_TABLE_HEADER, sign_rows).name)

    path = write_report(report, out / files.fuchsian_report)
    report.files.append(path.name)
    return report
