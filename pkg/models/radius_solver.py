"""
Radii of positivity of Re D(f; z).

The positivity radius of a function is the infimum of the radii r at which the
minimum of Re D over the circle |z| = r is no longer positive. Circle minima
come from an equispaced angular scan refined by golden-section search; radii
come from an ascending scan in fixed steps followed by bisection on the first
bracket, since the circle minimum need not be monotone in r.

The theorem suites evaluate sampled class members just inside the proved
radius of each case:

    i    U                   r1, the root of r^3 + 2 r^2 - 2 in (0, 1)
    ii   S*(1/2)             r2 = sqrt((sqrt 5 - 1) / 2)
    iii  G                   r3 = 2/3
    iv   S*                  r4 = 1/2
    v    the univalent class r5 = 1/4
"""
from __future__ import annotations

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
import pandas as pd
from scipy.optimize import bisect

from data import catalog
from data.class_labels import G, S_STAR, S_STAR_HALF, ClassLabel
from models.operator_d import AnalyticInput, eval_D, eval_D_from_p, eval_D_from_phi
from utils.exceptions import EvaluationOutOfRange, ToolkitError
from utils.schwarz import (
    SchwarzFunction,
    anchor_generators,
    make_member,
    make_u_member,
    random_disk_point,
    random_schwarz,
    starlike_series,
)
from utils.search import bisect_sign_change, golden_section_search
from utils.settings import DEFAULT_SETTINGS, Settings

logger = logging.getLogger(__name__)

CASES = ("i", "ii", "iii", "iv", "v")
SHARPNESS_CASES = ("i", "ii", "iii", "iv")
CASE_LABELS: dict[str, ClassLabel | None] = {"i": None, "ii": S_STAR_HALF, "iii": G, "iv": S_STAR, "v": None}
ROTATIONS = (np.pi / 2, np.pi)
ROOT_XTOL = 1e-15
THRESHOLD_TOL = 1e-12


class Relation(str, Enum):
    THEOREM_CONSISTENT = "theorem-consistent"
    COUNTEREXAMPLE = "counterexample"
    INCONSISTENT = "inconsistent with reference"
    NO_FAILURE = "no failure found"
    NOT_APPLICABLE = "n/a"


@dataclass(frozen=True)
class CircleScan:
    r: float
    n_angles: int
    min_value: float
    argmin_angle: float
    refined: bool

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "n_angles": self.n_angles,
            "min_value": self.min_value,
            "argmin_angle": self.argmin_angle,
            "refined": self.refined,
        }


def _series_backed(f: AnalyticInput) -> bool:
    return f.default_route == "series" or f.source == "p"


def _re_D(f: AnalyticInput, z) -> np.ndarray:
    return np.real(eval_D(f, z))


def _coarse_angles(n_angles: int) -> np.ndarray:
    return 2 * np.pi * np.arange(n_angles) / n_angles


def scan_circle(
    f: AnalyticInput,
    r: float,
    n_angles: int = DEFAULT_SETTINGS.scan_angles,
    settings: Settings = DEFAULT_SETTINGS,
    refine: bool = True,
) -> CircleScan:
    """
    Minimum of Re D(f; r e^{i theta}) over theta
    """
    if not 0 < r < 1:
        raise ValueError(f"radius must lie in (0, 1), got {r}")
    if _series_backed(f) and r > settings.series_trust_radius:
        raise EvaluationOutOfRange(f"series-backed input scanned at r = {r} > {settings.series_trust_radius}")
    theta = _coarse_angles(n_angles)
    values = _re_D(f, r * np.exp(1j * theta))
    i = int(np.argmin(values))
    min_value, argmin = float(values[i]), float(theta[i])
    refined = False
    if refine:
        step = 2 * np.pi / n_angles
        best = golden_section_search(
            lambda t: float(_re_D(f, r * np.exp(1j * t))),
            theta[i] - step,
            theta[i] + step,
            tol=settings.golden_tol,
        )
        if best.value < min_value:
            min_value, argmin, refined = float(best.value), float(best.x % (2 * np.pi)), True
    return CircleScan(r, n_angles, min_value, argmin, refined)


@dataclass(frozen=True)
class RadiusReport:
    function_id: str
    positivity_radius: float
    bracket: tuple[float, float]
    residual: float
    reference_radius: float | None = None
    relation: Relation = Relation.NOT_APPLICABLE

    def to_dict(self) -> dict:
        return {
            "function_id": self.function_id,
            "positivity_radius": self.positivity_radius,
            "bracket": list(self.bracket),
            "residual": self.residual,
            "reference_radius": self.reference_radius,
            "relation": self.relation.value,
        }


def _ascending_radii(cap: float, step: float) -> np.ndarray:
    n = int(np.floor(cap / step + 1e-9))
    radii = step * np.arange(1, n + 1)
    radii = radii[radii < cap - 1e-12]
    return np.append(radii, cap)


def _relation(radius: float, reference: float | None, counterexample: bool, tol: float) -> Relation:
    if reference is None:
        return Relation.NOT_APPLICABLE
    if counterexample:
        return Relation.COUNTEREXAMPLE if radius <= reference + tol else Relation.INCONSISTENT
    return Relation.THEOREM_CONSISTENT if radius >= reference - tol else Relation.INCONSISTENT


def _circle_minima(f: AnalyticInput, radii: np.ndarray, n_angles: int) -> np.ndarray | None:
    """
    Coarse minima of Re D on all circles at once; None when some point fails
    to evaluate, so that the caller can stop at the first failing circle instead
    """
    z = radii[:, None] * np.exp(1j * _coarse_angles(n_angles))[None, :]
    try:
        return _re_D(f, z).min(axis=1)
    except ToolkitError:
        return None


def positivity_radius(
    f: AnalyticInput,
    tol: float | None = None,
    settings: Settings = DEFAULT_SETTINGS,
    reference_radius: float | None = None,
    n_angles: int | None = None,
    refine: bool = True,
    counterexample: bool = False,
) -> RadiusReport:
    """
    First radius at which min Re D(f; .) over the circle stops being positive.

    Without a sign change below the cap the cap itself is reported with the
    relation "no failure found". ``reference_radius`` only labels the relation: a
    theorem radius bounds the result from below, a counterexample threshold
    (``counterexample=True``) from above.
    """
    tol = settings.bisection_tol if tol is None else tol
    if not tol > 0:
        raise ValueError(f"bisection tolerance must be positive, got {tol}")
    n_angles = n_angles or settings.scan_angles
    cap = settings.series_trust_radius if _series_backed(f) else settings.radius_cap

    def circle_min(r: float) -> float:
        return scan_circle(f, r, n_angles, settings, refine=refine).min_value

    radii = _ascending_radii(cap, settings.radius_step)
    minima = None if refine else _circle_minima(f, radii, n_angles)
    lo, lo_min = 0.0, 2.0
    for k, r in enumerate(radii):
        value = float(minima[k]) if minima is not None else circle_min(float(r))
        if value <= 0:
            lo, hi = bisect_sign_change(lambda x: circle_min(x) > 0, lo, float(r), tol)
            residual = circle_min(lo) if lo > 0 else 2.0
            report = RadiusReport(
                f.name,
                lo,
                (lo, hi),
                residual,
                reference_radius,
                _relation(lo, reference_radius, counterexample, settings.alert_tol),
            )
            logger.debug("positivity radius of %s: %.10f", f.name, lo)
            return report
        lo, lo_min = float(r), value
    logger.debug("no failure found for %s below %.3f", f.name, cap)
    return RadiusReport(f.name, cap, (cap, cap), lo_min, reference_radius, Relation.NO_FAILURE)


def r1_polynomial(r: float) -> float:
    return r**3 + 2 * r**2 - 2


def solve_r1() -> float:
    """
    Root of r^3 + 2 r^2 - 2 in (0, 1), about 0.8393
    """
    return float(bisect(r1_polynomial, 0.8, 0.9, xtol=ROOT_XTOL))


def case_radius(case: str, settings: Settings = DEFAULT_SETTINGS) -> float:
    if case not in CASES:
        raise ValueError(f"unknown case {case!r}; expected one of {', '.join(CASES)}")
    override = settings.radius_override.get(case)
    if override is not None:
        logger.warning("case %s radius overridden to %s", case, override)
        return float(override)
    return {
        "i": solve_r1,
        "ii": lambda: float(np.sqrt((np.sqrt(5.0) - 1) / 2)),
        "iii": lambda: 2.0 / 3.0,
        "iv": lambda: 0.5,
        "v": lambda: 0.25,
    }[case]()


def counterexample_threshold(name: str) -> float:
    """
    Radius from which D(f; r) <= 0 on the positive axis: 1 - e^-2 for f2,
    1/sqrt 2 for f3
    """
    if name == "f2":
        root, closed = bisect(lambda r: 2 + np.log(1 - r), 0.5, 0.99, xtol=ROOT_XTOL), 1 - np.exp(-2.0)
    elif name == "f3":
        root, closed = bisect(lambda r: catalog.f3_g(r).real, 0.5, 0.9, xtol=ROOT_XTOL), 1 / np.sqrt(2.0)
    else:
        raise ValueError(f"no counterexample threshold for {name!r}")
    if abs(root - closed) > THRESHOLD_TOL:
        logger.warning("threshold of %s: root %.15f differs from closed form %.15f", name, root, closed)
    return float(root)


def proof_lower_bound(case: str, r):
    """
    Lower bound for Re D on |z| = r obtained in the proof of each case; it
    changes sign exactly at the case radius
    """
    r = np.asarray(r, dtype=float)
    if case == "i":
        value = (2 - 2 * r**2 - r**3) / (2 * (1 - r**2))
    elif case == "ii":
        value = 2 * (np.sqrt(1 - r**2) - r**2) / (1 - r**2)
    elif case == "iii":
        value = (2 - 3 * r) / (1 - r)
    elif case == "iv":
        value = 2 * (1 - 2 * r) / (1 - r**2)
    elif case == "v":
        value = 2 * (1 - 4 * r) / (1 - r**2)
    else:
        raise ValueError(f"unknown case {case!r}")
    return float(value) if value.ndim == 0 else value


def boundary_root(case: str) -> float:
    return float(bisect(lambda r: proof_lower_bound(case, r), 0.01, 0.99, xtol=ROOT_XTOL))


@dataclass(frozen=True)
class SuiteRow:
    case: str
    member_id: str
    radius: float
    min_ReD: float | None
    angle: float | None
    generator: str
    error: dict | None = None

    @property
    def passed(self) -> bool:
        return self.error is None and self.min_ReD is not None and self.min_ReD > 0


@dataclass(frozen=True)
class SuiteReport:
    case: str
    radius: float
    samples: int
    seed: int
    rows: tuple[SuiteRow, ...]

    @property
    def suite_min(self) -> float | None:
        values = [row.min_ReD for row in self.rows if row.min_ReD is not None]
        return min(values) if values else None

    @property
    def failures(self) -> list[SuiteRow]:
        return [row for row in self.rows if not row.passed]

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [
                {"case": row.case, "member_id": row.member_id, "radius": row.radius, "min_ReD": row.min_ReD, "angle": row.angle}
                for row in self.rows
            ],
            columns=["case", "member_id", "radius", "min_ReD", "angle"],
        )

    def to_dict(self) -> dict:
        return {
            "case": self.case,
            "radius": self.radius,
            "samples": self.samples,
            "seed": self.seed,
            "members": len(self.rows),
            "suite_min": self.suite_min,
            "passed": self.passed,
            "failures": [
                {"member_id": row.member_id, "generator": row.generator, "min_ReD": row.min_ReD, "error": row.error}
                for row in self.failures
            ],
        }


def member_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng([seed, index])


def _case_inputs(case: str, samples: int, seed: int, settings: Settings) -> list[tuple[str, str, object]]:
    """
    (member id, generator spec, builder) triples; builders run inside the workers
    """
    if case == "v":
        members = []
        for name in catalog.list_names():
            members.append((name, name, lambda name=name: AnalyticInput.from_catalog(name)))
            for theta in ROTATIONS:
                member_id = f"{name}@{theta:.4f}"
                members.append(
                    (member_id, member_id, lambda name=name, theta=theta: AnalyticInput.from_catalog(
                        catalog.rotate(catalog.get(name), theta)))
                )
        return members

    centered = case != "i"
    generators = [(f"anchor-{j}", g) for j, g in enumerate(anchor_generators(centered))]
    generators += [(f"sample-{k}", random_schwarz(member_rng(seed, k), centered)) for k in range(samples)]
    if case == "i":
        return [(mid, g.to_spec(), lambda g=g: AnalyticInput.from_phi(g)) for mid, g in generators]
    label = CASE_LABELS[case]
    return [
        (mid, g.to_spec(), lambda g=g: AnalyticInput.from_member(make_member(label, g, settings.order)))
        for mid, g in generators
    ]


def _workers(settings: Settings) -> int:
    return settings.threads if settings.threads > 0 else (os.cpu_count() or 1)


def verify_theorem(
    case: str,
    samples: int | None = None,
    seed: int | None = None,
    settings: Settings = DEFAULT_SETTINGS,
) -> SuiteReport:
    """
    Scan every member of a case's suite on |z| = r_case - margin; the suite
    passes iff every circle minimum is positive. Member failures are recorded.
    """
    samples = settings.samples if samples is None else samples
    seed = settings.seed if seed is None else seed
    if samples < 1:
        raise ValueError("samples must be at least 1")
    radius = case_radius(case, settings) - settings.theorem_margin
    members = _case_inputs(case, samples, seed, settings)

    def run(item) -> SuiteRow:
        member_id, spec, build = item
        try:
            scan = scan_circle(build(), radius, settings.scan_angles, settings)
        except ToolkitError as exc:
            logger.warning("case %s member %s failed: %s", case, member_id, exc)
            return SuiteRow(case, member_id, radius, None, None, spec, exc.to_dict())
        return SuiteRow(case, member_id, radius, scan.min_value, scan.argmin_angle, spec)

    with ThreadPoolExecutor(max_workers=_workers(settings)) as pool:
        rows = tuple(pool.map(run, members))
    report = SuiteReport(case, radius, samples, seed, rows)
    logger.info(
        "case %s at r = %.6f: %d members, min Re D = %s, %s",
        case, radius, len(rows), report.suite_min, "pass" if report.passed else "FAIL",
    )
    return report


@dataclass(frozen=True)
class SharpnessReport:
    case: str
    budget: int
    seed: int
    evaluations: int
    best_radius: float
    best_generator: str
    theorem_radius: float
    alert: bool
    history: tuple[float, ...] = field(default_factory=tuple)

    @property
    def gap(self) -> float:
        return self.best_radius - self.theorem_radius

    @property
    def passed(self) -> bool:
        return not self.alert

    def to_dict(self) -> dict:
        return {
            "case": self.case,
            "budget": self.budget,
            "seed": self.seed,
            "evaluations": self.evaluations,
            "best_radius": self.best_radius,
            "best_generator": self.best_generator,
            "theorem_radius": self.theorem_radius,
            "gap": self.gap,
            "alert": self.alert,
        }


PROBE_DEGREE = 2
PROBE_MAX_MODULUS = 0.95
PROBE_ANGLES = 256
PROBE_STEP = 0.2
PROBE_MIN_STEP = 1e-3


def _clip_disk(x: float, y: float) -> complex:
    a = complex(x, y)
    return a if abs(a) <= PROBE_MAX_MODULUS else a * PROBE_MAX_MODULUS / abs(a)


def _generator_from_params(params: np.ndarray, premul_z: bool) -> SchwarzFunction:
    zeros = [_clip_disk(params[2 * j], params[2 * j + 1]) for j in range(PROBE_DEGREE)]
    return SchwarzFunction.blaschke(zeros, complex(np.exp(1j * params[-1])), premul_z=premul_z)


def _probe_input(case: str, generator: SchwarzFunction) -> AnalyticInput:
    if case == "i":
        return AnalyticInput.from_phi(generator)
    return AnalyticInput.from_omega(CASE_LABELS[case], generator)


def sharpness_probe(
    case: str,
    budget: int = 10_000,
    seed: int | None = None,
    settings: Settings = DEFAULT_SETTINGS,
    theorem_radius: float | None = None,
) -> SharpnessReport:
    """
    Search generator parameters for the member with the smallest positivity
    radius: deterministic anchors first, then random multistart with
    coordinate descent. Each positivity-radius evaluation spends one unit of
    budget.

    A radius below the theorem value (tolerance alert_tol) is a numerical
    contradiction and is logged as an error, never reported as a finding.
    """
    if case not in SHARPNESS_CASES:
        raise ValueError(f"sharpness probes cover cases {', '.join(SHARPNESS_CASES)}, got {case!r}")
    if budget < 100:
        raise ValueError("budget must be at least 100")
    seed = settings.seed if seed is None else seed
    theorem = case_radius(case, settings) if theorem_radius is None else theorem_radius
    rng = np.random.default_rng(seed)
    centered = case != "i"
    spent = 0
    best_radius, best_generator = float("inf"), None
    history: list[float] = []

    def radius_of(generator: SchwarzFunction) -> float:
        nonlocal spent, best_radius, best_generator
        spent += 1
        try:
            value = positivity_radius(
                _probe_input(case, generator), settings=settings, n_angles=PROBE_ANGLES, refine=False
            ).positivity_radius
        except ToolkitError as exc:
            logger.debug("probe candidate %s rejected: %s", generator.to_spec(), exc)
            return float("inf")
        if value < best_radius:
            best_radius, best_generator = value, generator
            history.append(value)
        return value

    for anchor in anchor_generators(centered):
        if spent >= budget:
            break
        radius_of(anchor)

    n_params = 2 * PROBE_DEGREE + 1
    while spent < budget:
        premul = True if centered else bool(rng.random() < 0.5)
        params = np.empty(n_params)
        for j in range(PROBE_DEGREE):
            a = random_disk_point(rng, 0.8)
            params[2 * j], params[2 * j + 1] = a.real, a.imag
        params[-1] = 2 * np.pi * rng.random()
        current = radius_of(_generator_from_params(params, premul))
        step = PROBE_STEP
        while step >= PROBE_MIN_STEP and spent < budget:
            improved = False
            for k in range(n_params):
                for sign in (1.0, -1.0):
                    if spent >= budget:
                        break
                    trial = params.copy()
                    trial[k] += sign * step
                    value = radius_of(_generator_from_params(trial, premul))
                    if value < current:
                        params, current, improved = trial, value, True
                        break
            if not improved:
                step /= 2

    confirmed = best_radius
    if best_generator is not None:
        confirmed = positivity_radius(_probe_input(case, best_generator), settings=settings).positivity_radius
    alert = confirmed < theorem - settings.alert_tol
    if alert:
        logger.error(
            "case %s: positivity radius %.10f below the theorem radius %.10f; numerical contradiction, check the implementation",
            case, confirmed, theorem,
        )
    logger.info("sharpness case %s: best radius %.6f after %d evaluations", case, confirmed, spent)
    return SharpnessReport(
        case,
        budget,
        seed,
        spent,
        float(confirmed),
        best_generator.to_spec() if best_generator is not None else "",
        float(theorem),
        bool(alert),
        tuple(history),
    )


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: dict

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, **self.detail}


def _counterexample_checks(settings: Settings) -> list[CheckResult]:
    f2 = AnalyticInput.from_catalog("f2")
    f3 = AnalyticInput.from_catalog("f3")
    checks = []
    for name, closed in (("f2", 1 - np.exp(-2.0)), ("f3", 1 / np.sqrt(2.0))):
        root = counterexample_threshold(name)
        checks.append(CheckResult(f"threshold-{name}", abs(root - closed) <= THRESHOLD_TOL, {"root": root, "closed_form": closed}))
    scans = (
        ("scan-f2-0.87", f2, 0.87, 1024, lambda v: v < 0),
        ("scan-f3-0.75", f3, 0.75, 4096, lambda v: v < 0),
        ("scan-f2-0.24", f2, 0.24, 1024, lambda v: v > 0),
    )
    for name, f, r, n, ok in scans:
        scan = scan_circle(f, r, n, settings)
        checks.append(CheckResult(name, bool(ok(scan.min_value)), scan.to_dict()))
    return checks


ORACLE_POINTS = 200
ORACLE_PAIRS = 50
ORACLE_ORDER = 160
ORACLE_TOL = 1e-8
U_ORACLE_RADIUS = 0.7


def _disk_points(rng: np.random.Generator, n: int, max_modulus: float) -> np.ndarray:
    return np.array([random_disk_point(rng, max_modulus) for _ in range(n)])


def route_agreement(name: str, seed: int, settings: Settings = DEFAULT_SETTINGS) -> CheckResult:
    """
    Closed, series and p routes of D for a catalog function at seeded random points
    """
    rng = np.random.default_rng([seed, 1])
    order = max(settings.order, ORACLE_ORDER)
    f = AnalyticInput.from_catalog(name, order)
    wide = _disk_points(rng, ORACLE_POINTS, 0.9)
    inner = wide[np.abs(wide) <= settings.series_trust_radius]
    closed = eval_D(f, wide)
    by_p = eval_D(f, wide, route="p")
    by_series = eval_D(f, inner, route="series")
    by_p_series = eval_D_from_p(starlike_series(f.f_series), inner)
    closed_inner = eval_D(f, inner)
    deviations = {
        "closed_vs_p": float(np.max(np.abs(closed - by_p))),
        "closed_vs_series": float(np.max(np.abs(closed_inner - by_series))) if inner.size else 0.0,
        "closed_vs_p_series": float(np.max(np.abs(closed_inner - by_p_series))) if inner.size else 0.0,
    }
    return CheckResult(f"routes-{name}", max(deviations.values()) <= ORACLE_TOL, deviations)


def phi_route_agreement(seed: int, settings: Settings = DEFAULT_SETTINGS) -> CheckResult:
    """
    D through the phi form against D of the built member of U, for seeded (phi, u1)
    """
    worst = 0.0
    for k in range(ORACLE_PAIRS):
        rng = member_rng(seed, 10_000 + k)
        phi = random_schwarz(rng, centered=False)
        u1 = random_disk_point(rng, 0.2)
        member = make_u_member(phi, u1, max(settings.order, ORACLE_ORDER), settings)
        z = _disk_points(rng, 8, U_ORACLE_RADIUS)
        built = eval_D(AnalyticInput.from_series(member.f_series), z)
        worst = max(worst, float(np.max(np.abs(built - eval_D_from_phi(phi, z)))))
    return CheckResult("routes-phi", worst <= ORACLE_TOL, {"max_deviation": worst, "pairs": ORACLE_PAIRS})


@dataclass(frozen=True)
class VerificationSummary:
    suites: tuple[SuiteReport, ...]
    checks: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.suites) and all(c.passed for c in self.checks)

    def failures(self) -> list[str]:
        names = [f"case {s.case}" for s in self.suites if not s.passed]
        return names + [c.name for c in self.checks if not c.passed]

    def to_frame(self) -> pd.DataFrame:
        return pd.concat([s.to_frame() for s in self.suites], ignore_index=True)

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "failures": self.failures(),
            "suites": [s.to_dict() for s in self.suites],
            "checks": [c.to_dict() for c in self.checks],
        }


def verify_all(
    samples: int | None = None,
    seed: int | None = None,
    settings: Settings = DEFAULT_SETTINGS,
) -> VerificationSummary:
    """
    Every theorem suite, both counterexamples and the cross-route checks
    """
    seed = settings.seed if seed is None else seed
    suites = tuple(verify_theorem(case, samples, seed, settings) for case in CASES)
    checks = _counterexample_checks(settings)
    checks += [route_agreement(name, seed, settings) for name in catalog.list_names()]
    checks.append(phi_route_agreement(seed, settings))
    summary = VerificationSummary(suites, tuple(checks))
    if not summary.passed:
        logger.warning("verification failed: %s", ", ".join(summary.failures()))
    return summary
