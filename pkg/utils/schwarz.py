"""
Schwarz functions: analytic self-maps of the unit disk.

Three shapes are supported, all with closed-form value and derivative:

    constant     s(z) = c,                 |c| <= 1
    monomial     s(z) = zeta z^m,          |zeta| <= 1, m >= 0
    blaschke     s(z) = zeta [z] prod_j (z + a_j) / (1 + conj(a_j) z),  |a_j| < 1

The module also builds class members from them: starlike-type members from a
centered omega through zf'/f = p(omega), and members of U from phi through
(z/f)^2 f' = 1 + z^2 phi.
"""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from data.class_labels import ClassLabel, ClassTag
from utils.exceptions import (
    InvalidSchwarzSpec,
    NonUnitP,
    OmegaNotCentered,
    UnsupportedLabel,
    UVanishes,
)
from utils.settings import DEFAULT_SETTINGS, Settings
from utils.taylor_series import TaylorSeries, div, exp_series, integrate0, mul

logger = logging.getLogger(__name__)

CENTER_TOL = 1e-14
MODULUS_SLACK = 1e-12
U_ZERO_EPS = 1e-9


@dataclass(frozen=True)
class SchwarzFunction:
    """
    Closed-form Schwarz function (see module docstring for the shapes)
    """

    kind: str
    constant: complex = 0j
    zeta: complex = 1 + 0j
    power: int = 0
    zeros: tuple[complex, ...] = field(default_factory=tuple)
    premul_z: bool = False

    def __post_init__(self):
        if self.kind == "constant":
            if abs(self.constant) > 1 + MODULUS_SLACK:
                raise InvalidSchwarzSpec(f"constant {self.constant} lies outside the closed disk")
        elif self.kind == "monomial":
            if abs(self.zeta) > 1 + MODULUS_SLACK or self.power < 0:
                raise InvalidSchwarzSpec(f"monomial needs |zeta| <= 1 and m >= 0, got {self.zeta}, {self.power}")
        elif self.kind == "blaschke":
            if abs(self.zeta) > 1 + MODULUS_SLACK:
                raise InvalidSchwarzSpec(f"prefactor {self.zeta} lies outside the closed disk")
            if any(abs(a) >= 1 for a in self.zeros):
                raise InvalidSchwarzSpec(f"Blaschke parameters must satisfy |a| < 1, got {self.zeros}")
        else:
            raise InvalidSchwarzSpec(f"unknown Schwarz function kind {self.kind!r}")

    @classmethod
    def const(cls, c: complex) -> "SchwarzFunction":
        return cls("constant", constant=complex(c))

    @classmethod
    def monomial(cls, zeta: complex, m: int) -> "SchwarzFunction":
        return cls("monomial", zeta=complex(zeta), power=int(m))

    @classmethod
    def blaschke(cls, zeros=(), zeta: complex = 1.0, premul_z: bool = False) -> "SchwarzFunction":
        return cls("blaschke", zeta=complex(zeta), zeros=tuple(complex(a) for a in zeros), premul_z=bool(premul_z))

    @property
    def is_centered(self) -> bool:
        return abs(complex(eval_schwarz(self, 0.0))) <= CENTER_TOL

    def __call__(self, z):
        return eval_schwarz(self, z)

    def derivative(self, z):
        return eval_schwarz_deriv(self, z)

    def to_series(self, order: int = DEFAULT_SETTINGS.order) -> TaylorSeries:
        if self.kind == "constant":
            return TaylorSeries.constant(self.constant, order)
        if self.kind == "monomial":
            c = np.zeros(order + 1, dtype=complex)
            if self.power <= order:
                c[self.power] = self.zeta
            return TaylorSeries(c, order)
        series = TaylorSeries.constant(self.zeta, order)
        for a in self.zeros:
            factor = div(TaylorSeries([a, 1.0], order), TaylorSeries([1.0, np.conj(a)], order))
            series = mul(series, factor)
        return series.shift_up() if self.premul_z else series

    def to_spec(self) -> str:
        if self.kind == "constant":
            return f"const:{_fmt(self.constant)}"
        if self.kind == "monomial":
            return f"monomial:{_fmt(self.zeta)},{self.power}"
        zeros = ",".join(_fmt(a) for a in self.zeros)
        return f"blaschke:[{zeros}],{_fmt(self.zeta)},premul_z:{str(self.premul_z).lower()}"

    def to_dict(self) -> dict:
        return {"spec": self.to_spec(), "kind": self.kind, "centered": self.is_centered}


def _fmt(c: complex) -> str:
    c = complex(c)
    return repr(c.real) if c.imag == 0 else repr(c).strip("()")


def eval_schwarz(s: SchwarzFunction, z):
    zz = np.asarray(z, dtype=complex)
    if s.kind == "constant":
        value = np.full_like(zz, s.constant)
    elif s.kind == "monomial":
        value = s.zeta * zz**s.power
    else:
        value = np.full_like(zz, s.zeta)
        for a in s.zeros:
            value = value * (zz + a) / (1 + np.conj(a) * zz)
        if s.premul_z:
            value = value * zz
    return complex(value) if value.ndim == 0 else value


def eval_schwarz_deriv(s: SchwarzFunction, z):
    zz = np.asarray(z, dtype=complex)
    if s.kind == "constant":
        value = np.zeros_like(zz)
    elif s.kind == "monomial":
        value = np.zeros_like(zz) if s.power == 0 else s.zeta * s.power * zz ** (s.power - 1)
    else:
        factors = [(zz + a) / (1 + np.conj(a) * zz) for a in s.zeros]
        slopes = [(1 - abs(a) ** 2) / (1 + np.conj(a) * zz) ** 2 for a in s.zeros]
        product = np.ones_like(zz)
        for fac in factors:
            product = product * fac
        # product rule, one factor differentiated at a time
        dproduct = np.zeros_like(zz)
        for j, slope in enumerate(slopes):
            term = slope
            for k, fac in enumerate(factors):
                if k != j:
                    term = term * fac
            dproduct = dproduct + term
        if s.premul_z:
            value = s.zeta * (product + zz * dproduct)
        else:
            value = s.zeta * dproduct
    return complex(value) if value.ndim == 0 else value


def schwarz_pick_gap(s: SchwarzFunction, z):
    """
    (1 - |s(z)|^2) / (1 - |z|^2) - |s'(z)|, nonnegative for every Schwarz function
    """
    zz = np.asarray(z, dtype=complex)
    value = (1 - np.abs(eval_schwarz(s, zz)) ** 2) / (1 - np.abs(zz) ** 2) - np.abs(eval_schwarz_deriv(s, zz))
    return float(value) if np.ndim(value) == 0 else value


def omega_centered_gap(s: SchwarzFunction, z):
    """
    (r^2 - |w|^2) / (1 - r^2) - |z w'(z) - w(z)| with r = |z|, for w(0) = 0
    """
    if not s.is_centered:
        raise OmegaNotCentered(f"omega(0) = {eval_schwarz(s, 0.0)} is not zero", point=0j)
    zz = np.asarray(z, dtype=complex)
    r2 = np.abs(zz) ** 2
    w = np.asarray(eval_schwarz(s, zz))
    lhs = np.abs(zz * np.asarray(eval_schwarz_deriv(s, zz)) - w)
    value = (r2 - np.abs(w) ** 2) / (1 - r2) - lhs
    return float(value) if np.ndim(value) == 0 else value


def phi_t_max(r: float) -> float:
    """
    max over t in [0, r] of (r^2 - t^2) / (1 - t), which equals 2(1 - sqrt(1 - r^2))
    """
    if not 0 < r < 1:
        raise ValueError(f"radius must lie in (0, 1), got {r}")
    return 2.0 * (1.0 - np.sqrt(1.0 - r * r))


def phi_t_maximizer(r: float) -> float:
    return 1.0 - np.sqrt(1.0 - r * r)


class ArcsinChain(NamedTuple):
    lhs: float
    rhs: float


def arcsin_chain(t: float) -> ArcsinChain:
    """
    Both sides of arcsin(1 - t^2) + arcsin(t / sqrt 2) = arcsin sqrt(1 - t^2 / 2)
    """
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t must lie in [0, 1], got {t}")
    # arctan2 forms; plain arcsin loses digits next to 1
    lhs = np.arctan2(1.0 - t * t, t * np.sqrt(2.0 - t * t)) + np.arcsin(t / np.sqrt(2.0))
    rhs = np.arctan2(np.sqrt(1.0 - t * t / 2.0), t / np.sqrt(2.0))
    return ArcsinChain(float(lhs), float(rhs))


def starlike_series(f: TaylorSeries) -> TaylorSeries:
    """
    Series of z f'(z) / f(z) for a normalized f
    """
    return div(f.derivative(), f.shift_down())


def f_from_p(p: TaylorSeries) -> TaylorSeries:
    """
    Normalized f with z f'/f = p, via f(z) = z exp(int_0^z (p(t) - 1) / t dt)
    """
    if abs(p[0] - 1.0) > 1e-12:
        raise NonUnitP(f"p(0) must be 1, got {p[0]}")
    # (p - 1) / z, degree N padded with zero
    integrand = TaylorSeries(p.coeffs[1:], p.order)
    f = exp_series(integrate0(integrand)).shift_up()
    recovered = starlike_series(f)
    degree = max(p.order - 2, 0)
    scale = max(1.0, float(np.max(np.abs(p.coeffs))))
    if not recovered.allclose(p, atol=1e-8 * scale, degree=degree):
        logger.warning("f_from_p round trip drifted beyond 1e-8 (order %d)", p.order)
    return f


def p_from_omega(label: ClassLabel, w, dw):
    """
    Values of p = zf'/f and dp/dz from omega(z) and omega'(z) for a label's
    representation: S*(alpha) gives (1 + (1 - 2 alpha) w) / (1 - w),
    G gives (1 - w) / (1 - w / 2)
    """
    w = np.asarray(w, dtype=complex)
    dw = np.asarray(dw, dtype=complex)
    if label.tag in (ClassTag.S_STAR, ClassTag.S_STAR_ORDER):
        alpha = 0.0 if label.alpha is None else label.alpha
        beta = 1.0 - 2.0 * alpha
        p = (1 + beta * w) / (1 - w)
        dp = (2.0 - 2.0 * alpha) * dw / (1 - w) ** 2
    elif label.tag is ClassTag.G:
        p = (1 - w) / (1 - w / 2)
        dp = -0.5 * dw / (1 - w / 2) ** 2
    else:
        raise UnsupportedLabel(f"no omega representation for class {label}")
    return p, dp


def _p_series_from_omega(label: ClassLabel, w: TaylorSeries) -> TaylorSeries:
    one = TaylorSeries.constant(1.0, w.order)
    if label.tag in (ClassTag.S_STAR, ClassTag.S_STAR_ORDER):
        alpha = 0.0 if label.alpha is None else label.alpha
        return div(one + w * (1.0 - 2.0 * alpha), one - w)
    if label.tag is ClassTag.G:
        return div(one - w, one - w * 0.5)
    raise UnsupportedLabel(f"no omega representation for class {label}")


@dataclass(frozen=True)
class FamilyMember:
    """
    A class member generated from a Schwarz function.

    For U members the generator plays phi and u1 is the free z coefficient of
    z/f; for the other labels the generator plays a centered omega.
    """

    class_label: ClassLabel
    generator: SchwarzFunction
    u1: complex
    p_series: TaylorSeries
    f_series: TaylorSeries

    @property
    def is_u_member(self) -> bool:
        return self.class_label.tag is ClassTag.U

    def p_values(self, z):
        """
        Closed-form p and p' at z from the omega representation
        """
        if self.is_u_member:
            raise UnsupportedLabel("U members carry no closed-form p")
        return p_from_omega(self.class_label, self.generator(z), self.generator.derivative(z))

    def to_dict(self, n_coeffs: int = 16) -> dict:
        def pairs(series: TaylorSeries):
            return [[float(c.real), float(c.imag)] for c in series.coeffs[:n_coeffs]]

        return {
            "class": str(self.class_label),
            "generator": self.generator.to_dict(),
            "u1": [float(complex(self.u1).real), float(complex(self.u1).imag)],
            "f_coeffs": pairs(self.f_series),
            "p_coeffs": pairs(self.p_series),
        }


SUPPORTED_MEMBER_TAGS = (ClassTag.S_STAR, ClassTag.S_STAR_ORDER, ClassTag.G)


def make_member(label: ClassLabel, omega: SchwarzFunction, order: int = DEFAULT_SETTINGS.order) -> FamilyMember:
    if label.tag not in SUPPORTED_MEMBER_TAGS:
        raise UnsupportedLabel(f"cannot generate members of {label} from omega")
    if not omega.is_centered:
        raise OmegaNotCentered(f"omega(0) = {omega(0.0)} is not zero", point=0j)
    p = _p_series_from_omega(label, omega.to_series(order))
    f = f_from_p(p)
    logger.debug("built %s member from %s", label, omega.to_spec())
    return FamilyMember(label, omega, 0j, p, f)


def u_series(phi: SchwarzFunction, u1: complex, order: int) -> TaylorSeries:
    """
    u = z/f solving u - z u' = 1 + z^2 phi: u_0 = 1, u_1 = u1 (free),
    u_k = -phi_{k-2} / (k - 1) for k >= 2
    """
    phi_c = phi.to_series(order).coeffs
    u = np.zeros(order + 1, dtype=complex)
    u[0] = 1.0
    if order >= 1:
        u[1] = u1
    k = np.arange(2, order + 1)
    u[2:] = -phi_c[: order - 1] / (k - 1)
    return TaylorSeries(u, order)


def _check_u_zero_free(u: TaylorSeries, settings: Settings) -> None:
    radii = [r for r in settings.grid_radii if r <= settings.series_trust_radius]
    theta = 2 * np.pi * np.arange(settings.grid_angles) / settings.grid_angles
    for r in radii:
        z = r * np.exp(1j * theta)
        values = np.abs(u(z))
        idx = int(np.argmin(values))
        if values[idx] < U_ZERO_EPS:
            raise UVanishes(f"z/f vanishes near |z| = {r}", point=complex(z[idx]))


def make_u_member(
    phi: SchwarzFunction,
    u1: complex = 0j,
    order: int = DEFAULT_SETTINGS.order,
    settings: Settings = DEFAULT_SETTINGS,
) -> FamilyMember:
    """
    Member of U with (z/f)^2 f' = 1 + z^2 phi, built as f = z / u
    """
    u = u_series(phi, u1, order)
    _check_u_zero_free(u, settings)
    f = div(TaylorSeries.constant(1.0, order), u).shift_up()
    p = starlike_series(f)
    return FamilyMember(ClassLabel(ClassTag.U), phi, complex(u1), p, f)


def _complex(text: str) -> complex:
    try:
        return complex(text.strip().replace(" ", ""))
    except ValueError as exc:
        raise InvalidSchwarzSpec(f"bad complex number {text!r}") from exc


def parse_schwarz_spec(text: str) -> SchwarzFunction:
    """
    Parse ``const:c``, ``monomial:zeta,m`` or ``blaschke:[a1,a2],zeta,premul_z:<bool>``
    """
    text = text.strip()
    kind, _, body = text.partition(":")
    if kind == "const":
        return SchwarzFunction.const(_complex(body))
    if kind == "monomial":
        parts = body.split(",")
        if len(parts) != 2:
            raise InvalidSchwarzSpec(f"monomial spec needs zeta,m: {text!r}")
        return SchwarzFunction.monomial(_complex(parts[0]), int(parts[1]))
    if kind == "blaschke":
        match = re.fullmatch(r"\[(.*)\]\s*(?:,\s*([^,]+))?\s*(?:,\s*premul_z\s*:\s*(\w+))?", body)
        if match is None:
            raise InvalidSchwarzSpec(f"bad blaschke spec {text!r}")
        zeros = [_complex(a) for a in match.group(1).split(",") if a.strip()]
        zeta = _complex(match.group(2)) if match.group(2) else 1.0
        flag = (match.group(3) or "false").lower()
        if flag not in ("true", "false"):
            raise InvalidSchwarzSpec(f"premul_z must be true or false, got {flag!r}")
        return SchwarzFunction.blaschke(zeros, zeta, premul_z=flag == "true")
    raise InvalidSchwarzSpec(f"unknown Schwarz spec {text!r}")


def random_disk_point(rng: np.random.Generator, max_modulus: float) -> complex:
    rho = max_modulus * np.sqrt(rng.random())
    return complex(rho * np.exp(2j * np.pi * rng.random()))


def random_schwarz(
    rng: np.random.Generator,
    centered: bool,
    max_modulus: float = 0.8,
    max_degree: int = 2,
) -> SchwarzFunction:
    """
    Blaschke product with 0..max_degree parameters drawn uniformly in |a| <= max_modulus
    and a unimodular prefactor; centered draws always carry the z factor
    """
    degree = int(rng.integers(0, max_degree + 1))
    zeros = [random_disk_point(rng, max_modulus) for _ in range(degree)]
    zeta = complex(np.exp(2j * np.pi * rng.random()))
    premul = True if centered else bool(rng.random() < 0.5)
    return SchwarzFunction.blaschke(zeros, zeta, premul_z=premul)


def anchor_generators(centered: bool) -> list[SchwarzFunction]:
    """
    Deterministic near-extremal generators included in every theorem suite
    """
    anchors = [SchwarzFunction.monomial(1.0, m) for m in range(1, 5)]
    anchors += [SchwarzFunction.monomial(-1.0, m) for m in range(1, 5)]
    if not centered:
        anchors += [SchwarzFunction.const(1.0), SchwarzFunction.const(-1.0), SchwarzFunction.const(1j)]
    return anchors
