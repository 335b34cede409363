"""
The operator D(f; z) = 2 z f'/f - z f''/f' and the class functionals around it.

Four evaluation routes are kept apart so they can be checked against each
other:

    closed  closed forms of f, f', f'' from the catalog
    series  Horner evaluation of a truncated Taylor series of f
    p       the identity D = p + 1 - z p'/p with p = z f'/f
    phi     D = 2 (1 - z^3 phi'/2) / (1 + z^2 phi) for members of U

Every evaluator takes a point or a numpy array of points and returns a complex
number or an array of the same shape.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from data.catalog import CatalogFunction
from data.catalog import get as get_catalog
from data.class_labels import ClassLabel
from utils.exceptions import (
    CriticalPoint,
    DenominatorVanish,
    EvaluationOutOfRange,
    OmegaNotCentered,
    UnsupportedRoute,
    ZeroP,
    ZeroValue,
)
from utils.schwarz import FamilyMember, SchwarzFunction, p_from_omega, starlike_series
from utils.settings import DEFAULT_SETTINGS
from utils.taylor_series import TaylorSeries

logger = logging.getLogger(__name__)

SINGULAR_EPS = DEFAULT_SETTINGS.singular_eps
NORMALIZATION_TOL = 1e-12

ROUTES = ("closed", "series", "p", "phi")


def _points(z) -> np.ndarray:
    return np.asarray(z, dtype=complex)


def _out(value):
    return complex(value) if np.ndim(value) == 0 else value


def _first(mask: np.ndarray, z: np.ndarray) -> complex:
    return complex(z[mask].flat[0]) if np.ndim(z) else complex(z)


def _check_disk(z: np.ndarray) -> None:
    outside = ~(np.abs(z) < 1)
    if np.any(outside):
        point = _first(outside, z)
        raise EvaluationOutOfRange(f"z = {point} is not in the open unit disk", point=point)


@dataclass(frozen=True)
class AnalyticInput:
    """
    A function handed to the evaluators.

    ``source`` is one of catalog, series, p, phi, omega or member. Only the field
    belonging to the source is required; members also carry their f series.
    """

    source: str
    name: str
    catalog: CatalogFunction | None = None
    f_series: TaylorSeries | None = None
    p_series: TaylorSeries | None = None
    phi: SchwarzFunction | None = None
    member: FamilyMember | None = None
    omega: SchwarzFunction | None = None
    class_label: ClassLabel | None = None

    @classmethod
    def from_catalog(cls, fn: CatalogFunction | str, order: int | None = None) -> "AnalyticInput":
        if isinstance(fn, str):
            fn = get_catalog(fn) if order is None else get_catalog(fn, order)
        return cls("catalog", fn.name, catalog=fn, f_series=fn.series)

    @classmethod
    def from_series(cls, f: TaylorSeries, name: str = "series") -> "AnalyticInput":
        if abs(f[0]) > NORMALIZATION_TOL or (f.order >= 1 and abs(f[1] - 1.0) > NORMALIZATION_TOL):
            raise ValueError(f"series of f must start 0 + z, got {f[0]} + {f[1] if f.order else 0}z")
        return cls("series", name, f_series=f)

    @classmethod
    def from_p(cls, p: TaylorSeries, name: str = "p") -> "AnalyticInput":
        if abs(p[0] - 1.0) > NORMALIZATION_TOL:
            raise ValueError(f"p(0) must be 1, got {p[0]}")
        return cls("p", name, p_series=p)

    @classmethod
    def from_phi(cls, phi: SchwarzFunction, name: str | None = None) -> "AnalyticInput":
        return cls("phi", name or phi.to_spec(), phi=phi)

    @classmethod
    def from_omega(cls, label: ClassLabel, omega: SchwarzFunction) -> "AnalyticInput":
        """
        Member of a class given by z f'/f = p(omega), evaluated in closed form
        without building series
        """
        if not omega.is_centered:
            raise OmegaNotCentered(f"omega(0) = {omega(0.0)} is not zero", point=0j)
        # raises UnsupportedLabel for labels without an omega representation
        p_from_omega(label, 0j, 0j)
        return cls("omega", f"{label}:{omega.to_spec()}", omega=omega, class_label=label)

    @classmethod
    def from_member(cls, member: FamilyMember) -> "AnalyticInput":
        name = f"{member.class_label}:{member.generator.to_spec()}"
        return cls(
            "member",
            name,
            f_series=member.f_series,
            p_series=member.p_series,
            phi=member.generator if member.is_u_member else None,
            member=member,
        )

    @property
    def order(self) -> int | None:
        series = self.f_series if self.f_series is not None else self.p_series
        return None if series is None else series.order

    @property
    def default_route(self) -> str:
        if self.source == "catalog":
            return "closed"
        if self.source == "member":
            return "phi" if self.member.is_u_member else "p"
        if self.source == "omega":
            return "p"
        return self.source

    @property
    def u_phi(self) -> SchwarzFunction | None:
        if self.phi is not None:
            return self.phi
        if self.catalog is not None:
            return self.catalog.u_phi
        return None

    def f_values(self, z: np.ndarray, route: str = "closed"):
        """
        f, f' and f'' at z through the closed or the series route
        """
        if route == "closed":
            if self.catalog is None:
                raise UnsupportedRoute(f"{self.name} has no closed form")
            return self.catalog.f(z), self.catalog.df(z), self.catalog.d2f(z)
        if route == "series":
            if self.f_series is None:
                raise UnsupportedRoute(f"{self.name} has no series of f")
            df = self.f_series.derivative()
            return _as_array(self.f_series(z)), _as_array(df(z)), _as_array(df.derivative()(z))
        raise UnsupportedRoute(f"route {route!r} does not give values of f")

    def p_values(self, z: np.ndarray):
        """
        p = z f'/f and p' at z by the most direct means available
        """
        if self.member is not None and not self.member.is_u_member:
            return self.member.p_values(z)
        if self.omega is not None:
            return p_from_omega(self.class_label, self.omega(z), self.omega.derivative(z))
        if self.p_series is not None:
            return _as_array(self.p_series(z)), _as_array(self.p_series.derivative()(z))
        if self.catalog is not None:
            return _closed_p(self.catalog, z)
        if self.f_series is not None:
            p = starlike_series(self.f_series)
            return _as_array(p(z)), _as_array(p.derivative()(z))
        raise UnsupportedRoute(f"{self.name} carries no representation of p")


def _as_array(value) -> np.ndarray:
    return np.asarray(value, dtype=complex)


def _closed_p(fn: CatalogFunction, z: np.ndarray):
    f, df, d2f = fn.f(z), fn.df(z), fn.d2f(z)
    _check_values(z, f, df)
    origin = z == 0
    sf = np.where(origin, 1.0, f)
    p = np.where(origin, 1.0, z * df / sf)
    # p' = f'/f + z f''/f - z f'^2/f^2, and p'(0) = a_2 for f = z + a_2 z^2 + ...
    dp = df / sf + z * d2f / sf - z * df**2 / sf**2
    a2 = fn.series_of_order(2)[2]
    dp = np.where(origin, a2, dp)
    return p, dp


def _check_values(z: np.ndarray, f: np.ndarray, df: np.ndarray) -> None:
    critical = np.abs(df) < SINGULAR_EPS
    if np.any(critical):
        point = _first(critical, z)
        raise CriticalPoint(f"f' vanishes at z = {point}", point=point)
    zero = (np.abs(f) < SINGULAR_EPS) & (z != 0)
    if np.any(zero):
        point = _first(zero, z)
        raise ZeroValue(f"f vanishes at z = {point}", point=point)


def _functionals(f: AnalyticInput, z: np.ndarray, route: str):
    """
    q = z f'/f and c = 1 + z f''/f' along a route, pinned to 1 at the origin
    """
    if route in ("closed", "series"):
        fz, df, d2f = f.f_values(z, route)
        _check_values(z, fz, df)
        origin = z == 0
        q = np.where(origin, 1.0, z * df / np.where(origin, 1.0, fz))
        c = 1 + z * d2f / df
        return q, np.where(origin, 1.0, c)
    if route == "p":
        p, dp = f.p_values(z)
        _check_p(p, z)
        return p, p + z * dp / p
    raise UnsupportedRoute(f"route {route!r} gives no class functionals for {f.name}")


def _check_p(p: np.ndarray, z: np.ndarray) -> None:
    small = np.abs(p) <= SINGULAR_EPS
    if np.any(small):
        point = _first(small, z)
        raise ZeroP(f"p vanishes at z = {point}", point=point)


def eval_D(f: AnalyticInput, z, route: str | None = None):
    """
    D(f; z) along a route (the input's natural route when not given).
    D(f; 0) = 2.
    """
    route = route or f.default_route
    if route not in ROUTES:
        raise UnsupportedRoute(f"unknown route {route!r}; expected one of {', '.join(ROUTES)}")
    zz = _points(z)
    _check_disk(zz)
    logger.debug("eval_D %s via %s", f.name, route)
    if route == "phi":
        phi = f.u_phi
        if phi is None:
            raise UnsupportedRoute(f"{f.name} is not given as a member of U")
        return eval_D_from_phi(phi, zz)
    if route == "closed":
        if f.catalog is None:
            raise UnsupportedRoute(f"{f.name} has no closed form")
        fz, df, _ = f.f_values(zz, "closed")
        _check_values(zz, fz, df)
        return f.catalog.closed_D(zz)
    if route == "p":
        p, dp = f.p_values(zz)
        return d_from_p_values(p, dp, zz)
    q, c = _functionals(f, zz, route)
    return _out(np.where(zz == 0, 2.0, 2 * q - c + 1))


def d_from_p_values(p, dp, z):
    """
    D = p + 1 - z p'/p from point values of p and p'
    """
    p = _as_array(p)
    zz = _points(z)
    _check_p(p, zz)
    return _out(p + 1 - zz * _as_array(dp) / p)


def eval_D_from_p(p: TaylorSeries, z):
    """
    D of the normalized f with z f'/f = p, without building f
    """
    if abs(p[0] - 1.0) > NORMALIZATION_TOL:
        raise ValueError(f"p(0) must be 1, got {p[0]}")
    zz = _points(z)
    return d_from_p_values(p(zz), p.derivative()(zz), zz)


def eval_D_from_phi(phi: SchwarzFunction, z):
    zz = _points(z)
    denominator = 1 + zz**2 * phi(zz)
    small = np.abs(denominator) <= SINGULAR_EPS
    if np.any(small):
        point = _first(small, zz)
        raise DenominatorVanish(f"1 + z^2 phi vanishes at z = {point}", point=point)
    return _out(2 * (1 - 0.5 * zz**3 * phi.derivative(zz)) / denominator)


def u_defect(f: AnalyticInput, z, route: str | None = None):
    """
    (z/f)^2 f' - 1, zero at the origin
    """
    zz = _points(z)
    route = route or f.default_route
    if route == "phi" or f.source == "phi":
        phi = f.u_phi
        if phi is None:
            raise UnsupportedRoute(f"{f.name} is not given as a member of U")
        return _out(zz**2 * phi(zz))
    if route == "p":
        # p alone fixes f, but only through an integral; use f's own series when present
        route = "closed" if f.catalog is not None else "series"
    fz, df, _ = f.f_values(zz, route)
    _check_values(zz, fz, df)
    origin = zz == 0
    ratio = zz / np.where(origin, 1.0, fz)
    return _out(np.where(origin, 0.0, ratio**2 * df - 1))


def starlike_ratio(f: AnalyticInput, z, route: str | None = None):
    """
    z f'/f
    """
    zz = _points(z)
    q, _ = _functionals(f, zz, _functional_route(f, route))
    return _out(q)


def convexity_functional(f: AnalyticInput, z, route: str | None = None):
    """
    1 + z f''/f'
    """
    zz = _points(z)
    _, c = _functionals(f, zz, _functional_route(f, route))
    return _out(c)


def m_alpha_functional(f: AnalyticInput, alpha: float, z, route: str | None = None):
    """
    (1 - alpha) z f'/f + alpha (1 + z f''/f'); alpha = -1 gives D - 1
    """
    zz = _points(z)
    q, c = _functionals(f, zz, _functional_route(f, route))
    return _out((1 - alpha) * q + alpha * c)


def _functional_route(f: AnalyticInput, route: str | None) -> str:
    route = route or f.default_route
    if route == "phi":
        if f.f_series is None:
            raise UnsupportedRoute(f"{f.name} is given only through phi")
        return "series"
    return route
