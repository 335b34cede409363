"""
Named functions with closed forms for f, f', f'' and the D operator, their
Taylor series and the documented class memberships.

    k(z)  = z / (1 - z)^2
    f1(z) = z / (1 - z^2)
    f2(z) = -log(1 - z)
    f3(z) = z (1 - z / sqrt 2) / (1 - z^2)

Every evaluator accepts a point or a numpy array of points in the open unit
disk. D is pinned to 2 at z = 0, its removable value.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Callable

import numpy as np
import pandas as pd

from data.class_labels import (
    K,
    M_MINUS_ONE,
    S,
    S_STAR,
    U,
    Membership,
    MembershipStatus,
)
from utils.exceptions import UnknownFunction
from utils.schwarz import SchwarzFunction
from utils.settings import DEFAULT_SETTINGS
from utils.taylor_series import TaylorSeries, div, log1m

logger = logging.getLogger(__name__)

SQRT2 = np.sqrt(2.0)
F2_SERIES_RADIUS = 1e-3

Evaluator = Callable[[np.ndarray], np.ndarray]


def _as_points(z) -> np.ndarray:
    return np.asarray(z, dtype=complex)


def _out(value):
    return complex(value) if np.ndim(value) == 0 else value


def _pin_origin(z: np.ndarray, formula: Evaluator, at_zero: complex = 2.0) -> np.ndarray:
    safe = np.where(z == 0, 0.5, z)
    return np.where(z == 0, at_zero, formula(safe))


# Koebe function

def _k(z):
    return z / (1 - z) ** 2


def _dk(z):
    return (1 + z) / (1 - z) ** 3


def _d2k(z):
    return (4 + 2 * z) / (1 - z) ** 4


def _D_k(z):
    return 1 + (1 + z**2) / (1 - z**2)


# f1

def _f1(z):
    return z / (1 - z**2)


def _df1(z):
    return (1 + z**2) / (1 - z**2) ** 2


def _d2f1(z):
    return 2 * z * (3 + z**2) / (1 - z**2) ** 3


def _D_f1(z):
    return 1 + (1 - z**2) / (1 + z**2)


# f2

def _f2(z):
    return -np.log(1 - z)


def _df2(z):
    return 1 / (1 - z)


def _d2f2(z):
    return 1 / (1 - z) ** 2


def _D_f2_formula(z):
    log1mz = np.log(1 - z)
    return -z * (2 + log1mz) / ((1 - z) * log1mz)


@lru_cache(maxsize=1)
def _f2_d_series() -> TaylorSeries:
    # near 0 log(1 - z) ~ -z cancels digits; use the series of D instead
    order = 24
    lz = log1m(order).shift_down()
    p = div(TaylorSeries.constant(1.0, order), TaylorSeries([1.0, -1.0], order) * lz)
    zp = p.derivative().shift_up()
    return p + 1.0 - div(zp, p)


def _D_f2(z):
    small = np.abs(z) < F2_SERIES_RADIUS
    safe = np.where(small, 0.5, z)
    return np.where(small, _f2_d_series()(np.where(small, z, 0)), _D_f2_formula(safe))


# f3 and the numerator/denominator split of its D

def _f3(z):
    return z * (1 - z / SQRT2) / (1 - z**2)


def _df3(z):
    return (1 - SQRT2 * z + z**2) / (1 - z**2) ** 2


def _d2f3(z):
    return (2 * z**3 - 3 * SQRT2 * z**2 + 6 * z - SQRT2) / (1 - z**2) ** 3


def f3_g(z):
    """
    Numerator of D(f3; z): -sqrt2 z^3 + 3 z^2 - 3 sqrt2 z + 2
    """
    z = _as_points(z)
    return _out(-SQRT2 * z**3 + 3 * z**2 - 3 * SQRT2 * z + 2)


def f3_g_prime(r):
    """
    g'(r) = -3 (sqrt2 r^2 - 2 r + sqrt2), negative on [0, 1)
    """
    r = np.asarray(r, dtype=float)
    value = -3 * (SQRT2 * r**2 - 2 * r + SQRT2)
    return float(value) if value.ndim == 0 else value


def f3_h(z):
    """
    Denominator of D(f3; z): (1 - z / sqrt2)(1 - sqrt2 z + z^2).

    Its zeros e^{+-i pi/4} lie on the unit circle and sqrt2 lies outside, so
    h does not vanish in the open disk.
    """
    z = _as_points(z)
    return _out((1 - z / SQRT2) * (1 - SQRT2 * z + z**2))


def _D_f3(z):
    return f3_g(z) / f3_h(z)


def _series_k(order: int) -> TaylorSeries:
    return TaylorSeries(np.arange(order + 1, dtype=complex), order)


def _series_f1(order: int) -> TaylorSeries:
    c = np.zeros(order + 1, dtype=complex)
    c[1::2] = 1.0
    return TaylorSeries(c, order)


def _series_f3(order: int) -> TaylorSeries:
    c = np.zeros(order + 1, dtype=complex)
    c[1::2] = 1.0
    c[2::2] = -1.0 / SQRT2
    return TaylorSeries(c, order)


@dataclass(frozen=True)
class CatalogFunction:
    """
    Named function with closed-form evaluators and stored class facts.

    ``rotation`` is the angle theta of f_theta(z) = e^{-i theta} f(e^{i theta} z);
    the evaluators below already include it.
    """

    name: str
    formulas: dict[str, str]
    f: Evaluator
    df: Evaluator
    d2f: Evaluator
    D: Evaluator
    series_builder: Callable[[int], TaylorSeries]
    memberships: tuple[Membership, ...]
    u_phi: SchwarzFunction | None = None
    rotation: float = 0.0
    order: int = DEFAULT_SETTINGS.order
    base: str = field(default="")

    @property
    def series(self) -> TaylorSeries:
        return self.series_of_order(self.order)

    def series_of_order(self, order: int) -> TaylorSeries:
        return self.series_builder(order)

    def closed_eval(self, z):
        """
        Values of f, f' and f'' at z
        """
        zz = _as_points(z)
        return _out(self.f(zz)), _out(self.df(zz)), _out(self.d2f(zz))

    def closed_D(self, z):
        zz = _as_points(z)
        return _out(_pin_origin(zz, self.D))

    def membership(self, label) -> Membership | None:
        for fact in self.memberships:
            if fact.label == label:
                return fact
        return None

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "base": self.base or self.name,
            "rotation": self.rotation,
            "formulas": dict(self.formulas),
            "memberships": [fact.to_dict() for fact in self.memberships],
            "u_phi": self.u_phi.to_spec() if self.u_phi is not None else None,
            "series_head": [[float(c.real), float(c.imag)] for c in self.series_of_order(15).coeffs],
        }


_FACTS = {
    "k": (
        Membership(S, MembershipStatus.MEMBER, "Koebe function, extremal for S"),
        Membership(S_STAR, MembershipStatus.MEMBER, "Re z f'/f > 0 from its closed form"),
        Membership(U, MembershipStatus.MEMBER, "(z/f)^2 f' = 1 + z^2 phi with constant |phi| = 1"),
        Membership(M_MINUS_ONE, MembershipStatus.MEMBER, "Re D(k; z) > 1 from the closed form of D(k; z)"),
    ),
    "f1": (
        Membership(S, MembershipStatus.MEMBER, "starlike, hence univalent"),
        Membership(S_STAR, MembershipStatus.MEMBER, "Re z f'/f > 0 from its closed form"),
        Membership(U, MembershipStatus.MEMBER, "(z/f)^2 f' = 1 + z^2 phi with constant |phi| = 1"),
        Membership(M_MINUS_ONE, MembershipStatus.MEMBER, "Re D(f1; z) > 1 from the closed form of D(f1; z)"),
    ),
    "f2": (
        Membership(S, MembershipStatus.MEMBER, "convex, hence univalent"),
        Membership(K, MembershipStatus.MEMBER, "1 + z f2''/f2' = 1/(1 - z) has positive real part"),
        Membership(S_STAR, MembershipStatus.MEMBER, "convex functions are starlike"),
        Membership(U, MembershipStatus.NON_MEMBER, "|(z/f2)^2 f2' - 1| exceeds 1 near z = 0.95"),
        Membership(M_MINUS_ONE, MembershipStatus.NON_MEMBER, "D(f2; r) < 0 for 1 - e^-2 <= r < 1"),
    ),
    "f3": (
        Membership(S, MembershipStatus.MEMBER, "known result: close-to-convex, hence univalent"),
        Membership(U, MembershipStatus.NON_MEMBER, "known result; (z/f3)^2 f3' - 1 exceeds 1 in modulus near z = 0.8"),
        Membership(M_MINUS_ONE, MembershipStatus.NON_MEMBER, "g(r) <= 0 for 1/sqrt2 <= r < 1"),
    ),
}

_BUILDERS = {
    "k": dict(
        formulas={"f": "z/(1-z)^2", "D": "1+(1+z^2)/(1-z^2)"},
        f=_k, df=_dk, d2f=_d2k, D=_D_k, series_builder=_series_k,
        u_phi=SchwarzFunction.const(-1.0),
    ),
    "f1": dict(
        formulas={"f": "z/(1-z^2)", "D": "1+(1-z^2)/(1+z^2)"},
        f=_f1, df=_df1, d2f=_d2f1, D=_D_f1, series_builder=_series_f1,
        u_phi=SchwarzFunction.const(1.0),
    ),
    "f2": dict(
        formulas={"f": "-log(1-z)", "D": "-z(2+log(1-z))/((1-z)log(1-z))"},
        f=_f2, df=_df2, d2f=_d2f2, D=_D_f2, series_builder=log1m,
    ),
    "f3": dict(
        formulas={
            "f": "z(1-z/sqrt2)/(1-z^2)",
            "D": "(-sqrt2 z^3+3z^2-3sqrt2 z+2)/((1-z/sqrt2)(1-sqrt2 z+z^2))",
        },
        f=_f3, df=_df3, d2f=_d2f3, D=_D_f3, series_builder=_series_f3,
    ),
}

NAMES = tuple(_BUILDERS)


def list_names() -> tuple[str, ...]:
    return NAMES


def get(name: str, order: int = DEFAULT_SETTINGS.order) -> CatalogFunction:
    """
    Fully populated catalog entry by name (k, f1, f2, f3)
    """
    try:
        spec = _BUILDERS[name]
    except KeyError:
        raise UnknownFunction(f"unknown catalog function {name!r}; known: {', '.join(NAMES)}") from None
    logger.debug("catalog entry %s at order %d", name, order)
    return CatalogFunction(name=name, memberships=_FACTS[name], order=order, base=name, **spec)


def closed_D(name: str, z):
    return get(name).closed_D(z)


def rotate(fn: CatalogFunction, theta: float) -> CatalogFunction:
    """
    f_theta(z) = e^{-i theta} f(e^{i theta} z); every class here is rotation invariant
    """
    if theta == 0:
        return fn
    e = np.exp(1j * theta)
    f, df, d2f, D, build = fn.f, fn.df, fn.d2f, fn.D, fn.series_builder
    u_phi = None
    if fn.u_phi is not None and fn.u_phi.kind == "constant":
        # (z/f_theta)^2 f_theta' = 1 + z^2 e^{2i theta} phi(e^{i theta} z)
        u_phi = SchwarzFunction.const(fn.u_phi.constant * e**2)

    def series_builder(order: int) -> TaylorSeries:
        return build(order).rotate_argument(theta) * np.conj(e)

    return replace(
        fn,
        name=f"{fn.base or fn.name}@{fn.rotation + theta:g}",
        f=lambda z: f(e * z) / e,
        df=lambda z: df(e * z),
        d2f=lambda z: e * d2f(e * z),
        D=lambda z: D(e * z),
        series_builder=series_builder,
        u_phi=u_phi,
        rotation=fn.rotation + theta,
    )


def load_catalog(order: int = DEFAULT_SETTINGS.order) -> list[CatalogFunction]:
    return [get(name, order) for name in NAMES]


def catalog_table() -> pd.DataFrame:
    """
    One row per catalog function with formulas and membership facts
    """
    rows = []
    for fn in load_catalog():
        rows.append(
            {
                "name": fn.name,
                "f": fn.formulas["f"],
                "D": fn.formulas["D"],
                "members": ", ".join(str(m.label) for m in fn.memberships if m.status is MembershipStatus.MEMBER),
                "non_members": ", ".join(
                    str(m.label) for m in fn.memberships if m.status is MembershipStatus.NON_MEMBER
                ),
            }
        )
    return pd.DataFrame(rows)
