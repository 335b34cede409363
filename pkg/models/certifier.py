"""
Grid checks of class membership and of the coefficient-free bounds that hold
on the whole univalent class.

A grid pass only says that the defining strict inequality held at every grid
point; it is a necessary condition at finite resolution, not a proof.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple

import numpy as np

from data.class_labels import ClassLabel, ClassTag
from models.operator_d import (
    AnalyticInput,
    convexity_functional,
    m_alpha_functional,
    starlike_ratio,
    u_defect,
)
from utils.exceptions import RadiusOutOfRange, UncertifiableClass
from utils.settings import DEFAULT_SETTINGS, Settings

logger = logging.getLogger(__name__)

TANH_HALF = (np.e - 1) / (np.e + 1)
BOUND_SLACK = 1e-12
RAY_SAMPLES = 513


class VerdictStatus(str, Enum):
    GRID_PASS = "grid-pass"
    VIOLATED = "violated"


@dataclass(frozen=True)
class GridSpec:
    """
    Concentric circles |z| = r sampled at equally spaced angles
    """

    radii: tuple[float, ...]
    angles_per_circle: int = DEFAULT_SETTINGS.grid_angles
    max_radius: float = DEFAULT_SETTINGS.grid_max_radius

    def __post_init__(self):
        radii = tuple(float(r) for r in self.radii)
        object.__setattr__(self, "radii", radii)
        if not radii:
            raise ValueError("grid needs at least one radius")
        if any(b <= a for a, b in zip(radii, radii[1:])):
            raise ValueError(f"grid radii must be strictly ascending: {radii}")
        if not 0 < self.max_radius <= 0.999:
            raise ValueError(f"max_radius must lie in (0, 0.999], got {self.max_radius}")
        if radii[0] <= 0 or radii[-1] > self.max_radius:
            raise ValueError(f"grid radii must lie in (0, {self.max_radius}]")
        if self.angles_per_circle < 64:
            raise ValueError(f"need at least 64 angles per circle, got {self.angles_per_circle}")

    @property
    def angles(self) -> np.ndarray:
        return 2 * np.pi * np.arange(self.angles_per_circle) / self.angles_per_circle

    def circle(self, r: float) -> np.ndarray:
        return r * np.exp(1j * self.angles)

    def limited_to(self, radius: float) -> "GridSpec":
        radii = tuple(r for r in self.radii if r <= radius) or (radius,)
        return GridSpec(radii, self.angles_per_circle, min(self.max_radius, radius))

    def to_dict(self) -> dict:
        return {"radii": list(self.radii), "angles_per_circle": self.angles_per_circle, "max_radius": self.max_radius}


def default_grid(settings: Settings = DEFAULT_SETTINGS) -> GridSpec:
    return GridSpec(settings.grid_radii, settings.grid_angles, settings.grid_max_radius)


@dataclass(frozen=True)
class MembershipVerdict:
    label: ClassLabel
    status: VerdictStatus
    grid: GridSpec
    witness: complex | None = None
    witness_value: complex | None = None
    margin: float | None = None
    notes: tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if (self.witness is None) != (self.status is VerdictStatus.GRID_PASS):
            raise ValueError("a witness is present exactly when the verdict is violated")

    @property
    def passed(self) -> bool:
        return self.status is VerdictStatus.GRID_PASS

    def to_dict(self) -> dict:
        def pair(c):
            return None if c is None else [float(c.real), float(c.imag)]

        return {
            "label": str(self.label),
            "status": self.status.value,
            "witness": pair(self.witness),
            "witness_value": pair(self.witness_value),
            "margin": self.margin,
            "grid": self.grid.to_dict(),
            "notes": list(self.notes),
        }


def _membership_margin(f: AnalyticInput, label: ClassLabel, z: np.ndarray):
    """
    Functional values and the slack of the class inequality; slack <= 0 is a violation
    """
    tag = label.tag
    if tag is ClassTag.S_STAR:
        value = starlike_ratio(f, z)
        return value, value.real
    if tag is ClassTag.S_STAR_ORDER:
        value = starlike_ratio(f, z)
        return value, value.real - label.alpha
    if tag is ClassTag.K:
        value = convexity_functional(f, z)
        return value, value.real
    if tag is ClassTag.G:
        value = convexity_functional(f, z)
        return value, 1.5 - value.real
    if tag is ClassTag.U:
        value = u_defect(f, z)
        return value, 1.0 - np.abs(value)
    if tag is ClassTag.M_ALPHA:
        value = m_alpha_functional(f, label.alpha, z)
        return value, value.real
    raise UncertifiableClass(f"no grid test for class {label}")


def _trust_limited(f: AnalyticInput, label: ClassLabel) -> bool:
    """
    True when the input is only known through a truncated series for this test
    """
    if f.catalog is not None:
        return False
    if f.source == "member":
        return f.member.is_u_member != (label.tag is ClassTag.U)
    if f.source in ("phi", "omega"):
        return False
    return True


def certify(
    f: AnalyticInput,
    label: ClassLabel,
    grid: GridSpec | None = None,
    settings: Settings = DEFAULT_SETTINGS,
) -> MembershipVerdict:
    """
    Test the strict inequality defining ``label`` at every grid point.

    The first violation in grid order (ascending radius, then ascending angle)
    becomes the witness.
    """
    if label.tag is ClassTag.S:
        raise UncertifiableClass("univalence cannot be certified on a grid")
    grid = grid or default_grid(settings)
    notes: list[str] = []
    if _trust_limited(f, label) and grid.max_radius > settings.series_trust_radius:
        grid = grid.limited_to(settings.series_trust_radius)
        notes.append(f"grid limited to |z| <= {settings.series_trust_radius} for a series-backed input")
        logger.info("certify %s: %s", f.name, notes[-1])

    for r in grid.radii:
        z = grid.circle(r)
        value, slack = _membership_margin(f, label, z)
        bad = np.flatnonzero(slack <= 0)
        if bad.size:
            i = int(bad[0])
            logger.debug("certify %s in %s: violated at %s", f.name, label, z[i])
            return MembershipVerdict(
                label,
                VerdictStatus.VIOLATED,
                grid,
                witness=complex(z[i]),
                witness_value=complex(value[i]),
                margin=float(slack[i]),
                notes=tuple(notes),
            )
    logger.debug("certify %s in %s: grid pass", f.name, label)
    return MembershipVerdict(label, VerdictStatus.GRID_PASS, grid, notes=tuple(notes))


class BoundCheck(NamedTuple):
    holds: bool
    margin: float
    lhs: float
    rhs: float

    def to_dict(self) -> dict:
        return self._asdict()


def _continuous_log(q_ray: np.ndarray) -> complex:
    phase = np.unwrap(np.angle(q_ray))
    return complex(np.log(np.abs(q_ray[-1])), phase[-1])


def check_growth_bound(f: AnalyticInput, z: complex) -> BoundCheck:
    """
    |log(z f'/f)| <= log((1 + r) / (1 - r)) with r = |z|, the branch of the
    logarithm vanishing at 0 followed along the segment [0, z]
    """
    z = complex(z)
    r = abs(z)
    ray = np.linspace(0.0, 1.0, RAY_SAMPLES) * z
    q = starlike_ratio(f, ray)
    lhs = abs(_continuous_log(np.atleast_1d(q)))
    rhs = float(np.log((1 + r) / (1 - r)))
    margin = rhs - lhs
    return BoundCheck(margin >= -BOUND_SLACK, margin, lhs, rhs)


def check_distortion_bound(f: AnalyticInput, z: complex) -> BoundCheck:
    """
    |z f''/f' - 2 r^2 / (1 - r^2)| <= 4 r / (1 - r^2) with r = |z|
    """
    z = complex(z)
    r = abs(z)
    zf2 = convexity_functional(f, z) - 1
    lhs = abs(zf2 - 2 * r * r / (1 - r * r))
    rhs = 4 * r / (1 - r * r)
    margin = rhs - lhs
    return BoundCheck(margin >= -BOUND_SLACK, margin, lhs, rhs)


def real_part_floor_S(r: float) -> float:
    """
    (1 - r) / (1 + r), the lower bound of Re(z f'/f) over the univalent class
    for r <= tanh(1/2)
    """
    if r < 0 or r > TANH_HALF + 1e-12:
        raise RadiusOutOfRange(f"r = {r} lies outside [0, tanh(1/2)]")
    return (1 - r) / (1 + r)


class ExpFloor(NamedTuple):
    value: np.ndarray
    floor: np.ndarray


def exp_real_part_floor(w) -> ExpFloor:
    """
    Re(e^w) next to its floor e^{-|w|}; the floor is reached at w = -|w|
    """
    w = np.asarray(w, dtype=complex)
    return ExpFloor(np.exp(w.real) * np.cos(w.imag), np.exp(-np.abs(w)))
