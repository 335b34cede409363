"""
Truncated Taylor series with complex coefficients.

A ``TaylorSeries`` of order N holds the coefficients c_0 ... c_N of

    s(z) = c_0 + c_1 z + ... + c_N z^N

and every operation returns a series truncated at degree N again. Coefficients
beyond N are treated as unknown, so nothing here ever reads past degree N.
Values are immutable: the coefficient array is read-only.
"""
from __future__ import annotations

import logging
from typing import Iterable

import numpy as np
from numpy.polynomial import polynomial as P

from utils.exceptions import DivisionByNonUnit, EvaluationOutOfRange, NonzeroConstantTerm
from utils.settings import DEFAULT_SETTINGS

logger = logging.getLogger(__name__)

DIV_EPS = DEFAULT_SETTINGS.div_eps
EXP_CONST_TOL = DEFAULT_SETTINGS.exp_const_tol
EVAL_RADIUS_CAP = DEFAULT_SETTINGS.eval_radius_cap


class TaylorSeries:
    """
    Truncated complex power series about the origin
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Iterable[complex], order: int | None = None):
        c = np.asarray(list(coeffs) if not isinstance(coeffs, np.ndarray) else coeffs, dtype=complex)
        if c.ndim != 1:
            raise ValueError("coefficients must be one-dimensional")
        if order is None:
            if len(c) == 0:
                raise ValueError("empty coefficient array")
            order = len(c) - 1
        if order < 0:
            raise ValueError(f"order cannot be less than zero: order = {order}")
        out = np.zeros(order + 1, dtype=complex)
        n = min(len(c), order + 1)
        out[:n] = c[:n]
        out.flags.writeable = False
        self._coeffs = out

    @classmethod
    def constant(cls, value: complex, order: int = DEFAULT_SETTINGS.order) -> "TaylorSeries":
        return cls([value], order)

    @classmethod
    def identity(cls, order: int = DEFAULT_SETTINGS.order) -> "TaylorSeries":
        return cls([0.0, 1.0], order)

    @classmethod
    def polynomial(cls, coeffs: Iterable[complex], order: int = DEFAULT_SETTINGS.order) -> "TaylorSeries":
        return cls(coeffs, order)

    @property
    def coeffs(self) -> np.ndarray:
        return self._coeffs

    @property
    def order(self) -> int:
        return len(self._coeffs) - 1

    def __len__(self) -> int:
        return len(self._coeffs)

    def __getitem__(self, k: int) -> complex:
        return complex(self._coeffs[k])

    def __iter__(self):
        return iter(self._coeffs)

    def __repr__(self) -> str:
        head = ", ".join(f"{c:.6g}" for c in self._coeffs[:6])
        more = ", ..." if self.order >= 6 else ""
        return f"TaylorSeries([{head}{more}], order={self.order})"

    def with_order(self, order: int) -> "TaylorSeries":
        return TaylorSeries(self._coeffs, order)

    def __add__(self, other):
        if isinstance(other, TaylorSeries):
            return add(self, other)
        return add(self, TaylorSeries.constant(other, self.order))

    __radd__ = __add__

    def __neg__(self) -> "TaylorSeries":
        return TaylorSeries(-self._coeffs)

    def __sub__(self, other):
        if isinstance(other, TaylorSeries):
            return add(self, -other)
        return add(self, TaylorSeries.constant(-other, self.order))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, TaylorSeries):
            return mul(self, other)
        return TaylorSeries(self._coeffs * complex(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, TaylorSeries):
            return div(self, other)
        return TaylorSeries(self._coeffs / complex(other))

    def __rtruediv__(self, other):
        return div(TaylorSeries.constant(other, self.order), self)

    def __call__(self, z):
        return evaluate(self, z)

    def derivative(self) -> "TaylorSeries":
        return derivative(self)

    def integrate0(self) -> "TaylorSeries":
        return integrate0(self)

    def exp(self) -> "TaylorSeries":
        return exp_series(self)

    def shift_down(self) -> "TaylorSeries":
        """
        Divide by z; the constant term must vanish. Degree N is padded with zero.
        """
        if abs(self._coeffs[0]) > EXP_CONST_TOL:
            raise NonzeroConstantTerm(f"cannot divide by z: constant term {self._coeffs[0]}")
        return TaylorSeries(self._coeffs[1:], self.order)

    def shift_up(self) -> "TaylorSeries":
        return TaylorSeries(np.concatenate(([0.0], self._coeffs[:-1])), self.order)

    def rotate_argument(self, theta: float) -> "TaylorSeries":
        """
        Series of s(e^{i theta} z)
        """
        k = np.arange(self.order + 1)
        return TaylorSeries(self._coeffs * np.exp(1j * theta * k))

    def allclose(self, other: "TaylorSeries", atol: float = 1e-12, rtol: float = 0.0, degree: int | None = None) -> bool:
        n = min(self.order, other.order) if degree is None else degree
        return bool(np.allclose(self._coeffs[: n + 1], other.coeffs[: n + 1], atol=atol, rtol=rtol))


def _pad(a: TaylorSeries, b: TaylorSeries) -> tuple[np.ndarray, np.ndarray, int]:
    order = max(a.order, b.order)
    return a.with_order(order).coeffs, b.with_order(order).coeffs, order


def add(a: TaylorSeries, b: TaylorSeries) -> TaylorSeries:
    ca, cb, order = _pad(a, b)
    return TaylorSeries(ca + cb, order)


def mul(a: TaylorSeries, b: TaylorSeries) -> TaylorSeries:
    """
    Cauchy product truncated at the common order
    """
    ca, cb, order = _pad(a, b)
    return TaylorSeries(np.convolve(ca, cb)[: order + 1], order)


def div(a: TaylorSeries, b: TaylorSeries) -> TaylorSeries:
    """
    Quotient q with q*b = a to degree N; needs a unit constant term in b
    """
    ca, cb, order = _pad(a, b)
    b0 = cb[0]
    if abs(b0) <= DIV_EPS:
        raise DivisionByNonUnit(f"denominator constant term {b0} is below {DIV_EPS}")
    q = np.zeros(order + 1, dtype=complex)
    for n in range(order + 1):
        # q_n = (a_n - sum_{i<n} q_i b_{n-i}) / b_0
        q[n] = (ca[n] - np.dot(q[:n], cb[n:0:-1])) / b0
    return TaylorSeries(q, order)


def derivative(a: TaylorSeries) -> TaylorSeries:
    k = np.arange(1, a.order + 1)
    return TaylorSeries(a.coeffs[1:] * k, a.order)


def integrate0(a: TaylorSeries) -> TaylorSeries:
    k = np.arange(1, a.order + 1)
    return TaylorSeries(np.concatenate(([0.0], a.coeffs[:-1] / k)), a.order)


def exp_series(a: TaylorSeries) -> TaylorSeries:
    """
    exp(a) for a series with vanishing constant term.

    Uses (exp a)' = a' exp a, i.e. n b_n = sum_{k=1}^{n} k a_k b_{n-k}.
    """
    if abs(a.coeffs[0]) > EXP_CONST_TOL:
        raise NonzeroConstantTerm(f"exp_series needs a(0) = 0, got {a.coeffs[0]}")
    order = a.order
    ka = a.coeffs * np.arange(order + 1)
    b = np.zeros(order + 1, dtype=complex)
    b[0] = 1.0
    for n in range(1, order + 1):
        b[n] = np.dot(ka[1 : n + 1], b[n - 1 :: -1][:n]) / n
    return TaylorSeries(b, order)


def log1m(order: int = DEFAULT_SETTINGS.order) -> TaylorSeries:
    """
    Series of -log(1 - z) = sum_{k>=1} z^k / k (principal branch)
    """
    c = np.zeros(order + 1, dtype=complex)
    c[1:] = 1.0 / np.arange(1, order + 1)
    return TaylorSeries(c, order)


def evaluate(a: TaylorSeries, z):
    """
    Horner evaluation at a point or an array of points with |z| <= 0.999.

    Truncation error is the caller's responsibility; accuracy is only
    promised for |z| <= 0.7.
    """
    zz = np.asarray(z, dtype=complex)
    if zz.size and float(np.max(np.abs(zz))) > EVAL_RADIUS_CAP:
        raise EvaluationOutOfRange(
            f"series evaluation beyond |z| = {EVAL_RADIUS_CAP}", point=complex(zz.flat[int(np.argmax(np.abs(zz)))])
        )
    value = P.polyval(zz, a.coeffs)
    return complex(value) if np.ndim(value) == 0 else value


def binomial_series(exponent: float, order: int = DEFAULT_SETTINGS.order) -> TaylorSeries:
    """
    Series of (1 - z)^(-exponent), used as an oracle for exp_series
    """
    c = np.ones(order + 1, dtype=complex)
    for k in range(1, order + 1):
        c[k] = c[k - 1] * (exponent + k - 1) / k
    return TaylorSeries(c, order)
