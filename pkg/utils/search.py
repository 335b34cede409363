"""
One-dimensional search helpers.

The golden-section search reuses one function value per iteration and returns
the bracketing interval together with the best point seen.
"""
import logging
import math
from typing import Callable, NamedTuple

logger = logging.getLogger(__name__)

INVPHI = (math.sqrt(5) - 1) / 2  # 1 / phi
INVPHI2 = (3 - math.sqrt(5)) / 2  # 1 / phi^2
MAX_BISECTIONS = 200


class LineMinimum(NamedTuple):
    x: float
    value: float
    lo: float
    hi: float
    evaluations: int


def golden_section_search(f: Callable[[float], float], a: float, b: float, tol: float = 1e-12) -> LineMinimum:
    """
    Minimize f on [a, b] assuming a single local minimum there.

    The returned bracket [lo, hi] has hi - lo <= tol (or is [a, b] when that is
    already narrower). The best point is the smallest value among all
    evaluations, the endpoints included, so the result is never worse than f(a)
    or f(b).
    """
    a, b = min(a, b), max(a, b)
    fa, fb = f(a), f(b)
    best_x, best_v = (a, fa) if fa <= fb else (b, fb)
    h = b - a
    if h <= tol:
        return LineMinimum(best_x, best_v, a, b, 2)

    n = int(math.ceil(math.log(tol / h) / math.log(INVPHI)))
    c = a + INVPHI2 * h
    d = a + INVPHI * h
    yc, yd = f(c), f(d)
    evaluations = 4
    for _ in range(n - 1):
        if yc < yd:
            b, d, yd = d, c, yc
            h = INVPHI * h
            c = a + INVPHI2 * h
            yc = f(c)
        else:
            a, c, yc = c, d, yd
            h = INVPHI * h
            d = a + INVPHI * h
            yd = f(d)
        evaluations += 1

    x, v = (c, yc) if yc < yd else (d, yd)
    lo, hi = (a, d) if yc < yd else (c, b)
    if v < best_v:
        best_x, best_v = x, v
    logger.debug("golden section: %d evaluations, bracket width %.3g", evaluations, hi - lo)
    return LineMinimum(best_x, best_v, lo, hi, evaluations)


def bisect_sign_change(
    predicate: Callable[[float], bool],
    lo: float,
    hi: float,
    tol: float,
    max_iter: int = MAX_BISECTIONS,
) -> tuple[float, float]:
    """
    Shrink [lo, hi] with predicate(lo) true and predicate(hi) false until
    hi - lo <= tol; both endpoint properties are kept.
    """
    if not tol > 0:
        raise ValueError(f"bisection tolerance must be positive, got {tol}")
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if predicate(mid):
            lo = mid
        else:
            hi = mid
    return lo, hi
