"""Binomial coefficients with a real upper argument, in log space."""
from __future__ import annotations

import math


def log_gen_binom(x: float, j: int) -> tuple[float, int]:
    """Return ``(log|C(x, j)|, sign)`` for real x and integer j >= 0.

    C(x, j) = x (x-1) ... (x-j+1) / j!.  A zero coefficient (x a non-negative
    integer below j) is reported as ``(-inf, 0)``.
    """
    if j < 0:
        raise ValueError(f"lower argument must be >= 0, got {j!r}")
    if j == 0:
        return 0.0, 1
    if float(x).is_integer():
        if 0 <= x < j:
            return -math.inf, 0
        if x < 0:
            # C(-a, j) = (-1)^j C(a + j - 1, j)
            lg, _ = log_gen_binom(-x + j - 1, j)
            return lg, -1 if j % 2 else 1
    # |Gamma(x+1) / Gamma(x-j+1)| / j!
    lg = math.lgamma(x + 1.0) - math.lgamma(x - j + 1.0) - math.lgamma(j + 1.0)
    # factors x - i are negative for i >= floor(x) + 1
    negatives = j - min(j, max(0, math.floor(x) + 1))
    return lg, -1 if negatives % 2 else 1


def gen_binom(x: float, j: int) -> float:
    """C(x, j) by the direct falling-factorial product (small j)."""
    if j < 0:
        raise ValueError(f"lower argument must be >= 0, got {j!r}")
    prod = 1.0
    for i in range(j):
        prod *= x - i
    return prod / math.factorial(j)
