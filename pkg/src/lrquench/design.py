"""Searches over the inter-jump duration of the two-jump protocol."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from .errors import DegenerateSearchError, DomainError, InfeasibleTargetError
from .observables import n_mean_window
from .pinney import solve_protocol
from .protocol import two_jump
from .squeeze import squeeze_at


@dataclass(frozen=True)
class SearchResult:
    parameter: str
    value: float
    objective: float
    bracket: tuple[float, float]
    iterations: int

    def to_dict(self) -> dict:
        d = asdict(self)
        d["bracket"] = list(self.bracket)
        return d


def _numeric_r2(omega0, omega1, tau, mass=1.0, hbar=1.0):
    """r after the second jump, from the piecewise Pinney solution."""
    s = solve_protocol(two_jump(omega0, omega1, tau, mass, hbar))
    return squeeze_at(s, 2.0 * tau).r


def find_extremal_tau(omega0: float, omega1: float, kind: str, index: int,
                      mass: float = 1.0, hbar: float = 1.0) -> SearchResult:
    """Locate the index-th revival (r2 = 0) or maximal-squeezing duration.

    The returned value is the analytic location; it is confirmed by bisecting
    on the sign of the finite-difference slope of sinh(r2)^2, computed from
    the numeric Pinney solution, within a quarter period around it.
    """
    if not (omega0 > 0 and omega1 > 0):
        raise DomainError("find_extremal_tau needs positive frequencies")
    if index < 1:
        raise DomainError(f"index must be a positive integer, got {index!r}")
    period = math.pi / omega1
    q = (omega1 ** 2 - omega0 ** 2) / (2 * omega0 * omega1)
    if kind == "revival":
        value, sign = index * period, 1.0
    elif kind == "maximal":
        value, sign = (index - 0.5) * period, -1.0
    else:
        raise DomainError(f"kind must be 'revival' or 'maximal', got {kind!r}")

    if q * q < 1e-20:
        if kind == "maximal":
            raise DegenerateSearchError("omega1 == omega0: r2 vanishes for every tau")
        return SearchResult("tau", value, _numeric_r2(omega0, omega1, value, mass, hbar),
                            (value, value), 1)

    h = 1e-6 * period

    def slope(tau):
        up = math.sinh(_numeric_r2(omega0, omega1, tau + h, mass, hbar)) ** 2
        dn = math.sinh(_numeric_r2(omega0, omega1, tau - h, mass, hbar)) ** 2
        return sign * (up - dn) / (2 * h)

    # asymmetric so that no bisection midpoint coincides with the analytic value
    lo, hi = value - 0.25 * period, value + 0.2 * period
    if not (slope(lo) < 0 < slope(hi)):
        raise ArithmeticError("numeric slope does not change sign around the extremum")
    iterations = 0
    while hi - lo > 1e-7 * period:
        mid = 0.5 * (lo + hi)
        if slope(mid) < 0:
            lo = mid
        else:
            hi = mid
        iterations += 1
    if not lo <= value <= hi:
        raise ArithmeticError(
            f"numeric extremum bracket [{lo!r}, {hi!r}] misses analytic tau {value!r}")
    return SearchResult("tau", value, _numeric_r2(omega0, omega1, value, mass, hbar),
                        (lo, hi), iterations)


def solve_tau_for_nmean(omega0: float, omega1: float, target: float,
                        tol: float = 1e-12) -> SearchResult:
    """Smallest tau > 0 whose post-jump vacuum excitation equals ``target``.

    target == 0 is met as tau -> 0; that branch is returned as tau = 0.
    """
    if not (omega0 > 0 and omega1 > 0):
        raise DomainError("solve_tau_for_nmean needs positive frequencies")
    if target < 0:
        raise DomainError(f"target must be non-negative, got {target!r}")
    q2 = ((omega1 ** 2 - omega0 ** 2) / (2 * omega0 * omega1)) ** 2
    if target > q2 * (1.0 + 1e-15):
        raise InfeasibleTargetError(f"target mean excitation {target!r} unreachable", q2)
    if target == 0:
        return SearchResult("tau", 0.0, 0.0, (0.0, 0.0), 1)

    def f(tau):
        return n_mean_window(omega0, omega1, 0, tau) - target

    lo, hi = 0.0, 0.5 * math.pi / omega1
    iterations = 0
    mid = hi
    res = f(hi)
    while abs(res) > tol:
        mid = 0.5 * (lo + hi)
        res = f(mid)
        if res < 0:
            lo = mid
        else:
            hi = mid
        iterations += 1
        if iterations > 200:
            raise ArithmeticError("bisection did not reach the requested tolerance")
    return SearchResult("tau", mid, res, (lo, hi), max(iterations, 1))
