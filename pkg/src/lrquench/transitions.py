"""Closed-form Fock-to-Fock transition probabilities of a squeezed oscillator.

P(m -> n) is the squared overlap between the evolved state that started in
Fock level m and the static Fock level n.  It depends on the squeeze
parameter only, vanishes for odd |n - m| and is symmetric in (m, n).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import mpmath
import numpy as np

from ._csv import to_csv
from .errors import DomainError
from .pinney import PinneySolution
from .special import gen_binom, log_gen_binom
from .squeeze import squeeze_at

#: levels with m + n above this go through log-gamma instead of direct products
DIRECT_MAX = 20
#: decimal digits the alternating sum may cancel before it is redone in mpmath
MAX_LOSS = 2.5
_LOG_TINY = math.log(np.finfo(float).tiny)


def _terms_direct(m: int, n: int, ch: float):
    """(value, sign) of each term of the inner sum, by direct products."""
    d, half = (n - m) // 2, (n + m) // 2
    out = []
    for k in range(d, half + 1):
        b = gen_binom((n + m + 2 * k - 2) / 4, half)
        if b == 0.0:
            continue
        v = math.comb(half, k) * b * math.factorial(k) / (math.factorial(k - d) * ch ** k)
        out.append((math.log(abs(v)), 1 if v > 0 else -1))
    return out


def _terms_log(m: int, n: int, ch: float):
    """(log|term|, sign) of each term of the inner sum, through log-gamma."""
    d, half = (n - m) // 2, (n + m) // 2
    lch = math.log(ch)
    out = []
    for k in range(d, half + 1):
        lb, sign = log_gen_binom((n + m + 2 * k - 2) / 4, half)
        if sign == 0:
            continue
        out.append((math.lgamma(half + 1) - math.lgamma(half - k + 1) - math.lgamma(k - d + 1)
                    + lb - k * lch, sign))
    return out


def _log_inner_mp(m: int, n: int, ch: float, digits: float) -> float:
    """log|inner sum| in extended precision.

    The terms alternate in sign and can cancel far beyond double precision;
    the working precision is raised until the cancellation it observes leaves
    at least 20 digits intact.
    """
    d, half = (n - m) // 2, (n + m) // 2
    dps = int(digits) + 25
    while True:
        with mpmath.workdps(dps):
            c = mpmath.mpf(ch)
            terms = [mpmath.binomial(half, k) * mpmath.binomial(mpmath.mpf(n + m + 2 * k - 2) / 4, half)
                     * mpmath.ff(k, d) / c ** k for k in range(d, half + 1)]
            total = mpmath.fsum(terms)
            big = max(abs(t) for t in terms)
            if total == 0:
                return -math.inf
            lost = float(mpmath.log10(big / abs(total)))
            if lost < dps - 20:
                return float(mpmath.log(abs(total)))
        dps = int(lost) + 45


def _core(m: int, n: int, sh: float, ch: float) -> float:
    terms = _terms_direct(m, n, ch) if m + n <= DIRECT_MAX else _terms_log(m, n, ch)
    if not terms:
        return 0.0
    top = max(l for l, _ in terms)
    total = math.fsum(s * math.exp(l - top) for l, s in terms)
    if total != 0.0 and -math.log10(abs(total)) <= MAX_LOSS:
        log_inner = top + math.log(abs(total))
    else:
        lost = -math.log10(abs(total)) if total != 0.0 else 17.0
        log_inner = _log_inner_mp(m, n, ch, lost)
        if log_inner == -math.inf:
            return 0.0
    d = (n - m) // 2
    log_p = ((m + n) * math.log(2.0) + math.lgamma(m + 1) - math.lgamma(n + 1)
             + 2 * d * math.log(sh) - math.log(ch) + 2.0 * log_inner)
    if log_p < _LOG_TINY:
        return 0.0
    return math.exp(log_p)


def _prob(m: int, n: int, sh: float, ch: float) -> float:
    if m < 0 or n < 0:
        raise DomainError(f"levels must be non-negative, got {m!r}, {n!r}")
    if (n - m) % 2:
        return 0.0
    if sh == 0.0:
        return 1.0 if m == n else 0.0
    m, n = min(m, n), max(m, n)
    return _core(m, n, sh, ch)


def prob_closed(m: int, n: int, r: float) -> float:
    """P(m -> n) for squeeze parameter r."""
    if not r >= 0:
        raise DomainError(f"squeeze parameter must be non-negative, got {r!r}")
    # routed through sinh(r)**2 so that it is bit-identical with prob_from_nmean
    return prob_from_nmean(m, n, math.sinh(r) ** 2)


def prob_from_nmean(m: int, n: int, n_mean0: float) -> float:
    """P(m -> n) written through the vacuum mean excitation sinh(r)**2."""
    if not n_mean0 >= 0:
        raise DomainError(f"mean excitation number must be >= 0, got {n_mean0!r}")
    return _prob(m, n, math.sqrt(n_mean0), math.sqrt(n_mean0 + 1.0))


def prob_vacuum(n: int, omega0: float, omega1: float, tau: float) -> float:
    """P(0 -> n) after a two-jump protocol."""
    if not (omega0 > 0 and omega1 > 0):
        raise DomainError("prob_vacuum needs positive frequencies")
    if n < 0:
        raise DomainError(f"level must be non-negative, got {n!r}")
    if n % 2:
        return 0.0
    x = (omega1 ** 2 - omega0 ** 2) / (2 * omega0 * omega1) * math.sin(omega1 * tau)
    if x == 0.0:
        return 1.0 if n == 0 else 0.0
    log_p = (math.lgamma(n + 1) + n * math.log(abs(x)) - n * math.log(2.0)
             - 2 * math.lgamma(n // 2 + 1) - 0.5 * (n + 1) * math.log1p(x * x))
    return math.exp(log_p) if log_p > _LOG_TINY else 0.0


def tail_cutoff(m: int, r: float, eps: float = 1e-12, cap: int = 20000) -> int:
    """Smallest level N such that sum_{n > N} P(m -> n) < eps (estimated).

    Past twice the mean occupation the row decays geometrically with ratio
    P(n+2)/P(n) <= tanh(r)^2 (1 + 2/n)^(m+1); the remaining tail is bounded
    by the corresponding geometric series.
    """
    if r == 0:
        return m
    t2 = math.tanh(r) ** 2
    n_bar = m + (2 * m + 1) * math.sinh(r) ** 2
    n = m
    while n <= cap:
        if n >= 2.0 * (n_bar + m + 1):
            ratio = t2 * (1.0 + 2.0 / n) ** (m + 1)
            if ratio < 1.0 and prob_closed(m, n, r) * ratio / (1.0 - ratio) < eps:
                return n
        n += 2
    raise DomainError(f"tail cutoff exceeds {cap} levels for m={m}, r={r}")


def row_sums(m: int, r: float, omega0: float = 1.0, hbar: float = 1.0,
             eps: float = 1e-12) -> tuple[float, float, float]:
    """(sum P, sum n P, sum E0(n) P) over row m, truncated by ``tail_cutoff``."""
    top = tail_cutoff(m, r, eps)
    probs = [prob_closed(m, n, r) for n in range(top + 1)]
    norm = math.fsum(probs)
    mean = math.fsum(n * p for n, p in enumerate(probs))
    energy = math.fsum((n + 0.5) * hbar * omega0 * p for n, p in enumerate(probs))
    return norm, mean, energy


@dataclass(frozen=True)
class TransitionTable:
    t: float
    r: float
    max_level: int
    probs: np.ndarray  # probs[m, n] = P(m -> n)
    tail_mass: np.ndarray

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "r": self.r,
            "max_level": self.max_level,
            "probs": self.probs.tolist(),
            "tail_mass": self.tail_mass.tolist(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def to_csv(self) -> str:
        size = self.max_level + 1
        rows = ((m, n, self.probs[m, n]) for m in range(size) for n in range(size))
        return to_csv(("m", "n", "prob"), rows)


def table_from_r(r: float, max_level: int, t: float = math.nan) -> TransitionTable:
    if max_level < 0:
        raise DomainError(f"max_level must be >= 0, got {max_level!r}")
    size = max_level + 1
    probs = np.zeros((size, size))
    for m in range(size):
        for n in range(m, size):
            probs[m, n] = probs[n, m] = prob_closed(m, n, r)
    tail = np.array([max(0.0, 1.0 - math.fsum(row)) for row in probs])
    return TransitionTable(t, r, max_level, probs, tail)


def table_at(s: PinneySolution, t: float, max_level: int) -> TransitionTable:
    return table_from_r(squeeze_at(s, t).r, max_level, t)
