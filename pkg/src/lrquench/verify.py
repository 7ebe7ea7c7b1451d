"""Self-check suite run by ``lrquench verify``."""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DomainError
from .observables import energy_E2, moments_at, static_energy
from .oracle import (LRWaveFunction, alpha_n, alpha_n_numeric, invariant_residual,
                     overlap_prob, quadrature_moments)
from .pinney import PinneySolution, solve_ode_protocol, solve_protocol
from .protocol import from_segments, single_jump, two_jump
from .squeeze import squeeze_at
from .transitions import prob_closed, row_sums


@dataclass(frozen=True)
class CheckResult:
    name: str
    measured: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.measured <= self.tol

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"{tag} {self.name}: measured={self.measured:.3e} tol={self.tol:.1e}"


def _corrupt(s: PinneySolution) -> PinneySolution:
    segs = list(s.segments)
    segs[-1] = replace(segs[-1], A=segs[-1].A * (1.0 + 1e-3))
    return replace(s, segments=tuple(segs))


def _protocols():
    return [
        two_jump(1.0, 3.0, 5 * math.pi / 6),
        two_jump(1.0, 3.0, 59 * math.pi / 62),
        two_jump(1.0, 3.0, math.pi),
        two_jump(1.0, 0.4, 2.2),
        from_segments(1.0, [(2.5, 0.8), (0.0, 1.1), (1.7, math.inf)]),
    ]


def run_checks(tol: float = 1e-10, corrupt: bool = False) -> list[CheckResult]:
    if not 1e-14 < tol < 1e-3:
        raise DomainError(f"tol must lie in (1e-14, 1e-3), got {tol!r}")
    results = []
    sols = [solve_protocol(p) for p in _protocols()]
    if corrupt:
        sols = [_corrupt(s) for s in sols]
    t_end = 4 * math.pi
    tg = np.linspace(-1.0, t_end, 1201)

    worst = max(float(np.max(np.abs(s.residual(tg)))) for s in sols)
    results.append(CheckResult("pinney-residual", worst, 1e-8))

    worst = 0.0
    for s in sols:
        for seg in s.segments[1:]:
            a = s.evaluate(np.nextafter(seg.t_start, -math.inf))
            b = s.evaluate(seg.t_start)
            worst = max(worst, abs(a[0] - b[0]) / b[0], abs(a[1] - b[1]) / max(1.0, abs(b[1])))
    results.append(CheckResult("pinney-continuity", worst, 1e-10))

    tt = np.linspace(0.0, t_end, 801)
    worst = 0.0
    for s in sols:
        traj = solve_ode_protocol(s.protocol, t_end, tol, tt)
        worst = max(worst, float(np.max(np.abs(traj.rho - s.rho(tt)))))
    results.append(CheckResult("ode-vs-analytic", worst, 100 * tol))

    rev = solve_protocol(two_jump(1.0, 3.0, math.pi))
    results.append(CheckResult("revival-r2", squeeze_at(rev, 5.0).r, 1e-12))
    results.append(CheckResult(
        "revival-energy", abs(energy_E2(1.0, 3.0, math.pi, 0) / static_energy(0, 1.0) - 1), 1e-12))

    worst = 0.0
    for r in (0.2, math.log(3.0), 2.0):
        w1 = math.exp(r)
        s = solve_protocol(single_jump(1.0, w1))
        t = 0.5 * math.pi / w1
        for m in range(9):
            for n in range(9):
                worst = max(worst, abs(overlap_prob(m, n, s, t) - prob_closed(m, n, r)))
    results.append(CheckResult("overlap-vs-closed-form", worst, 1e-8))

    r = math.log(3.0)
    worst_norm = worst_mean = 0.0
    for m in range(9):
        norm, mean, _ = row_sums(m, r)
        worst_norm = max(worst_norm, 1.0 - norm)
        worst_mean = max(worst_mean, abs(mean - (m + (2 * m + 1) * math.sinh(r) ** 2)))
    results.append(CheckResult("sum-rule-norm", worst_norm, 1e-10))
    results.append(CheckResult("sum-rule-mean", worst_mean, 1e-8))

    worst_mom = worst_inv = worst_alpha = 0.0
    s = sols[0]
    for t in (-0.5, 0.4, 1.9, 3.3, 6.0):
        for n in (0, 2):
            w = LRWaveFunction.from_solution(s, n, t)
            x2, p2 = quadrature_moments(w)
            ms = moments_at(s, n, t)
            worst_mom = max(worst_mom, abs(x2 / ms.x2 - 1), abs(p2 / ms.p2 - 1))
            worst_inv = max(worst_inv, invariant_residual(w))
        if t >= 0:
            worst_alpha = max(worst_alpha, abs(alpha_n(s, 0, t) - alpha_n_numeric(s, 0, t)))
    results.append(CheckResult("moments-vs-quadrature", worst_mom, 1e-8))
    results.append(CheckResult("invariant-eigenvalue", worst_inv, 1e-7))
    results.append(CheckResult("phase-analytic-vs-numeric", worst_alpha, 1e-10))
    return results
