"""Ermakov-Pinney equation: closed-form piecewise solution and an ODE oracle.

On a constant-frequency interval the auxiliary function obeys

    rho'' + omega**2 rho = 1 / (m**2 rho**3)

and rho**2 is a quadratic form in (sin, cos) of omega*(t - t_start):

    rho**2 = A sin**2 + 2 C sin cos + B cos**2,   A B - C**2 = 1/(m omega)**2.

For omega == 0 the form degenerates to a polynomial in t' = t - t_start,

    rho**2 = B + 2 C t' + A t'**2,   A B - C**2 = 1/m**2,

so on free segments ``A`` holds the t'**2 coefficient.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import solve_ivp

from ._csv import to_csv
from .errors import DomainError, IntegrationError
from .protocol import FrequencyProtocol


def rho_static(m0: float, omega0: float) -> float:
    """Constant solution 1/sqrt(m0*omega0) for a never-changing frequency."""
    if not (m0 > 0 and omega0 > 0):
        raise DomainError(f"mass and frequency must be positive, got {m0!r}, {omega0!r}")
    return 1.0 / math.sqrt(m0 * omega0)


@dataclass(frozen=True)
class PinneySegment:
    A: float
    B: float
    C: float
    omega: float
    t_start: float
    mass: float = 1.0

    @classmethod
    def from_state(cls, rho: float, rho_dot: float, omega: float, t_start: float,
                   mass: float = 1.0) -> "PinneySegment":
        """Segment whose solution passes through (rho, rho_dot) at ``t_start``.

        Value fixes B, slope fixes C and the quadratic-form constraint fixes A.
        """
        B = rho * rho
        if omega > 0:
            C = rho * rho_dot / omega
            A = (1.0 / (mass * omega) ** 2 + C * C) / B
        else:
            C = rho * rho_dot
            A = (1.0 + (mass * C) ** 2) / (mass * mass * B)
        return cls(A, B, C, omega, t_start, mass)

    def _q(self, t):
        """rho**2 and its first two time derivatives."""
        t = np.asarray(t, dtype=float)
        A, B, C, w = self.A, self.B, self.C, self.omega
        if w > 0:
            th2 = 2.0 * w * (t - self.t_start)
            s2, c2 = np.sin(th2), np.cos(th2)
            q = 0.5 * (A + B) + 0.5 * (B - A) * c2 + C * s2
            dq = w * ((A - B) * s2 + 2.0 * C * c2)
            ddq = 2.0 * w * w * ((A - B) * c2 - 2.0 * C * s2)
        else:
            tp = t - self.t_start
            q = B + 2.0 * C * tp + A * tp * tp
            dq = 2.0 * C + 2.0 * A * tp
            ddq = np.full_like(tp, 2.0 * A)
        return q, dq, ddq

    def evaluate(self, t):
        """Return (rho, rho_dot, rho_ddot) at ``t``."""
        q, dq, ddq = self._q(t)
        rho = np.sqrt(q)
        rho_dot = dq / (2.0 * rho)
        rho_ddot = ddq / (2.0 * rho) - dq * dq / (4.0 * rho ** 3)
        return rho, rho_dot, rho_ddot

    def constraint_residual(self) -> float:
        """Relative violation of A B - C**2 = 1/(m omega)**2 (1/m**2 if free)."""
        scale = (self.mass * self.omega) ** 2 if self.omega > 0 else self.mass ** 2
        return (self.A * self.B - self.C ** 2) * scale - 1.0

    def rereferenced(self, t_ref: float) -> "PinneySegment":
        """Same curve, with the trigonometric argument measured from ``t_ref``.

        This is how coefficients quoted against an absolute clock (sin(omega*t))
        are compared with the segment-local ones used internally.
        """
        if self.omega == 0:
            d = self.t_start - t_ref
            # B + 2C(t - t_start) + A(t - t_start)**2 rewritten around t_ref
            B = self.B - 2.0 * self.C * d + self.A * d * d
            C = self.C - self.A * d
            return replace(self, B=B, C=C, t_start=t_ref)
        delta = self.omega * (self.t_start - t_ref)
        cd, sd = math.cos(delta), math.sin(delta)
        # theta_local = theta_ref - delta; (sin, cos)_local = R (sin, cos)_ref
        R = np.array([[cd, -sd], [sd, cd]])
        M = np.array([[self.A, self.C], [self.C, self.B]])
        Mr = R.T @ M @ R
        return replace(self, A=float(Mr[0, 0]), B=float(Mr[1, 1]), C=float(Mr[0, 1]),
                       t_start=t_ref)

    def extrema(self) -> tuple[float, float]:
        """(min rho, max rho) over a full period; requires omega > 0."""
        if self.omega == 0:
            raise DomainError("a free segment has no periodic extrema")
        lo, hi = np.linalg.eigvalsh(np.array([[self.A, self.C], [self.C, self.B]]))
        return math.sqrt(lo), math.sqrt(hi)

    def phase_integral(self, t0, t1):
        """Integral of dt/rho**2 from t0 to t1 (both inside this segment)."""
        m = self.mass
        if self.omega == 0:
            def F(t):
                tp = np.asarray(t, dtype=float) - self.t_start
                return np.arctan(m * (self.A * tp + self.C))
            return m * (F(t1) - F(t0))
        k = 1.0 / (m * self.omega)

        def G(t):
            # angle of M (cos th, sin th) minus th, with M = [[k, 0], [C, A]];
            # both eigenvalues of M are positive so this never wraps
            th = self.omega * (np.asarray(t, dtype=float) - self.t_start)
            ang = np.arctan2(self.A * np.sin(th) + self.C * np.cos(th), k * np.cos(th))
            diff = ang - th
            return np.mod(diff + np.pi, 2.0 * np.pi) - np.pi, th

        g1, th1 = G(t1)
        g0, th0 = G(t0)
        return m * ((th1 - th0) + (g1 - g0))


@dataclass(frozen=True)
class PinneySolution:
    protocol: FrequencyProtocol
    segments: tuple[PinneySegment, ...]
    rho0: float

    @property
    def mass(self) -> float:
        return self.protocol.mass

    def _locate(self, t):
        starts = np.array([s.t_start for s in self.segments])
        return np.searchsorted(starts, t, side="right") - 1

    def evaluate(self, t):
        """Vectorised (rho, rho_dot, rho_ddot); t < 0 gives the static values."""
        t = np.asarray(t, dtype=float)
        scalar = t.ndim == 0
        t = np.atleast_1d(t)
        rho = np.full(t.shape, self.rho0)
        rho_dot = np.zeros(t.shape)
        rho_ddot = np.zeros(t.shape)
        idx = self._locate(t)
        for i, seg in enumerate(self.segments):
            mask = idx == i
            if mask.any():
                rho[mask], rho_dot[mask], rho_ddot[mask] = seg.evaluate(t[mask])
        if scalar:
            return float(rho[0]), float(rho_dot[0]), float(rho_ddot[0])
        return rho, rho_dot, rho_ddot

    def rho(self, t):
        return self.evaluate(t)[0]

    def rho_dot(self, t):
        return self.evaluate(t)[1]

    def omega(self, t):
        t = np.asarray(t, dtype=float)
        if t.ndim == 0:
            return self.protocol.omega_at(float(t))
        return np.array([self.protocol.omega_at(float(x)) for x in t])

    def segment_for(self, t: float) -> PinneySegment | None:
        i = int(self._locate(t))
        return None if i < 0 else self.segments[i]

    def residual(self, t):
        """m**2 rho**3 (rho'' + omega**2 rho) - 1 from the analytic derivatives."""
        rho, _, rho_ddot = self.evaluate(t)
        w = self.omega(t)
        m = self.mass
        return m * m * np.asarray(rho) ** 3 * (rho_ddot + w * w * np.asarray(rho)) - 1.0

    def phase_integral(self, t: float) -> float:
        """Integral of dt'/rho**2 from 0 to t, additive across segments."""
        if t < 0:
            return t / self.rho0 ** 2
        total = 0.0
        for i, seg in enumerate(self.segments):
            end = self.segments[i + 1].t_start if i + 1 < len(self.segments) else math.inf
            hi = min(t, end)
            total += float(seg.phase_integral(seg.t_start, hi))
            if t <= end:
                break
        return total


def solve_protocol(p: FrequencyProtocol) -> PinneySolution:
    """Closed-form rho(t) for a piecewise-constant protocol.

    Starts from rho = 1/sqrt(m omega_initial), rho_dot = 0 at t = 0 and matches
    value and slope at every jump.
    """
    rho0 = rho_static(p.mass, p.omega_initial)
    rho, rho_dot = rho0, 0.0
    segments = []
    for t_start, (omega, duration) in zip(p.jump_times, p.segments):
        seg = PinneySegment.from_state(rho, rho_dot, omega, t_start, p.mass)
        segments.append(seg)
        if math.isfinite(duration):
            rho, rho_dot, _ = seg.evaluate(t_start + duration)
            rho, rho_dot = float(rho), float(rho_dot)
    return PinneySolution(p, tuple(segments), rho0)


def rho_at(s: PinneySolution, t: float) -> float:
    return s.rho(t)


def rho_dot_at(s: PinneySolution, t: float) -> float:
    return s.rho_dot(t)


@dataclass(frozen=True)
class Trajectory:
    t: np.ndarray
    rho: np.ndarray
    rho_dot: np.ndarray
    omega: np.ndarray

    HEADER = ("t", "rho", "rho_dot", "omega")

    def rows(self):
        return zip(self.t, self.rho, self.rho_dot, self.omega)

    def to_csv(self) -> str:
        return to_csv(self.HEADER, self.rows())


def solve_ode(m0: float, omega_fn: Callable[[float], float], t_end: float, tol: float, *,
              omega0: float, breakpoints: Sequence[float] = (), t_eval=None) -> Trajectory:
    """Integrate the Ermakov-Pinney equation numerically from (rho0, 0) at t=0.

    ``omega_fn`` may be any callback; discontinuities listed in ``breakpoints``
    are forced to be step boundaries, and on each sub-interval the frequency
    is read from that interval's side of the jump.
    """
    if not t_end > 0:
        raise DomainError(f"t_end must be positive, got {t_end!r}")
    if not 1e-14 < tol < 1e-3:
        raise DomainError(f"tol must lie in (1e-14, 1e-3), got {tol!r}")
    rho0 = rho_static(m0, omega0)
    if t_eval is None:
        t_eval = np.linspace(0.0, t_end, 1001)
    t_eval = np.asarray(t_eval, dtype=float)
    if t_eval.size and (t_eval.min() < 0 or t_eval.max() > t_end):
        raise DomainError("t_eval must lie inside [0, t_end]")

    edges = [0.0] + sorted(b for b in set(breakpoints) if 0 < b < t_end) + [float(t_end)]
    atol = tol * np.array([rho0, rho0 * omega0])
    inv_m2 = 1.0 / (m0 * m0)

    rho = np.empty_like(t_eval)
    rho_dot = np.empty_like(t_eval)
    y = np.array([rho0, 0.0])
    for k, (a, b) in enumerate(zip(edges[:-1], edges[1:])):
        b_left = np.nextafter(b, a)

        def rhs(t, state, a=a, b_left=b_left):
            w = omega_fn(min(max(t, a), b_left))
            r, v = state
            return [v, -w * w * r + inv_m2 / r ** 3]

        sol = solve_ivp(rhs, (a, b), y, method="DOP853", rtol=tol, atol=atol,
                        dense_output=True)
        if sol.status != 0:
            raise IntegrationError(f"ODE integration failed: {sol.message}", float(sol.t[-1]))
        last = k == len(edges) - 2
        mask = (t_eval >= a) & ((t_eval <= b) if last else (t_eval < b))
        if mask.any():
            rho[mask], rho_dot[mask] = sol.sol(t_eval[mask])
        y = sol.y[:, -1]
    omega = np.array([omega_fn(float(t)) for t in t_eval])
    return Trajectory(t_eval, rho, rho_dot, omega)


def solve_ode_protocol(p: FrequencyProtocol, t_end: float, tol: float = 1e-10,
                       t_eval=None) -> Trajectory:
    return solve_ode(p.mass, p.omega_at, t_end, tol, omega0=p.omega_initial,
                     breakpoints=p.jump_times[1:], t_eval=t_eval)
