"""Squeeze parameter and squeeze phase of the Lewis-Riesenfeld states."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, UndefinedPhaseError
from .pinney import PinneySolution

#: below this r the state counts as unsqueezed and the phase as undefined
R_ZERO = 1e-12


@dataclass(frozen=True)
class SqueezeState:
    r: float
    phi_defined: bool
    phi: float  # in [0, 2*pi); meaningless unless phi_defined

    @property
    def cos_phi(self) -> float:
        return math.cos(self.phi) if self.phi_defined else 0.0


def squeeze_from_rho(rho: float, rho_dot: float, m0: float, omega0: float) -> SqueezeState:
    """(r, phi) of the state described by (rho, rho_dot) relative to omega0.

    sinh(r)**2 is evaluated as a sum of squares,
        [m0**2 rho_dot**2 + (1/rho - m0 omega0 rho)**2] / (4 m0 omega0),
    which equals cosh(r)**2 - 1 of the arccosh form but keeps full relative
    precision near r = 0.  The phase is placed with atan2: its cosine follows
    the arccos definition and its sine is fixed by the position-momentum
    cross moment, which is proportional to m0 rho rho_dot.
    """
    u = m0 * omega0 * rho * rho
    v = m0 * rho * rho_dot
    # (1/rho - m0 omega0 rho)**2 = (1 - u)**2 / rho**2
    sh2 = (m0 * m0 * rho_dot * rho_dot + (1.0 - u) ** 2 / (rho * rho)) / (4.0 * m0 * omega0)
    r = math.asinh(math.sqrt(sh2))
    if r < R_ZERO:
        return SqueezeState(r, False, 0.0)
    # 2 sinh r cosh r cos(phi) = 1 + u - 2 cosh**2 r ;  2 sinh r cosh r sin(phi) = -v
    phi = math.atan2(-v, u - 1.0 - 2.0 * sh2) % (2.0 * math.pi)
    return SqueezeState(r, True, phi)


def squeeze_at(s: PinneySolution, t: float) -> SqueezeState:
    p = s.protocol
    rho, rho_dot, _ = s.evaluate(t)
    return squeeze_from_rho(rho, rho_dot, p.mass, p.omega_initial)


def _q(omega0: float, omega1: float) -> float:
    return (omega1 ** 2 - omega0 ** 2) / (2.0 * omega0 * omega1)


def r1_closed(omega0: float, omega1: float, t: float) -> float:
    """Squeeze parameter inside the jump window, t in (0, tau)."""
    if not (omega0 > 0 and omega1 > 0):
        raise DomainError("r1_closed needs positive frequencies")
    x = _q(omega0, omega1) * math.sin(omega1 * t)
    # arccosh(sqrt(1 + x**2)) == asinh(|x|)
    return math.asinh(abs(x))


def r2_closed(omega0: float, omega1: float, tau: float) -> float:
    """Squeeze parameter after the second jump; constant in t."""
    return r1_closed(omega0, omega1, tau)


def phi1_closed(omega0: float, omega1: float, t: float) -> float:
    """Squeeze phase inside the jump window, lifted to [0, 2*pi).

    The cosine is the arccos argument of the closed form; the sine carries the
    sign of (omega1**2 - omega0**2) sin(2 omega1 t), matching ``squeeze_at``.
    Raises UndefinedPhaseError where the state is unsqueezed.
    """
    if not (omega0 > 0 and omega1 > 0):
        raise DomainError("phi1_closed needs positive frequencies")
    s = math.sin(omega1 * t)
    c = math.cos(omega1 * t)
    d = omega1 ** 2 - omega0 ** 2
    if r1_closed(omega0, omega1, t) < R_ZERO:
        raise UndefinedPhaseError(f"squeeze phase undefined at t={t!r} (r = 0)")
    root = math.sqrt((4 * omega0 ** 2 * omega1 ** 2 + d * d * s * s) * d * d * s * s)
    cos_phi = (omega0 ** 4 - omega1 ** 4) * s * s / root
    q = _q(omega0, omega1)
    sin_phi = math.copysign(1.0, q * s) * c / math.sqrt(1.0 + q * q * s * s)
    return math.atan2(sin_phi, cos_phi) % (2.0 * math.pi)
