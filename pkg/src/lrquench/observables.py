"""Second moments, energy and mean excitation number of Fock-labelled states."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .pinney import PinneySolution
from .squeeze import squeeze_at


@dataclass(frozen=True)
class MomentSet:
    n: int
    t: float
    x2: float
    p2: float
    var_x: float
    var_p: float
    energy: float
    n_mean: float

    HEADER = ("t", "n", "x2", "p2", "var_x", "var_p", "energy", "n_mean")

    def row(self):
        return (self.t, self.n, self.x2, self.p2, self.var_x, self.var_p, self.energy,
                self.n_mean)

    @property
    def uncertainty(self) -> float:
        return self.var_x * self.var_p


def static_energy(n: int, omega0: float, hbar: float = 1.0) -> float:
    """Fock level energy (n + 1/2) hbar omega0."""
    return (n + 0.5) * hbar * omega0


def moments_at(s: PinneySolution, n: int, t: float) -> MomentSet:
    if n < 0:
        raise DomainError(f"n must be non-negative, got {n!r}")
    p = s.protocol
    m0, w0, hbar = p.mass, p.omega_initial, p.hbar
    sq = squeeze_at(s, t)
    ch2 = math.cosh(sq.r) ** 2
    sh2 = math.sinh(sq.r) ** 2
    cross = 2.0 * math.sinh(sq.r) * math.cosh(sq.r) * sq.cos_phi if sq.phi_defined else 0.0
    level = n + 0.5
    x2 = level * hbar / (m0 * w0) * (ch2 + sh2 + cross)
    p2 = level * m0 * w0 * hbar * (ch2 + sh2 - cross)
    w = p.omega_at(t)
    energy = p2 / (2.0 * m0) + 0.5 * m0 * w * w * x2
    n_mean = n + (2 * n + 1) * sh2
    # first moments vanish, so variances equal second moments
    return MomentSet(n, t, x2, p2, x2, p2, energy, n_mean)


def uncertainty_bound(r: float, phi: float, n: int, hbar: float = 1.0) -> float:
    """(n+1/2)^2 hbar^2 [cosh^4 r + sinh^4 r - 2 sinh^2 r cosh^2 r cos 2phi]."""
    ch2, sh2 = math.cosh(r) ** 2, math.sinh(r) ** 2
    return (n + 0.5) ** 2 * hbar ** 2 * (ch2 * ch2 + sh2 * sh2 - 2 * sh2 * ch2 * math.cos(2 * phi))


def _q2(omega0, omega1):
    return ((omega1 ** 2 - omega0 ** 2) / (omega0 * omega1)) ** 2


def energy_E1(omega0: float, omega1: float, n: int, hbar: float = 1.0) -> float:
    """Mean energy inside the jump window (time independent)."""
    if not omega0 > 0:
        raise DomainError("omega0 must be positive")
    return 0.5 * (1.0 + omega1 ** 2 / omega0 ** 2) * static_energy(n, omega0, hbar)


def energy_E2(omega0: float, omega1: float, tau: float, n: int, hbar: float = 1.0) -> float:
    """Mean energy after the frequency returns to omega0."""
    if not (omega0 > 0 and omega1 > 0):
        raise DomainError("energy_E2 needs positive frequencies")
    factor = 1.0 + 0.5 * _q2(omega0, omega1) * math.sin(omega1 * tau) ** 2
    return factor * static_energy(n, omega0, hbar)


def energy_E2_free(omega0: float, tau: float, n: int, hbar: float = 1.0) -> float:
    """omega1 -> 0 limit of energy_E2: (1 + omega0^2 tau^2 / 2) E0(n)."""
    return (1.0 + 0.5 * (omega0 * tau) ** 2) * static_energy(n, omega0, hbar)


def energy_ratio_E2_E1(omega0, omega1, tau):
    """E2/E1; the Fock label cancels.  Accepts numpy arrays."""
    omega0 = np.asarray(omega0, dtype=float)
    omega1 = np.asarray(omega1, dtype=float)
    if np.any(omega0 <= 0) or np.any(omega1 <= 0):
        raise DomainError("energy_ratio_E2_E1 needs positive frequencies")
    e2 = 1.0 + 0.5 * _q2(omega0, omega1) * np.sin(omega1 * tau) ** 2
    e1 = 0.5 * (1.0 + omega1 ** 2 / omega0 ** 2)
    out = e2 / e1
    return float(out) if out.ndim == 0 else out


def energy_ratio_E2_E0(omega0, omega1, tau):
    """E2/E0 = 1 + (1/2) ((w1^2 - w0^2)/(w0 w1))^2 sin^2(w1 tau); array friendly."""
    omega0 = np.asarray(omega0, dtype=float)
    omega1 = np.asarray(omega1, dtype=float)
    out = 1.0 + 0.5 * _q2(omega0, omega1) * np.sin(omega1 * tau) ** 2
    return float(out) if out.ndim == 0 else out


def n_mean_window(omega0: float, omega1: float, n: int, t: float,
                  tau: float | None = None) -> float:
    """Mean excitation number at time t > 0 of a two-jump protocol.

    Inside the window this is the closed form in sin(omega1 t); with ``tau``
    given and t > tau the value stays frozen at its t = tau level.
    """
    if not (omega0 > 0 and omega1 > 0):
        raise DomainError("n_mean_window needs positive frequencies")
    if tau is not None and t > tau:
        t = tau
    return n + (n + 0.5) * 0.5 * _q2(omega0, omega1) * math.sin(omega1 * t) ** 2
