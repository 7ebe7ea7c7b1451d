"""Brute-force checks on explicit wavefunctions.

The Lewis-Riesenfeld states are sampled on a spatial grid and everything the
closed forms predict (probabilities, second moments, the invariant's
eigenvalue) is recomputed by quadrature.  Nothing here calls into
``transitions``, ``squeeze`` or ``observables``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.integrate import quad

from ._csv import to_csv
from .errors import GridError
from .pinney import PinneySolution

NORM_TOL = 1e-8


@dataclass(frozen=True)
class OracleGrid:
    x_min: float
    x_max: float
    points: int
    nodes: np.ndarray
    weights: np.ndarray
    uniform: bool = True

    @classmethod
    def linear(cls, x_min: float, x_max: float, points: int) -> "OracleGrid":
        """Uniform nodes with trapezoid weights (spectrally accurate for
        smooth integrands that have decayed at both ends)."""
        x = np.linspace(x_min, x_max, points)
        h = x[1] - x[0]
        w = np.full(points, h)
        w[0] = w[-1] = 0.5 * h
        return cls(x_min, x_max, points, x, w, True)

    @classmethod
    def gauss_hermite(cls, scale: float, points: int) -> "OracleGrid":
        """Gauss-Hermite nodes x = scale*y, weights folded so that
        sum(w f(x)) approximates the plain integral of f."""
        y, wy = np.polynomial.hermite.hermgauss(points)
        x = scale * y
        w = scale * wy * np.exp(y * y)
        return cls(float(x[0]), float(x[-1]), points, x, w, False)

    @classmethod
    def covering(cls, states: Sequence["LRWaveFunction"], min_points: int = 2048,
                 max_points: int = 1 << 20) -> "OracleGrid":
        """Uniform grid wide enough for the widest state and fine enough for
        the most oscillatory product of the given states."""
        half = max(s.width * (math.sqrt(2 * s.n + 1) + 12.0) for s in states)
        # |psi|^2 of the most oscillatory state bounds every pairwise product
        k_state = max(math.sqrt(2 * s.n + 1) / s.width + abs(s.chirp) * half for s in states)
        k_need = 10.0 / min(s.width for s in states) + 2.0 * k_state
        needed = int(math.ceil(2.0 * half * k_need / math.pi)) + 1
        points = max(min_points, 1 << (needed - 1).bit_length())
        if points > max_points:
            raise GridError(f"states need {needed} grid points, above the {max_points} limit")
        return cls.linear(-half, half, points + 1)


@dataclass(frozen=True)
class LRWaveFunction:
    n: int
    rho: float
    rho_dot: float
    alpha_n: float
    m0: float = 1.0
    hbar: float = 1.0

    @property
    def eigenvalue(self) -> float:
        """Eigenvalue (n + 1/2) hbar of the invariant."""
        return (self.n + 0.5) * self.hbar

    @property
    def width(self) -> float:
        return math.sqrt(self.hbar) * self.rho

    @property
    def chirp(self) -> float:
        """Coefficient b of the exp(i b x^2 / 2) phase factor."""
        return self.m0 * self.rho_dot / (self.hbar * self.rho)

    @classmethod
    def from_solution(cls, s: PinneySolution, n: int, t: float) -> "LRWaveFunction":
        rho, rho_dot, _ = s.evaluate(t)
        p = s.protocol
        return cls(n, rho, rho_dot, alpha_n(s, n, t), p.mass, p.hbar)

    @classmethod
    def static(cls, n: int, m0: float, omega0: float, hbar: float = 1.0,
               t: float = 0.0) -> "LRWaveFunction":
        """Fock level n of the fixed-frequency oscillator at time t."""
        return cls(n, 1.0 / math.sqrt(m0 * omega0), 0.0, -(n + 0.5) * omega0 * t, m0, hbar)


def alpha_n(s: PinneySolution, n: int, t: float) -> float:
    """-(n + 1/2)/m0 times the integral of dt'/rho^2 from 0 to t.

    For t < 0 this continues as -(n + 1/2) omega0 t.
    """
    return -(n + 0.5) / s.mass * s.phase_integral(t)


def alpha_n_numeric(s: PinneySolution, n: int, t: float) -> float:
    """Same as ``alpha_n`` but by adaptive quadrature, one piece per segment."""
    if t < 0:
        return -(n + 0.5) / s.mass * t / s.rho0 ** 2
    edges = [0.0] + [seg.t_start for seg in s.segments[1:] if seg.t_start < t] + [t]
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        val, _ = quad(lambda u: 1.0 / s.rho(u) ** 2, a, b, epsabs=1e-14, epsrel=1e-13,
                      limit=500)
        total += val
    return -(n + 0.5) / s.mass * total


def hermite_functions(n_max: int, y: np.ndarray) -> np.ndarray:
    """Orthonormal Hermite functions h_0..h_{n_max} at y (rows by order).

    h_k(y) = (2^k k! sqrt(pi))^{-1/2} H_k(y) exp(-y^2/2), via the normalised
    three-term recurrence so that large orders neither overflow nor underflow.
    """
    y = np.asarray(y, dtype=float)
    out = np.empty((n_max + 1,) + y.shape)
    # the Gaussian factor is carried as a log scale: exp(-y^2/2) alone would
    # underflow inside the classical region of orders beyond ~700
    log_scale = -0.5 * y * y
    prev = np.zeros_like(y)
    cur = np.full_like(y, math.pi ** -0.25)
    out[0] = cur * np.exp(log_scale)
    for k in range(1, n_max + 1):
        prev, cur = cur, math.sqrt(2.0 / k) * y * cur - math.sqrt((k - 1) / k) * prev
        big = np.abs(cur) > 1e100
        if big.any():
            f = np.abs(cur[big])
            cur[big] /= f
            prev[big] /= f
            log_scale[big] += np.log(f)
        out[k] = cur * np.exp(log_scale)
    return out


def _sample(w: LRWaveFunction, x: np.ndarray) -> np.ndarray:
    y = x / w.width
    h = hermite_functions(w.n, y)[w.n]
    envelope = w.width ** -0.5 * h
    return np.exp(1j * (w.alpha_n + 0.5 * w.chirp * x * x)) * envelope


def eval_wavefunction(w: LRWaveFunction, grid: OracleGrid) -> np.ndarray:
    psi = _sample(w, grid.nodes)
    norm = float(np.sum(grid.weights * np.abs(psi) ** 2))
    if abs(norm - 1.0) > NORM_TOL:
        raise GridError(f"grid norm deficit {1.0 - norm:.3e} for n={w.n}, width={w.width:.4g}")
    return psi


def overlap(a: LRWaveFunction, b: LRWaveFunction, grid: OracleGrid | None = None) -> complex:
    """<a|b> by quadrature."""
    if grid is None:
        grid = OracleGrid.covering([a, b])
    pa = eval_wavefunction(a, grid)
    pb = eval_wavefunction(b, grid)
    return complex(np.sum(grid.weights * np.conj(pa) * pb))


def overlap_prob(m: int, n: int, s: PinneySolution, t: float,
                 grid: OracleGrid | None = None) -> float:
    """|<static n at t | evolved m at t>|^2 by quadrature."""
    p = s.protocol
    static = LRWaveFunction.static(n, p.mass, p.omega_initial, p.hbar, t)
    evolved = LRWaveFunction.from_solution(s, m, t)
    return abs(overlap(static, evolved, grid)) ** 2


def overlap_row(m: int, s: PinneySolution, t: float, n_max: int) -> np.ndarray:
    """overlap_prob(m, n, s, t) for n = 0..n_max on one shared grid.

    The static levels come out of a single Hermite recurrence, which makes
    long rows (strong squeezing) affordable.
    """
    p = s.protocol
    top = LRWaveFunction.static(n_max, p.mass, p.omega_initial, p.hbar, t)
    evolved = LRWaveFunction.from_solution(s, m, t)
    grid = OracleGrid.covering([top, evolved])
    psi = eval_wavefunction(evolved, grid)
    h = hermite_functions(n_max, grid.nodes / top.width) / math.sqrt(top.width)
    phases = np.exp(-1j * (np.arange(n_max + 1) + 0.5) * p.omega_initial * t)
    amps = phases * (h @ (grid.weights * psi))
    return np.abs(amps) ** 2


def _spectral_derivative(psi: np.ndarray, grid: OracleGrid, order: int) -> np.ndarray:
    if not grid.uniform:
        raise GridError("spectral differentiation needs a uniform grid")
    h = grid.nodes[1] - grid.nodes[0]
    spec = np.fft.fft(psi)
    mag = np.abs(spec)
    top = np.fft.fftshift(mag)
    edge = max(1, len(top) // 20)
    if max(top[:edge].max(), top[-edge:].max()) > 1e-10 * mag.max():
        raise GridError("grid spacing too coarse: spectrum not resolved for differentiation")
    k = 2.0 * np.pi * np.fft.fftfreq(len(psi), d=h)
    return np.fft.ifft((1j * k) ** order * spec)


def quadrature_moments(w: LRWaveFunction, grid: OracleGrid | None = None) -> tuple[float, float]:
    """(<x^2>, <p^2>) with <p^2> = -hbar^2 <psi|psi''> by FFT differentiation."""
    if grid is None:
        grid = OracleGrid.covering([w])
    psi = eval_wavefunction(w, grid)
    x = grid.nodes
    x2 = float(np.sum(grid.weights * np.abs(psi) ** 2 * x * x))
    d2 = _spectral_derivative(psi, grid, 2)
    p2 = float(np.real(-w.hbar ** 2 * np.sum(grid.weights * np.conj(psi) * d2)))
    return x2, p2


def invariant_residual(w: LRWaveFunction, grid: OracleGrid | None = None) -> float:
    """|| I psi - (n + 1/2) hbar psi || / || psi || for the quadratic invariant
    I = ((x/rho)^2 + (rho p - m0 rho_dot x)^2) / 2 built from (rho, rho_dot)."""
    if grid is None:
        grid = OracleGrid.covering([w])
    psi = eval_wavefunction(w, grid)
    x = grid.nodes

    def ladder(f):
        return -1j * w.hbar * w.rho * _spectral_derivative(f, grid, 1) - w.m0 * w.rho_dot * x * f

    inv = 0.5 * ((x / w.rho) ** 2 * psi + ladder(ladder(psi)))
    diff = inv - w.eigenvalue * psi
    return math.sqrt(float(np.sum(grid.weights * np.abs(diff) ** 2))
                     / float(np.sum(grid.weights * np.abs(psi) ** 2)))


def profile_csv(w: LRWaveFunction, grid: OracleGrid) -> str:
    psi = _sample(w, grid.nodes)
    rows = zip(grid.nodes, psi.real, psi.imag, np.abs(psi) ** 2)
    return to_csv(("x", "re", "im", "abs2"), rows)


def quadrature_cross_moment(w: LRWaveFunction, grid: OracleGrid | None = None) -> float:
    """<x p + p x> / 2 by quadrature (first derivative taken spectrally)."""
    if grid is None:
        grid = OracleGrid.covering([w])
    psi = eval_wavefunction(w, grid)
    d1 = _spectral_derivative(psi, grid, 1)
    # <xp> = -i hbar <psi| x psi'>; the symmetrised moment is its real part
    xp = -1j * w.hbar * np.sum(grid.weights * np.conj(psi) * grid.nodes * d1)
    return float(np.real(xp))
