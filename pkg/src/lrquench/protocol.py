"""Piecewise-constant frequency protocols.

A protocol holds the oscillator at ``omega_initial`` for all ``t < 0`` and then
runs through a list of segments, the first starting at ``t = 0``.  Every
segment except the last has a finite duration; the last one lasts forever.
At a jump time the frequency takes its post-jump value (right-continuous).
"""
from __future__ import annotations

import bisect
import json
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .errors import DomainError


class Segment(NamedTuple):
    omega: float
    duration: float  # math.inf for the tail segment


@dataclass(frozen=True)
class FrequencyProtocol:
    omega_initial: float
    segments: tuple[Segment, ...]
    mass: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        segs = tuple(Segment(float(o), float(d)) for o, d in self.segments)
        object.__setattr__(self, "segments", segs)
        for name in ("omega_initial", "mass", "hbar"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise DomainError(f"{name} must be positive and finite, got {value!r}")
        if not segs:
            raise DomainError("a protocol needs at least one segment")
        for i, (omega, duration) in enumerate(segs):
            last = i == len(segs) - 1
            if not (math.isfinite(omega) and omega >= 0):
                raise DomainError(f"segment {i}: omega must be >= 0, got {omega!r}")
            if last:
                if duration != math.inf:
                    raise DomainError("the last segment must have infinite duration")
                if omega <= 0:
                    raise DomainError("the last segment must have omega > 0")
            elif not (math.isfinite(duration) and duration > 0):
                raise DomainError(
                    f"segment {i}: interior durations must be positive and finite, got {duration!r}"
                )

    @property
    def jump_times(self) -> tuple[float, ...]:
        """Start time of every segment; the first is always 0."""
        times = [0.0]
        for _, duration in self.segments[:-1]:
            times.append(times[-1] + duration)
        return tuple(times)

    @property
    def omega_final(self) -> float:
        return self.segments[-1].omega

    def omega_at(self, t: float) -> float:
        if t < 0:
            return self.omega_initial
        i = bisect.bisect_right(self.jump_times, t) - 1
        return self.segments[i].omega

    def is_two_jump(self) -> bool:
        return len(self.segments) == 2 and self.segments[1].omega == self.omega_initial

    def two_jump_params(self) -> tuple[float, float, float]:
        """Return ``(omega0, omega1, tau)`` for a two-jump protocol."""
        if not self.is_two_jump():
            raise DomainError("protocol is not of the two-jump form")
        return self.omega_initial, self.segments[0].omega, self.segments[0].duration

    def to_dict(self) -> dict:
        return {
            "mass": self.mass,
            "hbar": self.hbar,
            "omega_initial": self.omega_initial,
            "segments": [
                {"omega": s.omega, "duration": None if math.isinf(s.duration) else s.duration}
                for s in self.segments
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, doc: dict) -> "FrequencyProtocol":
        try:
            segments = [
                Segment(
                    float(s["omega"]),
                    math.inf if s.get("duration") is None else float(s["duration"]),
                )
                for s in doc["segments"]
            ]
            return cls(
                omega_initial=float(doc["omega_initial"]),
                segments=tuple(segments),
                mass=float(doc.get("mass", 1.0)),
                hbar=float(doc.get("hbar", 1.0)),
            )
        except (KeyError, TypeError) as exc:
            raise DomainError(f"malformed protocol document: {exc}") from exc

    @classmethod
    def from_json(cls, text: str) -> "FrequencyProtocol":
        return cls.from_dict(json.loads(text))


def two_jump(omega0: float, omega1: float, tau: float, mass: float = 1.0,
             hbar: float = 1.0) -> FrequencyProtocol:
    """omega0 before t=0, omega1 on (0, tau), omega0 again after tau."""
    if not omega0 > 0:
        raise DomainError(f"omega0 must be positive, got {omega0!r}")
    if not tau > 0:
        raise DomainError(f"tau must be positive, got {tau!r}")
    return FrequencyProtocol(
        omega_initial=omega0,
        segments=(Segment(omega1, tau), Segment(omega0, math.inf)),
        mass=mass,
        hbar=hbar,
    )


def single_jump(omega0: float, omega1: float, mass: float = 1.0,
                hbar: float = 1.0) -> FrequencyProtocol:
    """omega0 before t=0 and omega1 forever after."""
    return FrequencyProtocol(omega0, (Segment(omega1, math.inf),), mass, hbar)


def from_segments(omega0: float, segments: Sequence[tuple[float, float]],
                  mass: float = 1.0, hbar: float = 1.0) -> FrequencyProtocol:
    return FrequencyProtocol(omega0, tuple(Segment(*s) for s in segments), mass, hbar)


def omega_at(p: FrequencyProtocol, t: float) -> float:
    return p.omega_at(t)


def revival_times(p: FrequencyProtocol, count: int) -> list[float]:
    """Inter-jump durations ``l*pi/omega1`` (l = 1..count) after which the
    post-jump oscillator is indistinguishable from the unquenched one."""
    _, omega1, _ = p.two_jump_params()
    if count < 1:
        raise DomainError(f"count must be a positive integer, got {count!r}")
    if omega1 == 0:
        return []
    return [l * math.pi / omega1 for l in range(1, count + 1)]
