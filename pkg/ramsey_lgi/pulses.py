#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Pulse schedules and their toggling-frame displacement integrals.

A schedule is a list of piecewise-constant segments. Inside a segment the
qubit branches e and g couple to the oscillator with weights f_e, f_g and see
a classical detuning delta. Qubit pulses are instantaneous, so only the
segments are integrated. All integrals are evaluated in closed form segment by
segment (pairwise for the ordered double integral), no quadrature.
"""

import cmath
import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from ramsey_lgi.errors import ArgumentError

TWO_LEVEL_PATTERNS = {(1, 0), (0, 1)}
TOGGLE_VALUES = {-1, 0, 1}
DURATION_TOLERANCE = 1e-9


@dataclass(frozen=True)
class SystemParams:
    """Oscillator frequency ``omega`` and qubit-oscillator coupling ``lam``."""
    omega: float
    lam: float

    def __post_init__(self):
        if not math.isfinite(self.omega) or self.omega <= 0:
            raise ArgumentError(f"omega must be > 0, got {self.omega!r}")
        if not math.isfinite(self.lam):
            raise ArgumentError(f"lambda must be finite, got {self.lam!r}")

    def to_dict(self) -> Dict[str, float]:
        return {"omega": self.omega, "lambda": self.lam}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SystemParams":
        return cls(float(data["omega"]), float(data.get("lambda", data.get("lam", 0.0))))


@dataclass(frozen=True)
class Segment:
    """One constant piece of the toggling functions."""
    dt: float
    fe: int
    fg: int
    delta: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.dt) or self.dt <= 0:
            raise ArgumentError(f"segment duration must be > 0, got {self.dt!r}")
        if self.fe not in TOGGLE_VALUES or self.fg not in TOGGLE_VALUES:
            raise ArgumentError(f"toggling values must be in {{-1, 0, 1}}, got ({self.fe}, {self.fg})")
        if not math.isfinite(self.delta):
            raise ArgumentError("segment detuning must be finite")


@dataclass(frozen=True)
class PulseSchedule:
    """
    Ordered segments of one Ramsey window.

    Two-level schedules only admit (f_e, f_g) in {(1, 0), (0, 1)}; the
    three-level variant additionally lets either branch sit at -1.
    """
    segments: Tuple[Segment, ...]
    three_level: bool = False

    def __post_init__(self):
        segments = tuple(self.segments)
        if not segments:
            raise ArgumentError("pulse schedule has no segments")
        object.__setattr__(self, "segments", segments)
        if not self.three_level:
            for seg in segments:
                if (seg.fe, seg.fg) not in TWO_LEVEL_PATTERNS:
                    raise ArgumentError(
                        f"two-level schedule segment has (f_e, f_g) = ({seg.fe}, {seg.fg})"
                    )

    @property
    def duration(self) -> float:
        return math.fsum(seg.dt for seg in self.segments)

    @property
    def boundaries(self) -> np.ndarray:
        return np.concatenate(([0.0], np.cumsum([seg.dt for seg in self.segments])))

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "segments": [
                {"dt": s.dt, "fe": s.fe, "fg": s.fg, "delta": s.delta} for s in self.segments
            ]
        }
        if self.three_level:
            data["three_level"] = True
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "PulseSchedule":
        segments = [
            Segment(float(s["dt"]), int(s["fe"]), int(s["fg"]), float(s.get("delta", 0.0)))
            for s in data.get("segments", [])
        ]
        return cls(tuple(segments), bool(data.get("three_level", False)))


@dataclass(frozen=True)
class DisplacementRecord:
    """Branch displacements and phases at the end of a window."""
    alpha_e: complex
    alpha_g: complex
    phi_e: float
    phi_g: float
    alpha_rel: complex
    phi_tot: float


def static_schedule(tau: float, delta: float = 0.0) -> PulseSchedule:
    """Single segment with the excited branch coupled for the whole window."""
    return PulseSchedule((Segment(tau, 1, 0, delta),))


def _branch_integrals(omega: float, starts: np.ndarray, ends: np.ndarray,
                      first: np.ndarray, second: np.ndarray) -> Tuple[complex, float]:
    """
    Closed-form pieces shared by all branch integrals.

    Returns S = sum_k second_k (e^{i w b_k} - e^{i w a_k}) and the ordered
    double integral  int_{s2<s1} first(s1) second(s2) sin(w (s1 - s2)).
    """
    durations = ends - starts
    edges = np.exp(1j * omega * ends) - np.exp(1j * omega * starts)
    weighted = second * edges
    before = np.concatenate(([0.0 + 0.0j], np.cumsum(weighted)[:-1]))
    same = first * second * (durations - np.sin(omega * durations) / omega) / omega
    cross = first * np.imag(edges * np.conj(before)) / omega ** 2
    return complex(np.sum(weighted)), math.fsum(same) + math.fsum(cross)


def _arrays(schedule: PulseSchedule):
    bounds = schedule.boundaries
    fe = np.array([s.fe for s in schedule.segments], dtype=float)
    fg = np.array([s.fg for s in schedule.segments], dtype=float)
    delta = np.array([s.delta for s in schedule.segments], dtype=float)
    dts = np.array([s.dt for s in schedule.segments], dtype=float)
    return bounds[:-1], bounds[1:], fe, fg, delta, dts


def integrate_schedule(params: SystemParams, schedule: PulseSchedule) -> DisplacementRecord:
    """
    Evaluate alpha_{e,g}(T) and phi_{e,g}(T) for a schedule of total length T.

    alpha_x(T) = -i lam int_0^T f_x(s) e^{-i w (T - s)} ds
    phi_x(T)   = lam^2 int_{s2<s1} f_x f_x sin(w (s1 - s2)) - int_0^T f_x delta
    """
    if not schedule.segments:
        raise ArgumentError("cannot integrate an empty schedule")
    omega, lam = params.omega, params.lam
    starts, ends, fe, fg, delta, dts = _arrays(schedule)
    total = float(ends[-1])
    rotation = cmath.exp(-1j * omega * total)

    sum_e, double_e = _branch_integrals(omega, starts, ends, fe, fe)
    sum_g, double_g = _branch_integrals(omega, starts, ends, fg, fg)

    alpha_e = -(lam / omega) * rotation * sum_e
    alpha_g = -(lam / omega) * rotation * sum_g
    phi_e = lam ** 2 * double_e - math.fsum(fe * delta * dts)
    phi_g = lam ** 2 * double_g - math.fsum(fg * delta * dts)

    alpha_rel = alpha_e - alpha_g
    phi_tot = phi_e - phi_g - (alpha_g * alpha_e.conjugate()).imag
    return DisplacementRecord(alpha_e, alpha_g, phi_e, phi_g, alpha_rel, phi_tot)


def combined_phase(params: SystemParams, schedule: PulseSchedule) -> float:
    """
    Total phase written directly with f_- = f_e - f_g and f_+ = f_e + f_g:

        lam^2 int_{t2<t1} f_-(t1) f_+(t2) sin(w (t1 - t2)) - int f_- delta

    Equal to ``integrate_schedule(...).phi_tot``; kept separate so the two
    derivations can be compared.
    """
    starts, ends, fe, fg, delta, dts = _arrays(schedule)
    f_minus = fe - fg
    f_plus = fe + fg
    _, double = _branch_integrals(params.omega, starts, ends, f_minus, f_plus)
    return params.lam ** 2 * double - math.fsum(f_minus * delta * dts)


def resonant_train(params: SystemParams, n_pulses: int) -> PulseSchedule:
    """
    ``n_pulses`` pi flips spaced by pi/omega, giving n_pulses + 1 windows.

    Every window adds 2 lam / omega to |alpha_rel|, so the relative
    displacement at the end is (-1)^(n_pulses + 1) 2 lam (n_pulses + 1) / omega.
    """
    if n_pulses < 0:
        raise ArgumentError(f"pulse count must be >= 0, got {n_pulses}")
    tau_p = math.pi / params.omega
    segments = [
        Segment(tau_p, 1, 0) if k % 2 == 0 else Segment(tau_p, 0, 1)
        for k in range(n_pulses + 1)
    ]
    return PulseSchedule(tuple(segments))


def resonant_train_amplitude(params: SystemParams, n_pulses: int) -> float:
    """Closed-form alpha_rel of ``resonant_train``."""
    windows = n_pulses + 1
    return (-1) ** windows * 2.0 * params.lam * windows / params.omega


def asymmetric_schedule(params: SystemParams, n_pulses: int,
                        duration: Optional[float] = None) -> PulseSchedule:
    """
    Three-level amplification: f_g = -1 throughout, f_e toggles 1 -> 0 -> 1 ...

    The ``n_pulses`` flips of the excited branch are equally spaced; without
    an explicit ``duration`` they sit at the resonant period pi/omega. The
    duration has to be a whole number of oscillator periods so that the
    ground branch returns to alpha_g = 0.
    """
    if n_pulses < 0:
        raise ArgumentError(f"pulse count must be >= 0, got {n_pulses}")
    period = 2.0 * math.pi / params.omega
    if duration is None:
        duration = (n_pulses + 1) * math.pi / params.omega
    periods = duration / period
    if duration <= 0 or abs(periods - round(periods)) > DURATION_TOLERANCE * max(1.0, periods):
        raise ArgumentError(
            f"asymmetric schedule duration {duration!r} is not a multiple of 2*pi/omega"
        )
    spacing = duration / (n_pulses + 1)
    segments = [Segment(spacing, 1 if k % 2 == 0 else 0, -1) for k in range(n_pulses + 1)]
    return PulseSchedule(tuple(segments), three_level=True)


def split_segment(schedule: PulseSchedule, index: int, fraction: float = 0.5) -> PulseSchedule:
    """Same schedule with one segment cut in two at ``fraction`` of its length."""
    seg = schedule.segments[index]
    head = Segment(seg.dt * fraction, seg.fe, seg.fg, seg.delta)
    tail = Segment(seg.dt - head.dt, seg.fe, seg.fg, seg.delta)
    segments: List[Segment] = list(schedule.segments)
    segments[index:index + 1] = [head, tail]
    return PulseSchedule(tuple(segments), schedule.three_level)
