#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Closed-form open-system results for a damped oscillator in a thermal bath:
correlation decay over the waiting time, Wigner functions of decohered cats
and the qubit coherence decay during a measurement window.
"""

import cmath
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Optional, Tuple

import numpy as np
from scipy.integrate import trapezoid

from ramsey_lgi.errors import ArgumentError
from ramsey_lgi.output import GridSpec
from ramsey_lgi.phase_space import OscillatorState, Thermal
from ramsey_lgi.pulses import PulseSchedule, SystemParams, static_schedule
from ramsey_lgi.ramsey import MeasurementSpec, two_time_closed_form

logger = logging.getLogger(__name__)

P_PLUS_TOLERANCE = 1e-6


@dataclass(frozen=True)
class BathParams:
    """Damping rate ``gamma``, bath occupation ``n_eq`` and qubit dephasing time ``t2``."""
    gamma: float
    n_eq: float
    t2: float = math.inf

    def __post_init__(self):
        if not math.isfinite(self.gamma) or self.gamma < 0:
            raise ArgumentError(f"damping rate must be >= 0, got {self.gamma!r}")
        if not math.isfinite(self.n_eq) or self.n_eq < 0:
            raise ArgumentError(f"bath occupation must be >= 0, got {self.n_eq!r}")
        if not self.t2 > 0:
            raise ArgumentError(f"t2 must be positive or infinite, got {self.t2!r}")

    @property
    def gamma_th(self) -> float:
        return self.gamma * self.n_eq

    @property
    def dephasing_rate(self) -> float:
        return 0.0 if math.isinf(self.t2) else 1.0 / self.t2

    def to_dict(self) -> Dict[str, Any]:
        return {"gamma": self.gamma, "n_eq": self.n_eq,
                "t2": None if math.isinf(self.t2) else self.t2, "gamma_th": self.gamma_th}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "BathParams":
        t2 = data.get("t2")
        return cls(float(data.get("gamma", 0.0)), float(data.get("n_eq", 0.0)),
                   math.inf if t2 is None else float(t2))


@dataclass
class WignerGrid:
    """W(xi) sampled on Re xi (columns) by Im xi (rows)."""
    x: np.ndarray
    p: np.ndarray
    values: np.ndarray
    meta: Dict[str, Any] = field(default_factory=dict)

    def integral(self) -> float:
        return float(trapezoid(trapezoid(self.values, self.x, axis=1), self.p))

    def header(self) -> Dict[str, Any]:
        return {
            "x_range": [float(self.x[0]), float(self.x[-1])],
            "p_range": [float(self.p[0]), float(self.p[-1])],
            "resolution": [int(self.x.size), int(self.p.size)],
            "integral": self.integral(),
            **self.meta,
        }


def _decay(dt: float, bath: BathParams) -> float:
    if not math.isfinite(dt) or dt < 0:
        raise ArgumentError(f"waiting time must be >= 0, got {dt!r}")
    return math.exp(-bath.gamma * dt)


def decayed_two_time(alpha2: complex, dt: float, bath: BathParams,
                     coherent_result_fn: Callable[[complex], float]) -> float:
    """
    Two-time correlator after a damped waiting time ``dt`` between the windows.

    ``coherent_result_fn(a)`` is the undamped correlator with second kick
    ``a``; it is evaluated at alpha2 e^{-gamma dt / 2} and multiplied by the
    thermal blurring factor.
    """
    eta = _decay(dt, bath)
    alpha2 = complex(alpha2)
    blur = math.exp(-(bath.n_eq + 0.5) * abs(alpha2) ** 2 * (1.0 - eta))
    return blur * coherent_result_fn(alpha2 * math.sqrt(eta))


def decayed_closed_form(alpha1: complex, alpha2: complex, phibar1: float, phibar2: float,
                        state: OscillatorState, dt: float, bath: BathParams) -> float:
    return decayed_two_time(
        alpha2, dt, bath,
        lambda a: two_time_closed_form(alpha1, a, phibar1, phibar2, state),
    )


def spreading(dt: float, bath: BathParams) -> float:
    """nu = 1 + 2 N (1 - e^{-gamma dt})."""
    return 1.0 + 2.0 * bath.n_eq * (1.0 - _decay(dt, bath))


def fringe_contrast(alpha1: complex, dt: float, bath: BathParams) -> float:
    """Suppression of the cat interference term, e^{-(|a|^2/2)(1 - eta/nu)}."""
    eta = _decay(dt, bath)
    nu = spreading(dt, bath)
    return math.exp(-0.5 * abs(complex(alpha1)) ** 2 * (1.0 - eta / nu))


def cat_p_plus(alpha1: complex, phibar1: float) -> float:
    return 0.5 * (1.0 + math.cos(phibar1) * math.exp(-0.5 * abs(complex(alpha1)) ** 2))


def default_wigner_grids(alpha1: complex, resolution: int = 201) -> Tuple[GridSpec, GridSpec]:
    """Square window covering +-(|alpha1| + 5) in both quadratures."""
    half = abs(complex(alpha1)) + 5.0
    return GridSpec(-half, half, resolution), GridSpec(-half, half, resolution)


def cat_wigner(alpha1: complex, phibar1: float, p_plus: Optional[float], dt: float,
               bath: BathParams, grid: Optional[Tuple[GridSpec, GridSpec]] = None) -> WignerGrid:
    """
    Wigner function of (|0> + e^{i phibar1}|alpha1>)/sqrt(4 p_+) after a damped
    waiting time ``dt``.

    W = 1/(2 pi nu p_+) [e^{-2|xi|^2/nu} + e^{-2|xi - a|^2/nu}
        + 2 c e^{-2|xi - a/2|^2/nu} cos(phibar1 + (2/nu) Im(xi^* a))]

    with a = alpha1 e^{-gamma dt/2} and c = fringe_contrast.
    """
    alpha1 = complex(alpha1)
    expected = cat_p_plus(alpha1, phibar1)
    if p_plus is None:
        p_plus = expected
    elif abs(p_plus - expected) > P_PLUS_TOLERANCE:
        raise ArgumentError(
            f"p_plus {p_plus!r} inconsistent with alpha1 and phibar1 (expected {expected:.9f})"
        )
    x_spec, p_spec = grid or default_wigner_grids(alpha1)
    x = x_spec.values()
    p = p_spec.values()
    xi = x[None, :] + 1j * p[:, None]
    eta = _decay(dt, bath)
    nu = spreading(dt, bath)
    a = alpha1 * math.sqrt(eta)
    contrast = fringe_contrast(alpha1, dt, bath)
    fringes = np.cos(phibar1 + (2.0 / nu) * np.imag(np.conj(xi) * a))
    values = (np.exp(-2.0 * np.abs(xi) ** 2 / nu)
              + np.exp(-2.0 * np.abs(xi - a) ** 2 / nu)
              + 2.0 * contrast * np.exp(-2.0 * np.abs(xi - 0.5 * a) ** 2 / nu) * fringes)
    values = values / (2.0 * math.pi * nu * p_plus)
    meta = {
        "engine": "analytic",
        "alpha1": [alpha1.real, alpha1.imag],
        "phibar1": phibar1,
        "p_plus": p_plus,
        "dt": dt,
        "nu": nu,
        "fringe_contrast": contrast,
        "gamma_th_dt": bath.gamma_th * dt,
        "bath": bath.to_dict(),
    }
    return WignerGrid(x, p, values, meta)


@dataclass(frozen=True)
class WindowState:
    """Mean amplitudes, variance exponent ``zeta`` and phase at the end of a window."""
    alpha_plus: complex
    alpha_minus: complex
    zeta: float
    phi: float


def _propagate(alpha0: complex, kappa: complex, forcing: complex, s: float) -> Tuple[complex, complex]:
    """
    Solve da/dt = -kappa a + forcing over a time ``s``.

    Returns a(s) and the integral of a over [0, s].
    """
    decay = cmath.exp(-kappa * s)
    lag = (1.0 - decay) / kappa if abs(kappa * s) > 1e-12 else s
    end = alpha0 * decay + forcing * lag
    integral = alpha0 * lag + forcing * (s - lag) / kappa if abs(kappa * s) > 1e-12 \
        else (alpha0 + 0.5 * forcing * s) * s
    return end, integral


def window_state(params: SystemParams, bath: BathParams, schedule: PulseSchedule) -> WindowState:
    """
    Exact propagation of the moment equations through the segments:

        d a_+/dt = -(i w + gamma/2) a_+ - i lam f_+ / 2
        d a_-/dt = -(i w + gamma/2) a_- - i lam f_-
        d zeta/dt = -2 lam f_- Im a_-
        d phi/dt  = -f_- delta - 2 lam f_- Re a_+
    """
    kappa = 1j * params.omega + 0.5 * bath.gamma
    lam = params.lam
    plus, minus, zeta, phi = 0j, 0j, 0.0, 0.0
    for seg in schedule.segments:
        f_plus = seg.fe + seg.fg
        f_minus = seg.fe - seg.fg
        plus, plus_area = _propagate(plus, kappa, -0.5j * lam * f_plus, seg.dt)
        minus, minus_area = _propagate(minus, kappa, -1j * lam * f_minus, seg.dt)
        zeta += -2.0 * lam * f_minus * minus_area.imag
        phi += -f_minus * seg.delta * seg.dt - 2.0 * lam * f_minus * plus_area.real
    return WindowState(plus, minus, zeta, phi)


def measurement_window_expectation(spec: MeasurementSpec, params: SystemParams,
                                   bath: BathParams, state: Thermal) -> float:
    """<Z> = cos(phi + phi(t)) e^{-t/T2} e^{-(N + 1/2) zeta(t)} for a thermal start at the bath occupation."""
    if not isinstance(state, Thermal) or abs(state.nbar - bath.n_eq) > 1e-12:
        raise ArgumentError("window decoherence needs a thermal state at the bath occupation")
    window = window_state(params, bath, spec.schedule)
    t = spec.tau
    return (math.cos(spec.phi + window.phi) * math.exp(-t * bath.dephasing_rate)
            * math.exp(-(bath.n_eq + 0.5) * window.zeta))


def zeta_approximation(params: SystemParams, bath: BathParams, t: float) -> float:
    """Static coupling, gamma << w: 2 lam^2/w^2 [(1 - cos(w t) e^{-gamma t/2}) + gamma t / 2]."""
    ratio = params.lam / params.omega
    return 2.0 * ratio ** 2 * ((1.0 - math.cos(params.omega * t) * math.exp(-0.5 * bath.gamma * t))
                               + 0.5 * bath.gamma * t)


@dataclass(frozen=True)
class DecoherenceRates:
    quoted: float
    fitted: float

    def to_dict(self) -> Dict[str, float]:
        return {"quoted": self.quoted, "fitted": self.fitted}


def effective_decoherence_rate(params: SystemParams, bath: BathParams,
                               points: int = 201) -> DecoherenceRates:
    """
    Quoted rate 1/T2 + (2N + 1) gamma next to the slope of
    t/T2 + (N + 1/2) zeta(t) fitted over w t in [20 pi, 40 pi] for static coupling.
    """
    quoted = bath.dephasing_rate + (2.0 * bath.n_eq + 1.0) * bath.gamma
    times = np.linspace(20.0 * math.pi, 40.0 * math.pi, points) / params.omega
    exponent = [
        t * bath.dephasing_rate
        + (bath.n_eq + 0.5) * window_state(params, bath, static_schedule(float(t))).zeta
        for t in times
    ]
    slope = float(np.polyfit(times, exponent, 1)[0])
    logger.debug("decoherence rates: quoted %.6g fitted %.6g", quoted, slope)
    return DecoherenceRates(quoted, slope)
