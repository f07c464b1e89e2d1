#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Brute-force engine on a truncated Fock space.

Everything here is built from explicit matrices (ladder operators, matrix
exponentials, RK4 for master equations) and shares no algebra with the
analytic modules, so it serves as their reference. Qubit-oscillator joint
states are ordered (e, g) x Fock.
"""

import cmath
import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import block_diag, eigh, expm

from ramsey_lgi.decoherence import BathParams, WignerGrid, default_wigner_grids
from ramsey_lgi.errors import ArgumentError, CapacityError, TruncationError
from ramsey_lgi.output import GridSpec
from ramsey_lgi.phase_space import Cat, Coherent, Ground, OscillatorState, Thermal
from ramsey_lgi.pulses import PulseSchedule, SystemParams, integrate_schedule
from ramsey_lgi.ramsey import CorrelationRequest, MeasurementKick, MeasurementSpec, kick_for

logger = logging.getLogger(__name__)

MAX_ORACLE_ORDER = 4
TAIL_FRACTION = 0.1
TAIL_TOLERANCE = 1e-8
UNDEFINED_PROBABILITY = 1e-14
RK4_TOLERANCE = 1e-9
MAX_HALVINGS = 10


def annihilation(dim: int) -> np.ndarray:
    if dim < 2:
        raise ArgumentError(f"Fock dimension must be >= 2, got {dim}")
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), 1).astype(complex)


def number(dim: int) -> np.ndarray:
    return np.diag(np.arange(dim, dtype=float)).astype(complex)


def adequate_dim(alpha_max: float) -> int:
    """ceil(x^2 + 10 x + 20) for the largest reachable displacement x."""
    x = abs(float(alpha_max))
    return int(math.ceil(x * x + 10.0 * x + 20.0))


def _tail_start(dim: int) -> int:
    return dim - max(1, int(math.ceil(TAIL_FRACTION * dim)))


def tail_population(matrix: np.ndarray) -> float:
    diag = np.abs(np.real(np.diag(matrix)))
    return float(np.sum(diag[_tail_start(len(diag)):]))


@dataclass
class FockDensity:
    """Density matrix on the first ``dim`` Fock levels."""
    matrix: np.ndarray

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=complex)
        if self.matrix.ndim != 2 or self.matrix.shape[0] != self.matrix.shape[1]:
            raise ArgumentError(f"density matrix must be square, got shape {self.matrix.shape}")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def trace(self) -> float:
        return float(np.real(np.trace(self.matrix)))

    @property
    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))

    @property
    def mean_number(self) -> float:
        return float(np.real(np.sum(np.arange(self.dim) * np.diag(self.matrix))))

    def expect(self, operator: np.ndarray) -> complex:
        return complex(np.trace(operator @ self.matrix))

    def tail_population(self) -> float:
        return tail_population(self.matrix)

    def min_eigenvalue(self) -> float:
        return float(np.min(np.linalg.eigvalsh(0.5 * (self.matrix + self.matrix.conj().T))))

    def validate(self, tail_tol: float = TAIL_TOLERANCE) -> "FockDensity":
        herm = float(np.max(np.abs(self.matrix - self.matrix.conj().T)))
        if herm > 1e-12:
            raise ArgumentError(f"density matrix is not Hermitian (deviation {herm:.3e})")
        if abs(self.trace - 1.0) > 1e-10:
            raise ArgumentError(f"density matrix trace is {self.trace!r}")
        if self.min_eigenvalue() < -1e-8:
            raise ArgumentError("density matrix has a negative eigenvalue")
        tail = self.tail_population()
        if tail > tail_tol:
            raise TruncationError(
                f"population {tail:.3e} in the top Fock levels exceeds {tail_tol:.1e}",
                required_dim=2 * self.dim,
            )
        return self


@dataclass
class FockOperator:
    matrix: np.ndarray

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def dagger(self) -> "FockOperator":
        return FockOperator(self.matrix.conj().T)

    def unitarity_error(self) -> float:
        """max |U^dag U - 1| on the non-tail block."""
        keep = _tail_start(self.dim)
        product = (self.matrix.conj().T @ self.matrix)[:keep, :keep]
        return float(np.max(np.abs(product - np.eye(keep))))


def build_displacement(dim: int, alpha: complex) -> FockOperator:
    """D(alpha) = expm(alpha a^dag - alpha^* a) on ``dim`` levels."""
    alpha = complex(alpha)
    required = adequate_dim(abs(alpha))
    if dim < required:
        raise TruncationError(
            f"dimension {dim} too small for |alpha| = {abs(alpha):.4g}", required_dim=required
        )
    a = annihilation(dim)
    return FockOperator(expm(alpha * a.conj().T - alpha.conjugate() * a))


def free_rotation(dim: int, omega: float, t: float) -> FockOperator:
    """U_0(t) = exp(-i w t a^dag a), diagonal."""
    return FockOperator(np.diag(np.exp(-1j * omega * t * np.arange(dim))))


def density_from_state(state: OscillatorState, dim: int) -> FockDensity:
    """Truncated density matrix of an analytic state, renormalized to unit trace."""
    if isinstance(state, Thermal):
        n = np.arange(dim)
        if state.nbar == 0:
            probs = (n == 0).astype(float)
        else:
            ratio = state.nbar / (state.nbar + 1.0)
            probs = ratio ** n / (state.nbar + 1.0)
        missing = 1.0 - float(np.sum(probs))
        if missing > TAIL_TOLERANCE:
            raise TruncationError(
                f"thermal state with nbar={state.nbar:g} loses {missing:.3e} at dim {dim}",
                required_dim=2 * dim,
            )
        return FockDensity(np.diag(probs / np.sum(probs)))
    if isinstance(state, Ground):
        components = [(1.0 + 0j, 0j)]
    elif isinstance(state, Coherent):
        components = [(1.0 + 0j, state.amp)]
    elif isinstance(state, Cat):
        components = list(state.components)
    else:
        raise ArgumentError(f"unsupported oscillator state {state!r}")
    vector = np.zeros(dim, dtype=complex)
    for weight, amp in components:
        vector += weight * coherent_vector(amp, dim)
    norm = float(np.real(np.vdot(vector, vector)))
    vector = vector / math.sqrt(norm)
    return FockDensity(np.outer(vector, vector.conj()))


def coherent_vector(amp: complex, dim: int) -> np.ndarray:
    coeffs = np.empty(dim, dtype=complex)
    coeffs[0] = cmath.exp(-0.5 * abs(amp) ** 2)
    for n in range(1, dim):
        coeffs[n] = coeffs[n - 1] * amp / math.sqrt(n)
    return coeffs


def _branch_unitaries(spec: MeasurementSpec, params: SystemParams, dim: int):
    """Lab-frame U_x = e^{i phi_x} D(alpha_x) U_0(tau) for both branches."""
    record = integrate_schedule(params, spec.schedule)
    required = adequate_dim(abs(record.alpha_e) + abs(record.alpha_g))
    if dim < required:
        raise TruncationError(f"dimension {dim} too small for this window", required_dim=required)
    rotation = free_rotation(dim, params.omega, spec.tau).matrix
    u_e = cmath.exp(1j * record.phi_e) * build_displacement(dim, record.alpha_e).matrix @ rotation
    u_g = cmath.exp(1j * record.phi_g) * build_displacement(dim, record.alpha_g).matrix @ rotation
    return u_e, u_g


def kraus_operators(spec: MeasurementSpec, params: SystemParams,
                    dim: int) -> Tuple[FockOperator, FockOperator]:
    """E_+- = (U_g +- e^{i phi} U_e) / 2."""
    u_e, u_g = _branch_unitaries(spec, params, dim)
    bright = cmath.exp(1j * spec.phi)
    return FockOperator(0.5 * (u_g + bright * u_e)), FockOperator(0.5 * (u_g - bright * u_e))


def kraus_completeness_error(spec: MeasurementSpec, params: SystemParams, dim: int) -> float:
    plus, minus = kraus_operators(spec, params, dim)
    total = plus.dagger().matrix @ plus.matrix + minus.dagger().matrix @ minus.matrix
    keep = _tail_start(dim)
    return float(np.max(np.abs(total[:keep, :keep] - np.eye(keep))))


@dataclass
class KrausOutcome:
    p_plus: float
    p_minus: float
    rho_plus: Optional[FockDensity]
    rho_minus: Optional[FockDensity]


def _conditioned(op: FockOperator, rho: np.ndarray) -> Tuple[float, Optional[FockDensity]]:
    out = op.matrix @ rho @ op.matrix.conj().T
    p = float(np.real(np.trace(out)))
    if p < UNDEFINED_PROBABILITY:
        return p, None
    out = out / p
    return p, FockDensity(0.5 * (out + out.conj().T))


def kraus_measure(rho: FockDensity, spec: MeasurementSpec, params: SystemParams) -> KrausOutcome:
    rho.validate()
    plus, minus = kraus_operators(spec, params, rho.dim)
    p_plus, rho_plus = _conditioned(plus, rho.matrix)
    p_minus, rho_minus = _conditioned(minus, rho.matrix)
    return KrausOutcome(p_plus, p_minus, rho_plus, rho_minus)


# qubit pulses in the (e, g) basis
SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)


def half_pi_pulse(phi: float) -> np.ndarray:
    return np.array([[1.0, cmath.exp(1j * phi)], [-cmath.exp(-1j * phi), 1.0]]) / math.sqrt(2.0)


@dataclass
class JointState:
    """Qubit (e, g) x Fock density matrix."""
    matrix: np.ndarray
    dim: int

    def block(self, row: int, col: int) -> np.ndarray:
        d = self.dim
        return self.matrix[row * d:(row + 1) * d, col * d:(col + 1) * d]

    def probability(self, excited: bool) -> float:
        return float(np.real(np.trace(self.block(0, 0) if excited else self.block(1, 1))))

    def conditioned(self, excited: bool) -> Optional[FockDensity]:
        p = self.probability(excited)
        if p < UNDEFINED_PROBABILITY:
            return None
        block = self.block(0, 0) if excited else self.block(1, 1)
        return FockDensity(block / p)


def window_propagator(schedule: PulseSchedule, params: SystemParams, dim: int) -> np.ndarray:
    """
    Joint propagator of one window in the (e, g) label basis.

    Two-level schedules are run physically: H = w a^dag a + (lam X + delta)|e><e|
    with a sigma_x pulse wherever the toggling pattern changes and a final
    pulse restoring the labels. Three-level schedules evolve each branch with
    w a^dag a + f_x (lam X + delta).
    """
    record = integrate_schedule(params, schedule)
    required = adequate_dim(abs(record.alpha_e) + abs(record.alpha_g))
    if dim < required:
        raise TruncationError(f"dimension {dim} too small for this window", required_dim=required)
    a = annihilation(dim)
    x = a + a.conj().T
    free = params.omega * number(dim)
    eye = np.eye(dim, dtype=complex)
    if schedule.three_level:
        u_e, u_g = eye.copy(), eye.copy()
        for seg in schedule.segments:
            coupling = params.lam * x + seg.delta * eye
            u_e = expm(-1j * (free + seg.fe * coupling) * seg.dt) @ u_e
            u_g = expm(-1j * (free + seg.fg * coupling) * seg.dt) @ u_g
        return block_diag(u_e, u_g)

    flip = np.kron(SIGMA_X, eye)
    total = np.eye(2 * dim, dtype=complex)
    flipped = False
    for seg in schedule.segments:
        want = (seg.fe, seg.fg) == (0, 1)
        if want != flipped:
            total = flip @ total
            flipped = want
        coupled = expm(-1j * (free + params.lam * x + seg.delta * eye) * seg.dt)
        uncoupled = np.diag(np.exp(-1j * params.omega * seg.dt * np.arange(dim)))
        total = block_diag(coupled, uncoupled) @ total
    if flipped:
        total = flip @ total
    return total


def evolve_sequence(rho: FockDensity, spec: MeasurementSpec, params: SystemParams) -> JointState:
    """
    Full Ramsey measurement on |g><g| x rho: pi/2 pulse with phase phi, the
    window, a pi/2 pulse with phase 0. The excited population is p_+.
    """
    rho.validate()
    dim = rho.dim
    eye = np.eye(dim)
    window = window_propagator(spec.schedule, params, dim)
    unitary = np.kron(half_pi_pulse(0.0), eye) @ window @ np.kron(half_pi_pulse(spec.phi), eye)
    start = np.kron(np.diag([0.0, 1.0]).astype(complex), rho.matrix)
    return JointState(unitary @ start @ unitary.conj().T, dim)


def conditional_amplitudes(params: SystemParams, schedule: PulseSchedule,
                           dim: int) -> Tuple[complex, complex]:
    """<a> at the end of the window for the oscillator starting in vacuum, per branch."""
    window = window_propagator(schedule, params, dim)
    a = annihilation(dim)
    vacuum = np.zeros(dim, dtype=complex)
    vacuum[0] = 1.0
    amplitudes = []
    for label in (0, 1):
        qubit = np.zeros(2, dtype=complex)
        qubit[label] = 1.0
        final = window @ np.kron(qubit, vacuum)
        branch = final[label * dim:(label + 1) * dim]
        amplitudes.append(complex(np.vdot(branch, a @ branch)))
    return amplitudes[0], amplitudes[1]


def _rk4(rhs, y: np.ndarray, t0: float, h: float, steps: int) -> np.ndarray:
    t = t0
    for _ in range(steps):
        k1 = rhs(t, y)
        k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1)
        k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2)
        k4 = rhs(t + h, y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t += h
    return y


def _integrate(rhs, y0: np.ndarray, t0: float, duration: float, h0: float) -> np.ndarray:
    """RK4 with the step halved until two successive results agree in trace norm."""
    if duration <= 0:
        return y0.copy()
    steps = max(1, int(math.ceil(duration / h0)))
    current = _rk4(rhs, y0, t0, duration / steps, steps)
    for _ in range(MAX_HALVINGS):
        steps *= 2
        finer = _rk4(rhs, y0, t0, duration / steps, steps)
        change = float(np.linalg.norm(finer - current, ord="nuc"))
        if change < RK4_TOLERANCE:
            return finer
        logger.debug("rk4: %d steps changed the result by %.3e, halving", steps, change)
        current = finer
    logger.warning("rk4 did not converge to %.1e after %d halvings", RK4_TOLERANCE, MAX_HALVINGS)
    return current


def _dissipator(a: np.ndarray, bath: BathParams):
    ad = a.conj().T
    ada = ad @ a
    aad = a @ ad
    down = 0.5 * bath.gamma * (bath.n_eq + 1.0)
    up = 0.5 * bath.gamma * bath.n_eq

    def apply(rho: np.ndarray) -> np.ndarray:
        return (down * (2.0 * a @ rho @ ad - ada @ rho - rho @ ada)
                + up * (2.0 * ad @ rho @ a - aad @ rho - rho @ aad))

    return apply


def _first_step(params: SystemParams, bath: BathParams, dim: int) -> float:
    return 0.02 / max(params.omega, bath.gamma * (bath.n_eq + 1.0) * dim)


def _propagate_operator(op: np.ndarray, t: float, params: SystemParams,
                        bath: BathParams) -> np.ndarray:
    """Damping part of the master equation in the frame rotating with w a^dag a."""
    if bath.gamma == 0 or t <= 0:
        return op.copy()
    dissipator = _dissipator(annihilation(op.shape[0]), bath)
    return _integrate(lambda _t, y: dissipator(y), op, 0.0, t,
                      _first_step(params, bath, op.shape[0]))


def lindblad_propagate(rho: FockDensity, t: float, params: SystemParams,
                       bath: BathParams, rotating_frame: bool = False) -> FockDensity:
    """
    rho(t) under H = w a^dag a and the thermal damping L_m.

    L_m commutes with the free rotation, so the damping is integrated in the
    rotating frame and U_0(t) is applied exactly afterwards, unless
    ``rotating_frame`` asks for the interaction-picture result.
    """
    if not math.isfinite(t) or t < 0:
        raise ArgumentError(f"propagation time must be finite and >= 0, got {t!r}")
    out = _propagate_operator(rho.matrix, t, params, bath)
    if not rotating_frame:
        rotation = free_rotation(rho.dim, params.omega, t).matrix
        out = rotation @ out @ rotation.conj().T
    out = FockDensity(0.5 * (out + out.conj().T))
    tail = out.tail_population()
    if tail > TAIL_TOLERANCE:
        raise TruncationError(
            f"thermal spreading put {tail:.3e} in the top Fock levels", required_dim=2 * rho.dim
        )
    if out.min_eigenvalue() < -1e-7:
        logger.warning("lindblad propagation lost positivity (min eigenvalue %.3e)",
                       out.min_eigenvalue())
    return out


def window_expectation_lindblad(spec: MeasurementSpec, params: SystemParams, bath: BathParams,
                                dim: int, initial: Optional[OscillatorState] = None) -> float:
    """
    <Z> after one window with oscillator damping and qubit dephasing.

    Propagates rho_eg, starting from e^{i phi} rho_0 / 2, in the interaction
    picture of w a^dag a where the coupling reads lam f_x (a e^{-iwt} + a^dag e^{iwt}).
    """
    rho0 = density_from_state(initial if initial is not None else Thermal(bath.n_eq), dim)
    rho0.validate()
    a = annihilation(dim)
    ad = a.conj().T
    dissipator = _dissipator(a, bath)
    h0 = _first_step(params, bath, dim)
    coherence = 0.5 * cmath.exp(1j * spec.phi) * rho0.matrix
    t0 = 0.0
    for seg in spec.schedule.segments:
        fe, fg = seg.fe, seg.fg
        damping = 1j * (fe - fg) * seg.delta + bath.dephasing_rate

        def rhs(t, y, fe=fe, fg=fg, damping=damping):
            coupling = params.lam * (a * cmath.exp(-1j * params.omega * t)
                                     + ad * cmath.exp(1j * params.omega * t))
            return (-1j * (fe * coupling @ y - fg * y @ coupling)
                    - damping * y + dissipator(y))

        coherence = _integrate(rhs, coherence, t0, seg.dt, h0)
        t0 += seg.dt
    tail = tail_population(coherence)
    if tail > TAIL_TOLERANCE:
        raise TruncationError("window propagation reached the top Fock levels",
                              required_dim=2 * dim)
    return float(2.0 * np.real(np.trace(coherence)))


def _support_radius(rho: FockDensity) -> float:
    x = (-10.0 + math.sqrt(100.0 - 4.0 * (20.0 - rho.dim))) / 2.0
    return x - math.sqrt(max(rho.mean_number, 0.0))


def wigner_displaced_parity(rho: FockDensity,
                            grid: Optional[Tuple[GridSpec, GridSpec]] = None) -> WignerGrid:
    """
    W(xi) = (2/pi) Tr[rho D(xi) P D^dag(xi)] with P the photon-number parity.

    D(xi) for xi = r e^{i t} is U_t exp(-i r H) U_t^dag with H = i(a^dag - a)
    and U_t = diag(e^{i t n}); H is diagonalized once for the whole grid.
    """
    dim = rho.dim
    x_spec, p_spec = grid or default_wigner_grids(0j, 81)
    xs = x_spec.values()
    ps = p_spec.values()
    a = annihilation(dim)
    mu, vecs = eigh(1j * (a.conj().T - a))
    levels = np.arange(dim)
    offsets = levels[:, None] - levels[None, :]
    parity = (-1.0) ** levels
    values = np.empty((ps.size, xs.size))
    for i, p in enumerate(ps):
        for j, x in enumerate(xs):
            xi = complex(x, p)
            base = (vecs * np.exp(-1j * abs(xi) * mu)) @ vecs.conj().T
            disp = base * np.exp(1j * cmath.phase(xi) * offsets)
            diag = np.einsum("jn,jn->n", disp.conj(), rho.matrix @ disp)
            values[i, j] = 2.0 / math.pi * float(np.real(np.sum(parity * diag)))
    radius = _support_radius(rho)
    reach = float(np.max(np.abs(xs[None, :] + 1j * ps[:, None])))
    warning = reach > radius
    if warning:
        logger.warning("wigner grid reaches |xi| = %.3g beyond the supported %.3g at dim %d",
                       reach, radius, dim)
    meta = {"engine": "oracle", "dim": dim, "truncation_warning": warning,
            "supported_radius": radius}
    return WignerGrid(xs, ps, values, meta)


def _state_extent(state: OscillatorState) -> float:
    if isinstance(state, Thermal):
        return 4.0 * math.sqrt(2.0 * state.nbar + 1.0)
    if isinstance(state, Coherent):
        return abs(state.amp) + 4.0
    if isinstance(state, Cat):
        return float(np.max(np.abs(state.amps))) + 4.0
    return 4.0


def request_dimension(request: CorrelationRequest, params: SystemParams,
                      bath: Optional[BathParams] = None) -> int:
    kicks = [kick_for(spec, params) for spec in request.specs]
    reach = sum(abs(k.alpha_e) + abs(k.alpha_g) for k in kicks) + _state_extent(request.initial)
    if bath is not None and bath.n_eq > 0:
        reach += 4.0 * math.sqrt(2.0 * bath.n_eq + 1.0)
    return adequate_dim(reach)


def _apply_measurement(op: np.ndarray, u_e: np.ndarray, u_g: np.ndarray,
                       phase: float) -> np.ndarray:
    half = cmath.exp(1j * phase) * (u_e @ op @ u_g.conj().T)
    return 0.5 * (half + half.conj().T)


def _check_tail(op: np.ndarray) -> None:
    tail = tail_population(op)
    if tail > TAIL_TOLERANCE:
        raise TruncationError(f"intermediate state leaks {tail:.3e} into the top Fock levels",
                              required_dim=2 * op.shape[0])


def oracle_correlation(request: CorrelationRequest, params: SystemParams,
                       bath: Optional[BathParams] = None, dim: Optional[int] = None) -> float:
    """
    Tr{Q_n ... Q_1 rho_0} with explicit lab-frame matrices.

    Free evolution U_0 fills the time before each window; with a bath the
    gaps between consecutive windows are damped instead.
    """
    n = len(request.specs)
    if n > MAX_ORACLE_ORDER:
        raise CapacityError(f"oracle handles at most {MAX_ORACLE_ORDER} measurements, got {n}")
    dim = dim or request_dimension(request, params, bath)
    logger.debug("oracle correlation: n=%d dim=%d", n, dim)
    op = density_from_state(request.initial, dim).validate().matrix
    now = 0.0
    for k, spec in enumerate(request.specs):
        wait = spec.t_start - now
        if bath is not None and k > 0:
            op = _propagate_operator(op, wait, params, bath)
        rotation = free_rotation(dim, params.omega, wait).matrix
        op = rotation @ op @ rotation.conj().T
        u_e, u_g = _branch_unitaries(spec, params, dim)
        op = _apply_measurement(op, u_e, u_g, spec.phi)
        _check_tail(op)
        now = spec.t_end
    return float(np.real(np.trace(op)))


def oracle_correlate_kicks(kicks: Sequence[MeasurementKick], rho: FockDensity,
                           params: Optional[SystemParams] = None,
                           bath: Optional[BathParams] = None,
                           gaps: Optional[Sequence[float]] = None) -> float:
    """
    Same product in the interaction picture, one displacement pair per kick.

    ``gaps[k]`` is the damped waiting time between kick k and kick k + 1.
    """
    kicks = list(kicks)
    if len(kicks) > MAX_ORACLE_ORDER:
        raise CapacityError(f"oracle handles at most {MAX_ORACLE_ORDER} measurements")
    if bath is not None and (gaps is None or len(gaps) != len(kicks) - 1):
        raise ArgumentError("damped kicks need one gap per consecutive pair")
    params = params or SystemParams(1.0, 0.0)
    rho.validate()
    op = rho.matrix
    for k, kick in enumerate(kicks):
        if bath is not None and k > 0:
            op = _propagate_operator(op, float(gaps[k - 1]), params, bath)
        d_e = build_displacement(rho.dim, kick.alpha_e).matrix
        d_g = build_displacement(rho.dim, kick.alpha_g).matrix
        op = _apply_measurement(op, d_e, d_g, kick.phase)
        _check_tail(op)
    return float(np.real(np.trace(op)))
