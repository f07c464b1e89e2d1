#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Phase-space kernel: displacement algebra and displacement expectation values.

States are immutable dataclasses. Amplitudes are plain Python ``complex``
numbers in the convention D(alpha) = exp(alpha a^dag - alpha^* a).
"""

import cmath
import math
from dataclasses import dataclass
from typing import Any, Dict, Iterable, Sequence, Tuple, Union

import numpy as np

from ramsey_lgi.errors import ArgumentError

ComplexAmp = complex

CAT_NORM_TOLERANCE = 1e-10


def as_amp(value: Any) -> complex:
    """Coerce ``value`` to a finite complex amplitude."""
    if isinstance(value, (list, tuple)) and len(value) == 2:
        value = complex(float(value[0]), float(value[1]))
    amp = complex(value)
    if not (math.isfinite(amp.real) and math.isfinite(amp.imag)):
        raise ArgumentError(f"amplitude must be finite, got {amp!r}")
    return amp


def amp_to_list(amp: complex) -> list:
    return [float(amp.real), float(amp.imag)]


@dataclass(frozen=True)
class Ground:
    """Oscillator vacuum |0>."""

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": "ground"}


@dataclass(frozen=True)
class Coherent:
    """Coherent state |amp>."""
    amp: complex

    def __post_init__(self):
        object.__setattr__(self, "amp", as_amp(self.amp))

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": "coherent", "amp": amp_to_list(self.amp)}


@dataclass(frozen=True)
class Thermal:
    """Thermal state with mean occupation ``nbar``."""
    nbar: float

    def __post_init__(self):
        nbar = float(self.nbar)
        if not math.isfinite(nbar) or nbar < 0:
            raise ArgumentError(f"thermal occupation must be >= 0, got {self.nbar!r}")
        object.__setattr__(self, "nbar", nbar)

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": "thermal", "nbar": self.nbar}


@dataclass(frozen=True)
class Cat:
    """
    Weighted superposition of coherent states, sum_j w_j |beta_j>.

    Components are kept as given (no merging of coincident amplitudes); the
    constructor only checks normalization. Use ``Cat.normalized`` to build a
    cat from unnormalized weights.
    """
    components: Tuple[Tuple[complex, complex], ...]

    def __post_init__(self):
        if not self.components:
            raise ArgumentError("cat state needs at least one component")
        comps = tuple((complex(w), as_amp(b)) for w, b in self.components)
        object.__setattr__(self, "components", comps)
        norm = superposition_norm(self.weights, self.amps)
        if abs(norm - 1.0) > CAT_NORM_TOLERANCE:
            raise ArgumentError(f"cat state is not normalized (norm {norm:.3e})")

    @classmethod
    def normalized(cls, components: Iterable[Tuple[complex, complex]]) -> "Cat":
        comps = [(complex(w), as_amp(b)) for w, b in components]
        if not comps:
            raise ArgumentError("cat state needs at least one component")
        weights = np.array([w for w, _ in comps], dtype=complex)
        amps = np.array([b for _, b in comps], dtype=complex)
        norm = superposition_norm(weights, amps)
        if norm < 1e-300:
            raise ArgumentError("cat components cancel to the zero vector")
        scale = 1.0 / math.sqrt(norm)
        return cls(tuple((w * scale, b) for w, b in comps))

    @property
    def weights(self) -> np.ndarray:
        return np.array([w for w, _ in self.components], dtype=complex)

    @property
    def amps(self) -> np.ndarray:
        return np.array([b for _, b in self.components], dtype=complex)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": "cat",
            "components": [
                {"weight": amp_to_list(w), "amp": amp_to_list(b)} for w, b in self.components
            ],
        }


OscillatorState = Union[Ground, Coherent, Thermal, Cat]


def state_from_dict(data: Dict[str, Any]) -> OscillatorState:
    """Inverse of ``<state>.to_dict()``."""
    kind = data.get("kind")
    if kind == "ground":
        return Ground()
    if kind == "coherent":
        return Coherent(as_amp(data["amp"]))
    if kind == "thermal":
        return Thermal(float(data["nbar"]))
    if kind == "cat":
        return Cat.normalized(
            (as_amp(c["weight"]), as_amp(c["amp"])) for c in data["components"]
        )
    raise ArgumentError(f"unknown oscillator state kind {kind!r}")


def is_hermitian_family(state: OscillatorState) -> bool:
    """True for states with a real characteristic function, chi(-a) = chi(a)^* = chi(a)."""
    return isinstance(state, (Ground, Thermal))


@dataclass(frozen=True)
class DisplacementProduct:
    """D(a_k)...D(a_1) = exp(i accumulated_phase) D(total_amp)."""
    total_amp: complex
    accumulated_phase: float


def compose_displacements(amps: Sequence[complex]) -> DisplacementProduct:
    """
    Reduce the ordered product D(a_k)...D(a_2)D(a_1) to a single displacement.

    ``amps[0]`` acts first. Each new factor multiplies from the left and adds
    Im{a_new * total^*} to the phase, using D(b)D(a) = e^{i Im(b a^*)} D(a+b).
    """
    if len(amps) == 0:
        raise ArgumentError("compose_displacements needs at least one amplitude")
    total = as_amp(amps[0])
    phase = 0.0
    for raw in amps[1:]:
        amp = as_amp(raw)
        phase += (amp * total.conjugate()).imag
        total += amp
    return DisplacementProduct(total, phase)


def coherent_overlap(a, b):
    """<a|b> = exp(-(|a|^2 + |b|^2)/2 + a^* b); accepts scalars or arrays."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    value = np.exp(-0.5 * (np.abs(a) ** 2 + np.abs(b) ** 2) + np.conj(a) * b)
    if value.ndim == 0:
        return complex(value)
    return value


def superposition_norm(weights: np.ndarray, amps: np.ndarray) -> float:
    """Squared norm of sum_j w_j |a_j>."""
    gram = coherent_overlap(amps[:, None], amps[None, :])
    norm = np.einsum("k,kj,j->", np.conj(weights), gram, weights)
    return float(norm.real)


def characteristic(state: OscillatorState, betas) -> np.ndarray:
    """Vectorized <D(beta)> over an array of amplitudes."""
    betas = np.asarray(betas, dtype=complex)
    mod2 = np.abs(betas) ** 2
    if isinstance(state, Ground):
        return np.exp(-0.5 * mod2).astype(complex)
    if isinstance(state, Thermal):
        return np.exp(-0.5 * mod2 * (2.0 * state.nbar + 1.0)).astype(complex)
    if isinstance(state, Coherent):
        b = state.amp
        return np.exp(-0.5 * mod2 + betas * np.conj(b) - np.conj(betas) * b)
    if isinstance(state, Cat):
        w = state.weights
        b = state.amps
        flat = betas.reshape(-1)
        # <b_k| D(beta) |b_j> = e^{i Im(beta b_j^*)} <b_k | beta + b_j>
        beta = flat[:, None, None]
        bj = b[None, None, :]
        bk = b[None, :, None]
        kernel = np.exp(1j * np.imag(beta * np.conj(bj))) * coherent_overlap(bk, beta + bj)
        values = np.einsum("k,nkj,j->n", np.conj(w), kernel, w)
        return values.reshape(betas.shape)
    raise ArgumentError(f"unsupported oscillator state {state!r}")


def expect_displacement(state: OscillatorState, alpha: complex) -> complex:
    """<D(alpha)> for the given state."""
    return complex(characteristic(state, as_amp(alpha)))


def modular_variable_expectation(state: OscillatorState, phi: float, alpha: complex) -> float:
    """<Q(phi, alpha)> = Re{e^{i phi} <D(alpha)>}."""
    return float((cmath.exp(1j * phi) * expect_displacement(state, alpha)).real)
