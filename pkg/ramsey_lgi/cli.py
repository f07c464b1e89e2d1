#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Command-line front end.

    python -m ramsey_lgi correlate --alpha 1 --theta-grid 0:6.283:64
    python -m ramsey_lgi lgi-sweep --preset lgi_map --png
    python -m ramsey_lgi wigner --preset cat_decay_short --engine both
    python -m ramsey_lgi correlate --request sequence.json --engine both
    python -m ramsey_lgi verify --preset verify

Every command writes ``<name>.csv`` plus a ``<name>.json`` sidecar holding
the effective configuration into ``--output-dir``. Files are staged and only
moved there once the command succeeds. Exit codes: 0 success,
1 configuration or argument error, 2 engines disagree, 3 Fock truncation too
small.
"""

import argparse
import cmath
import dataclasses
import json
import logging
import math
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ramsey_lgi import __version__
from ramsey_lgi.classical_model import (
    ClassicalFieldParams,
    classical_lgi_w,
    classical_two_time,
    monte_carlo_correlation,
    static_window_pair,
    variance_for_nbar,
)
from ramsey_lgi.config import (
    PRESET_CONFIGS,
    Engine,
    RunConfig,
    create_run_config,
    load_run_config,
)
from ramsey_lgi.decoherence import (
    BathParams,
    WignerGrid,
    cat_wigner,
    decayed_closed_form,
    default_wigner_grids,
    effective_decoherence_rate,
    measurement_window_expectation,
    window_state,
    zeta_approximation,
)
from ramsey_lgi.errors import ArgumentError, ConfigError, RamseyLgiError, VerificationError
from ramsey_lgi.fock_oracle import (
    adequate_dim,
    density_from_state,
    lindblad_propagate,
    oracle_correlate_kicks,
    oracle_correlation,
    wigner_displaced_parity,
    window_expectation_lindblad,
)
from ramsey_lgi.lgi import (
    LGI_COLUMNS,
    LgiPoint,
    identical_window_specs,
    large_alpha_law,
    large_alpha_point,
    lgi_w,
    maximize_w,
    small_alpha_law,
    sweep,
)
from ramsey_lgi.output import GridSpec, write_csv, write_matrix_csv, write_sidecar
from ramsey_lgi.pdf_report import build_report
from ramsey_lgi.phase_space import Cat, Thermal, as_amp
from ramsey_lgi.pulses import SystemParams
from ramsey_lgi.ramsey import (
    CorrelationRequest,
    MeasurementSpec,
    correlation,
    modulated_two_time,
    static_kick,
    two_time_closed_form,
)
from ramsey_lgi.render import render_correlation_curve, render_lgi_heatmap, render_plane, render_wigner
from ramsey_lgi.verification import CHECK_COLUMNS, run_suite

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"
LARGE_ALPHA = 5.0
SMALL_ALPHA = 0.1
LARGE_ALPHA_RTOL = 0.02
SMALL_ALPHA_COEFF_TOL = 0.1
Z_LIMIT = 4.0
STAGING_PREFIX = ".partial-"

Figure = Tuple[bytes, str]


@dataclass
class CommandOutput:
    """Files written by one command, the rendered figures and a one-line summary."""
    files: List[Path] = field(default_factory=list)
    figures: List[Figure] = field(default_factory=list)
    summary: str = ""
    failures: List[str] = field(default_factory=list)


def _effective_config(config: RunConfig) -> Dict[str, Any]:
    data = config.to_dict()
    staged = Path(config.output_dir)
    if staged.name.startswith(STAGING_PREFIX):
        data["output_dir"] = str(staged.parent)
    return data


def _metadata(config: RunConfig, command: str, columns: Sequence[str], **extra) -> Dict[str, Any]:
    data = {
        "command": command,
        "engine": config.engine.value,
        "seed": config.seed,
        "columns": list(columns),
        "config": _effective_config(config),
    }
    data.update(extra)
    return data


def _emit(out: CommandOutput, config: RunConfig, name: str, columns: Sequence[str],
          rows: Sequence[Sequence[Any]], **extra) -> Path:
    path = write_csv(Path(config.output_dir) / f"{name}.csv", columns, rows)
    write_sidecar(path, _metadata(config, name, columns, **extra))
    out.files.append(path)
    return path


def _figure(out: CommandOutput, config: RunConfig, name: str, caption: str,
            draw: Callable[[Path], bytes]) -> None:
    if not config.png:
        return
    path = Path(config.output_dir) / f"{name}.png"
    out.figures.append((draw(path), caption))
    out.files.append(path)


def _finish(out: CommandOutput, config: RunConfig, title: str) -> CommandOutput:
    if out.figures:
        out.files.append(build_report(out.figures, Path(config.output_dir) / "report.pdf", title))
    if out.failures:
        raise VerificationError("; ".join(out.failures))
    return out


def _compare(out: CommandOutput, config: RunConfig, label: str, diffs: Sequence[float]) -> float:
    worst = max(diffs) if len(diffs) else 0.0
    logger.info("%s: max |analytic - oracle| = %.3e (tol %.1e)", label, worst, config.tol)
    if worst > config.tol:
        out.failures.append(f"{label}: max |diff| {worst:.3e} exceeds tol {config.tol:.1e}")
    return worst


def _pool_map(config: RunConfig, fn, items):
    with ThreadPoolExecutor(max_workers=config.worker_count) as pool:
        return list(pool.map(fn, items))


def _bath_reach(bath: Optional[BathParams]) -> float:
    if bath is None or bath.n_eq == 0:
        return 0.0
    return 4.0 * math.sqrt(2.0 * bath.n_eq + 1.0)


# correlate

def _two_time_engines(config: RunConfig):
    """Analytic and oracle two-time correlators for static kicks alpha1, alpha2."""
    state = Thermal(config.nbar)
    phibar1, phibar2 = config.phases[0], config.phases[1]
    bath = config.bath
    dt = config.dt_list[0] if bath is not None else 0.0

    def analytic(alpha1: complex, alpha2: complex) -> float:
        if bath is not None:
            return decayed_closed_form(alpha1, alpha2, phibar1, phibar2, state, dt, bath)
        return two_time_closed_form(alpha1, alpha2, phibar1, phibar2, state)

    def make_oracle(max_amp: float):
        dim = config.dim or adequate_dim(
            2.0 * max_amp + 4.0 * math.sqrt(2.0 * config.nbar + 1.0) + _bath_reach(bath)
        )
        logger.info("oracle Fock dimension %d", dim)
        rho = density_from_state(state, dim)
        params = SystemParams(config.params.omega, 0.0)

        def oracle(alpha1: complex, alpha2: complex) -> float:
            kicks = [static_kick(alpha1, phibar1), static_kick(alpha2, phibar2)]
            if bath is None:
                return oracle_correlate_kicks(kicks, rho)
            return oracle_correlate_kicks(kicks, rho, params, bath, [dt])

        return oracle

    return analytic, make_oracle


def load_request(path: str) -> CorrelationRequest:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        return CorrelationRequest.from_dict(data)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read request {path}: {exc}") from exc
    except (AttributeError, KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid request {path}: {exc}") from exc


def _correlate_request(config: RunConfig) -> CommandOutput:
    """One correlator for a measurement sequence loaded from JSON."""
    out = CommandOutput()
    request = load_request(config.request)
    value = correlation(request, config.params)
    columns = ["n", "analytic"]
    row: List[Any] = [len(request.specs), value]
    if len(request.specs) == 2 and not any(s.schedule.three_level for s in request.specs):
        columns.append("modulated")
        row.append(modulated_two_time(request.specs[0], request.specs[1], request.initial,
                                      config.params))
    if config.engine is not Engine.ANALYTIC:
        check = oracle_correlation(request, config.params, dim=config.dim)
        columns += ["oracle", "abs_diff"]
        row += [check, abs(value - check)]
        _compare(out, config, "correlate", [abs(value - check)])
    _emit(out, config, "correlate", columns, [row], request=request.to_dict())
    out.summary = f"correlate: {len(request.specs)} measurements, C = {value:.6g}"
    return _finish(out, config, "Correlator")


def cmd_correlate(config: RunConfig) -> CommandOutput:
    if config.request is not None:
        return _correlate_request(config)
    out = CommandOutput()
    analytic, make_oracle = _two_time_engines(config)
    use_oracle = config.engine is not Engine.ANALYTIC
    if config.alpha2_re_grid is not None and config.alpha2_im_grid is not None:
        xs = config.alpha2_re_grid.values()
        ps = config.alpha2_im_grid.values()
        alpha1 = config.alpha1
        points = [complex(x, p) for p in ps for x in xs]
        values = [analytic(alpha1, a2) for a2 in points]
        columns = ["alpha2_re", "alpha2_im", "analytic"]
        rows = [[a2.real, a2.imag, v] for a2, v in zip(points, values)]
        if use_oracle:
            reach = max(abs(alpha1), float(np.max(np.abs(points))))
            oracle = make_oracle(reach)
            checks = _pool_map(config, lambda a2: oracle(alpha1, a2), points)
            diffs = [abs(a - o) for a, o in zip(values, checks)]
            columns += ["oracle", "abs_diff"]
            rows = [row + [o, d] for row, o, d in zip(rows, checks, diffs)]
            _compare(out, config, "correlate", diffs)
        _emit(out, config, "correlate", columns, rows, alpha1=alpha1)
        matrix = np.array(values).reshape(ps.size, xs.size)
        if xs.size > 1 and ps.size > 1:
            _figure(out, config, "correlate", "two-time correlator",
                    lambda path: render_plane(xs, ps, matrix, path, label=r'$C(t_1, t_2)$',
                                              xlabel=r'Re $\alpha_2$', ylabel=r'Im $\alpha_2$'))
        out.summary = f"correlate: {len(rows)} points over the alpha2 plane"
        return _finish(out, config, "Two-time correlator")

    thetas = config.theta_grid.values()
    alpha = float(config.alpha)
    pairs = [(complex(alpha), alpha * cmath.exp(1j * t)) for t in thetas]
    values = [analytic(a1, a2) for a1, a2 in pairs]
    columns = ["theta", "alpha", "nbar", "phibar1", "phibar2", "analytic"]
    rows = [[t, alpha, config.nbar, config.phases[0], config.phases[1], v]
            for t, v in zip(thetas, values)]
    series = {"analytic": values}
    if use_oracle:
        oracle = make_oracle(alpha)
        checks = _pool_map(config, lambda pair: oracle(*pair), pairs)
        diffs = [abs(a - o) for a, o in zip(values, checks)]
        columns += ["oracle", "abs_diff"]
        rows = [row + [o, d] for row, o, d in zip(rows, checks, diffs)]
        series["oracle"] = checks
        _compare(out, config, "correlate", diffs)
    _emit(out, config, "correlate", columns, rows)
    _figure(out, config, "correlate", "two-time correlator",
            lambda path: render_correlation_curve(thetas, series, r'$\theta$',
                                                  r'$C(t_1, t_2)$', path))
    out.summary = f"correlate: {len(rows)} values, range [{min(values):.6g}, {max(values):.6g}]"
    return _finish(out, config, "Two-time correlator")


# lgi-sweep

def _oracle_witness(point: LgiPoint, config: RunConfig) -> float:
    params, specs = identical_window_specs(point.alpha, point.theta, point.argmax_phases,
                                           config.params.omega)
    state = Thermal(point.nbar)

    def pair(i: int, j: int) -> float:
        return oracle_correlation(CorrelationRequest((specs[i], specs[j]), state), params,
                                  dim=config.dim)

    return pair(0, 1) + pair(1, 2) - pair(0, 2)


def _asymptote_rows(config: RunConfig, points: Sequence[LgiPoint]) -> List[List[Any]]:
    rows = []
    for alpha in sorted({p.alpha for p in points if p.alpha >= LARGE_ALPHA}):
        theta, _ = large_alpha_point(alpha)
        best = maximize_w(alpha, theta, config.nbar, config.optimizer)
        law = large_alpha_law(alpha, config.nbar)
        tolerance = LARGE_ALPHA_RTOL * law
        diff = abs(best.w_max - law)
        rows.append(["large_alpha", alpha, theta, best.w_max, law, diff, tolerance,
                     diff <= tolerance and best.w_max <= 1.5 + 1e-6])
    for p in points:
        if 0.0 < p.alpha <= SMALL_ALPHA:
            law = small_alpha_law(p.alpha, p.theta, p.nbar)
            tolerance = SMALL_ALPHA_COEFF_TOL * p.alpha ** 2
            diff = abs(p.w_max - law)
            rows.append(["small_alpha", p.alpha, p.theta, p.w_max, law, diff, tolerance,
                         diff <= tolerance])
    return rows


def cmd_lgi_sweep(config: RunConfig) -> CommandOutput:
    out = CommandOutput()
    alphas = config.alpha_grid.values()
    thetas = config.theta_grid.values()
    points = sweep(alphas, thetas, config.nbar, config.optimizer, config.worker_count)
    columns = list(LGI_COLUMNS)
    rows = [p.as_row() for p in points]
    if config.engine is not Engine.ANALYTIC:
        checks = _pool_map(config, lambda p: _oracle_witness(p, config), points)
        diffs = [abs(p.w_max - o) for p, o in zip(points, checks)]
        columns += ["oracle_w", "abs_diff"]
        rows = [row + [o, d] for row, o, d in zip(rows, checks, diffs)]
        _compare(out, config, "lgi-sweep", diffs)
    violations = sum(p.violates for p in points)
    _emit(out, config, "lgi_sweep", columns, rows,
          optimizer=config.optimizer.to_dict(), violating_cells=violations)
    if config.check_asymptote:
        check_columns = ["kind", "alpha", "theta", "w_max", "law", "abs_diff", "tolerance", "passed"]
        check_rows = _asymptote_rows(config, points)
        if not check_rows:
            logger.warning("asymptote check: no alpha >= %g or 0 < alpha <= %g in the grid",
                           LARGE_ALPHA, SMALL_ALPHA)
        _emit(out, config, "lgi_asymptote", check_columns, check_rows)
        for row in check_rows:
            if not row[-1]:
                out.failures.append(
                    f"{row[0]} law: w_max {row[3]:.6f} vs {row[4]:.6f} at alpha {row[1]:g}"
                )
    _figure(out, config, "lgi_sweep", "maximal LGI witness",
            lambda path: render_lgi_heatmap(points, path))
    best = max(points, key=lambda p: p.w_max)
    out.summary = (f"lgi-sweep: {len(points)} cells, {violations} violate W <= 1, "
                   f"max W = {best.w_max:.6f} at alpha={best.alpha:g}, theta={best.theta:g}")
    return _finish(out, config, "LGI witness")


# wigner

def _cat_state(config: RunConfig) -> Cat:
    return Cat.normalized([(1.0, 0j), (cmath.exp(1j * config.phases[0]), config.alpha1)])


def _oracle_wigner(config: RunConfig, bath: BathParams, dt: float, grid) -> WignerGrid:
    alpha1 = config.alpha1
    dim = config.dim or adequate_dim(abs(alpha1) + 4.0 + _bath_reach(bath))
    logger.info("oracle Fock dimension %d", dim)
    rho = density_from_state(_cat_state(config), dim)
    if dt > 0 and bath.gamma > 0:
        rho = lindblad_propagate(rho, dt, SystemParams(config.params.omega, 0.0), bath,
                                 rotating_frame=True)
    return wigner_displaced_parity(rho, grid)


def cmd_wigner(config: RunConfig) -> CommandOutput:
    out = CommandOutput()
    bath = config.bath or BathParams(0.0, 0.0)
    grid = default_wigner_grids(config.alpha1, config.wigner_resolution)
    lines = []
    for dt in config.dt_list:
        analytic = cat_wigner(config.alpha1, config.phases[0], None, dt, bath, grid)
        name = f"wigner_dt{dt:g}"
        header = analytic.header()
        integral = header["integral"]
        if abs(integral - 1.0) > 1e-3:
            logger.warning("%s integrates to %.6f; the grid clips the state", name, integral)
        if config.engine is not Engine.ANALYTIC:
            oracle = _oracle_wigner(config, bath, dt, grid)
            oracle_path = write_matrix_csv(Path(config.output_dir) / f"{name}_oracle.csv",
                                           oracle.values)
            write_sidecar(oracle_path, {"command": "wigner", "header": oracle.header(),
                                        "config": _effective_config(config)})
            out.files.append(oracle_path)
            header["max_abs_diff"] = _compare(
                out, config, name, [float(np.max(np.abs(oracle.values - analytic.values)))]
            )
        path = write_matrix_csv(Path(config.output_dir) / f"{name}.csv", analytic.values)
        write_sidecar(path, {"command": "wigner", "header": header, "config": _effective_config(config)})
        out.files.append(path)
        _figure(out, config, name, f"Wigner function, dt = {dt:g}",
                lambda target, g=analytic: render_wigner(g, target))
        lines.append(f"dt={dt:g}: integral {integral:.6f}, fringe contrast "
                     f"{header['fringe_contrast']:.4g}")
    out.summary = "wigner: " + "; ".join(lines)
    return _finish(out, config, "Decohered cat")


# classical

def cmd_classical(config: RunConfig) -> CommandOutput:
    out = CommandOutput()
    alpha = float(config.alpha)
    omega = config.params.omega
    variance = variance_for_nbar(config.nbar)
    field_params = ClassicalFieldParams(variance, omega, 0.5 * alpha * omega)
    phi1, phi2 = config.phases[0], config.phases[1]
    state = Thermal(config.nbar)
    thetas = config.theta_grid.values()
    columns = ["theta", "seed", "quantum_c", "classical_c", "mc_mean", "mc_stderr", "z",
               "quantum_w", "classical_w"]
    rows = []
    worst_z = 0.0
    quantum_curve, classical_curve = [], []
    for theta in thetas:
        theta = float(theta)
        specs = static_window_pair(phi1, phi2, theta, omega)
        quantum_c = two_time_closed_form(alpha, alpha * cmath.exp(1j * theta), phi1, phi2, state)
        classical_c = classical_two_time(phi1, phi2, specs[0].tau, theta, field_params)
        quantum_w = lgi_w(alpha, theta, config.nbar, config.phases)
        classical_w = classical_lgi_w(alpha, theta, variance, config.phases)
        quantum_curve.append(quantum_c)
        classical_curve.append(classical_c)
        if classical_w > 1.0 + 1e-9:
            out.failures.append(f"classical W = {classical_w:.12f} above 1 at theta {theta:g}")
        for k in range(config.n_seeds):
            seed = config.seed + k
            mean, stderr = monte_carlo_correlation(specs, field_params, config.samples, seed,
                                                   config.worker_count)
            diff = mean - classical_c
            if stderr > 0:
                z = diff / stderr
            else:
                z = 0.0 if abs(diff) < 1e-12 else math.copysign(math.inf, diff)
            worst_z = max(worst_z, abs(z))
            rows.append([theta, seed, quantum_c, classical_c, mean, stderr, z,
                         quantum_w, classical_w])
    if worst_z >= Z_LIMIT:
        out.failures.append(f"monte carlo |z| reached {worst_z:.2f}")
    _emit(out, config, "classical", columns, rows, model="classical",
          field=field_params.to_dict())
    _figure(out, config, "classical", "quantum vs classical correlator",
            lambda path: render_correlation_curve(
                thetas, {"quantum": quantum_curve, "classical": classical_curve},
                r'$\theta$', r'$C(t_1, t_2)$', path))
    out.summary = f"classical: {len(rows)} rows, max |z| = {worst_z:.3f}"
    return _finish(out, config, "Classical baseline")


# decoherence

def cmd_decoherence(config: RunConfig) -> CommandOutput:
    out = CommandOutput()
    bath = config.bath
    if bath is None:
        raise ConfigError("decoherence needs a bath (--gamma / --n-eq or a preset)")
    params = config.params
    state = Thermal(bath.n_eq)
    use_oracle = config.engine is not Engine.ANALYTIC
    dim = None
    if use_oracle:
        dim = config.dim or adequate_dim(4.0 * abs(params.lam) / params.omega
                                         + 4.0 * math.sqrt(2.0 * bath.n_eq + 1.0))
        logger.info("oracle Fock dimension %d", dim)
    phi = config.phases[0]
    rows, diffs = [], []

    def one(omega_t: float):
        t = omega_t / params.omega
        if t <= 0:
            return [omega_t, 0.0, 0.0, 0.0, math.cos(phi)], math.cos(phi) if use_oracle else None
        spec = MeasurementSpec.static(phi, t, t)
        window = window_state(params, bath, spec.schedule)
        value = measurement_window_expectation(spec, params, bath, state)
        row = [omega_t, window.zeta, zeta_approximation(params, bath, t), window.phi, value]
        oracle = window_expectation_lindblad(spec, params, bath, dim) if use_oracle else None
        return row, oracle

    results = _pool_map(config, one, [float(x) for x in config.t_grid.values()])
    columns = ["omega_t", "zeta", "zeta_approx", "phase", "expectation"]
    if use_oracle:
        columns += ["oracle", "abs_diff"]
    for row, oracle in results:
        if use_oracle:
            diff = abs(row[-1] - oracle)
            diffs.append(diff)
            row = row + [oracle, diff]
        rows.append(row)
    if use_oracle:
        _compare(out, config, "decoherence", diffs)
    rates = effective_decoherence_rate(params, bath)
    _emit(out, config, "decoherence", columns, rows, rates=rates.to_dict())
    _figure(out, config, "decoherence", "qubit coherence during the window",
            lambda path: render_correlation_curve(
                [r[0] for r in rows], {"<Z>": [r[4] for r in rows]},
                r'$\omega t$', r'$\langle Z \rangle$', path))
    out.summary = (f"decoherence: {len(rows)} times, rate quoted {rates.quoted:.6g}, "
                   f"fitted {rates.fitted:.6g}")
    return _finish(out, config, "Window decoherence")


# verify

def cmd_verify(config: RunConfig) -> CommandOutput:
    out = CommandOutput()
    results = run_suite(config)
    _emit(out, config, "verify", CHECK_COLUMNS, [r.as_row() for r in results])
    failed = [r.name for r in results if not r.passed]
    if failed:
        out.failures.append("failed checks: " + ", ".join(failed))
    out.summary = f"verify: {len(results) - len(failed)}/{len(results)} checks passed"
    return _finish(out, config, "Verification")


COMMANDS: Dict[str, Callable[[RunConfig], CommandOutput]] = {
    "correlate": cmd_correlate,
    "lgi-sweep": cmd_lgi_sweep,
    "wigner": cmd_wigner,
    "classical": cmd_classical,
    "decoherence": cmd_decoherence,
    "verify": cmd_verify,
}


class _Parser(argparse.ArgumentParser):
    """Usage errors become ConfigError so they exit with 1, not argparse's 2."""

    def error(self, message):
        raise ConfigError(message)


def _amplitude(text: str) -> complex:
    try:
        return as_amp(complex(text.replace("i", "j").replace(" ", "")))
    except (ValueError, ArgumentError) as exc:
        raise argparse.ArgumentTypeError(f"bad complex amplitude {text!r}") from exc


def _grid(text: str) -> GridSpec:
    try:
        return GridSpec.parse(text)
    except ConfigError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _common_arguments() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    source = common.add_argument_group("configuration")
    source.add_argument("--config", help="JSON config file; flags override its values")
    source.add_argument("--preset", choices=sorted(PRESET_CONFIGS), help="named preset")
    source.add_argument("--engine", choices=[e.value for e in Engine])
    source.add_argument("--tol", type=float, help="analytic/oracle tolerance")
    source.add_argument("--dim", type=int, help="Fock dimension for the oracle (default: adaptive)")
    source.add_argument("--request", help="correlate: JSON measurement sequence evaluated instead of the grids")
    source.add_argument("--threads", type=int, help="worker threads (default: RAMSEY_LGI_THREADS or cpu count)")
    source.add_argument("--seed", type=int)
    source.add_argument("--output-dir")
    source.add_argument("--png", action="store_true", default=None,
                        help="render PNG figures and a PDF report next to the data")

    physics = common.add_argument_group("physics")
    physics.add_argument("--omega", type=float, help="oscillator frequency")
    physics.add_argument("--lambda", dest="lam", type=float, help="coupling strength")
    physics.add_argument("--gamma", type=float, help="oscillator damping rate")
    physics.add_argument("--n-eq", type=float, help="bath occupation")
    physics.add_argument("--t2", type=float, help="qubit dephasing time")
    physics.add_argument("--nbar", type=float, help="initial thermal occupation")
    physics.add_argument("--alpha", type=float, help="kick magnitude |alpha|")
    physics.add_argument("--alpha1", type=_amplitude, help="first kick / cat amplitude, e.g. 5+5i")
    physics.add_argument("--theta", type=float, help="single rotation angle")
    physics.add_argument("--phases", type=float, nargs=3, metavar=("P1", "P2", "P3"))

    grids = common.add_argument_group("grids (start:stop:count)")
    grids.add_argument("--alpha-grid", type=_grid)
    grids.add_argument("--alpha-max", type=float, help="shorthand for --alpha-grid 0:MAX:count")
    grids.add_argument("--theta-grid", type=_grid)
    grids.add_argument("--alpha2-re-grid", type=_grid)
    grids.add_argument("--alpha2-im-grid", type=_grid)
    grids.add_argument("--t-grid", type=_grid, help="omega * t values")
    grids.add_argument("--dt", type=float, nargs="+", help="waiting times after the first kick")
    grids.add_argument("--resolution", type=int, help="Wigner grid points per axis")
    grids.add_argument("--samples", type=int, help="Monte Carlo samples per seed")
    grids.add_argument("--n-seeds", type=int)
    grids.add_argument("--check-asymptote", action="store_true", default=None)

    noise = common.add_mutually_exclusive_group()
    noise.add_argument("-v", "--verbose", action="store_true")
    noise.add_argument("-q", "--quiet", action="store_true")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="python -m ramsey_lgi",
        description="Sequential Ramsey measurements on a qubit-coupled oscillator.",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common = _common_arguments()
    helps = {
        "correlate": "two-time correlator over a theta grid or the alpha2 plane",
        "lgi-sweep": "maximal LGI witness over (alpha, theta)",
        "wigner": "Wigner function of the decohered conditional cat",
        "classical": "quantum vs classical correlators with Monte Carlo checks",
        "decoherence": "qubit coherence during a damped measurement window",
        "verify": "full analytic-vs-oracle suite",
    }
    for name, text in helps.items():
        sub.add_parser(name, parents=[common], help=text, description=text,
                       formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    return parser


_DIRECT = {
    "engine": "engine", "tol": "tol", "dim": "dim", "threads": "threads", "seed": "seed",
    "output_dir": "output_dir", "png": "png", "nbar": "nbar", "alpha": "alpha",
    "alpha1": "alpha1", "phases": "phases", "alpha_grid": "alpha_grid",
    "theta_grid": "theta_grid", "alpha2_re_grid": "alpha2_re_grid",
    "alpha2_im_grid": "alpha2_im_grid", "t_grid": "t_grid", "dt": "dt_list",
    "resolution": "wigner_resolution", "samples": "samples", "n_seeds": "n_seeds",
    "check_asymptote": "check_asymptote", "request": "request",
}


def config_from_args(args: argparse.Namespace) -> RunConfig:
    """Preset or config file first, then every flag that was given."""
    overrides = {
        key: getattr(args, flag) for flag, key in _DIRECT.items()
        if getattr(args, flag, None) is not None
    }
    if "phases" in overrides:
        overrides["phases"] = tuple(overrides["phases"])
    if "dt_list" in overrides:
        overrides["dt_list"] = tuple(overrides["dt_list"])
    if args.config and args.preset:
        raise ConfigError("give either --config or --preset; a config file may name its own preset")
    if args.config:
        config = load_run_config(args.config, **overrides)
    else:
        config = create_run_config(args.preset, **overrides)

    changes: Dict[str, Any] = {}
    try:
        if args.omega is not None or args.lam is not None:
            changes["params"] = SystemParams(
                config.params.omega if args.omega is None else args.omega,
                config.params.lam if args.lam is None else args.lam,
            )
        if any(v is not None for v in (args.gamma, args.n_eq, args.t2)):
            base = config.bath or BathParams(0.0, 0.0)
            changes["bath"] = BathParams(
                base.gamma if args.gamma is None else args.gamma,
                base.n_eq if args.n_eq is None else args.n_eq,
                base.t2 if args.t2 is None else args.t2,
            )
        count = config.alpha_grid.count
        if args.alpha_max is not None:
            changes["alpha_grid"] = GridSpec(0.0, args.alpha_max, max(count, 2))
        elif args.command == "lgi-sweep" and args.alpha is not None and args.alpha_grid is None:
            changes["alpha_grid"] = GridSpec.point(args.alpha)
        if args.theta is not None and args.theta_grid is None:
            changes["theta_grid"] = GridSpec.point(args.theta)
        if changes:
            config = dataclasses.replace(config, **changes)
    except ArgumentError as exc:
        raise ConfigError(str(exc)) from exc
    return config


def configure_logging(verbose: bool = False, quiet: bool = False) -> None:
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr)


def _publish(out: CommandOutput, staging: Path, target: Path) -> None:
    moved = {}
    for path in sorted(staging.iterdir()):
        final = target / path.name
        os.replace(path, final)
        moved[path] = final
    out.files = [moved.get(p, p) for p in out.files]


def run(command: str, config: RunConfig) -> CommandOutput:
    """Run one command; files appear in the output directory only if it succeeds."""
    logger.info("%s: engine=%s output=%s", command, config.engine.value, config.output_dir)
    target = Path(config.output_dir)
    target.mkdir(parents=True, exist_ok=True)
    with tempfile.TemporaryDirectory(prefix=STAGING_PREFIX, dir=target) as staging:
        out = COMMANDS[command](dataclasses.replace(config, output_dir=staging))
        _publish(out, Path(staging), target)
    logger.info("%s", out.summary)
    return out


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ConfigError.exit_code
    configure_logging(args.verbose, args.quiet)
    try:
        run(args.command, config_from_args(args))
    except RamseyLgiError as exc:
        logger.error("%s", exc)
        return exc.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
