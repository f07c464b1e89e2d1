#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Run Configuration System
Engine selection, grids, bath and optimizer settings, and named presets for the figure data
"""

import dataclasses
import json
import math
import os
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

from ramsey_lgi.decoherence import BathParams
from ramsey_lgi.errors import ArgumentError, ConfigError
from ramsey_lgi.output import GridSpec
from ramsey_lgi.phase_space import amp_to_list, as_amp
from ramsey_lgi.pulses import SystemParams

THREADS_ENV = "RAMSEY_LGI_THREADS"


class Engine(Enum):
    """计算引擎枚举"""
    ANALYTIC = "analytic"
    ORACLE = "oracle"
    BOTH = "both"


@dataclass(frozen=True)
class OptimizerOpts:
    """相位优化参数"""
    grid_resolution: int = 24   # 每个相位轴的粗网格点数
    n_starts: int = 5           # 局部优化的起点数
    xatol: float = 1e-10
    fatol: float = 1e-12
    max_iter: int = 4000

    def to_dict(self) -> Dict[str, Any]:
        return dataclasses.asdict(self)


@dataclass
class RunConfig:
    """运行配置类"""
    # 引擎
    engine: Engine = Engine.ANALYTIC
    tol: float = 1e-6
    dim: Optional[int] = None  # Fock 截断维度, None 表示自适应

    # 系统参数
    params: SystemParams = field(default_factory=lambda: SystemParams(1.0, 0.5))
    bath: Optional[BathParams] = None
    nbar: float = 0.0

    # 测量参数
    alpha: float = 1.0
    alpha1: complex = 5 + 5j
    phases: Tuple[float, float, float] = (0.0, 0.0, 0.0)

    # 扫描网格
    alpha_grid: GridSpec = GridSpec(0.0, 3.0, 60)
    theta_grid: GridSpec = GridSpec(0.0, 2.0 * math.pi, 60)
    alpha2_re_grid: Optional[GridSpec] = None
    alpha2_im_grid: Optional[GridSpec] = None
    t_grid: GridSpec = GridSpec(0.0, 4.0 * math.pi, 41)  # 以 omega*t 计
    dt_list: Tuple[float, ...] = (0.0,)
    wigner_resolution: int = 201
    request: Optional[str] = None  # CorrelationRequest 的 JSON 文件

    # 蒙特卡罗
    samples: int = 1_000_000
    seed: int = 0
    n_seeds: int = 1

    # 输出
    threads: Optional[int] = None
    output_dir: str = "out"
    png: bool = False
    check_asymptote: bool = False
    optimizer: OptimizerOpts = field(default_factory=OptimizerOpts)

    def __post_init__(self):
        if not isinstance(self.engine, Engine):
            try:
                self.engine = Engine(str(self.engine))
            except ValueError as exc:
                raise ConfigError(f"unknown engine {self.engine!r}") from exc
        self.alpha1 = as_amp(self.alpha1)
        self.phases = tuple(float(p) for p in self.phases)
        if len(self.phases) != 3:
            raise ConfigError("phases needs exactly three values")
        self.dt_list = tuple(float(t) for t in self.dt_list)
        if self.nbar < 0:
            raise ConfigError(f"nbar must be >= 0, got {self.nbar!r}")
        if self.dim is not None and self.dim < 2:
            raise ConfigError(f"dim must be >= 2, got {self.dim!r}")

    @property
    def worker_count(self) -> int:
        return self.threads or default_threads()

    def to_dict(self) -> Dict[str, Any]:
        """有效配置, 写入每个 JSON 元数据文件"""
        data: Dict[str, Any] = {}
        for f in dataclasses.fields(self):
            value = getattr(self, f.name)
            if isinstance(value, Enum):
                value = value.value
            elif isinstance(value, GridSpec):
                value = str(value)
            elif isinstance(value, complex):
                value = amp_to_list(value)
            elif hasattr(value, "to_dict"):
                value = value.to_dict()
            elif isinstance(value, tuple):
                value = list(value)
            data[f.name] = value
        return data


_FIELDS = {f.name for f in dataclasses.fields(RunConfig)}
_GRID_FIELDS = {"alpha_grid", "theta_grid", "alpha2_re_grid", "alpha2_im_grid", "t_grid"}


def _coerce(name: str, value: Any) -> Any:
    if value is None:
        return None
    if name in _GRID_FIELDS:
        return value if isinstance(value, GridSpec) else GridSpec.parse(value)
    if name == "params" and isinstance(value, dict):
        return SystemParams.from_dict(value)
    if name == "bath" and isinstance(value, dict):
        return BathParams.from_dict(value)
    if name == "optimizer" and isinstance(value, dict):
        return OptimizerOpts(**value)
    if name == "engine":
        return value if isinstance(value, Engine) else Engine(str(value))
    return value


def create_run_config(preset: Optional[str] = None, **overrides) -> RunConfig:
    """创建运行配置的便捷函数"""
    if preset is not None and preset not in PRESET_CONFIGS:
        raise ConfigError(f"unknown preset {preset!r}; choose from {sorted(PRESET_CONFIGS)}")
    unknown = set(overrides) - _FIELDS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    base = PRESET_CONFIGS[preset] if preset else RunConfig()
    try:
        values = {k: _coerce(k, v) for k, v in overrides.items()}
        return dataclasses.replace(base, **values)
    except (ArgumentError, TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def load_run_config(path, **overrides) -> RunConfig:
    """读取 JSON 配置文件, 命令行参数优先"""
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a JSON object")
    preset = data.pop("preset", None)
    data.update({k: v for k, v in overrides.items() if v is not None})
    return create_run_config(preset, **data)


def default_threads() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw:
        try:
            return max(1, int(raw))
        except ValueError as exc:
            raise ConfigError(f"{THREADS_ENV} must be an integer, got {raw!r}") from exc
    return max(1, os.cpu_count() or 1)


# 预定义配置
_CAT_BATH = BathParams(gamma=0.001, n_eq=40.0)

PRESET_CONFIGS = {
    'cat_ideal': RunConfig(
        alpha1=5 + 5j,
        alpha2_re_grid=GridSpec(-10.0, 10.0, 201),
        alpha2_im_grid=GridSpec(-10.0, 10.0, 201),
        wigner_resolution=401,
    ),
    'cat_decay_short': RunConfig(
        alpha1=5 + 5j,
        bath=_CAT_BATH,
        dt_list=(1.0,),  # gamma_th * dt = 0.04
        wigner_resolution=401,
    ),
    'cat_decay_long': RunConfig(
        alpha1=5 + 5j,
        bath=_CAT_BATH,
        dt_list=(2.0,),  # gamma_th * dt = 0.08
        wigner_resolution=401,
    ),
    'lgi_map': RunConfig(
        alpha_grid=GridSpec(0.0, 3.0, 60),
        theta_grid=GridSpec(0.0, 2.0 * math.pi, 60),
    ),
    'small_alpha': RunConfig(
        alpha_grid=GridSpec(0.01, 0.1, 10),
        theta_grid=GridSpec.point(0.75 * math.pi),
        phases=(math.pi, math.pi, 0.5 * math.pi),
        check_asymptote=True,
    ),
    'classical': RunConfig(
        alpha=1.0,
        theta_grid=GridSpec(0.0, 2.0 * math.pi, 17),
        samples=1_000_000,
        n_seeds=20,
    ),
    'window_decoherence': RunConfig(
        params=SystemParams(1.0, 1.0),
        bath=BathParams(gamma=0.01, n_eq=1.0),
        nbar=1.0,
        t_grid=GridSpec(0.0, 4.0 * math.pi, 41),
    ),
    'verify': RunConfig(
        engine=Engine.BOTH,
        alpha_grid=GridSpec(0.5, 2.0, 4),
        theta_grid=GridSpec(0.25 * math.pi, math.pi, 4),
        bath=BathParams(gamma=0.01, n_eq=1.0),
        samples=1_000_000,
    ),
}
