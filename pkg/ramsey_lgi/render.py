#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Figure Rendering Module
Renders LGI heatmaps, Wigner functions and correlation curves to PNG with matplotlib
"""

import logging
from io import BytesIO
from pathlib import Path
from typing import Dict, Optional, Sequence, Union

import matplotlib
matplotlib.use('Agg')
import matplotlib.pyplot as plt
import numpy as np

from ramsey_lgi.decoherence import WignerGrid
from ramsey_lgi.lgi import LgiPoint
from ramsey_lgi.output import atomic_write_bytes

logger = logging.getLogger(__name__)

DPI = 150
PathLike = Union[str, Path]


def _finish(fig, path: Optional[PathLike]) -> bytes:
    """保存图像为PNG字节, 可选写入文件"""
    buffer = BytesIO()
    fig.savefig(buffer, format='png', dpi=DPI, bbox_inches='tight', facecolor='white')
    plt.close(fig)
    data = buffer.getvalue()
    if path is not None:
        atomic_write_bytes(path, data)
        logger.info("wrote %s", path)
    return data


def _extent(values: np.ndarray):
    # 单点网格时给出单位宽度
    if values.size == 1:
        return values[0] - 0.5, values[0] + 0.5
    step = 0.5 * (values[1] - values[0])
    return values[0] - step, values[-1] + step


def render_lgi_heatmap(points: Sequence[LgiPoint], path: Optional[PathLike] = None,
                       title: str = "") -> bytes:
    """
    绘制 W_max(alpha, theta) 热图

    Args:
        points: sweep 的结果, alpha 优先排序
        path: 输出PNG路径 (可选)
        title: 图标题
    """
    if not points:
        raise ValueError("no LGI points to render")
    alphas = np.unique([p.alpha for p in points])
    thetas = np.unique([p.theta for p in points])
    table = {(p.alpha, p.theta): p.w_max for p in points}
    image = np.array([[table.get((a, t), np.nan) for a in alphas] for t in thetas])

    fig, ax = plt.subplots(figsize=(7, 5))
    x0, x1 = _extent(alphas)
    y0, y1 = _extent(thetas)
    mesh = ax.imshow(image, origin='lower', aspect='auto', cmap='viridis',
                     extent=(x0, x1, y0, y1))
    fig.colorbar(mesh, ax=ax, label=r'$W_{max}$')
    if alphas.size > 1 and thetas.size > 1 and np.nanmin(image) < 1.0 < np.nanmax(image):
        # LGI 边界
        ax.contour(alphas, thetas, image, levels=[1.0], colors='white', linewidths=1.0)
    ax.set_xlabel(r'$\alpha$')
    ax.set_ylabel(r'$\theta$')
    if title:
        ax.set_title(title)
    return _finish(fig, path)


def render_plane(x: Sequence[float], p: Sequence[float], values: np.ndarray,
                 path: Optional[PathLike] = None, label: str = "", xlabel: str = "",
                 ylabel: str = "", title: str = "") -> bytes:
    """
    绘制复平面上的实值函数 (行为 p, 列为 x)

    颜色标尺关于零对称, 负值区域清晰可见
    """
    values = np.asarray(values, dtype=float)
    fig, ax = plt.subplots(figsize=(6, 5))
    bound = float(np.max(np.abs(values))) or 1.0
    contour = ax.contourf(x, p, values, 100, cmap='RdBu_r', vmin=-bound, vmax=bound)
    fig.colorbar(contour, ax=ax, label=label)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_aspect('equal')
    if title:
        ax.set_title(title)
    return _finish(fig, path)


def render_correlation_curve(x: Sequence[float], series: Dict[str, Sequence[float]],
                             xlabel: str, ylabel: str, path: Optional[PathLike] = None,
                             title: str = "") -> bytes:
    """绘制一条或多条关联曲线"""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for label, ys in series.items():
        ax.plot(x, ys, label=label, linewidth=1.5)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.grid(True, alpha=0.3)
    if len(series) > 1:
        ax.legend()
    if title:
        ax.set_title(title)
    return _finish(fig, path)


def render_wigner(grid: WignerGrid, path: Optional[PathLike] = None, title: str = "") -> bytes:
    """绘制 Wigner 函数等高线图"""
    return render_plane(grid.x, grid.p, grid.values, path, label=r'$W(\xi)$',
                        xlabel=r'Re $\xi$', ylabel=r'Im $\xi$', title=title)
