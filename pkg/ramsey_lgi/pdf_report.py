#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
PDF Report Module
Bundles rendered figure PNGs into a single landscape PDF document
"""

import logging
from io import BytesIO
from pathlib import Path
from typing import List, Sequence, Tuple, Union

from PIL import Image
from reportlab.lib.units import mm
from reportlab.lib.utils import ImageReader
from reportlab.pdfgen import canvas

from ramsey_lgi.output import atomic_write_bytes

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]
Figure = Tuple[bytes, str]


class PdfReport:
    """PDF报告生成器"""

    def __init__(self, page_size: str = 'A4', orientation: str = 'landscape', margin: float = 20):
        """
        初始化PDF报告

        Args:
            page_size: 页面大小 ('A4', 'A3', 'Letter')
            orientation: 页面方向 ('portrait', 'landscape')
            margin: 页边距 (单位: mm)
        """
        self.page_size = page_size
        self.orientation = orientation
        self.margin = margin

        # 页面尺寸定义 (mm)
        self.page_sizes = {
            'A4': (210, 297),
            'A3': (297, 420),
            'Letter': (216, 279),
        }
        if page_size not in self.page_sizes:
            raise ValueError(f"unknown page size {page_size!r}")

    def get_page_dimensions(self) -> Tuple[float, float]:
        """获取页面尺寸"""
        width, height = self.page_sizes[self.page_size]
        if self.orientation == 'landscape':
            width, height = height, width
        return width, height

    def render(self, figures: Sequence[Figure], title: str = "") -> bytes:
        """每张图一页, 返回PDF字节"""
        page_width, page_height = self.get_page_dimensions()
        page_width_pt = page_width * mm
        page_height_pt = page_height * mm
        buffer = BytesIO()
        c = canvas.Canvas(buffer, pagesize=(page_width_pt, page_height_pt))
        c.setTitle(title or "ramsey_lgi report")

        for i, (png, caption) in enumerate(figures):
            if i > 0:
                c.showPage()

            page_title = f"{title} - {caption}" if title and caption else (title or caption)
            if page_title:
                c.setFont("Helvetica-Bold", 16)
                c.drawString(self.margin * mm, (page_height - self.margin - 10) * mm, page_title)

            img = Image.open(BytesIO(png))
            img_width, img_height = img.size

            # 可用空间与缩放
            available_width = (page_width - 2 * self.margin) * mm
            available_height = (page_height - 2 * self.margin - 20) * mm
            scale = min(available_width / img_width, available_height / img_height)
            display_width = img_width * scale
            display_height = img_height * scale

            # 居中
            x = (page_width_pt - display_width) / 2
            y = (page_height_pt - display_height) / 2 - 10 * mm
            c.drawImage(ImageReader(img), x, y, width=display_width, height=display_height)

            # 页码
            c.setFont("Helvetica", 10)
            c.drawString((page_width - self.margin - 20) * mm, self.margin * mm,
                         f"Page {i + 1}/{len(figures)}")

        c.save()
        return buffer.getvalue()

    def build(self, figures: Sequence[Figure], path: PathLike, title: str = "") -> Path:
        """写入多页PDF文件"""
        if not figures:
            raise ValueError("a report needs at least one figure")
        out = atomic_write_bytes(path, self.render(figures, title))
        logger.info("wrote %s (%d pages)", out, len(figures))
        return out


def build_report(figures: List[Figure], path: PathLike, title: str = "") -> Path:
    """使用默认版式生成报告的便捷函数"""
    return PdfReport().build(figures, path, title)
