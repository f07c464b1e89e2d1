#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Shared Dify tool for the simulator commands
Builds a run configuration from the tool parameters, runs the command in a temporary directory
and returns CSV, JSON, PNG and PDF files as blobs
"""

import json
import logging
import tempfile
from pathlib import Path
from typing import Any, Dict, Generator

from dify_plugin import Tool
from dify_plugin.entities.tool import ToolInvokeMessage

from ramsey_lgi.cli import run
from ramsey_lgi.config import create_run_config
from ramsey_lgi.errors import ConfigError, RamseyLgiError

logger = logging.getLogger(__name__)

MIME_TYPES = {
    '.csv': 'text/csv',
    '.json': 'application/json',
    '.png': 'image/png',
    '.pdf': 'application/pdf',
}


def parse_tool_parameters(tool_parameters: Dict[str, Any], output_dir: str):
    """将工具参数转换为运行配置"""
    preset = (tool_parameters.get('preset') or '').strip() or None
    raw = (tool_parameters.get('overrides') or '').strip()
    overrides: Dict[str, Any] = {}
    if raw:
        try:
            overrides = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"overrides must be a JSON object: {exc}") from exc
        if not isinstance(overrides, dict):
            raise ConfigError("overrides must be a JSON object")
    engine = (tool_parameters.get('engine') or '').strip()
    if engine:
        overrides['engine'] = engine
    overrides['output_dir'] = output_dir
    overrides.setdefault('png', True)
    return create_run_config(preset, **overrides)


class RamseyCommandTool(Tool):
    """运行一个命令行子命令的工具基类"""

    COMMAND = ""
    LABEL = ""

    def _invoke(self, tool_parameters: dict) -> Generator[ToolInvokeMessage, None, None]:
        """
        调用子命令并返回生成的文件
        """
        try:
            with tempfile.TemporaryDirectory() as temp_dir:
                config = parse_tool_parameters(tool_parameters, temp_dir)
                result = run(self.COMMAND, config)

                for path in sorted(Path(temp_dir).iterdir()):
                    mime_type = MIME_TYPES.get(path.suffix)
                    if mime_type is None:
                        continue
                    yield self.create_blob_message(
                        blob=path.read_bytes(),
                        meta={'mime_type': mime_type, 'filename': path.name}
                    )
                yield self.create_text_message(f'{self.LABEL} finished: {result.summary}')

        except RamseyLgiError as e:
            logger.error("tool %s failed: %s", self.COMMAND, e)
            yield self.create_text_message(f'{self.LABEL} failed (exit code {e.exit_code}): {e}')
        except Exception as e:
            logger.exception("tool %s crashed", self.COMMAND)
            yield self.create_text_message(f'{self.LABEL} failed: {e}')
