#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Window decoherence Tool
Runs the `decoherence` command and returns its data files and figures
"""

from tools.base import RamseyCommandTool


class DecoherenceTool(RamseyCommandTool):
    COMMAND = 'decoherence'
    LABEL = 'Window decoherence'


# Export tool class for Dify
def get_tool():
    return DecoherenceTool
