#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Two-time correlation Tool
Runs the `correlate` command and returns its data files and figures
"""

from tools.base import RamseyCommandTool


class CorrelateTool(RamseyCommandTool):
    COMMAND = 'correlate'
    LABEL = 'Two-time correlation'


# Export tool class for Dify
def get_tool():
    return CorrelateTool
