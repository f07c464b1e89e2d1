#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
LGI sweep Tool
Runs the `lgi-sweep` command and returns its data files and figures
"""

from tools.base import RamseyCommandTool


class LgiSweepTool(RamseyCommandTool):
    COMMAND = 'lgi-sweep'
    LABEL = 'LGI sweep'


# Export tool class for Dify
def get_tool():
    return LgiSweepTool
