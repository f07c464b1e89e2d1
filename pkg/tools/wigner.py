#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Wigner function Tool
Runs the `wigner` command and returns its data files and figures
"""

from tools.base import RamseyCommandTool


class WignerTool(RamseyCommandTool):
    COMMAND = 'wigner'
    LABEL = 'Wigner function'


# Export tool class for Dify
def get_tool():
    return WignerTool
