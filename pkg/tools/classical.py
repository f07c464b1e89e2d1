#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Classical baseline Tool
Runs the `classical` command and returns its data files and figures
"""

from tools.base import RamseyCommandTool


class ClassicalTool(RamseyCommandTool):
    COMMAND = 'classical'
    LABEL = 'Classical baseline'


# Export tool class for Dify
def get_tool():
    return ClassicalTool
