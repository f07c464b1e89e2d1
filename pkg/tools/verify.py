#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Verification Tool
Runs the `verify` command and returns its data files and figures
"""

from tools.base import RamseyCommandTool


class VerifyTool(RamseyCommandTool):
    COMMAND = 'verify'
    LABEL = 'Verification'


# Export tool class for Dify
def get_tool():
    return VerifyTool
