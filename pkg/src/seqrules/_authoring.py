#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Contains generic authoring information.
"""

__author__ = "seqrules developers"
__version__ = "0.2.0"
__license__ = "MIT"
