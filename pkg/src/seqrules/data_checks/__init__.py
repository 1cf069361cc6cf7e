#!/usr/bin/env python
# -*- coding: utf-8 -*-

from .checkers import *
