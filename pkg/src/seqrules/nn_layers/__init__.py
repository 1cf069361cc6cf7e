#!/usr/bin/env python
# -*- coding: utf-8 -*-

from .layers import *
from .gradient_check import *
