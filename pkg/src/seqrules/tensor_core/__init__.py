#!/usr/bin/env python
# -*- coding: utf-8 -*-

from .tensor import *
from .rng import *
