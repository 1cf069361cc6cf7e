#!/usr/bin/env python
# -*- coding: utf-8 -*-

from .pca import *
from .report import *
