#!/usr/bin/env python
# -*- coding: utf-8 -*-

from .run_config import *
from .experiments import *
