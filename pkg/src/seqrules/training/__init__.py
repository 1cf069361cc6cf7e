#!/usr/bin/env python
# -*- coding: utf-8 -*-

from .rmsprop import *
from .early_stopping import *
from .trainer import *
