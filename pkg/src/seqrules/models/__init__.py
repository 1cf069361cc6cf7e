#!/usr/bin/env python
# -*- coding: utf-8 -*-

from .config import *
from .seq2seq import *
from .checkpoint import *
