#!/usr/bin/env python
# -*- coding: utf-8 -*-

from .tasks import *
from .datasets import *
