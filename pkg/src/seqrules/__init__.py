#!/usr/bin/env python
# -*- coding: utf-8 -*-

from ._authoring import *
from ._exceptions import *
from .tensor_core import *
from .nn_layers import *
from .models import *
from .tasks import *
from .training import *
from .analysis import *
