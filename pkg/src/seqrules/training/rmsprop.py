#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
RMSprop optimisation. Each parameter keeps a running average of its squared
gradient and every step divides the gradient by the root of that average:

    acc <- rho * acc + (1 - rho) * g^2
    theta <- theta - lr * g / (sqrt(acc) + epsilon)
"""

from dataclasses import dataclass,field
from typing import Dict

import numpy as np

from ..tensor_core import Precision
from .._exceptions import ConfigError,DivergenceError

__all__ = [
    "TrainConfig",
    "RmspropState",
    "rmsprop_step"]

@dataclass(frozen=True)
class TrainConfig:
    """Optimiser and training loop settings.

    Args:
        learning_rate (float, optional): step size. Defaults to 1e-3.
        rho (float, optional): decay of the squared-gradient average, in
            (0, 1). Defaults to 0.9.
        epsilon (float, optional): denominator offset. Defaults to 1e-8.
        batch_size (int, optional): mini-batch size. Defaults to 128.
        max_epochs (int, optional): epoch limit; 0 only evaluates the
            untrained model. Defaults to 200.
        patience (int, optional): epochs without validation loss improvement
            before stopping. Defaults to 5.
        seed (int, optional): shuffling seed. Defaults to 1.
        precision (str, optional): "single" or "double". Defaults to
            "single".
        threads (int, optional): evaluation workers. Defaults to 1.
        record_wall_time (bool, optional): stores measured epoch durations
            instead of 0.0. Defaults to False.
    """
    learning_rate: float = 1e-3
    rho: float = 0.9
    epsilon: float = 1e-8
    batch_size: int = 128
    max_epochs: int = 200
    patience: int = 5
    seed: int = 1
    precision: str = "single"
    threads: int = 1
    record_wall_time: bool = False

    def __post_init__(self):
        problems = []
        if not 0 < self.rho < 1:
            problems.append(f"rho must be in (0, 1), got {self.rho}")
        if self.learning_rate <= 0:
            problems.append(f"learning_rate must be positive, got {self.learning_rate}")
        if self.epsilon < 0:
            problems.append(f"epsilon must be nonnegative, got {self.epsilon}")
        if self.batch_size < 1:
            problems.append(f"batch_size must be >= 1, got {self.batch_size}")
        if self.patience < 1:
            problems.append(f"patience must be >= 1, got {self.patience}")
        if self.max_epochs < 0:
            problems.append(f"max_epochs must be >= 0, got {self.max_epochs}")
        if self.threads < 1:
            problems.append(f"threads must be >= 1, got {self.threads}")
        if self.seed < 0:
            problems.append(f"seed must be nonnegative, got {self.seed}")
        try:
            Precision.parse(self.precision)
        except ValueError:
            problems.append(f"unknown precision '{self.precision}'")
        if problems:
            raise ConfigError("; ".join(problems))

@dataclass
class RmspropState:
    """Squared-gradient accumulators, one per registered parameter, created
    at zero on first use.

    Args:
        accumulators (Dict[str,np.ndarray], optional): existing accumulators.
    """
    accumulators: Dict[str,np.ndarray] = field(default_factory=dict)

    def accumulator(self, name: str, like: np.ndarray) -> np.ndarray:
        if name not in self.accumulators:
            self.accumulators[name] = np.zeros_like(like)
        return self.accumulators[name]

def rmsprop_step(state: RmspropState,
                 params: Dict[str,np.ndarray],
                 grads: Dict[str,np.ndarray],
                 config: TrainConfig) -> Dict[str,np.ndarray]:
    """Applies one RMSprop update to ``params`` in place.

    Every gradient is checked before any parameter moves, so a non-finite
    gradient leaves both the parameters and the accumulators untouched.

    Args:
        state (RmspropState): accumulators, updated in place.
        params (Dict[str,np.ndarray]): parameters keyed by registry name.
        grads (Dict[str,np.ndarray]): gradients with the same keys and shapes.
        config (TrainConfig): learning rate, rho and epsilon.

    Raises:
        ValueError: if a parameter has no gradient of the same shape.
        DivergenceError: if a gradient holds NaN or Inf.

    Returns:
        Dict[str,np.ndarray]: ``params`` (updated).
    """
    for name,param in params.items():
        if name not in grads or grads[name].shape != param.shape:
            raise ValueError(f"no gradient matching parameter '{name}'")
        if not np.all(np.isfinite(grads[name])):
            raise DivergenceError(f"non-finite gradient for '{name}'")
    lr,rho,eps = config.learning_rate,config.rho,config.epsilon
    for name,param in params.items():
        g = grads[name]
        acc = state.accumulator(name,param)
        acc *= rho
        acc += (1 - rho) * np.square(g)
        param -= lr * g / (np.sqrt(acc) + eps)
    return params
