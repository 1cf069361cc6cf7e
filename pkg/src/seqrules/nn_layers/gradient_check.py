#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Finite-difference gradient checking. Analytic gradients are compared with
central differences ``(f(theta+eps) - f(theta-eps)) / (2 eps)`` over every
entry of every parameter; the worst relative error
``|a - n| / max(|a|, |n|, 1e-8)`` is reported.
"""

from dataclasses import dataclass,field
from typing import Callable,Dict,Tuple

import numpy as np

from ..tensor_core import Precision,SeededRng,STREAM_INIT
from .layers import EmbeddingLayer,LstmLayer,ProjectionLayer

__all__ = [
    "GradCheckResult",
    "relative_error",
    "grad_check",
    "check_embedding_layer",
    "check_lstm_layer",
    "check_projection_layer"]

@dataclass
class GradCheckResult:
    """Outcome of a gradient check.

    Args:
        max_relative_error (float): worst relative error over all entries.
        per_parameter (Dict[str,float]): worst relative error per parameter.
        worst_entry (Tuple[str,Tuple[int,...]]): parameter name and index of
            the worst entry.
    """
    max_relative_error: float = 0.0
    per_parameter: Dict[str,float] = field(default_factory=dict)
    worst_entry: Tuple[str,Tuple[int,...]] = None

    def passed(self, tolerance: float) -> bool:
        return self.max_relative_error < tolerance

def relative_error(analytic: np.ndarray,
                   numeric: np.ndarray,
                   floor: float=1e-8) -> np.ndarray:
    """Elementwise ``|a - n| / max(|a|, |n|, floor)``."""
    analytic = np.asarray(analytic,dtype=np.float64)
    numeric = np.asarray(numeric,dtype=np.float64)
    scale = np.maximum(np.maximum(np.abs(analytic),np.abs(numeric)),floor)
    return np.abs(analytic - numeric) / scale

def grad_check(loss_fn: Callable[[],float],
               params: Dict[str,np.ndarray],
               grads: Dict[str,np.ndarray],
               epsilon: float=1e-5) -> GradCheckResult:
    """Compares analytic gradients with central differences.

    ``params`` are perturbed in place (and restored) and ``loss_fn`` must
    recompute the loss from their current values.

    Args:
        loss_fn (Callable[[],float]): recomputes the scalar loss.
        params (Dict[str,np.ndarray]): parameters, in double precision.
        grads (Dict[str,np.ndarray]): analytic gradients, same keys/shapes.
        epsilon (float, optional): perturbation. Defaults to 1e-5.

    Raises:
        ValueError: if a parameter is not double precision or has no
            gradient of matching shape.

    Returns:
        GradCheckResult: worst relative errors.
    """
    result = GradCheckResult()
    for name,param in params.items():
        if param.dtype != Precision.DOUBLE.dtype:
            raise ValueError(
                f"gradient checks need double precision, '{name}' is {param.dtype}")
        if name not in grads or grads[name].shape != param.shape:
            raise ValueError(f"no analytic gradient matching '{name}'")
        numeric = np.zeros_like(param)
        for idx in np.ndindex(param.shape):
            original = param[idx]
            param[idx] = original + epsilon
            loss_plus = loss_fn()
            param[idx] = original - epsilon
            loss_minus = loss_fn()
            param[idx] = original
            numeric[idx] = (loss_plus - loss_minus) / (2 * epsilon)
        errors = relative_error(grads[name],numeric)
        worst = float(errors.max()) if errors.size > 0 else 0.0
        result.per_parameter[name] = worst
        if worst >= result.max_relative_error:
            result.max_relative_error = worst
            result.worst_entry = (
                name,np.unravel_index(int(errors.argmax()),errors.shape))
    return result

def _loss_weights(rng: SeededRng, shape: Tuple[int,...]) -> np.ndarray:
    return rng.glorot(1,1,shape,Precision.DOUBLE)

def check_embedding_layer(seed: int=0,
                          vocab_size: int=3,
                          embed_dim: int=2,
                          length: int=4,
                          epsilon: float=1e-5) -> GradCheckResult:
    """Gradient check of ``EmbeddingLayer`` with the loss
    ``sum(R * lookup(tokens))`` for a random weighting R."""
    rng = SeededRng(seed,STREAM_INIT)
    layer = EmbeddingLayer(vocab_size,embed_dim,Precision.DOUBLE,rng=rng)
    tokens = rng.integers(0,vocab_size - 1,size=(2,length))
    weighting = _loss_weights(rng,(2,length,embed_dim))

    def loss_fn() -> float:
        return float(np.sum(weighting * layer.forward(tokens)))

    layer.zero_grad()
    layer.forward(tokens)
    layer.backward(weighting)
    return grad_check(loss_fn,layer.parameters(),layer.gradients(),epsilon)

def check_lstm_layer(seed: int=0,
                     input_size: int=3,
                     hidden_size: int=4,
                     length: int=4,
                     batch_size: int=2,
                     epsilon: float=1e-5) -> GradCheckResult:
    """Gradient check of ``LstmLayer`` over a whole sequence with the loss
    ``sum(R * h)`` for a random weighting R. Nonzero initial states are
    used so that the ``c_{t-1}`` paths of the first step are exercised."""
    rng = SeededRng(seed,STREAM_INIT)
    layer = LstmLayer(input_size,hidden_size,Precision.DOUBLE,rng=rng)
    for gate in ("b_i","b_c","b_o"):
        layer.parameters()[gate][:] = _loss_weights(rng,(hidden_size,))
    inputs = _loss_weights(rng,(batch_size,length,input_size))
    h_0 = _loss_weights(rng,(batch_size,hidden_size))
    c_0 = _loss_weights(rng,(batch_size,hidden_size))
    weighting = _loss_weights(rng,(batch_size,length,hidden_size))

    def loss_fn() -> float:
        return float(np.sum(weighting * layer.forward(inputs,h_0,c_0)))

    layer.zero_grad()
    layer.forward(inputs,h_0,c_0)
    layer.backward(weighting)
    return grad_check(loss_fn,layer.parameters(),layer.gradients(),epsilon)

def check_projection_layer(seed: int=0,
                           hidden_size: int=5,
                           vocab_size: int=7,
                           length: int=4,
                           epsilon: float=1e-5) -> GradCheckResult:
    """Gradient check of ``ProjectionLayer`` with the loss
    ``sum(R * logits)`` for a random weighting R."""
    rng = SeededRng(seed,STREAM_INIT)
    layer = ProjectionLayer(hidden_size,vocab_size,Precision.DOUBLE,rng=rng)
    h = _loss_weights(rng,(length,hidden_size))
    weighting = _loss_weights(rng,(length,vocab_size))

    def loss_fn() -> float:
        return float(np.sum(weighting * layer.forward(h)))

    layer.zero_grad()
    layer.forward(h)
    layer.backward(weighting)
    return grad_check(loss_fn,layer.parameters(),layer.gradients(),epsilon)
