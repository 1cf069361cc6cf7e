#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Dense tensor substrate. A tensor is a C-contiguous ``numpy.ndarray`` whose
dtype carries the precision mode: ``float32`` for training and ``float64``
for gradient checking. Every operation here validates shapes and returns a
fresh array; higher modules express all of their computation with ``gemm``
and the elementwise maps below.
"""

from enum import Enum
from typing import Any,Union

import numpy as np
from scipy.special import expit

from .._exceptions import ShapeError

__all__ = [
    "Precision",
    "as_tensor",
    "gemm",
    "sigmoid",
    "tanh",
    "hadamard",
    "softmax"]

class Precision(str,Enum):
    """Scalar precision modes."""
    SINGLE = "single"
    DOUBLE = "double"

    @property
    def dtype(self) -> np.dtype:
        """numpy dtype of the mode."""
        return np.dtype(np.float32 if self is Precision.SINGLE else np.float64)

    @classmethod
    def parse(cls, value: Union[str,"Precision",np.dtype]) -> "Precision":
        """Builds a precision from a mode name or a floating dtype.

        Args:
            value (Union[str,Precision,np.dtype]): "single", "double" or a
                float32/float64 dtype.

        Returns:
            Precision: the matching mode.
        """
        if isinstance(value,Precision):
            return value
        if isinstance(value,str):
            return cls(value)
        dtype = np.dtype(value)
        if dtype == np.float32:
            return cls.SINGLE
        if dtype == np.float64:
            return cls.DOUBLE
        raise ValueError(f"no precision mode for dtype {dtype}")

def as_tensor(data: Any, precision: Union[str,Precision]=Precision.DOUBLE) -> np.ndarray:
    """Converts ``data`` to a contiguous tensor of the given precision.

    Args:
        data (Any): array-like input.
        precision (Union[str,Precision], optional): precision mode. Defaults to
            double.

    Returns:
        np.ndarray: C-contiguous copy (or the input itself when it already
            matches).
    """
    dtype = Precision.parse(precision).dtype
    return np.ascontiguousarray(data,dtype=dtype)

def gemm(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix product ``c[i][j] = sum_p a[i][p] * b[p][j]``.

    Args:
        a (np.ndarray): m x k matrix.
        b (np.ndarray): k x n matrix.

    Raises:
        ShapeError: if either operand is not 2-D or the inner dimensions
            differ.

    Returns:
        np.ndarray: m x n matrix.
    """
    if a.ndim != 2 or b.ndim != 2:
        raise ShapeError(
            f"gemm expects matrices, got shapes {a.shape} and {b.shape}")
    if a.shape[1] != b.shape[0]:
        raise ShapeError(
            f"gemm inner dimensions differ: {a.shape} x {b.shape}")
    return np.ascontiguousarray(np.matmul(a,b))

def sigmoid(x: np.ndarray) -> np.ndarray:
    """Elementwise logistic function 1/(1+e^-x), stable for large |x|.

    Args:
        x (np.ndarray): input tensor.

    Returns:
        np.ndarray: tensor of the same shape and dtype.
    """
    return expit(x)

def tanh(x: np.ndarray) -> np.ndarray:
    """Elementwise hyperbolic tangent.

    Args:
        x (np.ndarray): input tensor.

    Returns:
        np.ndarray: tensor of the same shape and dtype.
    """
    return np.tanh(x)

def hadamard(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Elementwise product of two tensors of identical shape.

    Args:
        a (np.ndarray): first tensor.
        b (np.ndarray): second tensor.

    Raises:
        ShapeError: if the shapes differ (no broadcasting).

    Returns:
        np.ndarray: ``a * b``.
    """
    if np.shape(a) != np.shape(b):
        raise ShapeError(
            f"hadamard expects equal shapes, got {np.shape(a)} and {np.shape(b)}")
    return np.multiply(a,b)

def softmax(logits: np.ndarray) -> np.ndarray:
    """Softmax over the last dimension. The row maximum is subtracted before
    exponentiating so that arbitrarily large logits do not overflow.

    Args:
        logits (np.ndarray): tensor of shape (..., V) with V >= 1.

    Raises:
        ShapeError: if the last dimension is empty.

    Returns:
        np.ndarray: tensor of the same shape whose last-dimension slices are
            positive and sum to 1.
    """
    logits = np.asarray(logits)
    if logits.ndim == 0 or logits.shape[-1] < 1:
        raise ShapeError(
            f"softmax needs a non-empty last dimension, got {logits.shape}")
    shifted = logits - np.max(logits,axis=-1,keepdims=True)
    e = np.exp(shifted)
    return e / np.sum(e,axis=-1,keepdims=True)
