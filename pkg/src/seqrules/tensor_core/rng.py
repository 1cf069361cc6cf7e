#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Seeded random number substreams. One experiment seed is split into
independent, named substreams (data generation, weight initialisation,
shuffling) so that consuming one never shifts another.
"""

from dataclasses import dataclass,field
from typing import Sequence,Tuple,Union

import numpy as np

from .tensor import Precision

__all__ = [
    "STREAM_DATA",
    "STREAM_INIT",
    "STREAM_SHUFFLE",
    "SeededRng",
    "glorot_bound"]

STREAM_DATA = 0
STREAM_INIT = 1
STREAM_SHUFFLE = 2

def glorot_bound(fan_in: int, fan_out: int) -> float:
    """Returns ``sqrt(6/(fan_in+fan_out))``."""
    return float(np.sqrt(6.0 / (fan_in + fan_out)))

@dataclass
class SeededRng:
    """
    Deterministic random stream identified by ``(seed, stream)``. The stream
    id is a tuple of non-negative ints used as the spawn key of a
    ``numpy.random.SeedSequence``; ``substream`` extends it, which is how
    dataset splits get their own streams below ``STREAM_DATA``.

    Args:
        seed (int): 64-bit non-negative experiment seed.
        stream (Union[int,Sequence[int]], optional): stream id. Defaults to
            STREAM_DATA.
    """
    seed: int
    stream: Union[int,Sequence[int]] = STREAM_DATA
    _generator: np.random.Generator = field(init=False,repr=False,compare=False)

    def __post_init__(self):
        if not isinstance(self.seed,(int,np.integer)) or not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be a 64-bit non-negative int, got {self.seed}")
        if isinstance(self.stream,(int,np.integer)):
            self.stream = (int(self.stream),)
        self.stream = tuple(int(s) for s in self.stream)
        if any(s < 0 for s in self.stream):
            raise ValueError(f"stream ids must be non-negative, got {self.stream}")
        sequence = np.random.SeedSequence(int(self.seed),spawn_key=self.stream)
        self._generator = np.random.Generator(np.random.PCG64(sequence))

    def substream(self, index: int) -> "SeededRng":
        """Returns an independent child stream.

        Args:
            index (int): child index.

        Returns:
            SeededRng: stream ``self.stream + (index,)``.
        """
        return SeededRng(self.seed,self.stream + (index,))

    def uniform_int(self, lo: int, hi: int) -> int:
        """Draws one integer uniformly from the closed range ``[lo, hi]``.

        Args:
            lo (int): lower bound.
            hi (int): upper bound.

        Raises:
            ValueError: if ``lo > hi``.

        Returns:
            int: random integer.
        """
        if lo > hi:
            raise ValueError(f"invalid integer range [{lo}, {hi}]")
        return int(self._generator.integers(lo,hi,endpoint=True))

    def integers(self, lo: int, hi: int, size: Union[int,Tuple[int,...]]) -> np.ndarray:
        """Draws an array of integers uniformly from ``[lo, hi]``.

        Args:
            lo (int): lower bound.
            hi (int): upper bound.
            size (Union[int,Tuple[int,...]]): output shape.

        Raises:
            ValueError: if ``lo > hi``.

        Returns:
            np.ndarray: int64 array.
        """
        if lo > hi:
            raise ValueError(f"invalid integer range [{lo}, {hi}]")
        return self._generator.integers(lo,hi,size=size,endpoint=True,dtype=np.int64)

    def permutation(self, n: int) -> np.ndarray:
        """Returns a random permutation of ``range(n)``."""
        return self._generator.permutation(n)

    def uniform(self,
                lo: float,
                hi: float,
                shape: Tuple[int,...],
                precision: Union[str,Precision]=Precision.SINGLE) -> np.ndarray:
        """Draws floats uniformly from ``[lo, hi)``.

        Raises:
            ValueError: if ``lo >= hi``.
        """
        if lo >= hi:
            raise ValueError(f"invalid float range [{lo}, {hi})")
        values = self._generator.uniform(lo,hi,size=shape)
        return np.ascontiguousarray(values,dtype=Precision.parse(precision).dtype)

    def glorot(self,
               fan_in: int,
               fan_out: int,
               shape: Tuple[int,...],
               precision: Union[str,Precision]=Precision.SINGLE) -> np.ndarray:
        """Draws Glorot-uniform weights in ``[-b, b]`` with
        ``b = sqrt(6/(fan_in+fan_out))``.

        Args:
            fan_in (int): number of inputs of the layer.
            fan_out (int): number of outputs of the layer.
            shape (Tuple[int,...]): weight shape.
            precision (Union[str,Precision], optional): output precision.
                Defaults to single.

        Raises:
            ValueError: if a fan is not positive.

        Returns:
            np.ndarray: weight tensor.
        """
        if fan_in < 1 or fan_out < 1:
            raise ValueError(f"fans must be positive, got {fan_in} and {fan_out}")
        bound = glorot_bound(fan_in,fan_out)
        return self.uniform(-bound,bound,shape,precision)
