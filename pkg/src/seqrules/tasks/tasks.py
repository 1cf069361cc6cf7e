#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Synthetic sequence transformation tasks. Tokens are symbols ``0..V-1``;
each task maps an input sequence to an output sequence of the same length:

- ``reverse``: the input read backwards;
- ``sort``: the input in nondecreasing order;
- ``replace``: every token replaced by its residue modulo ``n``;
- ``combine``: residues modulo ``n``, sorted and reversed (nonincreasing).
"""

from dataclasses import dataclass,asdict
from enum import Enum
from typing import Any,Dict

import numpy as np

from ..tensor_core import SeededRng
from ..nn_layers import check_tokens
from .._exceptions import ConfigError

__all__ = [
    "TaskKind",
    "TaskSpec",
    "SequencePair",
    "oracle_apply",
    "generate_pair",
    "generate_batch"]

class TaskKind(str,Enum):
    REVERSE = "reverse"
    SORT = "sort"
    REPLACE = "replace"
    COMBINE = "combine"

    @property
    def needs_modulus(self) -> bool:
        return self in (TaskKind.REPLACE,TaskKind.COMBINE)

@dataclass(frozen=True)
class TaskSpec:
    """A transformation rule over sequences of a fixed length.

    Args:
        kind (str): "reverse", "sort", "replace" or "combine".
        vocab_size (int): vocabulary size V (>= 2).
        length (int, optional): sequence length L. Defaults to 25.
        modulus (int, optional): n in ``[1, V]``, required by replace and
            combine, ignored otherwise. Defaults to None.
    """
    kind: str
    vocab_size: int
    length: int = 25
    modulus: int = None

    def __post_init__(self):
        try:
            kind = TaskKind(self.kind)
        except ValueError:
            raise ConfigError(
                f"unknown task '{self.kind}' (expected one of "
                f"{[k.value for k in TaskKind]})")
        object.__setattr__(self,"kind",kind.value)
        if self.vocab_size < 2:
            raise ConfigError(f"vocab_size must be >= 2, got {self.vocab_size}")
        if self.length < 1:
            raise ConfigError(f"length must be >= 1, got {self.length}")
        if kind.needs_modulus:
            if self.modulus is None:
                raise ConfigError(f"task '{kind.value}' requires a modulus")
            if not 1 <= self.modulus <= self.vocab_size:
                raise ConfigError(
                    f"modulus must be in [1, {self.vocab_size}], got {self.modulus}")
        else:
            object.__setattr__(self,"modulus",None)

    @property
    def task_kind(self) -> TaskKind:
        return TaskKind(self.kind)

    @staticmethod
    def default_modulus(vocab_size: int) -> int:
        """Modulus keeping the top fifth of the vocabulary as residues
        (2, 20 and 200 for V = 10, 100 and 1000)."""
        return max(vocab_size // 5,1)

    def to_dict(self) -> Dict[str,Any]:
        return asdict(self)

@dataclass(frozen=True,eq=False)
class SequencePair:
    """An input sequence and its transformation.

    Args:
        x (np.ndarray): input tokens (L,).
        y (np.ndarray): output tokens (L,).
    """
    x: np.ndarray
    y: np.ndarray

    def __eq__(self, other: object) -> bool:
        if not isinstance(other,SequencePair):
            return NotImplemented
        return np.array_equal(self.x,other.x) and np.array_equal(self.y,other.y)

def oracle_apply(task: TaskSpec, x: np.ndarray) -> np.ndarray:
    """Applies the task's rule along the last axis of ``x``.

    Args:
        task (TaskSpec): task.
        x (np.ndarray): tokens of shape (L,) or (B, L).

    Raises:
        TokenRangeError: if a token is outside ``[0, V)``.

    Returns:
        np.ndarray: int64 outputs with the shape of ``x``.
    """
    x = check_tokens(np.asarray(x),task.vocab_size)
    kind = task.task_kind
    if kind is TaskKind.REVERSE:
        y = x[...,::-1]
    elif kind is TaskKind.SORT:
        y = np.sort(x,axis=-1)
    elif kind is TaskKind.REPLACE:
        y = x % task.modulus
    else:
        y = np.sort(x % task.modulus,axis=-1)[...,::-1]
    return np.ascontiguousarray(y,dtype=np.int64)

def generate_pair(task: TaskSpec, rng: SeededRng) -> SequencePair:
    """Draws one input uniformly over ``[0, V)^L`` and pairs it with its
    transformation."""
    x = rng.integers(0,task.vocab_size - 1,size=task.length)
    return SequencePair(x,oracle_apply(task,x))

def generate_batch(task: TaskSpec,
                   rng: SeededRng,
                   size: int) -> "tuple[np.ndarray,np.ndarray]":
    """Draws ``size`` pairs at once.

    Args:
        task (TaskSpec): task.
        rng (SeededRng): random stream.
        size (int): number of pairs.

    Returns:
        tuple[np.ndarray,np.ndarray]: inputs and outputs of shape (size, L).
    """
    x = rng.integers(0,task.vocab_size - 1,size=(size,task.length))
    return x,oracle_apply(task,x)
