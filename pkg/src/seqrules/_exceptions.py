#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Exceptions raised across ``seqrules``. All of them derive from built-in
exceptions so callers can catch ``ValueError``/``RuntimeError`` generically.
"""

__all__ = [
    "SeqrulesError",
    "ShapeError",
    "TokenRangeError",
    "CacheError",
    "ConfigError",
    "DatasetFormatError",
    "CheckpointError",
    "DivergenceError"]

class SeqrulesError(Exception):
    """Base class for every error raised by this package."""

class ShapeError(SeqrulesError, ValueError):
    """Raised when tensor dimensions do not line up."""

class TokenRangeError(SeqrulesError, ValueError):
    """Raised when a token index falls outside ``[0, V)``.

    Args:
        position (int): flat position of the offending token.
        token (int): offending token.
        vocab_size (int): vocabulary size.
    """
    def __init__(self, position: int, token: int, vocab_size: int):
        self.position = position
        self.token = token
        self.vocab_size = vocab_size
        super().__init__(
            f"token {token} at position {position} is outside [0, {vocab_size})")

class CacheError(SeqrulesError, RuntimeError):
    """Raised when a backward pass has no matching forward cache."""

class ConfigError(SeqrulesError, ValueError):
    """Raised for invalid configuration values, unknown keys or mismatches
    between a configuration and the data it is applied to."""

class DatasetFormatError(SeqrulesError, ValueError):
    """Raised when a dataset file cannot be parsed.

    Args:
        message (str): description of the problem.
        line_number (int, optional): 1-based line number. Defaults to None.
    """
    def __init__(self, message: str, line_number: int = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)

class CheckpointError(SeqrulesError, ValueError):
    """Raised when a checkpoint file is corrupt or incompatible."""

class DivergenceError(SeqrulesError, RuntimeError):
    """Raised when a loss or gradient stops being finite."""
