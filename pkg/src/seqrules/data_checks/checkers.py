#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Contains the checks used to validate configuration values, dataset records
and checkpoint manifests.
"""

import numpy as np
from abc import ABC
from dataclasses import dataclass,field
from typing import Any,Sequence,Tuple,Union

__all__ = [
    "Check",
    "CheckType",
    "CheckDType",
    "CheckShape",
    "CheckRange",
    "CheckChoice",
    "CheckFinite"]

Number = Union[int,float]

@dataclass
class Check(ABC):
    """
    Abstract check class. A check is built from a ``target`` and is then
    called on input data, returning whether the data agrees with the target:

    - ``unpack`` converts the input data to the domain of ``target`` (for a
        shape check, ``np.shape(x)``). By default the data is returned as is;
    - ``compare`` compares the unpacked data with ``target``. By default this
        is equality.

    Custom checks redefine ``unpack`` and ``compare``. A ``check_target``
    method validates ``target`` on construction.

    When ``target`` is ``None`` the check is disabled and calling it returns
    ``None``. After each call ``msg`` holds ``_success_msg`` or
    ``_fail_msg``, which validators use to build diagnostics.

    Args:
        target (Any): the value against which the data will be compared.
    """
    target: Any=None
    msg: str=field(default="Check has not been run",init=False)
    _success_msg: str=field(default="",init=False,repr=False)
    _fail_msg: str=field(default="",init=False,repr=False)

    def __post_init__(self):
        self.check_target()
        name = self.get_name()
        self._success_msg = f"{type(self).__name__}({name}) passed"
        self._fail_msg = f"{type(self).__name__}({name}) failed"

    def check_target(self):
        pass

    def get_name(self) -> str:
        """Returns a printable name for the target.

        Returns:
            str: name of the target.
        """
        if isinstance(self.target,(tuple,list)):
            return ",".join(getattr(t,"__name__",str(t)) for t in self.target)
        return str(getattr(self.target,"__name__",self.target))

    def unpack(self, x: Any) -> Any:
        """Unpacks the input data.

        Args:
            x (Any): input data.

        Returns:
            Any: unpacked data.
        """
        return x

    def compare(self, unpacked_x: Any) -> bool:
        """Compares the unpacked data with the target.

        Args:
            unpacked_x (Any): unpacked data.

        Returns:
            bool: whether the comparison was successful or not.
        """
        return unpacked_x == self.target

    def __call__(self, x: Any) -> Union[bool,None]:
        """Performs the comparison using the input data and sets ``self.msg``.

        Args:
            x (Any): input data.

        Returns:
            Union[bool,None]: whether the comparison was successful, or None
                if the check is disabled.
        """
        if self.target is None:
            return None
        result = bool(self.compare(self.unpack(x)))
        self.msg = self._success_msg if result else self._fail_msg
        return result

@dataclass
class CheckType(Check):
    """Checks whether the exact type of the input is ``target`` (or one of
    the types in ``target``). Exact matching keeps ``bool`` from passing as
    ``int``.

    Args:
        target (Union[type,Tuple[type,...]]): accepted type(s).
    """
    target: Union[type,Tuple[type,...]] = None

    def unpack(self, x: Any) -> type:
        return type(x)

    def compare(self, unpacked_x: type) -> bool:
        if isinstance(self.target,tuple):
            return unpacked_x in self.target
        return unpacked_x is self.target

@dataclass
class CheckDType(Check):
    """Checks whether ``x.dtype`` equals ``target``.

    Args:
        target (Any): expected numpy dtype.
    """
    target: Any = None

    def unpack(self, x: Any) -> np.dtype:
        return np.asarray(x).dtype

    def compare(self, unpacked_x: np.dtype) -> bool:
        return unpacked_x == np.dtype(self.target)

@dataclass
class CheckShape(Check):
    """Checks whether the shape of ``x`` equals ``target``.

    Args:
        target (Sequence[int]): expected shape.
    """
    target: Sequence[int] = None

    def check_target(self):
        """Raises ValueError if the target is not a sequence of ints."""
        if self.target is None:
            return
        if not isinstance(self.target,(tuple,list)) or not all(
            isinstance(s,int) for s in self.target):
            raise ValueError(
                f"Input to {type(self).__name__} should be Sequence[int]")

    def unpack(self, x: Any) -> Tuple[int,...]:
        return tuple(np.shape(x))

    def compare(self, unpacked_x: Tuple[int,...]) -> bool:
        return unpacked_x == tuple(self.target)

@dataclass
class CheckRange(Check):
    """Checks whether all values of ``x`` lie within the closed range
    ``target``. Either bound may be ``None`` (unbounded).

    Args:
        target (Tuple[Number,Number]): lower and upper bound.
    """
    target: Tuple[Number,Number] = None

    def check_target(self):
        """Raises ValueError unless the target is two numbers or None."""
        if self.target is None:
            return
        error_msg = "Input to {} should be {}".format(
            type(self).__name__,"a sequence of two numbers/None")
        if not isinstance(self.target,(tuple,list)) or len(self.target) != 2:
            raise ValueError(error_msg)
        if not all(t is None or isinstance(t,(int,float)) for t in self.target):
            raise ValueError(error_msg)

    def unpack(self, x: Any) -> Tuple[float,float]:
        x = np.asarray(x)
        if x.size == 0:
            return None
        return float(np.min(x)),float(np.max(x))

    def compare(self, unpacked_x: Tuple[float,float]) -> bool:
        if unpacked_x is None:
            return True
        lo,hi = self.target
        x_min,x_max = unpacked_x
        if lo is not None:
            if x_min < lo:
                return False
        if hi is not None:
            if x_max > hi:
                return False
        return True

@dataclass
class CheckChoice(Check):
    """Checks whether ``x`` is one of the values in ``target``.

    Args:
        target (Sequence[Any]): allowed values.
    """
    target: Sequence[Any] = None

    def compare(self, unpacked_x: Any) -> bool:
        return unpacked_x in self.target

@dataclass
class CheckFinite(Check):
    """Checks whether every value of ``x`` is finite (no NaN/Inf). Enabled
    with ``target=True``.

    Args:
        target (bool): enables the check.
    """
    target: bool = None

    def unpack(self, x: Any) -> bool:
        return bool(np.all(np.isfinite(np.asarray(x,dtype=np.float64))))

    def compare(self, unpacked_x: bool) -> bool:
        return unpacked_x
