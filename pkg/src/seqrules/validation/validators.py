#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Field and record validators built on top of the checks in
``seqrules.data_checks``. They validate run configurations, dataset headers
checkpoint manifests and checkpoint tensors, and collect human-readable
failure messages.
"""

import logging
from dataclasses import dataclass,field
from typing import Any,Callable,Dict,List,Sequence,Tuple,Union

from termcolor import colored

from ..data_checks import (
    CheckType,CheckShape,CheckRange,CheckDType,CheckChoice,CheckFinite)

__all__ = [
    "FieldValidator",
    "RecordValidator",
    "pprint"]

ValidationOutput = Dict[str,Union[bool,None]]
RecordOutput = Dict[str,Any]

@dataclass
class FieldValidator:
    """
    Validates a single value with type, choice, shape, range, dtype and
    finiteness checks. Checks run in two stages:

    - ``raw``: the value as given (``type`` and ``choice``);
    - ``values``: the output of ``values_fn`` applied to the value
        (``shape``, ``range``, ``dtype``, ``finite``).

    When ``strict`` is set a failing stage stops later stages from running,
    so a range check never sees a value of the wrong type.

    Args:
        type (Union[type,Tuple[type,...]], optional): accepted exact type(s).
            Defaults to None.
        choices (Sequence[Any], optional): allowed values. Defaults to None.
        shape (Sequence[int], optional): expected shape. Defaults to None.
        range (Tuple[Number,Number], optional): closed value range, either
            bound may be None. Defaults to None.
        dtype (Any, optional): expected numpy dtype. Defaults to None.
        finite (bool, optional): requires finite values. Defaults to None.
        required (bool, optional): whether records must contain the field.
            Defaults to False.
        nullable (bool, optional): accepts ``None`` without running checks.
            Defaults to False.
        values_fn (Callable, optional): value extraction function. Defaults to
            None.
        verbose (int, optional): logging level. Defaults to logging.WARNING.
    """
    type: Any = None
    choices: Sequence[Any] = None
    shape: Sequence[int] = None
    range: Tuple[Union[int,float],Union[int,float]] = None
    dtype: Any = None
    finite: bool = None
    required: bool = False
    nullable: bool = False
    values_fn: Callable = None
    verbose: int = logging.WARNING

    def __post_init__(self):
        self._check_dict = {
            "raw":{
                "type": CheckType(self.type),
                "choice": CheckChoice(self.choices),
            },
            "values":{
                "shape": CheckShape(self.shape),
                "range": CheckRange(self.range),
                "dtype": CheckDType(self.dtype),
                "finite": CheckFinite(self.finite),
            },
        }
        self.check_names = [k for stage in self._check_dict.values() for k in stage]
        self.logger = logging.getLogger("validation")
        self.logger.setLevel(self.verbose)

    def messages(self, output: ValidationOutput) -> List[str]:
        """Returns the failure messages for a validation output.

        Args:
            output (ValidationOutput): output of ``validate``.

        Returns:
            List[str]: one message per failed check.
        """
        msgs = []
        for stage in self._check_dict.values():
            for key,check in stage.items():
                if output.get(key) is False:
                    msgs.append(getattr(check,"msg",f"{key} failed"))
        return msgs

    def validate(self, data: Any, strict: bool=True) -> ValidationOutput:
        """Runs every check on ``data``, stage by stage.

        Args:
            data (Any): input value.
            strict (bool, optional): skips later stages once a check fails.
                Defaults to True.

        Returns:
            ValidationOutput: check name to True, False or None (not run or
                disabled).
        """
        validation_dict = {k:None for k in self.check_names}
        if data is None and self.nullable:
            return validation_dict
        stop = False
        for stage in ["raw","values"]:
            if stop and strict:
                break
            if stage == "values" and self.values_fn is not None:
                data = self.values_fn(data)
            for k,check in self._check_dict[stage].items():
                result = check(data)
                if result is False:
                    stop = True
                    self.logger.debug("check %s failed on %r",k,data)
                validation_dict[k] = result
        return validation_dict

    def failures(self, data: Any) -> List[str]:
        """Validates ``data`` and returns every failure as a message.

        Args:
            data (Any): input value.

        Returns:
            List[str]: failure messages (empty when the value is valid).
        """
        return self.messages(self.validate(data))

@dataclass
class RecordValidator:
    """Applies a dictionary of ``FieldValidator`` objects to a record
    (a dictionary, e.g. a parsed JSON configuration). Besides the per-field
    checks the record is checked for unknown keys (never allowed) and for
    missing required keys.

    Args:
        structures (Dict[str,FieldValidator]): validators per key.
        verbose (int, optional): logging level. Defaults to logging.WARNING.
    """
    structures: Dict[str,FieldValidator] = field(default_factory=dict)
    verbose: int = logging.WARNING

    def __post_init__(self):
        self.logger = logging.getLogger("validation")
        self.logger.setLevel(self.verbose)

    def unknown_keys(self, record: Dict[str,Any]) -> List[str]:
        """Returns keys of ``record`` with no validator.

        Args:
            record (Dict[str,Any]): input record.

        Returns:
            List[str]: sorted unknown keys.
        """
        return sorted(set(record) - set(self.structures))

    def missing_keys(self, record: Dict[str,Any]) -> List[str]:
        """Returns required keys absent from ``record``.

        Args:
            record (Dict[str,Any]): input record.

        Returns:
            List[str]: sorted missing keys.
        """
        return sorted(k for k,v in self.structures.items()
                      if v.required and record.get(k) is None)

    def validate(self, record: Dict[str,Any]) -> RecordOutput:
        """Validates a record.

        Args:
            record (Dict[str,Any]): input record.

        Returns:
            RecordOutput: ``structure_type`` (record is a dict),
                ``unknown_keys``/``missing_keys`` (True when none) and
                ``data_check`` with one validation output per present key.
        """
        validation_dict = {
            "structure_type": isinstance(record,dict),
            "unknown_keys": None,
            "missing_keys": None,
            "data_check": None}
        if validation_dict["structure_type"] is False:
            return validation_dict
        validation_dict["unknown_keys"] = len(self.unknown_keys(record)) == 0
        validation_dict["missing_keys"] = len(self.missing_keys(record)) == 0
        validation_dict["data_check"] = {
            k:self.structures[k].validate(v)
            for k,v in record.items() if k in self.structures}
        return validation_dict

    def failures(self, record: Dict[str,Any]) -> List[str]:
        """Validates ``record`` and returns every failure as a message.

        Args:
            record (Dict[str,Any]): input record.

        Returns:
            List[str]: failure messages (empty when the record is valid).
        """
        output = self.validate(record)
        if output["structure_type"] is False:
            return [f"expected a mapping, got {type(record).__name__}"]
        msgs = [f"unknown key '{k}'" for k in self.unknown_keys(record)]
        msgs += [f"missing required key '{k}'"
                 for k in self.missing_keys(record)]
        for k,field_output in output["data_check"].items():
            msgs += [f"{k}: {m}"
                     for m in self.structures[k].messages(field_output)]
        return msgs

def pprint(output: Dict[str,Any], indent: int=0):
    """Prints a validation output (or any nested dict of results) with pass
    values in green and failures in red. Floats are printed as is.

    Args:
        output (Dict[str,Any]): dictionary to print.
        indent (int, optional): indentation level. Defaults to 0.
    """
    def color_val(val: Any):
        if val is True:
            return colored(val,"green")
        if val is False:
            return colored(val,"red")
        return val

    pad = " " * indent
    for key,val in output.items():
        if isinstance(val,dict):
            print(f"{pad}{key}:")
            pprint(val,indent + 2)
        else:
            print(f"{pad} - {key}: {color_val(val)}")
