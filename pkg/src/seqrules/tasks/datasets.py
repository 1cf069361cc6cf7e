#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Datasets of task pairs split into train/val/test, and their text format.

A dataset file starts with ``# key=value`` header lines (``task``,
``vocab_size``, ``length``, ``modulus``, ``seed``, ``train_size``,
``val_size``, ``test_size``). Each split then starts with a
``# split=<name>`` line (train, val and test, in this order) followed by one
line per pair: the input tokens separated by single spaces, a tab, and the
output tokens separated by single spaces.
"""

import logging
from collections import OrderedDict
from dataclasses import dataclass
from pathlib import Path
from typing import Dict,Iterator,List,Sequence,Union

import numpy as np

from ..tensor_core import SeededRng,STREAM_DATA
from ..nn_layers import check_tokens
from ..validation import FieldValidator,RecordValidator
from .._exceptions import ConfigError,DatasetFormatError,TokenRangeError
from .tasks import TaskKind,TaskSpec,SequencePair,oracle_apply,generate_batch

__all__ = [
    "SPLIT_NAMES",
    "Split",
    "Dataset",
    "make_dataset",
    "cross_split_duplicates",
    "save_dataset",
    "load_dataset"]

SPLIT_NAMES = ("train","val","test")

HEADER_VALIDATOR = RecordValidator({
    "task": FieldValidator(
        type=str,choices=[k.value for k in TaskKind],required=True),
    "vocab_size": FieldValidator(type=int,range=[2,None],required=True),
    "length": FieldValidator(type=int,range=[1,None],required=True),
    "modulus": FieldValidator(type=int,range=[1,None],nullable=True),
    "seed": FieldValidator(type=int,range=[0,None],required=True),
    "train_size": FieldValidator(type=int,range=[0,None],required=True),
    "val_size": FieldValidator(type=int,range=[0,None],required=True),
    "test_size": FieldValidator(type=int,range=[0,None],required=True)})

logger = logging.getLogger("datasets")

@dataclass(eq=False)
class Split:
    """Pairs of one split stored as two token matrices.

    Args:
        x (np.ndarray): inputs (N, L).
        y (np.ndarray): outputs (N, L).
    """
    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        self.x = np.asarray(self.x,dtype=np.int64)
        self.y = np.asarray(self.y,dtype=np.int64)
        if self.x.ndim != 2 or self.x.shape != self.y.shape:
            raise ValueError(
                f"split inputs {self.x.shape} and outputs {self.y.shape} "
                "must be matrices of the same shape")

    def __len__(self) -> int:
        return self.x.shape[0]

    def __getitem__(self, idx: int) -> SequencePair:
        return SequencePair(self.x[idx],self.y[idx])

    def __iter__(self) -> Iterator[SequencePair]:
        for idx in range(len(self)):
            yield self[idx]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other,Split):
            return NotImplemented
        return np.array_equal(self.x,other.x) and np.array_equal(self.y,other.y)

    @classmethod
    def from_pairs(cls, pairs: Sequence[SequencePair], length: int) -> "Split":
        x = np.array([p.x for p in pairs],dtype=np.int64).reshape(-1,length)
        y = np.array([p.y for p in pairs],dtype=np.int64).reshape(-1,length)
        return cls(x,y)

@dataclass(eq=False)
class Dataset:
    """A task with its train, val and test splits.

    Args:
        task (TaskSpec): task the pairs were drawn from.
        seed (int): generation seed.
        train (Split): training split.
        val (Split): validation split.
        test (Split): test split.
    """
    task: TaskSpec
    seed: int
    train: Split
    val: Split
    test: Split

    def splits(self) -> "OrderedDict[str,Split]":
        return OrderedDict((name,getattr(self,name)) for name in SPLIT_NAMES)

    @property
    def sizes(self) -> Dict[str,int]:
        return {name:len(split) for name,split in self.splits().items()}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other,Dataset):
            return NotImplemented
        return self.task == other.task and self.seed == other.seed and \
            all(a == b for a,b in zip(self.splits().values(),other.splits().values()))

def cross_split_duplicates(dataset: Dataset) -> int:
    """Counts input sequences found in more than one split.

    Args:
        dataset (Dataset): dataset.

    Returns:
        int: number of pairs whose input also occurs in an earlier split.
    """
    seen = set()
    duplicates = 0
    for split in dataset.splits().values():
        rows = {row.tobytes() for row in split.x}
        duplicates += len(rows & seen)
        seen |= rows
    return duplicates

def make_dataset(task: TaskSpec,
                 sizes: Sequence[int],
                 seed: int,
                 verbose: int=logging.WARNING) -> Dataset:
    """Generates a dataset; each split is drawn from its own substream of the
    data stream of ``seed``, so splits do not depend on each other's sizes.
    No deduplication is performed; cross-split duplicates are logged.

    Args:
        task (TaskSpec): task.
        sizes (Sequence[int]): train, val and test sizes (positive).
        seed (int): generation seed.
        verbose (int, optional): logging level. Defaults to logging.WARNING.

    Raises:
        ConfigError: if sizes are not three positive integers.

    Returns:
        Dataset: the dataset.
    """
    logger.setLevel(verbose)
    sizes = tuple(sizes)
    if len(sizes) != 3 or any(s < 1 for s in sizes):
        raise ConfigError(f"expected three positive split sizes, got {sizes}")
    rng = SeededRng(seed,STREAM_DATA)
    splits = [Split(*generate_batch(task,rng.substream(i),size))
              for i,size in enumerate(sizes)]
    dataset = Dataset(task,seed,*splits)
    duplicates = cross_split_duplicates(dataset)
    if duplicates > 0:
        logger.warning("%d inputs occur in more than one split",duplicates)
    logger.info("generated %s dataset with sizes %s (seed %d)",task.kind,sizes,seed)
    return dataset

def _format_tokens(tokens: np.ndarray) -> str:
    return " ".join(str(int(t)) for t in tokens)

def save_dataset(dataset: Dataset, path: Union[str,Path]) -> Path:
    """Writes a dataset in the text format described in this module.

    Args:
        dataset (Dataset): dataset.
        path (Union[str,Path]): output file.

    Returns:
        Path: the written path.
    """
    task = dataset.task
    header = OrderedDict([
        ("task",task.kind),
        ("vocab_size",task.vocab_size),
        ("length",task.length),
        ("modulus","none" if task.modulus is None else task.modulus),
        ("seed",dataset.seed)])
    for name,size in dataset.sizes.items():
        header[f"{name}_size"] = size
    lines = [f"# {k}={v}" for k,v in header.items()]
    for name,split in dataset.splits().items():
        lines.append(f"# split={name}")
        lines.extend(
            f"{_format_tokens(x)}\t{_format_tokens(y)}"
            for x,y in zip(split.x,split.y))
    path = Path(path)
    with open(path,"w",encoding="utf-8",newline="\n") as o:
        o.write("\n".join(lines) + "\n")
    logger.info("wrote %d pairs to %s",sum(dataset.sizes.values()),path)
    return path

def _parse_header_value(key: str, value: str, line_number: int):
    if key == "task":
        return value
    if key == "modulus" and value == "none":
        return None
    try:
        return int(value)
    except ValueError:
        raise DatasetFormatError(f"'{key}' must be an integer, got '{value}'",line_number)

def _parse_tokens(text: str, length: int, line_number: int) -> List[int]:
    fields = text.split(" ")
    try:
        tokens = [int(t) for t in fields]
    except ValueError:
        raise DatasetFormatError(f"non-integer token in '{text}'",line_number)
    if len(tokens) != length:
        raise DatasetFormatError(
            f"expected {length} tokens, found {len(tokens)}",line_number)
    return tokens

def load_dataset(path: Union[str,Path], verbose: int=logging.WARNING) -> Dataset:
    """Reads a dataset written by ``save_dataset``.

    Args:
        path (Union[str,Path]): dataset file.
        verbose (int, optional): logging level. Defaults to logging.WARNING.

    Raises:
        DatasetFormatError: on malformed lines (with their line number),
            invalid headers, tokens outside ``[0, V)``, outputs that do not
            follow the task, or split sizes that differ from the header
            or bytes that are not valid UTF-8.

    Returns:
        Dataset: the dataset.
    """
    logger.setLevel(verbose)
    payload = Path(path).read_bytes()
    try:
        text = payload.decode("utf-8")
    except UnicodeDecodeError as error:
        raise DatasetFormatError(
            f"invalid UTF-8 byte {payload[error.start:error.start + 1]!r}",
            payload[:error.start].count(b"\n") + 1) from error
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines = lines[:-1]
    header = {}
    rows = OrderedDict()
    task = None
    current = None
    for line_number,line in enumerate(lines,start=1):
        if line.startswith("# "):
            key,sep,value = line[2:].partition("=")
            if sep == "":
                raise DatasetFormatError(f"malformed header line '{line}'",line_number)
            if key == "split":
                expected = SPLIT_NAMES[len(rows)] if len(rows) < 3 else None
                if value != expected:
                    raise DatasetFormatError(
                        f"expected split marker for '{expected}', got '{value}'",
                        line_number)
                if task is None:
                    task = _task_from_header(header,line_number)
                current = rows[value] = []
                continue
            if current is not None:
                raise DatasetFormatError(
                    f"header line '{line}' after the first split marker",line_number)
            if key in header:
                raise DatasetFormatError(f"duplicate header key '{key}'",line_number)
            header[key] = _parse_header_value(key,value,line_number)
            continue
        if current is None:
            raise DatasetFormatError("pair line before the first split marker",line_number)
        if line.count("\t") != 1:
            raise DatasetFormatError("expected exactly one tab between input and output",
                                     line_number)
        x_text,y_text = line.split("\t")
        x = np.array(_parse_tokens(x_text,task.length,line_number),dtype=np.int64)
        y = np.array(_parse_tokens(y_text,task.length,line_number),dtype=np.int64)
        try:
            check_tokens(np.concatenate([x,y]),task.vocab_size)
        except TokenRangeError as error:
            raise DatasetFormatError(str(error),line_number) from error
        if not np.array_equal(y,oracle_apply(task,x)):
            raise DatasetFormatError(f"output does not follow the '{task.kind}' rule",
                                     line_number)
        current.append(SequencePair(x,y))
    if task is None or list(rows) != list(SPLIT_NAMES):
        raise DatasetFormatError(
            f"expected split markers {list(SPLIT_NAMES)}, found {list(rows)}")
    splits = []
    for name,pairs in rows.items():
        if len(pairs) != header[f"{name}_size"]:
            raise DatasetFormatError(
                f"header declares {header[f'{name}_size']} {name} pairs, found {len(pairs)}")
        splits.append(Split.from_pairs(pairs,task.length))
    dataset = Dataset(task,header["seed"],*splits)
    logger.info("loaded %s dataset with sizes %s from %s",task.kind,dataset.sizes,path)
    return dataset

def _task_from_header(header: Dict[str,object], line_number: int) -> TaskSpec:
    failures = HEADER_VALIDATOR.failures(header)
    if failures:
        raise DatasetFormatError(f"invalid header: {'; '.join(failures)}",line_number)
    try:
        return TaskSpec(header["task"],header["vocab_size"],
                        header["length"],header.get("modulus"))
    except ConfigError as error:
        raise DatasetFormatError(f"invalid header: {error}",line_number) from error
