#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Run configuration: one flat JSON document holding the task, model, training
and output settings of a run. Documents are validated field by field and
unknown keys are refused.
"""

import json
import logging
from dataclasses import dataclass,asdict
from pathlib import Path
from typing import Any,Dict,Tuple,Union

from ..validation import FieldValidator,RecordValidator
from ..tasks import TaskKind,TaskSpec
from ..models import ModelConfig
from ..training import TrainConfig
from .._exceptions import ConfigError

__all__ = [
    "RUN_CONFIG_VALIDATOR",
    "RunConfig",
    "load_run_config"]

def _positive_int(required: bool=False) -> FieldValidator:
    return FieldValidator(type=int,range=[1,None],required=required)

def _path() -> FieldValidator:
    return FieldValidator(type=str,nullable=True)

RUN_CONFIG_VALIDATOR = RecordValidator({
    "task": FieldValidator(
        type=str,choices=[k.value for k in TaskKind],required=True),
    "vocab_size": FieldValidator(type=int,range=[2,None],required=True),
    "length": _positive_int(),
    "modulus": FieldValidator(type=int,range=[1,None],nullable=True),
    "train_size": _positive_int(),
    "val_size": _positive_int(),
    "test_size": _positive_int(),
    "hidden_size": _positive_int(),
    "embed_dim": _positive_int(),
    "use_embedding": FieldValidator(type=bool),
    "state_handoff": FieldValidator(type=bool),
    "batch_size": _positive_int(),
    "learning_rate": FieldValidator(type=(float,int),range=[0,None]),
    "rho": FieldValidator(type=(float,int),range=[0,1]),
    "epsilon": FieldValidator(type=(float,int),range=[0,None]),
    "max_epochs": FieldValidator(type=int,range=[0,None]),
    "patience": _positive_int(),
    "seed": FieldValidator(type=int,range=[0,2 ** 64 - 1]),
    "threads": _positive_int(),
    "precision": FieldValidator(type=str,choices=["single","double"]),
    "out_dir": FieldValidator(type=str),
    "dataset_path": _path(),
    "checkpoint_path": _path(),
    "record_wall_time": FieldValidator(type=bool),
    "verbose": FieldValidator(type=int,range=[0,2])})

@dataclass(frozen=True)
class RunConfig:
    """Settings of a run. Only ``task`` and ``vocab_size`` have no default;
    ``modulus`` defaults to V/5 for replace and combine.

    Args:
        task (str): task kind.
        vocab_size (int): vocabulary size V.
        length (int, optional): sequence length L. Defaults to 25.
        modulus (int, optional): replace/combine modulus. Defaults to V/5.
        train_size (int, optional): training pairs. Defaults to 9000.
        val_size (int, optional): validation pairs. Defaults to 1000.
        test_size (int, optional): test pairs. Defaults to 10000.
        hidden_size (int, optional): LSTM width H. Defaults to 128.
        embed_dim (int, optional): embedding size D. Defaults to 300.
        use_embedding (bool, optional): learned embedding instead of one-hot
            inputs. Defaults to True.
        state_handoff (bool, optional): decoder starts from the encoder
            states. Defaults to False.
        batch_size (int, optional): mini-batch size. Defaults to 128.
        learning_rate (float, optional): RMSprop step size. Defaults to 1e-3.
        rho (float, optional): RMSprop decay. Defaults to 0.9.
        epsilon (float, optional): RMSprop offset. Defaults to 1e-8.
        max_epochs (int, optional): epoch limit. Defaults to 200.
        patience (int, optional): early stopping patience. Defaults to 5.
        seed (int, optional): seed of the data, init and shuffle streams.
            Defaults to 1.
        threads (int, optional): evaluation workers. Defaults to 1.
        precision (str, optional): "single" or "double". Defaults to
            "single".
        out_dir (str, optional): output directory. Defaults to "runs".
        dataset_path (str, optional): dataset file. Defaults to None.
        checkpoint_path (str, optional): checkpoint file. Defaults to None.
        record_wall_time (bool, optional): store measured epoch times.
            Defaults to False.
        verbose (int, optional): 0 (warnings), 1 (info) or 2 (debug).
            Defaults to 0.
    """
    task: str
    vocab_size: int
    length: int = 25
    modulus: int = None
    train_size: int = 9000
    val_size: int = 1000
    test_size: int = 10000
    hidden_size: int = 128
    embed_dim: int = 300
    use_embedding: bool = True
    state_handoff: bool = False
    batch_size: int = 128
    learning_rate: float = 1e-3
    rho: float = 0.9
    epsilon: float = 1e-8
    max_epochs: int = 200
    patience: int = 5
    seed: int = 1
    threads: int = 1
    precision: str = "single"
    out_dir: str = "runs"
    dataset_path: str = None
    checkpoint_path: str = None
    record_wall_time: bool = False
    verbose: int = 0

    def __post_init__(self):
        if self.modulus is None and TaskKind(self.task).needs_modulus:
            object.__setattr__(self,"modulus",TaskSpec.default_modulus(self.vocab_size))

    @classmethod
    def from_dict(cls, record: Dict[str,Any]) -> "RunConfig":
        """Validates ``record`` and builds a config from it.

        Args:
            record (Dict[str,Any]): configuration keys and values.

        Raises:
            ConfigError: listing every unknown key, missing key and failed
                check.

        Returns:
            RunConfig: the config.
        """
        failures = RUN_CONFIG_VALIDATOR.failures(record)
        if failures:
            raise ConfigError("invalid run config: " + "; ".join(failures))
        record = {k:v for k,v in record.items() if v is not None}
        config = cls(**record)
        config.task_spec()
        config.model_config()
        config.train_config()
        return config

    def to_dict(self) -> Dict[str,Any]:
        return asdict(self)

    def updated(self, **changes) -> "RunConfig":
        """Returns a validated copy with ``changes`` applied."""
        return RunConfig.from_dict({**self.to_dict(),**changes})

    @property
    def sizes(self) -> Tuple[int,int,int]:
        return (self.train_size,self.val_size,self.test_size)

    @property
    def log_level(self) -> int:
        return [logging.WARNING,logging.INFO,logging.DEBUG][self.verbose]

    def task_spec(self) -> TaskSpec:
        return TaskSpec(self.task,self.vocab_size,self.length,self.modulus)

    def model_config(self) -> ModelConfig:
        return ModelConfig(
            vocab_size=self.vocab_size,
            embed_dim=self.embed_dim,
            hidden_size=self.hidden_size,
            input_length=self.length,
            output_length=self.length,
            use_embedding=self.use_embedding,
            state_handoff=self.state_handoff,
            precision=self.precision)

    def train_config(self) -> TrainConfig:
        return TrainConfig(
            learning_rate=float(self.learning_rate),
            rho=float(self.rho),
            epsilon=float(self.epsilon),
            batch_size=self.batch_size,
            max_epochs=self.max_epochs,
            patience=self.patience,
            seed=self.seed,
            precision=self.precision,
            threads=self.threads,
            record_wall_time=self.record_wall_time)

def load_run_config(path: Union[str,Path]=None,
                    overrides: Dict[str,Any]=None) -> RunConfig:
    """Reads a JSON run config and applies overrides on top of it.

    Args:
        path (Union[str,Path], optional): JSON file. Defaults to None (only
            overrides are used).
        overrides (Dict[str,Any], optional): values that replace those of the
            file; None values are ignored. Defaults to None.

    Raises:
        ConfigError: if the file is not a JSON object or the merged config
            is invalid.

    Returns:
        RunConfig: the config.
    """
    record = {}
    if path is not None:
        try:
            record = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as error:
            raise ConfigError(f"{path} is not valid JSON: {error}") from error
        if not isinstance(record,dict):
            raise ConfigError(f"{path} must contain a JSON object")
    record.update({k:v for k,v in (overrides or {}).items() if v is not None})
    return RunConfig.from_dict(record)
