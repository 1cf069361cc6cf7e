#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Published reference runs. Each preset stores the setting of one reported
run (task, V, H, data sizes), the reported stopping epoch and the reported
train/val/test token accuracies. Presets with V = 1000 or 135k training
pairs are marked as long runs. Presets that can be reproduced on a desktop
carry the minimum test token accuracy expected from a reproduction.
"""

from collections import OrderedDict
from dataclasses import dataclass
from typing import Dict,List,Tuple

from .._exceptions import ConfigError
from .run_config import RunConfig

__all__ = [
    "ExperimentPreset",
    "PRESETS",
    "SCALING_CHECKS",
    "get_preset",
    "list_presets"]

@dataclass(frozen=True)
class ExperimentPreset:
    """A reference run.

    Args:
        name (str): preset identifier.
        task (str): task kind.
        vocab_size (int): vocabulary size V.
        hidden_size (int): LSTM width H.
        sizes (Tuple[int,int,int]): train, val and test sizes.
        reported_epoch (int): reported training epoch (observed stop epoch,
            not a target). None when nothing was reported.
        reported_accuracy (Tuple[float,float,float]): reported train, val and
            test token accuracy. None when nothing was reported.
        min_test_accuracy (float): test token accuracy a reproduction should
            reach. Defaults to None (no threshold).
        min_order_rho (float): minimum |rho| of the embedding order
            diagnostic. Defaults to None.
        note (str): remark shown with the preset. Defaults to "".
    """
    name: str
    task: str
    vocab_size: int
    hidden_size: int
    sizes: Tuple[int,int,int]
    reported_epoch: int
    reported_accuracy: Tuple[float,float,float]
    min_test_accuracy: float = None
    min_order_rho: float = None
    note: str = ""

    @property
    def desk_scale(self) -> bool:
        return self.vocab_size < 1000 and self.sizes[0] < 135000

    def run_config(self, **overrides) -> RunConfig:
        """Builds the run config of the preset; ``overrides`` (None values
        ignored) replace any field."""
        record = {
            "task": self.task,
            "vocab_size": self.vocab_size,
            "hidden_size": self.hidden_size,
            "train_size": self.sizes[0],
            "val_size": self.sizes[1],
            "test_size": self.sizes[2]}
        record.update({k:v for k,v in overrides.items() if v is not None})
        return RunConfig.from_dict(record)

SMALL = (9000,1000,10000)
LARGE = (135000,15000,10000)

_ROWS = [
    # name, task, V, H, sizes, E, (train, val, test), min test acc, min |rho|, note
    ("reverse-v10-h128-9k","reverse",10,128,SMALL,200,(0.9362,0.8732,0.8731),0.80,None,""),
    ("reverse-v100-h128-9k","reverse",100,128,SMALL,200,(0.3967,0.1884,0.1883),None,None,""),
    ("reverse-v100-h128-135k","reverse",100,128,LARGE,200,(0.9690,0.9613,0.9623),None,None,""),
    ("reverse-v100-h256-135k","reverse",100,256,LARGE,81,(0.9904,0.9784,0.9787),None,None,
     "reported data sizes 135k,150k,10k read as 135k,15k,10k"),
    ("reverse-v1000-h256-135k","reverse",1000,256,LARGE,133,(0.9410,0.9151,0.9155),None,None,""),
    ("sort-v10-h128-9k","sort",10,128,SMALL,114,(0.9744,0.9952,0.9956),0.90,0.9,""),
    ("sort-v100-h128-9k","sort",100,128,SMALL,200,(0.6370,0.5003,0.4996),None,None,""),
    ("sort-v100-h128-27k","sort",100,128,(27000,3000,10000),None,None,None,None,
     "desktop-sized stand-in for the 135k run, compared with sort-v100-h128-9k"),
    ("sort-v100-h128-135k","sort",100,128,LARGE,82,(0.9882,0.9907,0.9906),None,None,""),
    ("sort-v100-h256-135k","sort",100,256,LARGE,62,(0.9886,0.9965,0.9969),None,None,""),
    ("sort-v1000-h256-135k","sort",1000,256,LARGE,127,(0.9069,0.7958,0.7971),None,None,""),
    ("replace-v10-h128-9k","replace",10,128,SMALL,180,(0.9635,0.9172,0.9150),0.85,None,""),
    ("replace-v100-h128-9k","replace",100,128,SMALL,200,(0.7392,0.5472,0.5488),None,None,""),
    ("replace-v100-h128-135k","replace",100,128,LARGE,61,(0.9927,0.9911,0.9912),None,None,""),
    ("replace-v100-h256-135k","replace",100,256,LARGE,40,(0.9974,0.9997,0.9975),None,None,""),
    ("replace-v1000-h256-135k","replace",1000,256,LARGE,75,(0.9868,0.9884,0.9885),None,None,""),
    ("combine-v10-h128-9k","combine",10,128,SMALL,21,(0.9150,0.8662,0.8660),0.78,None,""),
    ("combine-v100-h128-9k","combine",100,128,SMALL,130,(0.7570,0.6670,0.6599),None,None,""),
    ("combine-v100-h128-135k","combine",100,128,LARGE,122,(0.9909,0.9985,0.9982),None,None,""),
    ("combine-v100-h256-135k","combine",100,256,LARGE,21,(0.9897,0.9987,0.9988),None,None,""),
    ("combine-v1000-h256-135k","combine",1000,256,LARGE,107,(0.9570,0.9405,0.9404),None,None,""),
]

PRESETS: Dict[str,ExperimentPreset] = OrderedDict(
    (row[0],ExperimentPreset(*row)) for row in _ROWS)

# (smaller data, larger data, minimum test accuracy gain)
SCALING_CHECKS: List[Tuple[str,str,float]] = [
    ("sort-v100-h128-9k","sort-v100-h128-27k",0.05)]

def get_preset(name: str) -> ExperimentPreset:
    """Returns the preset called ``name``.

    Raises:
        ConfigError: if there is no such preset.
    """
    if name not in PRESETS:
        raise ConfigError(f"unknown experiment '{name}' (see 'reproduce --list')")
    return PRESETS[name]

def list_presets(desk_scale_only: bool=False) -> List[ExperimentPreset]:
    return [p for p in PRESETS.values() if p.desk_scale or not desk_scale_only]
