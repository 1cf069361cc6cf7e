#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Early stopping on validation loss.
"""

import logging
from dataclasses import dataclass,field
from typing import Any

__all__ = ["EarlyStopping"]

@dataclass
class EarlyStopping:
    """
    Stops training once the validation loss has not improved for
    ``patience`` consecutive epochs and keeps the weights of the best epoch.
    An epoch improves when its loss is strictly lower than the best loss
    minus ``min_delta``.

    Args:
        patience (int, optional): epochs to wait after the last improvement.
            Defaults to 5.
        min_delta (float, optional): minimum decrease counted as an
            improvement. Defaults to 0.0.
        verbose (int, optional): logging level. Defaults to logging.WARNING.
    """
    patience: int = 5
    min_delta: float = 0.0
    verbose: int = logging.WARNING

    best_loss: float = field(default=float("inf"),init=False)
    best_epoch: int = field(default=0,init=False)
    best_weights: Any = field(default=None,init=False,repr=False)
    wait: int = field(default=0,init=False)
    stopped_epoch: int = field(default=0,init=False)

    def __post_init__(self):
        if self.patience < 1:
            raise ValueError(f"patience must be >= 1, got {self.patience}")
        self.logger = logging.getLogger("early_stopping")
        self.logger.setLevel(self.verbose)

    @property
    def should_stop(self) -> bool:
        return self.stopped_epoch > 0

    def __call__(self, epoch: int, val_loss: float, weights: Any=None) -> bool:
        """Records the validation loss of ``epoch``.

        Args:
            epoch (int): 1-based epoch number.
            val_loss (float): validation loss of the epoch.
            weights (Any, optional): snapshot to keep if this is the best
                epoch so far. Defaults to None.

        Returns:
            bool: True if training should stop after this epoch.
        """
        if val_loss < self.best_loss - self.min_delta:
            self.best_loss = val_loss
            self.best_epoch = epoch
            self.best_weights = weights
            self.wait = 0
            self.logger.debug("epoch %d: validation loss improved to %.6f",epoch,val_loss)
        else:
            self.wait += 1
            self.logger.debug(
                "epoch %d: no improvement (%d/%d)",epoch,self.wait,self.patience)
            if self.wait >= self.patience:
                self.stopped_epoch = epoch
                self.logger.info(
                    "early stopping at epoch %d, best epoch %d (val_loss=%.6f)",
                    epoch,self.best_epoch,self.best_loss)
        return self.should_stop
