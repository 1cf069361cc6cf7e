#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Training loop and evaluation. Every epoch shuffles the training split with
the seeded shuffle stream, runs RMSprop over mini-batches (the last partial
batch included) and evaluates loss and accuracy on the train and val
splits. Early stopping monitors the validation loss and the best epoch's
weights are restored at the end.
"""

import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass,asdict,field
from typing import Any,Dict,List,Tuple

import numpy as np

from ..tensor_core import SeededRng,STREAM_SHUFFLE
from ..nn_layers import cross_entropy
from ..models import Seq2SeqModel,Checkpoint,argmax_tokens
from ..tasks import Dataset,Split
from .._exceptions import ConfigError,DivergenceError
from .early_stopping import EarlyStopping
from .rmsprop import TrainConfig,RmspropState,rmsprop_step

__all__ = [
    "METRIC_FIELDS",
    "EpochMetrics",
    "EvalMetrics",
    "TrainResult",
    "token_accuracy",
    "evaluate",
    "train"]

METRIC_FIELDS = (
    "epoch","train_loss","val_loss","train_token_acc","val_token_acc","wall_time")
EVAL_CHUNK = 256

@dataclass
class EpochMetrics:
    """Metrics recorded after one epoch."""
    epoch: int
    train_loss: float
    val_loss: float
    train_token_acc: float
    val_token_acc: float
    wall_time: float = 0.0

    def to_dict(self) -> Dict[str,Any]:
        return asdict(self)

@dataclass
class EvalMetrics:
    """Loss and accuracies of a model on one split.

    Args:
        loss (float): mean per-token cross-entropy.
        token_acc (float): fraction of positions predicted correctly.
        seq_acc (float): fraction of sequences predicted entirely correctly.
    """
    loss: float
    token_acc: float
    seq_acc: float

    def to_dict(self) -> Dict[str,float]:
        return asdict(self)

@dataclass
class TrainResult:
    """Outcome of ``train``.

    Args:
        history (List[EpochMetrics]): metrics of every completed epoch.
        best (Checkpoint): snapshot of the epoch with the lowest validation
            loss (the untrained model if no epoch completed).
        best_epoch (int): epoch of ``best`` (0 for the untrained model).
        stop_epoch (int): last completed epoch.
        early_stopped (bool): whether early stopping ended the run.
        diverged (bool): whether a non-finite loss or gradient ended the run.
    """
    history: List[EpochMetrics] = field(default_factory=list)
    best: Checkpoint = None
    best_epoch: int = 0
    stop_epoch: int = 0
    early_stopped: bool = False
    diverged: bool = False

def token_accuracy(predictions: np.ndarray, targets: np.ndarray) -> Tuple[float,float]:
    """Token and sequence accuracy of predicted token matrices.

    Args:
        predictions (np.ndarray): predicted tokens (N, L).
        targets (np.ndarray): target tokens (N, L).

    Returns:
        Tuple[float,float]: token accuracy and sequence accuracy.
    """
    predictions = np.atleast_2d(predictions)
    targets = np.atleast_2d(targets)
    correct = predictions == targets
    return float(correct.mean()),float(correct.all(axis=-1).mean())

def _evaluate_chunks(model: Seq2SeqModel,
                     x: np.ndarray,
                     y: np.ndarray,
                     bounds: List[Tuple[int,int]]) -> List[Tuple[float,int,int]]:
    out = []
    for start,end in bounds:
        probs = model.forward(x[start:end])
        loss,_ = cross_entropy(probs,y[start:end])
        correct = argmax_tokens(probs) == y[start:end]
        out.append((loss * correct.size,int(correct.sum()),int(correct.all(-1).sum())))
    return out

def evaluate(model: Seq2SeqModel,
             split: Split,
             threads: int=1,
             chunk_size: int=EVAL_CHUNK) -> EvalMetrics:
    """Evaluates ``model`` on a split.

    The split is cut into fixed chunks. With several threads, contiguous
    groups of chunks are evaluated by independent clones of the model and
    the per-chunk sums are combined in chunk order, so the metrics do not
    depend on ``threads``.

    Args:
        model (Seq2SeqModel): model.
        split (Split): nonempty split.
        threads (int, optional): number of workers. Defaults to 1.
        chunk_size (int, optional): sequences per chunk. Defaults to 256.

    Raises:
        ValueError: if the split is empty.

    Returns:
        EvalMetrics: loss, token accuracy and sequence accuracy.
    """
    n = len(split)
    if n == 0:
        raise ValueError("cannot evaluate on an empty split")
    bounds = [(s,min(s + chunk_size,n)) for s in range(0,n,chunk_size)]
    threads = max(1,min(threads,len(bounds)))
    if threads == 1:
        chunks = _evaluate_chunks(model,split.x,split.y,bounds)
    else:
        per_worker = math.ceil(len(bounds) / threads)
        groups = [bounds[i:i + per_worker] for i in range(0,len(bounds),per_worker)]
        with ThreadPoolExecutor(max_workers=len(groups)) as executor:
            futures = [executor.submit(_evaluate_chunks,model.clone(),split.x,split.y,g)
                       for g in groups]
            chunks = [c for future in futures for c in future.result()]
    loss_sum = 0.0
    token_hits = 0
    seq_hits = 0
    for chunk_loss,chunk_tokens,chunk_seqs in chunks:
        loss_sum += chunk_loss
        token_hits += chunk_tokens
        seq_hits += chunk_seqs
    return EvalMetrics(loss_sum / split.y.size,token_hits / split.y.size,seq_hits / n)

def _check_compatible(model: Seq2SeqModel, dataset: Dataset, config: TrainConfig):
    cfg,task = model.config,dataset.task
    problems = []
    if cfg.vocab_size != task.vocab_size:
        problems.append(f"model vocab_size {cfg.vocab_size} != dataset {task.vocab_size}")
    if cfg.input_length != task.length:
        problems.append(f"model input_length {cfg.input_length} != dataset {task.length}")
    if cfg.precision != config.precision:
        problems.append(f"model precision {cfg.precision} != training {config.precision}")
    if len(dataset.train) == 0 or len(dataset.val) == 0:
        problems.append("training needs nonempty train and val splits")
    if problems:
        raise ConfigError("; ".join(problems))

def _run_epoch(model: Seq2SeqModel,
               split: Split,
               order: np.ndarray,
               state: RmspropState,
               config: TrainConfig):
    params = model.parameters()
    for start in range(0,len(order),config.batch_size):
        idx = order[start:start + config.batch_size]
        loss,grads = model.loss_and_gradients(split.x[idx],split.y[idx])
        if not math.isfinite(loss):
            raise DivergenceError(f"non-finite training loss at batch offset {start}")
        rmsprop_step(state,params,grads,config)

def train(model: Seq2SeqModel,
          dataset: Dataset,
          config: TrainConfig,
          verbose: int=logging.WARNING) -> TrainResult:
    """Trains ``model`` in place and leaves it holding the best weights.

    Args:
        model (Seq2SeqModel): model to train.
        dataset (Dataset): dataset with nonempty train and val splits.
        config (TrainConfig): training settings.
        verbose (int, optional): logging level. Defaults to logging.WARNING.

    Raises:
        ConfigError: if the model and the dataset disagree on vocabulary
            size or sequence length, or the precisions differ.

    Returns:
        TrainResult: history and best snapshot. A divergence stops training
            and restores the last good weights instead of raising.
    """
    logger = logging.getLogger("trainer")
    logger.setLevel(verbose)
    _check_compatible(model,dataset,config)
    shuffle_rng = SeededRng(config.seed,STREAM_SHUFFLE)
    state = RmspropState()
    stopper = EarlyStopping(config.patience,verbose=verbose)
    result = TrainResult(best=Checkpoint.from_model(model,epoch=0,seed=config.seed))
    for epoch in range(1,config.max_epochs + 1):
        start_time = time.perf_counter()
        order = shuffle_rng.permutation(len(dataset.train))
        try:
            _run_epoch(model,dataset.train,order,state,config)
            train_metrics = evaluate(model,dataset.train,config.threads)
            val_metrics = evaluate(model,dataset.val,config.threads)
            if not math.isfinite(val_metrics.loss):
                raise DivergenceError("non-finite validation loss")
        except DivergenceError as error:
            logger.error(
                "epoch %d diverged (%s); keeping epoch %d",epoch,error,result.best_epoch)
            result.diverged = True
            break
        wall_time = time.perf_counter() - start_time if config.record_wall_time else 0.0
        metrics = EpochMetrics(
            epoch,train_metrics.loss,val_metrics.loss,
            train_metrics.token_acc,val_metrics.token_acc,wall_time)
        result.history.append(metrics)
        result.stop_epoch = epoch
        logger.info(
            "epoch %d: train_loss=%.4f val_loss=%.4f train_acc=%.4f val_acc=%.4f",
            epoch,metrics.train_loss,metrics.val_loss,
            metrics.train_token_acc,metrics.val_token_acc)
        stop = stopper(
            epoch,val_metrics.loss,
            Checkpoint.from_model(model,epoch=epoch,seed=config.seed))
        if stopper.best_epoch == epoch:
            result.best = stopper.best_weights
            result.best_epoch = epoch
        if stop:
            result.early_stopped = True
            break
    result.best.restore(model)
    logger.info("restored weights of epoch %d",result.best_epoch)
    return result
