#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Command line interface.

    seqrules gen --task reverse --vocab 10 --seed 1 --out-dir runs/reverse
    seqrules train --config run.json --max-epochs 50
    seqrules eval --checkpoint runs/reverse/model.ckpt --dataset runs/reverse/dataset.txt
    seqrules pca --checkpoint runs/sort/model.ckpt
    seqrules gradcheck
    seqrules reproduce sort-v10-h128-9k

Exit codes: 0 on success, 2 for usage and configuration errors and 3 for
data, checkpoint and file errors.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any,Dict,List

from termcolor import colored

from ..nn_layers import check_embedding_layer,check_lstm_layer,check_projection_layer
from ..models import ModelConfig,Seq2SeqModel,check_model_gradients,save_checkpoint,load_checkpoint
from ..tasks import Dataset,make_dataset,save_dataset,load_dataset
from ..training import evaluate,train
from ..analysis import embedding_pca,order_diagnostic,emit_report,write_pca_csv
from ..validation import pprint
from .._exceptions import ConfigError,SeqrulesError
from .._authoring import __version__
from .experiments import PRESETS,SCALING_CHECKS,get_preset
from .run_config import RunConfig,load_run_config

__all__ = [
    "build_parser",
    "cmd_gen",
    "cmd_train",
    "cmd_eval",
    "cmd_pca",
    "cmd_gradcheck",
    "cmd_reproduce",
    "main",
    "run"]

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3
GRADCHECK_TOLERANCE = 1e-4

logger = logging.getLogger("seqrules.cli")

# flag, config key, type, help
RUN_FLAGS = [
    ("--task","task",str,"reverse, sort, replace or combine"),
    ("--vocab","vocab_size",int,"vocabulary size V"),
    ("--length","length",int,"sequence length L"),
    ("--modulus","modulus",int,"modulus n of replace/combine (default V/5)"),
    ("--train","train_size",int,"training pairs"),
    ("--val","val_size",int,"validation pairs"),
    ("--test","test_size",int,"test pairs"),
    ("--hidden","hidden_size",int,"LSTM width H"),
    ("--embed-dim","embed_dim",int,"embedding size D"),
    ("--batch","batch_size",int,"mini-batch size"),
    ("--lr","learning_rate",float,"RMSprop learning rate"),
    ("--rho","rho",float,"RMSprop decay"),
    ("--epsilon","epsilon",float,"RMSprop denominator offset"),
    ("--max-epochs","max_epochs",int,"epoch limit"),
    ("--patience","patience",int,"early stopping patience"),
    ("--seed","seed",int,"seed of the data, init and shuffle streams"),
    ("--threads","threads",int,"evaluation worker threads"),
    ("--precision","precision",str,"single or double"),
    ("--out-dir","out_dir",str,"output directory"),
    ("--dataset","dataset_path",str,"dataset file"),
    ("--checkpoint","checkpoint_path",str,"checkpoint to start from"),
]
RUN_SWITCHES = [
    ("--no-embedding","use_embedding",False,"feed one-hot tokens to the encoder"),
    ("--state-handoff","state_handoff",True,"start the decoder from the encoder states"),
    ("--record-wall-time","record_wall_time",True,"store measured epoch durations"),
]
REPRODUCE_KEYS = {
    "max_epochs","patience","seed","threads","precision","batch_size",
    "learning_rate","out_dir"}

def _add_run_flags(parser: argparse.ArgumentParser, keys: set=None):
    parser.add_argument("--config",help="JSON run config (flags take precedence)")
    for flag,dest,kind,help_text in RUN_FLAGS:
        if keys is None or dest in keys:
            parser.add_argument(flag,dest=dest,type=kind,default=None,help=help_text)
    if keys is None:
        for flag,dest,value,help_text in RUN_SWITCHES:
            parser.add_argument(flag,dest=dest,action="store_const",const=value,
                                default=None,help=help_text)

def _overrides(args: argparse.Namespace) -> Dict[str,Any]:
    keys = [dest for _,dest,_,_ in RUN_FLAGS] + [dest for _,dest,_,_ in RUN_SWITCHES]
    overrides = {k:getattr(args,k) for k in keys if getattr(args,k,None) is not None}
    if args.verbose:
        overrides["verbose"] = min(args.verbose,2)
    return overrides

def _config(args: argparse.Namespace) -> RunConfig:
    return load_run_config(args.config,_overrides(args))

def _dataset_for(config: RunConfig) -> Dataset:
    if config.dataset_path is None:
        return make_dataset(config.task_spec(),config.sizes,config.seed,config.log_level)
    dataset = load_dataset(config.dataset_path,config.log_level)
    if dataset.task != config.task_spec():
        raise ConfigError(
            f"dataset {config.dataset_path} holds {dataset.task} but the run config "
            f"describes {config.task_spec()}")
    return dataset

def _check_dataset_matches(model: Seq2SeqModel, dataset: Dataset):
    if (model.config.vocab_size,model.config.input_length) != \
            (dataset.task.vocab_size,dataset.task.length):
        raise ConfigError(
            f"model expects V={model.config.vocab_size}, L={model.config.input_length}; "
            f"dataset has V={dataset.task.vocab_size}, L={dataset.task.length}")

def _split_metrics(model: Seq2SeqModel, dataset: Dataset, threads: int) -> Dict[str,Any]:
    return {name:evaluate(model,split,threads).to_dict()
            for name,split in dataset.splits().items() if len(split) > 0}

def cmd_gen(config: RunConfig) -> Path:
    """Generates and writes a dataset.

    Args:
        config (RunConfig): run config; the dataset goes to ``dataset_path``
            or ``<out_dir>/dataset.txt``.

    Returns:
        Path: the dataset file.
    """
    dataset = make_dataset(config.task_spec(),config.sizes,config.seed,config.log_level)
    path = Path(config.dataset_path or Path(config.out_dir) / "dataset.txt")
    path.parent.mkdir(parents=True,exist_ok=True)
    save_dataset(dataset,path)
    sizes = dataset.sizes
    print(f"{path}: train={sizes['train']} val={sizes['val']} "
          f"test={sizes['test']} seed={config.seed}")
    return path

def cmd_train(config: RunConfig) -> Dict[str,Any]:
    """Trains a model and writes ``model.ckpt``, ``metrics.csv``,
    ``summary.json`` and (with a learned embedding) ``pca.csv`` to
    ``out_dir``.

    Args:
        config (RunConfig): run config. With ``checkpoint_path`` training
            resumes from that checkpoint, which must match the config.

    Raises:
        ConfigError: if the dataset does not match the config.
        CheckpointError: if the checkpoint is unreadable or incompatible.

    Returns:
        Dict[str,Any]: the run summary.
    """
    level = config.log_level
    dataset = _dataset_for(config)
    if config.checkpoint_path is not None:
        model = load_checkpoint(config.checkpoint_path,expected=config.model_config())
    else:
        model = Seq2SeqModel(config.model_config(),seed=config.seed,verbose=level)
    result = train(model,dataset,config.train_config(),verbose=level)
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True,exist_ok=True)
    save_checkpoint(result.best,out_dir / "model.ckpt")
    summary = {
        "config": {
            **config.to_dict(),
            **{f"{name}_size":size for name,size in dataset.sizes.items()}},
        "best_epoch": result.best_epoch,
        "stop_epoch": result.stop_epoch,
        "early_stopped": result.early_stopped,
        "diverged": result.diverged,
        "metrics": _split_metrics(model,dataset,config.threads)}
    pca_result = None
    if config.use_embedding:
        pca_result = embedding_pca(model,k=min(2,config.embed_dim))
        summary["pca_explained_variance_ratio"] = pca_result.explained_variance_ratio
        if config.vocab_size >= 3:
            diagnostic = order_diagnostic(pca_result.projections[:,0])
            summary["order_rho"] = diagnostic.rho
            summary["order_rho_defined"] = diagnostic.defined
    emit_report(out_dir,result.history,summary,pca_result)
    test = summary["metrics"].get("test")
    if test is not None:
        print(f"best epoch {result.best_epoch}, stopped at {result.stop_epoch}: "
              f"test token_acc={test['token_acc']:.4f} seq_acc={test['seq_acc']:.4f}")
    return summary

def cmd_eval(checkpoint: str,
             dataset_path: str,
             out_dir: str=None,
             threads: int=1) -> Dict[str,Any]:
    """Evaluates a checkpoint on every nonempty split of a dataset, prints
    the metrics as JSON and writes them to ``<out_dir>/eval.json``."""
    model = load_checkpoint(checkpoint)
    dataset = load_dataset(dataset_path)
    _check_dataset_matches(model,dataset)
    metrics = _split_metrics(model,dataset,threads)
    text = json.dumps(metrics,indent=2,sort_keys=True)
    print(text)
    if out_dir is not None:
        Path(out_dir).mkdir(parents=True,exist_ok=True)
        (Path(out_dir) / "eval.json").write_text(text + "\n",encoding="utf-8")
    return metrics

def cmd_pca(checkpoint: str, out_dir: str) -> Path:
    """Writes the 2-D PCA of a checkpoint's embedding to
    ``<out_dir>/pca.csv`` and prints the order diagnostic."""
    model = load_checkpoint(checkpoint)
    result = embedding_pca(model,k=min(2,model.config.embed_dim))
    Path(out_dir).mkdir(parents=True,exist_ok=True)
    path = write_pca_csv(result,Path(out_dir) / "pca.csv")
    ratios = ", ".join(f"{r:.4f}" for r in result.explained_variance_ratio)
    print(f"{path}: explained variance ratios {ratios}")
    if model.config.vocab_size >= 3:
        diagnostic = order_diagnostic(result.projections[:,0])
        print(f"order diagnostic: rho={diagnostic.rho:.4f}"
              + ("" if diagnostic.defined else " (undefined, constant projection)"))
    return path

def cmd_gradcheck(seeds: int=3, tolerance: float=GRADCHECK_TOLERANCE) -> bool:
    """Runs the double precision gradient checks at tiny sizes and prints a
    pass/fail report.

    Args:
        seeds (int, optional): seeds per check. Defaults to 3.
        tolerance (float, optional): maximum relative error. Defaults to 1e-4.

    Returns:
        bool: whether every check passed.
    """
    tiny = ModelConfig(vocab_size=7,embed_dim=4,hidden_size=5,input_length=4,
                       output_length=4,precision="double")
    checks = {
        "embedding": check_embedding_layer,
        "lstm": check_lstm_layer,
        "projection": check_projection_layer,
        "model": lambda seed: check_model_gradients(tiny,seed),
        "model_state_handoff": lambda seed: check_model_gradients(
            ModelConfig.from_dict({**tiny.to_dict(),"state_handoff":True}),seed),
        "model_one_hot": lambda seed: check_model_gradients(
            ModelConfig.from_dict({**tiny.to_dict(),"use_embedding":False}),seed)}
    report = {}
    for name,check in checks.items():
        worst = max(check(seed).max_relative_error for seed in range(seeds))
        report[name] = {"max_relative_error": worst,"passed": worst < tolerance}
    pprint(report)
    return all(r["passed"] for r in report.values())

def cmd_reproduce(names: List[str],
                  overrides: Dict[str,Any],
                  allow_long: bool=False) -> Dict[str,Dict[str,Any]]:
    """Runs reference experiments and compares them with the reported
    accuracies. Misses are warnings, not failures, since runs are
    stochastic.

    Args:
        names (List[str]): preset names.
        overrides (Dict[str,Any]): run config overrides; ``out_dir`` is the
            parent directory of one directory per preset.
        allow_long (bool, optional): allows presets marked as long runs.
            Defaults to False.

    Raises:
        ConfigError: for unknown presets, or long runs without
            ``allow_long``.

    Returns:
        Dict[str,Dict[str,Any]]: run summaries per preset.
    """
    presets = [get_preset(name) for name in names]
    for preset in presets:
        if not preset.desk_scale and not allow_long:
            raise ConfigError(f"'{preset.name}' is a long run; pass --allow-long to run it")
    base = Path(overrides.pop("out_dir","runs"))
    summaries = {}
    for preset in presets:
        config = preset.run_config(out_dir=str(base / preset.name),**overrides)
        summary = cmd_train(config)
        summaries[preset.name] = summary
        obtained = summary["metrics"]["test"]["token_acc"]
        reported = "n/a" if preset.reported_accuracy is None \
            else f"{preset.reported_accuracy[2]:.4f}"
        line = f"{preset.name}: test token_acc {obtained:.4f} (reported {reported})"
        if preset.min_test_accuracy is not None:
            passed = obtained >= preset.min_test_accuracy
            line += " " + colored(
                f"[{'ok' if passed else 'below'} {preset.min_test_accuracy:.2f}]",
                "green" if passed else "red")
            if not passed:
                logger.warning("%s reached %.4f, expected at least %.2f",
                               preset.name,obtained,preset.min_test_accuracy)
        print(line)
        if "order_rho" in summary:
            rho = summary["order_rho"]
            print(f"{preset.name}: embedding order rho {rho:.4f}")
            if preset.min_order_rho is not None and abs(rho) < preset.min_order_rho:
                logger.warning("%s: |rho| %.4f below %.2f",
                               preset.name,abs(rho),preset.min_order_rho)
    for small,large,gain in SCALING_CHECKS:
        if small in summaries and large in summaries:
            delta = summaries[large]["metrics"]["test"]["token_acc"] - \
                summaries[small]["metrics"]["test"]["token_acc"]
            print(f"{large} vs {small}: test token_acc gain {delta:+.4f} (expected >= {gain})")
            if delta < gain:
                logger.warning("more training data gained only %.4f",delta)
    return summaries

def _print_presets():
    for preset in PRESETS.values():
        reported = "-" if preset.reported_accuracy is None \
            else ",".join(f"{a:.4f}" for a in preset.reported_accuracy)
        scale = "desk" if preset.desk_scale else "long"
        epoch = "-" if preset.reported_epoch is None else preset.reported_epoch
        print(f"{preset.name:26s} {scale:4s} E={epoch!s:4s} reported={reported} {preset.note}".rstrip())

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="seqrules",
        description="Train LSTM encoder-decoders on synthetic sequence rules.")
    parser.add_argument("--version",action="version",version=__version__)
    parser.add_argument("-v","--verbose",action="count",default=0,
                        help="more logging (-v info, -vv debug)")
    sub = parser.add_subparsers(dest="command",required=True)

    gen = sub.add_parser("gen",help="generate a dataset file")
    _add_run_flags(gen)
    gen.set_defaults(func=_gen)

    train_parser = sub.add_parser("train",help="train a model")
    _add_run_flags(train_parser)
    train_parser.set_defaults(func=_train)

    eval_parser = sub.add_parser("eval",help="evaluate a checkpoint on a dataset")
    eval_parser.add_argument("--checkpoint",required=True)
    eval_parser.add_argument("--dataset",required=True)
    eval_parser.add_argument("--out-dir",default=None)
    eval_parser.add_argument("--threads",type=int,default=1)
    eval_parser.set_defaults(func=_eval)

    pca_parser = sub.add_parser("pca",help="PCA of a checkpoint's embedding")
    pca_parser.add_argument("--checkpoint",required=True)
    pca_parser.add_argument("--out-dir",default=".")
    pca_parser.set_defaults(func=_pca)

    grad = sub.add_parser("gradcheck",help="finite-difference gradient checks")
    grad.add_argument("--seeds",type=int,default=3)
    grad.add_argument("--tolerance",type=float,default=GRADCHECK_TOLERANCE)
    grad.set_defaults(
        func=lambda a: EXIT_OK if cmd_gradcheck(a.seeds,a.tolerance) else EXIT_RUNTIME)

    reproduce = sub.add_parser("reproduce",help="run reference experiments")
    reproduce.add_argument("names",nargs="*",help="preset names")
    reproduce.add_argument("--list",action="store_true",help="list the presets")
    reproduce.add_argument("--allow-long",action="store_true",
                           help="allow presets marked as long runs")
    _add_run_flags(reproduce,REPRODUCE_KEYS)
    reproduce.set_defaults(func=_reproduce)
    return parser

def _gen(args: argparse.Namespace) -> int:
    cmd_gen(_config(args))
    return EXIT_OK

def _train(args: argparse.Namespace) -> int:
    cmd_train(_config(args))
    return EXIT_OK

def _eval(args: argparse.Namespace) -> int:
    cmd_eval(args.checkpoint,args.dataset,args.out_dir,args.threads)
    return EXIT_OK

def _pca(args: argparse.Namespace) -> int:
    cmd_pca(args.checkpoint,args.out_dir)
    return EXIT_OK

def _reproduce(args: argparse.Namespace) -> int:
    if args.list or not args.names:
        _print_presets()
        return EXIT_OK
    overrides = {}
    if args.config is not None:
        overrides.update(json.loads(Path(args.config).read_text(encoding="utf-8")))
    overrides.update(_overrides(args))
    cmd_reproduce(args.names,overrides,args.allow_long)
    return EXIT_OK

def main(argv: List[str]=None) -> int:
    """Parses ``argv`` and runs the command.

    Args:
        argv (List[str], optional): arguments. Defaults to ``sys.argv[1:]``.

    Returns:
        int: exit code.
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    level = [logging.WARNING,logging.INFO,logging.DEBUG][min(args.verbose,2)]
    logging.basicConfig(level=level,format="%(asctime)s %(name)s %(levelname)s: %(message)s")
    logger.setLevel(level)
    try:
        return args.func(args)
    except ConfigError as error:
        logger.error("configuration error: %s",error)
        return EXIT_CONFIG
    except (SeqrulesError,OSError,json.JSONDecodeError) as error:
        logger.error("%s: %s",type(error).__name__,error)
        return EXIT_RUNTIME

def run():
    sys.exit(main())
