#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Run reports: per-epoch metrics (``metrics.csv``), a JSON summary
(``summary.json``) and embedding projections (``pca.csv``). Files only
depend on their inputs, so re-emitting a run gives identical bytes.
"""

import csv
import json
import logging
from pathlib import Path
from typing import Any,Dict,List,Sequence,Union

from ..training import METRIC_FIELDS,EpochMetrics
from .pca import PcaResult

__all__ = [
    "write_metrics_csv",
    "write_summary",
    "write_pca_csv",
    "emit_report"]

logger = logging.getLogger("analysis")

def _fmt(value: Any) -> str:
    return repr(float(value)) if isinstance(value,float) else str(value)

def write_metrics_csv(history: Sequence[EpochMetrics], path: Union[str,Path]) -> Path:
    """Writes one row per epoch with the columns of ``METRIC_FIELDS``."""
    path = Path(path)
    with open(path,"w",encoding="utf-8",newline="") as o:
        writer = csv.writer(o,lineterminator="\n")
        writer.writerow(METRIC_FIELDS)
        for metrics in history:
            row = metrics.to_dict()
            writer.writerow([_fmt(row[k]) for k in METRIC_FIELDS])
    return path

def write_summary(summary: Dict[str,Any], path: Union[str,Path]) -> Path:
    """Writes ``summary`` as indented JSON with sorted keys."""
    path = Path(path)
    with open(path,"w",encoding="utf-8",newline="\n") as o:
        o.write(json.dumps(summary,indent=2,sort_keys=True) + "\n")
    return path

def write_pca_csv(result: PcaResult, path: Union[str,Path]) -> Path:
    """Writes the token projections (one row per token) with the explained
    variance ratios as a header comment.

    Args:
        result (PcaResult): PCA of the embedding matrix.
        path (Union[str,Path]): output file.

    Returns:
        Path: the written path.
    """
    path = Path(path)
    ratios = ",".join(_fmt(float(r)) for r in result.explained_variance_ratio)
    with open(path,"w",encoding="utf-8",newline="") as o:
        o.write(f"# explained_variance_ratio={ratios}\n")
        writer = csv.writer(o,lineterminator="\n")
        writer.writerow(["token_index"] + [f"pc{i + 1}" for i in range(result.k)])
        for token,coords in enumerate(result.projections):
            writer.writerow([token] + [_fmt(float(c)) for c in coords])
    return path

def emit_report(out_dir: Union[str,Path],
                history: Sequence[EpochMetrics],
                summary: Dict[str,Any],
                pca_result: PcaResult=None) -> List[Path]:
    """Writes the report files of a run to ``out_dir`` (created if needed).

    Args:
        out_dir (Union[str,Path]): output directory.
        history (Sequence[EpochMetrics]): per-epoch metrics.
        summary (Dict[str,Any]): JSON-serialisable run summary.
        pca_result (PcaResult, optional): embedding PCA; ``pca.csv`` is
            skipped when None. Defaults to None.

    Raises:
        OSError: if the directory or the files cannot be written.

    Returns:
        List[Path]: written files.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True,exist_ok=True)
    written = [
        write_metrics_csv(history,out_dir / "metrics.csv"),
        write_summary(summary,out_dir / "summary.json")]
    if pca_result is not None:
        written.append(write_pca_csv(pca_result,out_dir / "pca.csv"))
    logger.info("wrote report to %s",out_dir)
    return written
