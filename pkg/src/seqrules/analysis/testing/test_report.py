import csv
import json

import numpy as np

from ..pca import pca
from ..report import emit_report
from ...training import EpochMetrics

HISTORY = [EpochMetrics(1,2.3,2.2,0.1,0.12),EpochMetrics(2,1.9,1.95,0.3,0.28)]

def make_report(out_dir):
    matrix = np.random.default_rng(0).normal(size=(10,6))
    summary = {"best_epoch":2,"test":{"token_acc":0.5,"seq_acc":0.0}}
    return emit_report(out_dir,HISTORY,summary,pca(matrix,k=2))

def test_files_written(tmp_path):
    paths = make_report(tmp_path / "run")
    assert [p.name for p in paths] == ["metrics.csv","summary.json","pca.csv"]

def test_pca_csv_rows(tmp_path):
    make_report(tmp_path)
    lines = (tmp_path / "pca.csv").read_text().splitlines()
    assert lines[0].startswith("# explained_variance_ratio=")
    rows = list(csv.reader(lines[1:]))
    assert rows[0] == ["token_index","pc1","pc2"]
    assert len(rows) - 1 == 10

def test_summary_is_json(tmp_path):
    make_report(tmp_path)
    assert json.loads((tmp_path / "summary.json").read_text())["best_epoch"] == 2

def test_metrics_csv(tmp_path):
    make_report(tmp_path)
    rows = list(csv.DictReader((tmp_path / "metrics.csv").open()))
    assert len(rows) == 2
    assert float(rows[1]["val_token_acc"]) == 0.28
    assert rows[0]["wall_time"] == "0.0"

def test_reemission_is_byte_identical(tmp_path):
    first = [p.read_bytes() for p in make_report(tmp_path / "a")]
    second = [p.read_bytes() for p in make_report(tmp_path / "b")]
    assert first == second
