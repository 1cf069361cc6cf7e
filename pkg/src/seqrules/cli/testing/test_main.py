import csv
import json

from ..main import main,cmd_reproduce
from ...models import ModelConfig,Seq2SeqModel,save_checkpoint

SMALL = ["--vocab","10","--length","5","--train","24","--val","8","--test","8",
         "--hidden","8","--embed-dim","6","--batch","8","--seed","1"]

def test_gen_writes_dataset(tmp_path):
    out = tmp_path / "data.txt"
    code = main(["gen","--task","reverse","--vocab","10","--train","9000","--val","1000",
                 "--test","10000","--seed","1","--dataset",str(out)])
    assert code == 0
    pairs = [l for l in out.read_text().splitlines() if not l.startswith("#")]
    assert len(pairs) == 20000

def test_gen_is_deterministic(tmp_path):
    for name in ("a.txt","b.txt"):
        assert main(["gen","--task","sort","--dataset",str(tmp_path / name)] + SMALL) == 0
    assert (tmp_path / "a.txt").read_bytes() == (tmp_path / "b.txt").read_bytes()

def test_missing_task_is_usage_error(tmp_path):
    assert main(["gen","--dataset",str(tmp_path / "d.txt")] + SMALL) == 2

def test_unknown_config_key_is_usage_error(tmp_path):
    config = tmp_path / "run.json"
    config.write_text(json.dumps({"task":"sort","vocab_size":10,"epochs":3}))
    assert main(["train","--config",str(config)]) == 2

def test_zero_epoch_training(tmp_path):
    out = tmp_path / "run"
    code = main(["train","--task","sort","--max-epochs","0","--out-dir",str(out)] + SMALL)
    assert code == 0
    summary = json.loads((out / "summary.json").read_text())
    assert summary["best_epoch"] == 0 and summary["stop_epoch"] == 0
    assert set(summary["metrics"]) == {"train","val","test"}
    assert (out / "model.ckpt").exists()
    assert len((out / "metrics.csv").read_text().splitlines()) == 1

def test_summary_reports_loaded_dataset_sizes(tmp_path):
    data = tmp_path / "d.txt"
    assert main(["gen","--task","sort","--dataset",str(data)] + SMALL) == 0
    out = tmp_path / "run"
    code = main(["train","--task","sort","--dataset",str(data),"--max-epochs","0",
                 "--out-dir",str(out)] + SMALL + ["--train","100","--test","50"])
    assert code == 0
    config = json.loads((out / "summary.json").read_text())["config"]
    assert (config["train_size"],config["val_size"],config["test_size"]) == (24,8,8)

def test_training_outputs_are_reproducible(tmp_path):
    args = ["train","--task","replace","--max-epochs","2","--precision","double"] + SMALL
    assert main(args + ["--out-dir",str(tmp_path / "a")]) == 0
    assert main(args + ["--out-dir",str(tmp_path / "b")]) == 0
    for name in ("metrics.csv","pca.csv","model.ckpt"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()

def test_resume_with_other_vocab_refused(tmp_path):
    checkpoint = save_checkpoint(
        Seq2SeqModel(ModelConfig(vocab_size=12,embed_dim=6,hidden_size=8,
                                 input_length=5,output_length=5)),
        tmp_path / "m.ckpt")
    code = main(["train","--task","sort","--checkpoint",str(checkpoint),
                 "--out-dir",str(tmp_path)] + SMALL)
    assert code == 3

def test_dataset_mismatch_refused(tmp_path):
    data = tmp_path / "d.txt"
    assert main(["gen","--task","sort","--dataset",str(data)] + SMALL) == 0
    code = main(["train","--task","sort","--dataset",str(data),"--vocab","12",
                 "--out-dir",str(tmp_path)] + SMALL[2:])
    assert code == 2

def test_undecodable_dataset_is_runtime_error(tmp_path):
    data = tmp_path / "d.txt"
    assert main(["gen","--task","sort","--dataset",str(data)] + SMALL) == 0
    data.write_bytes(data.read_bytes() + b"\xff\n")
    code = main(["train","--task","sort","--dataset",str(data),
                 "--out-dir",str(tmp_path)] + SMALL)
    assert code == 3

def test_eval_and_pca(tmp_path,capsys):
    data = tmp_path / "d.txt"
    assert main(["gen","--task","sort","--dataset",str(data)] + SMALL) == 0
    assert main(["train","--task","sort","--dataset",str(data),"--max-epochs","1",
                 "--out-dir",str(tmp_path)] + SMALL) == 0
    capsys.readouterr()
    assert main(["eval","--checkpoint",str(tmp_path / "model.ckpt"),
                 "--dataset",str(data)]) == 0
    metrics = json.loads(capsys.readouterr().out)
    assert metrics["test"]["token_acc"] >= metrics["test"]["seq_acc"]
    assert main(["pca","--checkpoint",str(tmp_path / "model.ckpt"),
                 "--out-dir",str(tmp_path / "pca")]) == 0
    lines = (tmp_path / "pca" / "pca.csv").read_text().splitlines()
    rows = list(csv.reader(lines[1:]))
    assert len(rows) == 11 and len(rows[0]) == 3

def test_missing_checkpoint_is_runtime_error(tmp_path):
    assert main(["pca","--checkpoint",str(tmp_path / "none.ckpt")]) == 3

def test_gradcheck_passes():
    assert main(["gradcheck","--seeds","1"]) == 0

def test_long_preset_needs_opt_in(tmp_path):
    assert main(["reproduce","sort-v1000-h256-135k","--out-dir",str(tmp_path)]) == 2

def test_reproduce_list(capsys):
    assert main(["reproduce","--list"]) == 0
    assert "sort-v10-h128-9k" in capsys.readouterr().out

def test_reproduce_small_run(tmp_path):
    summaries = cmd_reproduce(
        ["combine-v10-h128-9k"],
        {"max_epochs":1,"out_dir":str(tmp_path),"train_size":40,"val_size":8,
         "test_size":8,"hidden_size":8,"embed_dim":6,"length":6})
    summary = summaries["combine-v10-h128-9k"]
    assert summary["config"]["modulus"] == 2
    assert (tmp_path / "combine-v10-h128-9k" / "summary.json").exists()
