import numpy as np
import pytest

from ..datasets import (
    Dataset,make_dataset,save_dataset,load_dataset,cross_split_duplicates)
from ..tasks import TaskSpec
from ..._exceptions import ConfigError,DatasetFormatError

HEADER = [
    "# task=sort",
    "# vocab_size=100",
    "# length=3",
    "# modulus=none",
    "# seed=1",
    "# train_size=1",
    "# val_size=0",
    "# test_size=0"]

def write_lines(path,lines):
    path.write_text("\n".join(lines) + "\n")
    return path

def test_split_sizes_exact():
    dataset = make_dataset(TaskSpec("reverse",10,25),(9000,1000,10000),seed=1)
    assert dataset.sizes == {"train":9000,"val":1000,"test":10000}
    assert cross_split_duplicates(dataset) == 0

def test_determinism():
    task = TaskSpec("replace",10,8,modulus=2)
    assert make_dataset(task,(20,5,5),seed=3) == make_dataset(task,(20,5,5),seed=3)
    other = make_dataset(task,(20,5,5),seed=4)
    assert not np.array_equal(other.train.x[0],make_dataset(task,(20,5,5),3).train.x[0])

def test_split_streams_independent_of_sizes():
    task = TaskSpec("sort",10,8)
    small = make_dataset(task,(5,5,5),seed=2)
    large = make_dataset(task,(50,5,5),seed=2)
    assert small.val == large.val

def test_positive_sizes_required():
    with pytest.raises(ConfigError):
        make_dataset(TaskSpec("sort",10,8),(0,5,5),seed=1)

def test_round_trip(tmp_path):
    dataset = make_dataset(TaskSpec("combine",10,6,modulus=2),(12,4,4),seed=5)
    path = save_dataset(dataset,tmp_path / "data.txt")
    assert load_dataset(path) == dataset

def test_same_dataset_same_bytes(tmp_path):
    task = TaskSpec("reverse",10,5)
    a = save_dataset(make_dataset(task,(3,2,2),seed=1),tmp_path / "a.txt")
    b = save_dataset(make_dataset(task,(3,2,2),seed=1),tmp_path / "b.txt")
    assert a.read_bytes() == b.read_bytes()

def test_parses_format_example(tmp_path):
    path = write_lines(
        tmp_path / "d.txt",
        HEADER + ["# split=train","15 27 6\t6 15 27","# split=val","# split=test"])
    dataset = load_dataset(path)
    assert dataset.task.kind == "sort"
    assert dataset.train[0].x.tolist() == [15,27,6]
    assert dataset.train[0].y.tolist() == [6,15,27]

def test_token_out_of_range(tmp_path):
    lines = list(HEADER)
    lines[1] = "# vocab_size=20"
    path = write_lines(
        tmp_path / "d.txt",
        lines + ["# split=train","15 27 6\t6 15 27","# split=val","# split=test"])
    with pytest.raises(DatasetFormatError) as error:
        load_dataset(path)
    assert error.value.line_number == 10

def test_malformed_line(tmp_path):
    path = write_lines(
        tmp_path / "d.txt",
        HEADER + ["# split=train","15 27 6 6 15 27","# split=val","# split=test"])
    with pytest.raises(DatasetFormatError,match="line 10"):
        load_dataset(path)

def test_output_must_follow_rule(tmp_path):
    path = write_lines(
        tmp_path / "d.txt",
        HEADER + ["# split=train","15 27 6\t27 6 15","# split=val","# split=test"])
    with pytest.raises(DatasetFormatError,match="sort"):
        load_dataset(path)

def test_header_size_mismatch(tmp_path):
    path = write_lines(
        tmp_path / "d.txt",
        HEADER + ["# split=train","# split=val","# split=test"])
    with pytest.raises(DatasetFormatError,match="train"):
        load_dataset(path)

def test_unknown_header_key(tmp_path):
    path = write_lines(
        tmp_path / "d.txt",
        HEADER + ["# colour=blue","# split=train","15 27 6\t6 15 27",
                  "# split=val","# split=test"])
    with pytest.raises(DatasetFormatError,match="colour"):
        load_dataset(path)

def test_invalid_utf8(tmp_path):
    path = tmp_path / "d.txt"
    text = "\n".join(HEADER + ["# split=train","15 27 6\t6 15 27"]) + "\n"
    path.write_bytes(text.encode("utf-8") + b"\xff\n# split=val\n# split=test\n")
    with pytest.raises(DatasetFormatError) as error:
        load_dataset(path)
    assert error.value.line_number == 11
