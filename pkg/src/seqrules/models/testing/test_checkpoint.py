import numpy as np
import pytest

from ..checkpoint import Checkpoint,save_checkpoint,load_checkpoint
from ..config import ModelConfig
from ..seq2seq import Seq2SeqModel
from ..._exceptions import CheckpointError

CONFIG = ModelConfig(vocab_size=10,embed_dim=6,hidden_size=8,
                     input_length=5,output_length=5)

def test_round_trip_bitwise(tmp_path):
    model = Seq2SeqModel(CONFIG,seed=3)
    path = save_checkpoint(model,tmp_path / "model.ckpt",epoch=4,seed=1)
    loaded = load_checkpoint(path)
    for name,tensor in model.parameters().items():
        assert loaded.parameters()[name].dtype == tensor.dtype
        assert loaded.parameters()[name].tobytes() == tensor.tobytes()
    X = np.arange(10).reshape(2,5)
    assert model.forward(X).tobytes() == loaded.forward(X).tobytes()
    assert loaded.config == CONFIG
    assert loaded.checkpoint_metadata["epoch"] == 4

def test_header_layout(tmp_path):
    path = save_checkpoint(Seq2SeqModel(CONFIG),tmp_path / "m.ckpt")
    assert path.read_bytes()[:8] == b"SEQRULES"

def test_truncated_blob_rejected(tmp_path):
    path = save_checkpoint(Seq2SeqModel(CONFIG),tmp_path / "m.ckpt")
    path.write_bytes(path.read_bytes()[:-3])
    with pytest.raises(CheckpointError,match="blob"):
        load_checkpoint(path)

def test_bad_magic_and_version_rejected(tmp_path):
    payload = Checkpoint.from_model(Seq2SeqModel(CONFIG)).to_bytes()
    with pytest.raises(CheckpointError,match="magic"):
        Checkpoint.from_bytes(b"NOTACKPT" + payload[8:])
    with pytest.raises(CheckpointError,match="version"):
        Checkpoint.from_bytes(payload[:8] + (99).to_bytes(4,"little") + payload[12:])

def test_corrupt_manifest_rejected():
    payload = bytearray(Checkpoint.from_model(Seq2SeqModel(CONFIG)).to_bytes())
    payload[20] = 0xFF
    with pytest.raises(CheckpointError,match="manifest"):
        Checkpoint.from_bytes(bytes(payload))

def test_config_guard(tmp_path):
    small = ModelConfig(vocab_size=10,hidden_size=128)
    path = save_checkpoint(Seq2SeqModel(small),tmp_path / "m.ckpt")
    with pytest.raises(CheckpointError,match="vocab_size"):
        load_checkpoint(path,expected=ModelConfig(vocab_size=100,hidden_size=128))
    assert load_checkpoint(path,expected=small).config == small

def test_snapshot_restore():
    model = Seq2SeqModel(CONFIG,seed=1)
    snapshot = Checkpoint.from_model(model)
    before = model.state_dict()
    for tensor in model.parameters().values():
        tensor += 1
    snapshot.restore(model)
    for name,tensor in model.parameters().items():
        assert np.array_equal(tensor,before[name])

def test_non_finite_tensor_rejected(tmp_path):
    snapshot = Checkpoint.from_model(Seq2SeqModel(CONFIG,seed=2))
    snapshot.tensors["projection.bias"][3] = np.nan
    path = save_checkpoint(snapshot,tmp_path / "m.ckpt")
    with pytest.raises(CheckpointError,match="projection.bias.*CheckFinite"):
        load_checkpoint(path)

def test_stored_precision_must_match_config(tmp_path):
    snapshot = Checkpoint.from_model(Seq2SeqModel(CONFIG,seed=2))
    snapshot.config = ModelConfig.from_dict({**CONFIG.to_dict(),"precision":"double"})
    path = save_checkpoint(snapshot,tmp_path / "m.ckpt")
    with pytest.raises(CheckpointError,match="CheckDType"):
        load_checkpoint(path)

def test_missing_tensor_rejected(tmp_path):
    snapshot = Checkpoint.from_model(Seq2SeqModel(CONFIG,seed=2))
    del snapshot.tensors["decoder.1.W_o"]
    with pytest.raises(CheckpointError,match="decoder.1.W_o"):
        snapshot.to_model()
