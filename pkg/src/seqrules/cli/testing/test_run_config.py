import json

import pytest

from ..run_config import RunConfig,load_run_config
from ..._exceptions import ConfigError

def test_defaults():
    config = RunConfig.from_dict({"task":"replace","vocab_size":100})
    assert config.modulus == 20
    assert config.sizes == (9000,1000,10000)
    assert config.hidden_size == 128 and config.embed_dim == 300
    assert config.train_config().learning_rate == 1e-3
    assert config.model_config().input_length == 25

def test_unknown_keys_rejected():
    with pytest.raises(ConfigError,match="hiden_size"):
        RunConfig.from_dict({"task":"sort","vocab_size":10,"hiden_size":64})

def test_missing_task_rejected():
    with pytest.raises(ConfigError,match="task"):
        RunConfig.from_dict({"vocab_size":10})

def test_every_failure_reported():
    with pytest.raises(ConfigError) as error:
        RunConfig.from_dict({"task":"sort","vocab_size":10,"batch_size":0,
                             "use_embedding":"yes"})
    assert "batch_size" in str(error.value) and "use_embedding" in str(error.value)

def test_cross_field_validation():
    with pytest.raises(ConfigError):
        RunConfig.from_dict({"task":"combine","vocab_size":10,"modulus":11})
    with pytest.raises(ConfigError):
        RunConfig.from_dict({"task":"sort","vocab_size":10,"rho":1.0})

def test_flags_override_file(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"task":"sort","vocab_size":10,"seed":4,"hidden_size":32}))
    config = load_run_config(path,{"seed":9,"hidden_size":None})
    assert config.seed == 9 and config.hidden_size == 32

def test_invalid_json(tmp_path):
    path = tmp_path / "run.json"
    path.write_text("{task: sort")
    with pytest.raises(ConfigError):
        load_run_config(path)
