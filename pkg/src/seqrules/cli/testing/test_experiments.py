import pytest

from ..experiments import PRESETS,SCALING_CHECKS,get_preset,list_presets
from ..._exceptions import ConfigError

def test_every_reported_row_present():
    reported = [p for p in PRESETS.values() if p.reported_accuracy is not None]
    assert len(reported) == 20
    for task in ("reverse","sort","replace","combine"):
        assert sum(p.task == task for p in reported) == 5

def test_long_runs_flagged():
    assert not get_preset("reverse-v1000-h256-135k").desk_scale
    assert not get_preset("sort-v100-h128-135k").desk_scale
    assert get_preset("sort-v100-h128-27k").desk_scale
    assert all(p.desk_scale for p in list_presets(desk_scale_only=True))

def test_data_sizes_normalised():
    assert get_preset("reverse-v100-h256-135k").sizes == (135000,15000,10000)

def test_thresholds():
    assert get_preset("reverse-v10-h128-9k").min_test_accuracy == 0.80
    assert get_preset("sort-v10-h128-9k").min_test_accuracy == 0.90
    assert get_preset("sort-v10-h128-9k").min_order_rho == 0.9
    assert get_preset("replace-v10-h128-9k").min_test_accuracy == 0.85
    assert get_preset("combine-v10-h128-9k").min_test_accuracy == 0.78

def test_run_config_from_preset():
    config = get_preset("replace-v10-h128-9k").run_config(max_epochs=3,seed=None)
    assert config.modulus == 2 and config.max_epochs == 3 and config.seed == 1
    assert config.sizes == (9000,1000,10000)

def test_scaling_checks_reference_presets():
    for small,large,_ in SCALING_CHECKS:
        assert small in PRESETS and large in PRESETS

def test_unknown_preset():
    with pytest.raises(ConfigError):
        get_preset("copy-v10")
