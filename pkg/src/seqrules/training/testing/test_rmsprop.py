import numpy as np
import pytest

from ..rmsprop import TrainConfig,RmspropState,rmsprop_step
from ..._exceptions import ConfigError,DivergenceError

DEFAULTS = TrainConfig()

def step(theta,g,state=None,config=DEFAULTS):
    params = {"theta":np.array(theta,dtype=np.float64)}
    rmsprop_step(state or RmspropState(),params,
                 {"theta":np.array(g,dtype=np.float64)},config)
    return params["theta"]

def test_first_step_hand_value():
    delta = step([0.0],[1.0])[0]
    expected = -0.001 / (np.sqrt(0.1) + 1e-8)
    assert abs(delta - expected) < 1e-12
    assert abs(delta - (-3.16227766e-3)) < 1e-9

def test_zero_gradient_is_fixed_point():
    theta = np.array([0.3,-1.2,7.0])
    state = RmspropState()
    for _ in range(3):
        theta = step(theta,np.zeros(3),state)
    assert np.array_equal(theta,[0.3,-1.2,7.0])

def test_rescaled_gradient_property():
    small = step([0.0],[1.0])[0]
    large = step([0.0],[1000.0])[0]
    assert abs(large - small) / abs(small) < 0.002

def test_first_step_envelope():
    g = np.linspace(-5,5,11)
    delta = step(np.zeros(11),g)
    bound = DEFAULTS.learning_rate / np.sqrt(1 - DEFAULTS.rho)
    assert np.all(np.abs(delta) <= bound + 1e-12)

def test_accumulators_nonnegative_and_updated():
    state = RmspropState()
    rng = np.random.default_rng(0)
    theta = np.zeros(5)
    for _ in range(10):
        theta = step(theta,rng.normal(size=5),state)
        assert np.all(state.accumulators["theta"] >= 0)

def test_non_finite_gradient_rejected():
    state = RmspropState()
    params = {"a":np.zeros(2),"b":np.zeros(2)}
    grads = {"a":np.ones(2),"b":np.array([1.0,np.nan])}
    with pytest.raises(DivergenceError,match="'b'"):
        rmsprop_step(state,params,grads,DEFAULTS)
    assert np.array_equal(params["a"],np.zeros(2))
    assert state.accumulators == {}

def test_config_validation():
    for bad in ({"rho":1.0},{"patience":0},{"batch_size":0},{"precision":"half"}):
        with pytest.raises(ConfigError):
            TrainConfig(**bad)
