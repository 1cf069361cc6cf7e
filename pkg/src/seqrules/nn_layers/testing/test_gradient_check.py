import numpy as np

from ..gradient_check import (
    grad_check,relative_error,check_embedding_layer,check_lstm_layer,
    check_projection_layer)
from ..layers import LstmLayer
from ...tensor_core import Precision,SeededRng

def test_relative_error_floor():
    assert relative_error(0.0,0.0) == 0.0
    assert np.isclose(relative_error(2.0,1.0),0.5)

def test_embedding_gradient():
    assert check_embedding_layer(seed=0).max_relative_error < 1e-5

def test_projection_gradient():
    assert check_projection_layer(seed=0).max_relative_error < 1e-5

def test_lstm_single_step_gradient():
    assert check_lstm_layer(seed=0,length=1).max_relative_error < 1e-5

def test_lstm_long_sequence_gradient():
    result = check_lstm_layer(seed=1,length=25,batch_size=1)
    assert result.max_relative_error < 1e-4

def test_layers_over_many_seeds():
    for seed in range(20):
        assert check_embedding_layer(seed=seed,vocab_size=7,embed_dim=3).passed(1e-4)
        assert check_lstm_layer(seed=seed,input_size=3,hidden_size=5).passed(1e-4)
        assert check_projection_layer(seed=seed).passed(1e-4)

def test_corrupted_gradient_is_detected():
    layer = LstmLayer(3,4,Precision.DOUBLE,rng=SeededRng(0))
    x = SeededRng(1).glorot(1,1,(2,3,3),"double")

    def loss_fn():
        return float(np.sum(layer.forward(x)))

    layer.forward(x)
    layer.backward(np.ones((2,3,4)))
    grads = {k:v.copy() for k,v in layer.gradients().items()}
    grads["W_o"][0,0] *= 2
    result = grad_check(loss_fn,layer.parameters(),grads)
    assert result.max_relative_error > 0.1
    assert result.worst_entry[0] == "W_o"
