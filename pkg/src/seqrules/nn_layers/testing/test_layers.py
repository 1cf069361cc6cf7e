import numpy as np
import pytest

from ..layers import EmbeddingLayer,LstmLayer,ProjectionLayer,cross_entropy
from ...tensor_core import Precision,SeededRng,softmax
from ..._exceptions import ShapeError,TokenRangeError,CacheError

def test_embedding_repeated_lookup():
    layer = EmbeddingLayer(5,3,rng=SeededRng(0))
    out = layer.forward(np.array([0,0]))
    assert np.array_equal(out[0],out[1])

def test_embedding_identity_is_one_hot():
    layer = EmbeddingLayer.one_hot(4,Precision.DOUBLE)
    assert np.array_equal(layer.forward(np.array([2]))[0],[0,0,1,0])
    assert layer.parameters() == {}

def test_embedding_backward_accumulates_into_looked_up_rows():
    layer = EmbeddingLayer(3,2,Precision.DOUBLE,rng=SeededRng(0))
    tokens = np.array([0,2,0])
    layer.forward(tokens)
    layer.backward(np.ones((3,2)))
    assert np.array_equal(layer.grads["weights"],[[2,2],[0,0],[1,1]])

def test_embedding_rejects_out_of_range_token():
    layer = EmbeddingLayer(3,2)
    with pytest.raises(TokenRangeError) as error:
        layer.forward(np.array([0,1,3]))
    assert error.value.position == 2

def test_lstm_zero_weight_closed_form():
    layer = LstmLayer(3,4,Precision.DOUBLE)
    layer.b_f[:] = 0
    c_prev = np.array([0.4,-1.0,2.0,0.0])
    h,c = layer.step_forward(np.ones(3),np.zeros(4),c_prev)
    assert np.allclose(c,0.5 * c_prev)
    assert np.allclose(h,0.5 * np.tanh(0.5 * c_prev))
    step = layer.cache[-1]
    assert np.allclose(step.f,0.5)
    assert np.allclose(step.c_candidate,0.0)

def test_lstm_saturated_input_gate():
    layer = LstmLayer(3,4,Precision.DOUBLE,rng=SeededRng(1))
    layer.b_i[:] = -50
    layer.W_i[:] = 0
    h,c = layer.step_forward(np.ones(3),np.zeros(4),np.zeros(4))
    assert np.allclose(c,0.0,atol=1e-15)
    assert np.allclose(h,0.0,atol=1e-15)

def test_lstm_gates_in_open_interval():
    layer = LstmLayer(3,4,Precision.DOUBLE,rng=SeededRng(2))
    x = SeededRng(3).glorot(1,1,(5,6,3),"double")
    layer.forward(x)
    for step in layer.cache:
        for gate in (step.f,step.i,step.o):
            assert np.all((gate > 0) & (gate < 1))
        assert np.all(np.abs(step.c_candidate) < 1)
    for t,step in enumerate(layer.cache,start=1):
        assert np.all(np.abs(step.c) <= t)

def test_lstm_step_shape_mismatch():
    layer = LstmLayer(3,4)
    with pytest.raises(ShapeError):
        layer.step_forward(np.ones(2),np.zeros(4),np.zeros(4))

def test_lstm_backward_without_cache():
    layer = LstmLayer(3,4)
    with pytest.raises(CacheError):
        layer.step_backward(np.zeros(4),np.zeros(4))
    with pytest.raises(CacheError):
        layer.backward(np.zeros((2,4)))
    with pytest.raises(CacheError):
        layer.backward(np.zeros((1,2,4)))

def test_lstm_backward_rejects_bad_gradient_rank():
    layer = LstmLayer(3,4,Precision.DOUBLE,rng=SeededRng(4))
    layer.forward(np.zeros((2,5,3)))
    with pytest.raises(ShapeError):
        layer.backward(np.zeros((2,5,4,1)))

def test_lstm_zero_upstream_gives_zero_gradients():
    layer = LstmLayer(3,4,Precision.DOUBLE,rng=SeededRng(4))
    layer.forward(np.ones((5,3)))
    layer.backward(np.zeros((5,4)))
    assert all(np.all(g == 0) for g in layer.gradients().values())

def test_lstm_sequence_of_one_equals_step():
    layer = LstmLayer(3,4,Precision.DOUBLE,rng=SeededRng(5))
    x = np.array([[0.1,-0.2,0.3]])
    seq = layer.forward(x)
    h,_ = layer.step_forward(x[0],np.zeros(4),np.zeros(4))
    assert np.array_equal(seq[0],h)

def test_lstm_first_step_sees_zero_state():
    layer = LstmLayer(3,4,Precision.DOUBLE,rng=SeededRng(6))
    x = SeededRng(7).glorot(1,1,(3,3),"double")
    out = layer.forward(x)
    assert np.allclose(layer.cache[0].z[0,3:],0.0)
    assert np.array_equal(out,layer.forward(x,np.zeros(4),np.zeros(4)))

def test_lstm_forward_deterministic():
    layer = LstmLayer(3,4,rng=SeededRng(8))
    x = np.ones((2,5,3),dtype=np.float32)
    assert np.array_equal(layer.forward(x),layer.forward(x))

def test_projection_shapes():
    layer = ProjectionLayer(4,6,rng=SeededRng(9))
    assert layer.forward(np.ones((2,3,4),dtype=np.float32)).shape == (2,3,6)
    with pytest.raises(ShapeError):
        layer.forward(np.ones((3,5)))

def test_cross_entropy_perfect_prediction():
    probs = np.eye(4)[[1,3,0]]
    loss,_ = cross_entropy(probs,np.array([1,3,0]))
    assert loss == 0.0

def test_cross_entropy_uniform_baseline():
    probs = np.full((5,7),1 / 7)
    loss,grad = cross_entropy(probs,np.array([0,1,2,3,6]))
    assert np.isclose(loss,np.log(7))
    assert np.allclose(grad.sum(-1),0.0)

def test_cross_entropy_gradient_matches_definition():
    probs = softmax(np.array([[0.1,0.2,-0.3],[1.0,0.0,0.5]]))
    loss,grad = cross_entropy(probs,np.array([2,0]))
    expected = (probs - np.eye(3)[[2,0]]) / 2
    assert np.allclose(grad,expected)

def test_cross_entropy_rejects_out_of_range_target():
    with pytest.raises(TokenRangeError):
        cross_entropy(np.full((2,3),1 / 3),np.array([0,3]))
