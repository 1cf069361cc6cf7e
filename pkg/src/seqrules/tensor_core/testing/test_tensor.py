import numpy as np
import pytest

from ..tensor import Precision,as_tensor,gemm,sigmoid,tanh,hadamard,softmax
from ..._exceptions import ShapeError

def test_precision():
    assert Precision.parse("single").dtype == np.float32
    assert Precision.parse(np.float64) is Precision.DOUBLE
    assert as_tensor([1,2],"single").dtype == np.float32
    with pytest.raises(ValueError):
        Precision.parse("half")

def test_gemm_identity_and_zeros():
    m = np.arange(9,dtype=np.float64).reshape(3,3)
    assert np.array_equal(gemm(np.eye(3),m),m)
    out = gemm(np.zeros((2,3)),np.ones((3,2)))
    assert np.array_equal(out,np.zeros((2,2)))

def test_gemm_hand_expansion():
    a = np.array([[1.,2.],[3.,4.]])
    b = np.array([[5.,6.],[7.,8.]])
    assert np.array_equal(gemm(a,b),np.array([[19.,22.],[43.,50.]]))

def test_gemm_rejects_mismatch():
    with pytest.raises(ShapeError,match=r"\(2, 3\)"):
        gemm(np.ones((2,3)),np.ones((2,3)))

def test_gemm_distributes_over_addition():
    rng = np.random.default_rng(0)
    for _ in range(20):
        a,b,c = (rng.integers(-5,5,size=s).astype(np.float64)
                 for s in [(3,4),(4,2),(4,2)])
        assert np.array_equal(gemm(a,b + c),gemm(a,b) + gemm(a,c))
        assert np.array_equal(gemm(np.eye(3),a),a)

def test_elementwise():
    assert sigmoid(np.array([0.0]))[0] == 0.5
    assert tanh(np.array([0.0]))[0] == 0.0
    assert np.array_equal(
        hadamard(np.array([1,2,3]),np.array([4,5,6])),np.array([4,10,18]))
    with pytest.raises(ShapeError):
        hadamard(np.ones(3),np.ones(4))

def test_sigmoid_extremes_are_finite():
    out = sigmoid(np.array([-1e4,1e4]))
    assert np.all(np.isfinite(out))

def test_softmax_values():
    assert np.allclose(softmax(np.zeros(4)),[0.25]*4)
    out = softmax(np.log(np.array([1.,2.,3.])))
    assert np.allclose(out,[1/6,2/6,3/6],atol=1e-12)

def test_softmax_shift_invariance():
    x = np.array([0.3,-1.2,2.0])
    assert np.allclose(softmax(x + 123.4),softmax(x),atol=1e-12)

def test_softmax_rows_sum_to_one_with_extreme_logits():
    rng = np.random.default_rng(1)
    logits = rng.uniform(-1e4,1e4,size=(10000,7))
    probs = softmax(logits)
    assert np.all(np.isfinite(probs))
    assert np.all(probs >= 0)
    assert np.max(np.abs(probs.sum(-1) - 1)) < 1e-6

def test_softmax_rejects_empty_last_dimension():
    with pytest.raises(ShapeError):
        softmax(np.zeros((2,0)))
