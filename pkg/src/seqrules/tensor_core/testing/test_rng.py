import numpy as np
import pytest

from ..rng import SeededRng,STREAM_DATA,STREAM_INIT,glorot_bound

def test_determinism():
    a = SeededRng(42)
    b = SeededRng(42)
    assert [a.uniform_int(0,9) for _ in range(5)] == \
        [b.uniform_int(0,9) for _ in range(5)]

def test_uniform_int_range():
    rng = SeededRng(3)
    draws = [rng.uniform_int(2,4) for _ in range(200)]
    assert set(draws) == {2,3,4}
    with pytest.raises(ValueError):
        rng.uniform_int(5,4)

def test_streams_are_independent():
    reference = SeededRng(7,STREAM_INIT).integers(0,100,size=10)
    data = SeededRng(7,STREAM_DATA)
    init = SeededRng(7,STREAM_INIT)
    data.integers(0,100,size=1000)
    assert np.array_equal(init.integers(0,100,size=10),reference)

def test_substreams_differ():
    rng = SeededRng(7)
    a = rng.substream(0).integers(0,1000,size=10)
    b = rng.substream(1).integers(0,1000,size=10)
    assert not np.array_equal(a,b)

def test_glorot_bounds_and_mean():
    rng = SeededRng(11,STREAM_INIT)
    bound = glorot_bound(300,128)
    w = rng.glorot(300,128,(100000,),"double")
    assert np.all(np.abs(w) <= bound)
    sigma = bound / np.sqrt(3)
    assert abs(w.mean()) < 3 * sigma / np.sqrt(w.size)

def test_glorot_rejects_bad_fans():
    with pytest.raises(ValueError):
        SeededRng(1).glorot(0,3,(3,))

def test_invalid_seed():
    with pytest.raises(ValueError):
        SeededRng(-1)

def test_uniform_bounds_and_dtype():
    w = SeededRng(5).uniform(-1.0,1.0,(1000,),"double")
    assert w.dtype == np.float64
    assert np.all((w >= -1.0) & (w < 1.0))
    with pytest.raises(ValueError):
        SeededRng(5).uniform(1.0,1.0,(3,))
