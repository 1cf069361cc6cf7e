import numpy as np
import pytest
from scipy.stats import chisquare

from ..tasks import TaskSpec,oracle_apply,generate_pair,generate_batch
from ...tensor_core import SeededRng
from ..._exceptions import ConfigError,TokenRangeError

EXAMPLE = np.array([15,27,6,18,99])

def task(kind,vocab_size=100,length=5,modulus=20):
    return TaskSpec(kind,vocab_size,length,modulus)

def test_worked_examples():
    assert oracle_apply(task("reverse"),EXAMPLE).tolist() == [99,18,6,27,15]
    assert oracle_apply(task("sort"),EXAMPLE).tolist() == [6,15,18,27,99]
    assert oracle_apply(task("replace"),EXAMPLE).tolist() == [15,7,6,18,19]
    assert oracle_apply(task("combine"),EXAMPLE).tolist() == [19,18,15,7,6]

def test_modulus_required_and_bounded():
    with pytest.raises(ConfigError):
        TaskSpec("replace",10,25)
    with pytest.raises(ConfigError):
        TaskSpec("combine",10,25,modulus=11)
    with pytest.raises(ConfigError):
        TaskSpec("shuffle",10,25)
    assert TaskSpec("reverse",10,25,modulus=3).modulus is None

def test_default_modulus():
    assert [TaskSpec.default_modulus(v) for v in (10,100,1000)] == [2,20,200]

def test_token_range_rejected():
    with pytest.raises(TokenRangeError):
        oracle_apply(task("sort",vocab_size=10),EXAMPLE)

def random_inputs(vocab_size=10,length=25,n=10000,seed=0):
    return SeededRng(seed).integers(0,vocab_size - 1,size=(n,length))

def test_reverse_is_involution():
    task = TaskSpec("reverse",10,25)
    x = random_inputs()
    assert np.array_equal(oracle_apply(task,oracle_apply(task,x)),x)

def test_sort_is_nondecreasing_permutation():
    task = TaskSpec("sort",10,25)
    x = random_inputs()
    y = oracle_apply(task,x)
    assert np.all(np.diff(y,axis=-1) >= 0)
    for v in range(10):
        assert np.array_equal((x == v).sum(-1),(y == v).sum(-1))

def test_replace_residues():
    task = TaskSpec("replace",10,25,modulus=2)
    x = random_inputs()
    y = oracle_apply(task,x)
    assert np.all(y < 2)
    assert np.all((x - y) % 2 == 0)

def test_combine_matches_composition():
    x = random_inputs(vocab_size=100)
    task = TaskSpec("combine",100,25,modulus=20)
    expected = []
    for row in x.tolist():
        residues = [t % 20 for t in row]
        expected.append(list(reversed(sorted(residues))))
    assert oracle_apply(task,x).tolist() == expected

def test_generate_pair_follows_rule():
    task = TaskSpec("sort",10,25)
    rng = SeededRng(1)
    for _ in range(100):
        pair = generate_pair(task,rng)
        assert np.array_equal(pair.y,sorted(pair.x.tolist()))

def test_generated_tokens_uniform():
    task = TaskSpec("reverse",10,10)
    x,_ = generate_batch(task,SeededRng(7),10000)
    assert x.min() >= 0 and x.max() <= 9
    counts = np.bincount(x.ravel(),minlength=10)
    assert chisquare(counts).pvalue > 0.001
