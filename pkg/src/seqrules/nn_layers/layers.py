#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Embedding, LSTM and output projection layers with hand-derived forward and
backward passes. Layers work on batches (leading dimension B); single
sequences/steps without a batch dimension are accepted and returned without
one.

Gradients accumulate into ``layer.grads`` (same keys and shapes as
``layer.parameters()``) until ``zero_grad`` is called.
"""

import logging
from dataclasses import dataclass,field,InitVar
from typing import Dict,List,Tuple,Union

import numpy as np

from ..tensor_core import (
    Precision,SeededRng,gemm,sigmoid,tanh,hadamard)
from .._exceptions import ShapeError,TokenRangeError,CacheError

__all__ = [
    "GATES",
    "EmbeddingLayer",
    "StepCache",
    "LstmLayer",
    "ProjectionLayer",
    "check_tokens",
    "cross_entropy"]

GATES = ("f","i","c","o")

def check_tokens(tokens: np.ndarray, vocab_size: int) -> np.ndarray:
    """Validates an integer token array against a vocabulary size.

    Args:
        tokens (np.ndarray): token indices of any shape.
        vocab_size (int): vocabulary size V.

    Raises:
        TokenRangeError: for the first token outside ``[0, V)``; the position
            is the flat (row-major) index.

    Returns:
        np.ndarray: the tokens as an int64 array.
    """
    tokens = np.asarray(tokens)
    if tokens.size > 0 and not np.issubdtype(tokens.dtype,np.integer):
        raise TypeError(f"tokens must be integers, got {tokens.dtype}")
    tokens = tokens.astype(np.int64,copy=False)
    bad = np.flatnonzero((tokens < 0) | (tokens >= vocab_size))
    if bad.size > 0:
        position = int(bad[0])
        raise TokenRangeError(position,int(tokens.flat[position]),vocab_size)
    return tokens

@dataclass(eq=False)
class EmbeddingLayer:
    """Token embedding table. Row ``i`` of ``weights`` is the embedding of
    token ``i``; lookup is a row gather, equivalent to multiplying a one-hot
    input by the table.

    With ``trainable=False`` (the one-hot input variant) the table is frozen
    and exposes no parameters.

    Args:
        vocab_size (int): vocabulary size V.
        embed_dim (int, optional): embedding dimension D. Defaults to 300.
        precision (Precision, optional): scalar mode. Defaults to single.
        trainable (bool, optional): whether the table is a parameter.
            Defaults to True.
        rng (SeededRng, optional): initialisation stream (Glorot-uniform).
            Zeros when omitted.
    """
    vocab_size: int
    embed_dim: int = 300
    precision: Precision = Precision.SINGLE
    trainable: bool = True
    rng: InitVar[SeededRng] = None
    weights: np.ndarray = field(init=False,repr=False)
    grads: Dict[str,np.ndarray] = field(init=False,repr=False)

    def __post_init__(self, rng: SeededRng):
        self.precision = Precision.parse(self.precision)
        if self.vocab_size < 1 or self.embed_dim < 1:
            raise ValueError("vocab_size and embed_dim must be positive")
        shape = (self.vocab_size,self.embed_dim)
        if rng is None:
            self.weights = np.zeros(shape,dtype=self.precision.dtype)
        else:
            self.weights = rng.glorot(
                self.vocab_size,self.embed_dim,shape,self.precision)
        self.grads = {"weights": np.zeros_like(self.weights)}
        self._tokens = None

    @classmethod
    def one_hot(cls,
                vocab_size: int,
                precision: Precision=Precision.SINGLE) -> "EmbeddingLayer":
        """Builds a frozen identity table (D = V), i.e. a one-hot input layer.

        Args:
            vocab_size (int): vocabulary size V.
            precision (Precision, optional): scalar mode. Defaults to single.

        Returns:
            EmbeddingLayer: frozen one-hot layer.
        """
        layer = cls(vocab_size,vocab_size,precision,trainable=False)
        layer.weights = np.eye(vocab_size,dtype=layer.precision.dtype)
        return layer

    def parameters(self) -> Dict[str,np.ndarray]:
        return {"weights": self.weights} if self.trainable else {}

    def gradients(self) -> Dict[str,np.ndarray]:
        return {"weights": self.grads["weights"]} if self.trainable else {}

    def zero_grad(self):
        self.grads["weights"].fill(0)

    def forward(self, tokens: np.ndarray) -> np.ndarray:
        """Looks up the embedding of every token.

        Args:
            tokens (np.ndarray): integer array of any shape.

        Raises:
            TokenRangeError: if a token is outside ``[0, V)``.

        Returns:
            np.ndarray: array of shape ``tokens.shape + (D,)``.
        """
        tokens = check_tokens(tokens,self.vocab_size)
        self._tokens = tokens
        return self.weights[tokens]

    def backward(self, grad_output: np.ndarray):
        """Scatters the output gradient into the rows that were looked up.
        Repeated tokens accumulate.

        Args:
            grad_output (np.ndarray): gradient of shape ``tokens.shape + (D,)``.

        Raises:
            CacheError: if ``forward`` has not been called.
            ShapeError: if the gradient shape does not match the lookup.
        """
        if self._tokens is None:
            raise CacheError("embedding backward called before forward")
        expected = self._tokens.shape + (self.embed_dim,)
        if grad_output.shape != expected:
            raise ShapeError(
                f"embedding gradient has shape {grad_output.shape}, expected {expected}")
        if self.trainable:
            np.add.at(self.grads["weights"],self._tokens,grad_output)

@dataclass
class StepCache:
    """Activations of one LSTM step kept for the backward pass."""
    z: np.ndarray
    c_prev: np.ndarray
    f: np.ndarray
    i: np.ndarray
    c_candidate: np.ndarray
    c: np.ndarray
    o: np.ndarray
    tanh_c: np.ndarray

@dataclass(eq=False)
class LstmLayer:
    """
    Standard LSTM layer (no peepholes). Every gate reads the concatenation
    ``z_t = (x_t, h_{t-1})`` of width ``input_size + hidden_size``:

    - ``f_t = sigmoid(W_f z_t + b_f)``
    - ``i_t = sigmoid(W_i z_t + b_i)``
    - ``c'_t = tanh(W_c z_t + b_c)``
    - ``c_t = i_t * c'_t + f_t * c_{t-1}``
    - ``o_t = sigmoid(W_o z_t + b_o)``
    - ``h_t = o_t * tanh(c_t)``

    Weights are Glorot-uniform (fan_in = input_size + hidden_size, fan_out =
    hidden_size); ``b_f`` starts at ``forget_bias`` and the other biases at 0.

    Args:
        input_size (int): input width D_in.
        hidden_size (int): hidden width H.
        precision (Precision, optional): scalar mode. Defaults to single.
        forget_bias (float, optional): initial forget-gate bias. Defaults to
            1.0.
        rng (SeededRng, optional): initialisation stream. Zero weights when
            omitted.
        verbose (int, optional): logging level. Defaults to logging.WARNING.
    """
    input_size: int
    hidden_size: int
    precision: Precision = Precision.SINGLE
    forget_bias: float = 1.0
    rng: InitVar[SeededRng] = None
    verbose: int = logging.WARNING

    def __post_init__(self, rng: SeededRng):
        self.precision = Precision.parse(self.precision)
        if self.input_size < 1 or self.hidden_size < 1:
            raise ValueError("input_size and hidden_size must be positive")
        width = self.input_size + self.hidden_size
        dtype = self.precision.dtype
        self._params = {}
        for gate in GATES:
            if rng is None:
                w = np.zeros((self.hidden_size,width),dtype=dtype)
            else:
                w = rng.glorot(
                    width,self.hidden_size,(self.hidden_size,width),
                    self.precision)
            self._params[f"W_{gate}"] = w
        for gate in GATES:
            bias = self.forget_bias if gate == "f" else 0.0
            self._params[f"b_{gate}"] = np.full(self.hidden_size,bias,dtype=dtype)
        self.grads = {k:np.zeros_like(v) for k,v in self._params.items()}
        self.cache: List[StepCache] = []
        self.final_state = None
        self.initial_state_grads = None
        self._squeeze = False
        self.logger = logging.getLogger("nn_layers")
        self.logger.setLevel(self.verbose)

    def __getattr__(self, name: str) -> np.ndarray:
        params = self.__dict__.get("_params")
        if params is not None and name in params:
            return params[name]
        raise AttributeError(name)

    def parameters(self) -> Dict[str,np.ndarray]:
        return self._params

    def gradients(self) -> Dict[str,np.ndarray]:
        return self.grads

    def zero_grad(self):
        for g in self.grads.values():
            g.fill(0)

    def reset_cache(self):
        self.cache = []

    def _zeros_state(self, batch_size: int) -> np.ndarray:
        return np.zeros((batch_size,self.hidden_size),dtype=self.precision.dtype)

    def step_forward(self,
                     x_t: np.ndarray,
                     h_prev: np.ndarray,
                     c_prev: np.ndarray) -> Tuple[np.ndarray,np.ndarray]:
        """Runs one timestep and appends its activations to ``self.cache``.

        Args:
            x_t (np.ndarray): input, shape (B, D_in) or (D_in,).
            h_prev (np.ndarray): previous hidden state, (B, H) or (H,).
            c_prev (np.ndarray): previous cell state, (B, H) or (H,).

        Raises:
            ShapeError: if the shapes do not match the layer or each other.

        Returns:
            Tuple[np.ndarray,np.ndarray]: new hidden and cell states with the
                batch layout of ``x_t``.
        """
        squeeze = np.ndim(x_t) == 1
        x_t,h_prev,c_prev = (np.atleast_2d(a) for a in (x_t,h_prev,c_prev))
        if x_t.shape[1] != self.input_size:
            raise ShapeError(
                f"input has width {x_t.shape[1]}, layer expects {self.input_size}")
        expected = (x_t.shape[0],self.hidden_size)
        if h_prev.shape != expected or c_prev.shape != expected:
            raise ShapeError(
                f"states have shapes {h_prev.shape} and {c_prev.shape}, expected {expected}")
        z = np.concatenate([x_t,h_prev],axis=1)
        p = self._params
        f = sigmoid(gemm(z,p["W_f"].T) + p["b_f"])
        i = sigmoid(gemm(z,p["W_i"].T) + p["b_i"])
        c_candidate = tanh(gemm(z,p["W_c"].T) + p["b_c"])
        c = hadamard(i,c_candidate) + hadamard(f,c_prev)
        o = sigmoid(gemm(z,p["W_o"].T) + p["b_o"])
        tanh_c = tanh(c)
        h = hadamard(o,tanh_c)
        self.cache.append(StepCache(z,c_prev,f,i,c_candidate,c,o,tanh_c))
        if squeeze:
            return h[0],c[0]
        return h,c

    def step_backward(self,
                      grad_h: np.ndarray,
                      grad_c: np.ndarray,
                      step: StepCache=None) -> Tuple[np.ndarray,np.ndarray,np.ndarray]:
        """Backpropagates through one timestep and accumulates the weight and
        bias gradients.

        Args:
            grad_h (np.ndarray): gradient w.r.t. h_t, (B, H) or (H,).
            grad_c (np.ndarray): gradient w.r.t. c_t from the following step,
                (B, H) or (H,).
            step (StepCache, optional): cached step. Defaults to the most
                recent cached step, which is then removed from the cache.

        Raises:
            CacheError: if no cached step is available.

        Returns:
            Tuple[np.ndarray,np.ndarray,np.ndarray]: gradients w.r.t. x_t,
                h_{t-1} and c_{t-1}.
        """
        if step is None:
            if len(self.cache) == 0:
                raise CacheError("LSTM step backward called without a cached forward step")
            step = self.cache.pop()
        squeeze = np.ndim(grad_h) == 1
        grad_h,grad_c = np.atleast_2d(grad_h),np.atleast_2d(grad_c)
        if grad_h.shape != step.c.shape or grad_c.shape != step.c.shape:
            raise ShapeError(
                f"step gradients have shapes {grad_h.shape} and {grad_c.shape}, "
                f"cached step has {step.c.shape}")
        grad_o = grad_h * step.tanh_c
        dc = grad_c + grad_h * step.o * (1 - step.tanh_c ** 2)
        pre_activation = {
            "f": dc * step.c_prev * step.f * (1 - step.f),
            "i": dc * step.c_candidate * step.i * (1 - step.i),
            "c": dc * step.i * (1 - step.c_candidate ** 2),
            "o": grad_o * step.o * (1 - step.o)}
        grad_z = np.zeros_like(step.z)
        for gate,da in pre_activation.items():
            self.grads[f"W_{gate}"] += gemm(da.T,step.z)
            self.grads[f"b_{gate}"] += da.sum(axis=0)
            grad_z += gemm(da,self._params[f"W_{gate}"])
        grad_x = grad_z[:,:self.input_size]
        grad_h_prev = grad_z[:,self.input_size:]
        grad_c_prev = dc * step.f
        if squeeze:
            return grad_x[0],grad_h_prev[0],grad_c_prev[0]
        return grad_x,grad_h_prev,grad_c_prev

    def forward(self,
                inputs: np.ndarray,
                h_0: np.ndarray=None,
                c_0: np.ndarray=None) -> np.ndarray:
        """Runs the layer over a sequence (left fold of ``step_forward``).
        The cache is reset first, so it always covers exactly this sequence.

        Args:
            inputs (np.ndarray): (B, L, D_in) or (L, D_in).
            h_0 (np.ndarray, optional): initial hidden state. Defaults to
                zeros.
            c_0 (np.ndarray, optional): initial cell state. Defaults to zeros.

        Returns:
            np.ndarray: hidden states, (B, L, H) or (L, H). The final (h, c)
                is kept in ``self.final_state``.
        """
        self._squeeze = np.ndim(inputs) == 2
        if self._squeeze:
            inputs = inputs[None]
        if np.ndim(inputs) != 3:
            raise ShapeError(f"sequence input must be 2-D or 3-D, got {np.shape(inputs)}")
        batch_size,length,_ = inputs.shape
        h = self._zeros_state(batch_size) if h_0 is None else np.atleast_2d(h_0)
        c = self._zeros_state(batch_size) if c_0 is None else np.atleast_2d(c_0)
        self.reset_cache()
        outputs = np.empty((batch_size,length,self.hidden_size),dtype=self.precision.dtype)
        for t in range(length):
            h,c = self.step_forward(inputs[:,t,:],h,c)
            outputs[:,t,:] = h
        self.final_state = (h,c)
        return outputs[0] if self._squeeze else outputs

    def backward(self,
                 grads: np.ndarray,
                 final_state_grads: Tuple[np.ndarray,np.ndarray]=None) -> np.ndarray:
        """Backpropagation through time over the cached sequence (right fold
        of ``step_backward``), accumulating parameter gradients over all
        timesteps.

        Args:
            grads (np.ndarray): gradient w.r.t. every hidden output, same shape
                as the output of ``forward``.
            final_state_grads (Tuple[np.ndarray,np.ndarray], optional): extra
                gradient w.r.t. the final (h, c). Defaults to None.

        Raises:
            CacheError: if the cache does not cover the sequence.

        Returns:
            np.ndarray: gradient w.r.t. the inputs, same layout as the input
                of ``forward``. Gradients w.r.t. (h_0, c_0) are kept in
                ``self.initial_state_grads``.
        """
        if len(self.cache) == 0:
            raise CacheError("LSTM backward called before forward")
        if self._squeeze:
            grads = grads[None]
        if np.ndim(grads) != 3:
            raise ShapeError(f"sequence gradient must be 2-D or 3-D, got {np.shape(grads)}")
        batch_size,length,_ = grads.shape
        if len(self.cache) != length:
            raise CacheError(
                f"cache holds {len(self.cache)} steps, gradient covers {length}")
        grad_inputs = np.empty((batch_size,length,self.input_size),dtype=grads.dtype)
        if final_state_grads is None:
            grad_h = self._zeros_state(batch_size)
            grad_c = self._zeros_state(batch_size)
        else:
            grad_h,grad_c = (np.atleast_2d(g).copy() for g in final_state_grads)
        for t in reversed(range(length)):
            grad_x,grad_h,grad_c = self.step_backward(
                grads[:,t,:] + grad_h,grad_c,self.cache[t])
            grad_inputs[:,t,:] = grad_x
        self.initial_state_grads = (grad_h,grad_c)
        return grad_inputs[0] if self._squeeze else grad_inputs

@dataclass(eq=False)
class ProjectionLayer:
    """Affine map from hidden states to vocabulary logits
    (``logits = h W + b``); a softmax turns them into distributions.

    Args:
        hidden_size (int): input width H.
        vocab_size (int): output width V.
        precision (Precision, optional): scalar mode. Defaults to single.
        rng (SeededRng, optional): initialisation stream. Zeros when omitted.
    """
    hidden_size: int
    vocab_size: int
    precision: Precision = Precision.SINGLE
    rng: InitVar[SeededRng] = None

    def __post_init__(self, rng: SeededRng):
        self.precision = Precision.parse(self.precision)
        shape = (self.hidden_size,self.vocab_size)
        if rng is None:
            self.weights = np.zeros(shape,dtype=self.precision.dtype)
        else:
            self.weights = rng.glorot(
                self.hidden_size,self.vocab_size,shape,self.precision)
        self.bias = np.zeros(self.vocab_size,dtype=self.precision.dtype)
        self.grads = {
            "weights": np.zeros_like(self.weights),
            "bias": np.zeros_like(self.bias)}
        self._inputs = None

    def parameters(self) -> Dict[str,np.ndarray]:
        return {"weights": self.weights,"bias": self.bias}

    def gradients(self) -> Dict[str,np.ndarray]:
        return self.grads

    def zero_grad(self):
        for g in self.grads.values():
            g.fill(0)

    def forward(self, h: np.ndarray) -> np.ndarray:
        """Computes logits for hidden states of shape (..., H).

        Args:
            h (np.ndarray): hidden states.

        Raises:
            ShapeError: if the last dimension is not H.

        Returns:
            np.ndarray: logits of shape (..., V).
        """
        if np.shape(h)[-1] != self.hidden_size:
            raise ShapeError(
                f"projection expects width {self.hidden_size}, got {np.shape(h)}")
        self._inputs = h
        flat = h.reshape(-1,self.hidden_size)
        logits = gemm(flat,self.weights) + self.bias
        return logits.reshape(h.shape[:-1] + (self.vocab_size,))

    def backward(self, grad_logits: np.ndarray) -> np.ndarray:
        """Accumulates weight/bias gradients and returns the gradient w.r.t.
        the hidden states.

        Args:
            grad_logits (np.ndarray): gradient of shape (..., V).

        Raises:
            CacheError: if ``forward`` has not been called.

        Returns:
            np.ndarray: gradient of shape (..., H).
        """
        if self._inputs is None:
            raise CacheError("projection backward called before forward")
        flat_h = self._inputs.reshape(-1,self.hidden_size)
        flat_g = grad_logits.reshape(-1,self.vocab_size)
        self.grads["weights"] += gemm(flat_h.T,flat_g)
        self.grads["bias"] += flat_g.sum(axis=0)
        grad_h = gemm(flat_g,self.weights.T)
        return grad_h.reshape(self._inputs.shape)

def cross_entropy(probs: np.ndarray,
                  targets: np.ndarray) -> Tuple[float,np.ndarray]:
    """Mean categorical cross-entropy of softmax outputs and the gradient
    with respect to the logits that produced them.

    ``loss = -(1/N) sum_n ln probs[n][targets[n]]`` and
    ``grad_logits = (probs - onehot(targets)) / N`` where N is the number of
    target positions (timesteps times batch).

    Args:
        probs (np.ndarray): distributions of shape (..., V).
        targets (np.ndarray): integer targets of shape (...).

    Raises:
        ShapeError: if ``targets.shape != probs.shape[:-1]``.
        TokenRangeError: if a target is outside ``[0, V)``.

    Returns:
        Tuple[float,np.ndarray]: loss and gradient w.r.t. the logits.
    """
    probs = np.asarray(probs)
    targets = np.asarray(targets)
    if targets.shape != probs.shape[:-1]:
        raise ShapeError(
            f"targets have shape {targets.shape}, distributions {probs.shape}")
    vocab_size = probs.shape[-1]
    targets = check_tokens(targets,vocab_size).reshape(-1)
    flat = probs.reshape(-1,vocab_size)
    n = flat.shape[0]
    rows = np.arange(n)
    picked = np.maximum(flat[rows,targets],np.finfo(flat.dtype).tiny)
    loss = float(-np.mean(np.log(picked)))
    grad = flat.copy()
    grad[rows,targets] -= 1
    grad /= n
    return loss,grad.reshape(probs.shape)
