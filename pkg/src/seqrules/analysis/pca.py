#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Principal component analysis of embedding matrices and the order diagnostic
comparing a 1-D projection of the token embeddings with the token order.
"""

import logging
from dataclasses import dataclass
from typing import List

import numpy as np
from scipy.stats import spearmanr

from ..models import Seq2SeqModel
from .._exceptions import ConfigError,ShapeError

__all__ = [
    "PcaResult",
    "OrderDiagnostic",
    "pca",
    "embedding_pca",
    "order_diagnostic"]

logger = logging.getLogger("analysis")

@dataclass(eq=False)
class PcaResult:
    """Top principal components of a row-wise data matrix.

    Args:
        components (np.ndarray): orthonormal directions (k, D).
        projections (np.ndarray): centred rows projected on the components
            (V, k).
        explained_variance_ratio (List[float]): fraction of the total
            variance along each component, nonincreasing.
        mean (np.ndarray): row mean removed before projecting (D,).
    """
    components: np.ndarray
    projections: np.ndarray
    explained_variance_ratio: List[float]
    mean: np.ndarray

    @property
    def k(self) -> int:
        return self.components.shape[0]

@dataclass
class OrderDiagnostic:
    """Spearman correlation between projected coordinates and token indices.

    Args:
        rho (float): rank correlation in [-1, 1]; 0 when undefined.
        defined (bool): False when the projection is constant.
    """
    rho: float
    defined: bool = True

def pca(matrix: np.ndarray, k: int=2) -> PcaResult:
    """Computes the top ``k`` principal components of the rows of ``matrix``
    through an SVD of the mean-centred matrix. Each component is signed so
    that its entry of largest magnitude is positive (the first such entry on
    ties).

    Args:
        matrix (np.ndarray): data (V, D) with V >= 2.
        k (int, optional): number of components, in ``[1, min(V, D)]``.
            Defaults to 2.

    Raises:
        ShapeError: if the matrix is not 2-D with at least two rows or ``k``
            is out of range.

    Returns:
        PcaResult: components, projections and variance ratios.
    """
    matrix = np.asarray(matrix,dtype=np.float64)
    if matrix.ndim != 2 or matrix.shape[0] < 2:
        raise ShapeError(f"PCA needs a matrix with at least 2 rows, got {matrix.shape}")
    if not 1 <= k <= min(matrix.shape):
        raise ShapeError(f"k={k} must be in [1, {min(matrix.shape)}] for shape {matrix.shape}")
    mean = matrix.mean(axis=0)
    centred = matrix - mean
    _,s,vt = np.linalg.svd(centred,full_matrices=False)
    components = vt[:k].copy()
    pivots = np.argmax(np.abs(components),axis=1)
    signs = np.sign(components[np.arange(k),pivots])
    signs[signs == 0] = 1
    components *= signs[:,None]
    variance = np.square(s)
    total = variance.sum()
    if total > 0:
        ratios = (variance[:k] / total).tolist()
    else:
        ratios = [0.0] * k
    return PcaResult(components,centred @ components.T,ratios,mean)

def embedding_pca(model: Seq2SeqModel, k: int=2) -> PcaResult:
    """PCA of a model's learned token embeddings (one row per token).

    Raises:
        ConfigError: if the model uses fixed one-hot inputs.
    """
    if not model.config.use_embedding:
        raise ConfigError("the model has no learned embedding (use_embedding is false)")
    return pca(model.embedding.weights,k)

def order_diagnostic(projection: np.ndarray) -> OrderDiagnostic:
    """Spearman rank correlation between a 1-D projection of the tokens and
    their indices ``0..V-1``. Only the magnitude is meaningful since
    component signs are arbitrary.

    Args:
        projection (np.ndarray): coordinates of shape (V,) or (V, 1).

    Raises:
        ShapeError: if fewer than 3 tokens are given.

    Returns:
        OrderDiagnostic: correlation, reported as 0 (undefined) for a
            constant projection.
    """
    coords = np.asarray(projection,dtype=np.float64).reshape(-1)
    if coords.size < 3:
        raise ShapeError(f"the order diagnostic needs at least 3 tokens, got {coords.size}")
    if np.ptp(coords) == 0:
        logger.warning("constant projection, rank correlation is undefined")
        return OrderDiagnostic(0.0,defined=False)
    rho = spearmanr(coords,np.arange(coords.size)).correlation
    return OrderDiagnostic(float(rho))
