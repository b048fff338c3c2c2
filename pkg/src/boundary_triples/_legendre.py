"""Legendre series on the unit interval [0, 1].

Interior functions of the concrete models are coefficient vectors in the
shifted Legendre basis ``P_k(2t - 1)``.  These helpers build the matrices
that act on such vectors.
"""

import numpy as np
from numpy.polynomial import legendre as L


def vander(t, size):
    """Rows ``P_k(2 t - 1)`` for ``k < size``."""
    return L.legvander(2.0 * np.asarray(t, dtype=float) - 1.0, size - 1)


def deriv_matrix(size):
    """d/dt in coefficient space."""
    d = np.zeros((size, size))
    for k in range(1, size):
        e = np.zeros(k + 1)
        e[k] = 1.0
        c = L.legder(e) * 2.0
        d[: c.size, k] = c
    return d


def mult_t_matrix(size):
    """Multiplication by t; the top column is truncated to degree size-1."""
    m = np.zeros((size, size))
    for k in range(size):
        e = np.zeros(k + 1)
        e[k] = 1.0
        c = 0.5 * (L.legmulx(e) + np.concatenate([e, [0.0]]))
        n = min(c.size, size)
        m[:n, k] = c[:n]
    return m


def projector(rule, size, weight=None):
    """Matrix mapping samples on ``rule`` to Legendre coefficients (L2 projection)."""
    v = vander(rule.nodes, size)
    w = rule.weights if weight is None else rule.weights * weight
    scale = (2.0 * np.arange(size) + 1.0) / (rule.b - rule.a)
    return (v * w[:, None]).T * scale[:, None]


def chop(coef, noise=8.0):
    """Zero the trailing coefficients that sit on the roundoff floor.

    Interpolation leaves errors of order ``(2k + 1) eps max|c|`` in the
    degree-k coefficient, and endpoint derivatives amplify them by ``k^2``.
    Trailing coefficients below ``noise`` times that floor are dropped.
    """
    coef = np.array(coef, copy=True)
    flat = coef.reshape(coef.shape[0], -1)
    mags = np.abs(flat)
    floor = noise * np.finfo(float).eps * (2.0 * np.arange(flat.shape[0]) + 1.0)
    big = mags > floor[:, None] * np.maximum(mags.max(axis=0, keepdims=True), 1e-300)
    for j in range(flat.shape[1]):
        idx = np.nonzero(big[:, j])[0]
        last = idx[-1] + 1 if idx.size else 0
        flat[last:, j] = 0.0
    return flat.reshape(coef.shape)
