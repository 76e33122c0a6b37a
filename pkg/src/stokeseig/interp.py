"""Shared 16-point Gauss-Legendre panel interpolation utilities."""

from __future__ import annotations

import numpy as np

PANEL_ORDER = 16

GAUSS_NODES, GAUSS_WEIGHTS = np.polynomial.legendre.leggauss(PANEL_ORDER)


def _bary_weights(nodes: np.ndarray) -> np.ndarray:
    w = np.ones_like(nodes)
    for j in range(len(nodes)):
        w[j] = 1.0 / np.prod(nodes[j] - np.delete(nodes, j))
    return w


BARY_WEIGHTS = _bary_weights(GAUSS_NODES)


def lagrange_matrix(t: np.ndarray) -> np.ndarray:
    """Rows evaluate the degree-15 Lagrange basis on the Gauss nodes at t.

    For values f at the 16 panel nodes, lagrange_matrix(t) @ f interpolates
    f at the local coordinates t in [-1, 1].
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    diff = t[:, None] - GAUSS_NODES[None, :]
    exact = diff == 0.0
    diff[exact] = 1.0
    terms = BARY_WEIGHTS[None, :] / diff
    L = terms / terms.sum(axis=1)[:, None]
    hit = exact.any(axis=1)
    if np.any(hit):
        L[hit] = exact[hit].astype(float)
    return L
