"""Coefficient recovery for univariate polynomials sampled on circles."""

import numpy as np


def circle_nodes(n: int, radius: float = 1.0, phase: float = 0.0) -> np.ndarray:
    t = np.arange(n)
    return radius * np.exp(2j * np.pi * (t + phase) / n)


def coefficients(nodes: np.ndarray, values: np.ndarray, degree: int) -> np.ndarray:
    """Coefficients c_0..c_degree of the interpolant through (nodes, values).

    ``values`` may carry trailing axes; the result has shape
    ``(degree + 1,) + values.shape[1:]``.  With exactly ``degree + 1`` nodes
    this is a square Vandermonde solve, otherwise least squares.
    """
    V = np.vander(nodes, degree + 1, increasing=True)
    vals = np.asarray(values)
    flat = vals.reshape(vals.shape[0], -1)
    if V.shape[0] == V.shape[1]:
        c = np.linalg.solve(V, flat)
    else:
        c = np.linalg.lstsq(V, flat, rcond=None)[0]
    return c.reshape((degree + 1,) + vals.shape[1:])
