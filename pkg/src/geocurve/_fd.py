"""Finite-difference stencils on uniformly sampled data.

Interior samples use centered stencils accurate to fourth order. Closed
curves wrap around; open curves use one-sided stencils of the same order
built from the first (last) ``order + 4`` samples near each end.
"""

from functools import lru_cache
from math import factorial

import numpy as np

from .errors import InsufficientDataError


@lru_cache(maxsize=None)
def stencil_weights(offsets: tuple, order: int) -> np.ndarray:
    """Weights w with sum(w_j f(x + o_j)) ~ f^(order)(x) for unit spacing."""
    offsets = np.asarray(offsets, dtype=float)
    k = len(offsets)
    A = np.array([offsets**i / factorial(i) for i in range(k)])
    rhs = np.zeros(k)
    rhs[order] = 1.0
    return np.linalg.solve(A, rhs)


def centered_offsets(order: int) -> tuple:
    half = (order + 1) // 2 + 1
    return tuple(range(-half, half + 1))


def derivative(values, h: float, order: int = 1, closed: bool = False) -> np.ndarray:
    """Derivative of the given order along axis 0 of ``values``."""
    values = np.asarray(values, dtype=float)
    n = values.shape[0]
    offsets = centered_offsets(order)
    half = offsets[-1]
    w = stencil_weights(offsets, order)
    scale = h**order

    if closed:
        if n < len(offsets):
            raise InsufficientDataError(f"need at least {len(offsets)} samples, got {n}")
        out = np.zeros_like(values)
        for o, wj in zip(offsets, w):
            if wj != 0.0:
                out += wj * np.roll(values, -o, axis=0)
        return out / scale

    edge = order + 4
    if n < max(len(offsets), edge):
        raise InsufficientDataError(f"need at least {max(len(offsets), edge)} samples, got {n}")
    out = np.empty_like(values)
    inner = slice(half, n - half)
    acc = np.zeros_like(values[inner])
    for o, wj in zip(offsets, w):
        if wj != 0.0:
            acc += wj * values[half + o : n - half + o]
    out[inner] = acc
    for k in range(half):
        wl = stencil_weights(tuple(j - k for j in range(edge)), order)
        out[k] = np.tensordot(wl, values[:edge], axes=1)
        # mirrored stencil at the right end
        wr = stencil_weights(tuple(k - j for j in range(edge)), order)
        out[n - 1 - k] = np.tensordot(wr, values[n - 1 - np.arange(edge)], axes=1)
    return out / scale


def midpoints(values, closed: bool = False) -> np.ndarray:
    """Cubic interpolation of ``values`` halfway between consecutive samples.

    Returns ``n`` rows for closed data (the last wraps to the first) and
    ``n - 1`` rows otherwise.
    """
    values = np.asarray(values, dtype=float)
    n = values.shape[0]
    if closed:
        return (
            -np.roll(values, 1, axis=0)
            + 9 * values
            + 9 * np.roll(values, -1, axis=0)
            - np.roll(values, -2, axis=0)
        ) / 16.0
    if n < 4:
        raise InsufficientDataError("need at least 4 samples for midpoint interpolation")
    out = np.empty((n - 1,) + values.shape[1:])
    out[1:-1] = (-values[:-3] + 9 * values[1:-2] + 9 * values[2:-1] - values[3:]) / 16.0
    out[0] = (3 * values[0] + 6 * values[1] - values[2]) / 8.0
    out[-1] = (3 * values[-1] + 6 * values[-2] - values[-3]) / 8.0
    return out
