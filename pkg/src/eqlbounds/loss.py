"""Boundary-seeking loss.

Three data terms plus regularization:

* ``term_e``      weighted mean of the signed directional errors; pushes the
                  surface away from the data on the bounded side,
* ``term_p``      quadratic penalty on the percentile subset of points whose
                  errors are largest, i.e. the points nearest the sought
                  boundary; pulls the surface onto them,
* ``term_anchor`` absolute value of the single worst error, which stops the
                  surface from drifting off without limit,
* ``term_reg``    l1/l2 penalty on the output-layer weights.

The total ``z`` is the plain sum of the four terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .datamodel import Direction, LossConfig
from .network import EqlNetwork


@dataclass(frozen=True, eq=False)
class LossBreakdown:
    """One evaluation of the loss, split by term.

    ``z`` always equals the sum of the four term fields.  The percentile
    subset used by ``term_p`` is kept for gradient computation and
    inspection.
    """

    z: float
    term_e: float
    term_p: float
    term_anchor: float
    term_reg: float
    p_gamma_indices: np.ndarray

    def __post_init__(self) -> None:
        idx = np.array(self.p_gamma_indices, dtype=np.int64)
        idx.setflags(write=False)
        object.__setattr__(self, "p_gamma_indices", idx)


def directional_errors(y: np.ndarray, preds: np.ndarray, direction: Direction) -> np.ndarray:
    """Signed errors oriented by the sought constraint direction.

    LOWER (seeking ``bound <= f(x)``) uses ``y - preds``; UPPER uses
    ``preds - y``.  With zero targets the errors are just the negated (or
    plain) predictions.
    """
    y_arr = np.asarray(y, dtype=float)
    p_arr = np.asarray(preds, dtype=float)
    if y_arr.shape != p_arr.shape or y_arr.ndim != 1:
        raise ValueError(f"y and preds must be equal-length vectors, got {y_arr.shape} and {p_arr.shape}")
    if direction is Direction.LOWER:
        return y_arr - p_arr
    return p_arr - y_arr


def term_e(e: np.ndarray, alpha1: float) -> float:
    """alpha1 times the mean signed error."""
    e_arr = np.asarray(e, dtype=float)
    if e_arr.size == 0:
        raise ValueError("term_e needs at least one error value")
    return alpha1 * float(e_arr.sum()) / e_arr.size


def p_gamma_subset(e: np.ndarray, gamma: float, smallest: bool = False) -> np.ndarray:
    """Indices of the top gamma percent largest errors, sorted ascending.

    The subset holds ``k = max(1, ceil(gamma * n / 100))`` indices; ties on
    the error value resolve toward the lower index.  ``smallest=True``
    selects the opposite end of the sorted errors instead (an experimental
    alternative reading of the percentile rule).
    """
    e_arr = np.asarray(e, dtype=float)
    n = e_arr.size
    if n == 0:
        raise ValueError("p_gamma_subset needs at least one error value")
    if not (0 < gamma <= 100):
        raise ValueError(f"gamma must lie in (0, 100], got {gamma}")
    k = min(n, max(1, math.ceil(gamma * n / 100.0)))
    order = np.argsort(e_arr if smallest else -e_arr, kind="stable")
    return np.sort(order[:k])


def term_p(y: np.ndarray, preds: np.ndarray, indices: np.ndarray, alpha2: float) -> float:
    """(alpha2 / n) times the summed squared residual over the subset.

    The divisor is the full dataset size, not the subset size.
    """
    y_arr = np.asarray(y, dtype=float)
    p_arr = np.asarray(preds, dtype=float)
    if y_arr.shape != p_arr.shape or y_arr.ndim != 1 or y_arr.size == 0:
        raise ValueError("y and preds must be equal-length nonempty vectors")
    idx = np.asarray(indices, dtype=np.int64)
    diff = y_arr[idx] - p_arr[idx]
    return alpha2 * float(diff @ diff) / y_arr.size


def term_anchor(e: np.ndarray, alpha3: float) -> float:
    """alpha3 times the absolute value of the maximum error.

    Maximum first, absolute value second: for all-negative errors this is
    the magnitude of the error closest to zero.
    """
    e_arr = np.asarray(e, dtype=float)
    if e_arr.size == 0:
        raise ValueError("term_anchor needs at least one error value")
    return alpha3 * abs(float(e_arr.max()))


def term_reg(net: EqlNetwork, l1: float, l2: float) -> float:
    """l1/l2 penalty over the output-layer weights only."""
    w = net.w_out
    return l1 * float(np.abs(w).sum()) + l2 * float(w @ w)


def loss_total(y: np.ndarray, preds: np.ndarray, net: EqlNetwork, cfg: LossConfig) -> LossBreakdown:
    """Compose the full loss for one batch of predictions."""
    e = directional_errors(y, preds, cfg.direction)
    idx = p_gamma_subset(e, cfg.gamma, cfg.gamma_smallest_errors)
    t_e = term_e(e, cfg.alpha1)
    t_p = term_p(y, preds, idx, cfg.alpha2)
    t_a = term_anchor(e, cfg.alpha3)
    t_r = term_reg(net, cfg.l1, cfg.l2)
    return LossBreakdown(t_e + t_p + t_a + t_r, t_e, t_p, t_a, t_r, idx)
