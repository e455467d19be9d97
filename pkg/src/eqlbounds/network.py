"""Small equation-learner network: one symbolic layer, one linear readout.

The symbolic layer computes one weighted sum per unit (no bias) and pushes
it through that unit's primitive.  With the implemented primitive set
(identity and constant) the whole network is affine in its input, which is
what lets a trained network collapse into a single linear inequality.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Sequence

import numpy as np

from .datamodel import Dataset, EmptyDatasetError


class UnsupportedPrimitiveError(NotImplementedError):
    """A declared primitive that has no forward implementation yet."""


class Primitive(Enum):
    """Catalog of symbolic-layer activations.

    Only IDENTITY and CONSTANT are implemented; the rest are declared for
    future expansion and raise :class:`UnsupportedPrimitiveError` when used.
    """

    IDENTITY = "identity"
    CONSTANT = "constant"
    SIN = "sin"
    EXP = "exp"
    SIGMOID = "sigmoid"
    LOG = "log"
    RECIPROCAL = "reciprocal"
    SQRT = "sqrt"


IMPLEMENTED_PRIMITIVES = frozenset({Primitive.IDENTITY, Primitive.CONSTANT})

# Default architecture: two pass-through units plus two constant units.
DEFAULT_PRIMITIVES = (
    Primitive.IDENTITY,
    Primitive.IDENTITY,
    Primitive.CONSTANT,
    Primitive.CONSTANT,
)


@dataclass(eq=False)
class EqlNetwork:
    """Plain value object holding the parameters of one network.

    ``mask_in``/``mask_out`` mark weights frozen at exactly zero; a masked
    position must hold the value 0.0.  The output bias is never masked.
    Training code works on its own private copy.
    """

    w_in: np.ndarray
    primitives: tuple[Primitive, ...]
    w_out: np.ndarray
    b_out: float
    mask_in: np.ndarray | None = None
    mask_out: np.ndarray | None = None

    def __post_init__(self) -> None:
        w_in = np.array(self.w_in, dtype=float)
        w_out = np.array(self.w_out, dtype=float)
        prims = tuple(self.primitives)
        if w_in.ndim != 2:
            raise ValueError(f"w_in must be 2-D (units x features), got shape {w_in.shape}")
        h, f = w_in.shape
        if h < 1 or f < 1:
            raise ValueError("network needs at least one unit and one feature")
        if w_out.shape != (h,):
            raise ValueError(f"w_out must have shape ({h},), got {w_out.shape}")
        if len(prims) != h or not all(isinstance(p, Primitive) for p in prims):
            raise ValueError(f"primitives must be {h} Primitive values")
        if not (np.all(np.isfinite(w_in)) and np.all(np.isfinite(w_out)) and math.isfinite(self.b_out)):
            raise ValueError("network parameters contain non-finite values")
        mask_in = (
            np.zeros((h, f), dtype=bool) if self.mask_in is None else np.array(self.mask_in, dtype=bool)
        )
        mask_out = (
            np.zeros(h, dtype=bool) if self.mask_out is None else np.array(self.mask_out, dtype=bool)
        )
        if mask_in.shape != (h, f) or mask_out.shape != (h,):
            raise ValueError("mask shapes must match the weight shapes")
        if np.any(w_in[mask_in] != 0.0) or np.any(w_out[mask_out] != 0.0):
            raise ValueError("masked weights must be exactly zero")
        self.w_in = w_in
        self.primitives = prims
        self.w_out = w_out
        self.b_out = float(self.b_out)
        self.mask_in = mask_in
        self.mask_out = mask_out

    @property
    def n_units(self) -> int:
        return self.w_in.shape[0]

    @property
    def n_features(self) -> int:
        return self.w_in.shape[1]

    def copy(self) -> "EqlNetwork":
        return EqlNetwork(
            self.w_in.copy(),
            self.primitives,
            self.w_out.copy(),
            self.b_out,
            self.mask_in.copy(),
            self.mask_out.copy(),
        )


def _identity_columns(net: EqlNetwork) -> np.ndarray:
    unsupported = [p for p in net.primitives if p not in IMPLEMENTED_PRIMITIVES]
    if unsupported:
        raise UnsupportedPrimitiveError(
            f"primitive {unsupported[0].value!r} is declared but not implemented"
        )
    return np.array([p is Primitive.IDENTITY for p in net.primitives])


def forward_batch(net: EqlNetwork, points: np.ndarray) -> np.ndarray:
    """Evaluate the network on every row of ``points`` (shape N x F)."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != net.n_features:
        raise ValueError(f"points must have shape (N, {net.n_features}), got {pts.shape}")
    if not np.all(np.isfinite(pts)):
        raise ValueError("points contain non-finite values")
    is_identity = _identity_columns(net)
    sums = pts @ net.w_in.T
    activations = np.where(is_identity[None, :], sums, 1.0)
    return activations @ net.w_out + net.b_out


def forward(net: EqlNetwork, x: np.ndarray) -> float:
    """Evaluate the network on a single feature vector."""
    vec = np.asarray(x, dtype=float)
    if vec.shape != (net.n_features,):
        raise ValueError(f"x must have shape ({net.n_features},), got {vec.shape}")
    return float(forward_batch(net, vec[None, :])[0])


def initialize(
    dataset: Dataset,
    primitives: Sequence[Primitive] = DEFAULT_PRIMITIVES,
    seed: int = 0,
) -> EqlNetwork:
    """Seeded initialization from the dataset's value range.

    Both weight layers draw Xavier-uniform values: the symbolic layer with
    fan (F, H), the readout with fan (H, 1).  The output bias draws
    uniformly between half the smallest and half the largest value in the
    dataset; a degenerate range (all values identical) pins the bias to
    half that value and emits a warning.  The result depends only on the
    architecture, the dataset extrema, and the seed.
    """
    if dataset.n_points == 0:
        raise EmptyDatasetError("cannot initialize from an empty dataset")
    prims = tuple(primitives)
    h, f = len(prims), dataset.n_features
    if h < 1:
        raise ValueError("need at least one symbolic unit")
    rng = np.random.default_rng(seed)
    limit_in = math.sqrt(6.0 / (f + h))
    w_in = rng.uniform(-limit_in, limit_in, size=(h, f))
    limit_out = math.sqrt(6.0 / (h + 1))
    w_out = rng.uniform(-limit_out, limit_out, size=h)
    lo = 0.5 * float(dataset.points.min())
    hi = 0.5 * float(dataset.points.max())
    if lo == hi:
        warnings.warn(
            "dataset values are all identical; output bias pinned to half that value",
            RuntimeWarning,
            stacklevel=2,
        )
        b_out = lo
    else:
        b_out = float(rng.uniform(lo, hi))
    return EqlNetwork(w_in, prims, w_out, b_out)


def apply_mask(net: EqlNetwork, threshold: float) -> EqlNetwork:
    """Freeze small weights at exactly zero; returns a new network.

    A weight is masked when its magnitude falls below ``threshold`` or it
    is exactly zero already; positions masked earlier stay masked.  The
    output bias is never masked.  Applying the same threshold twice is a
    no-op the second time.
    """
    if not (math.isfinite(threshold) and threshold >= 0):
        raise ValueError(f"threshold must be finite and >= 0, got {threshold}")

    def freeze(weights: np.ndarray, mask: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        new_mask = mask | (np.abs(weights) < threshold) | (weights == 0.0)
        frozen = weights.copy()
        frozen[new_mask] = 0.0
        return frozen, new_mask

    w_in, mask_in = freeze(net.w_in, net.mask_in)
    w_out, mask_out = freeze(net.w_out, net.mask_out)
    return EqlNetwork(w_in, net.primitives, w_out, net.b_out, mask_in, mask_out)


def save_checkpoint(net: EqlNetwork, path: str | Path) -> None:
    """Serialize a network (weights, primitives, masks) as JSON."""
    payload = {
        "w_in": [[float(v) for v in row] for row in net.w_in],
        "primitives": [p.value for p in net.primitives],
        "w_out": [float(v) for v in net.w_out],
        "b_out": net.b_out,
        "mask_in": [[bool(v) for v in row] for row in net.mask_in],
        "mask_out": [bool(v) for v in net.mask_out],
    }
    Path(path).write_text(json.dumps(payload) + "\n", encoding="utf-8")


def load_checkpoint(path: str | Path) -> EqlNetwork:
    """Reload a network saved by :func:`save_checkpoint`."""
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
        return EqlNetwork(
            np.asarray(payload["w_in"], dtype=float),
            tuple(Primitive(p) for p in payload["primitives"]),
            np.asarray(payload["w_out"], dtype=float),
            float(payload["b_out"]),
            np.asarray(payload["mask_in"], dtype=bool),
            np.asarray(payload["mask_out"], dtype=bool),
        )
    except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
        raise ValueError(f"cannot load checkpoint from {path}: {exc}") from exc
