"""Rejection sampling of uniform points from box-plus-cuts regions.

A region is an axis-aligned box intersected with optional strict linear
cuts and at most one closed ball cap.  Candidates are drawn uniformly from
the box and kept when they satisfy every cut, so accepted points are
uniform over the feasible region.  Four ready-made benchmark regions cover
a cut square (sampled at two densities), a disk, and a cut cube.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .datamodel import Dataset, Direction


class RejectionBudgetExceededError(RuntimeError):
    """Too many consecutive rejections; the region is empty or nearly so."""


@dataclass(frozen=True, eq=False)
class LinearCut:
    """Strict half-plane condition on a region.

    LOWER keeps points with ``bound < coeffs . x``; UPPER keeps points with
    ``coeffs . x < bound``.  Both are strict, matching how cut regions are
    usually written; the enclosing box bounds stay inclusive.
    """

    coeffs: np.ndarray
    bound: float
    direction: Direction = Direction.LOWER

    def __post_init__(self) -> None:
        a = np.array(self.coeffs, dtype=float)
        if a.ndim != 1 or a.size < 1 or not np.all(np.isfinite(a)):
            raise ValueError("cut coefficients must be a finite 1-D vector")
        if not math.isfinite(self.bound):
            raise ValueError("cut bound must be finite")
        a.setflags(write=False)
        object.__setattr__(self, "coeffs", a)
        object.__setattr__(self, "bound", float(self.bound))


@dataclass(frozen=True, eq=False)
class BallCap:
    """Closed ball condition: ``|x - center|^2 <= radius^2``."""

    center: np.ndarray
    radius: float

    def __post_init__(self) -> None:
        c = np.array(self.center, dtype=float)
        if c.ndim != 1 or not np.all(np.isfinite(c)):
            raise ValueError("ball center must be a finite 1-D vector")
        if not (math.isfinite(self.radius) and self.radius > 0):
            raise ValueError(f"ball radius must be positive, got {self.radius}")
        c.setflags(write=False)
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "radius", float(self.radius))


@dataclass(frozen=True, eq=False)
class RegionSpec:
    """Sampling region: box bounds per feature, strict cuts, optional ball."""

    box: np.ndarray
    linear_cuts: tuple[LinearCut, ...] = ()
    quadratic_cap: BallCap | None = None

    def __post_init__(self) -> None:
        box = np.array(self.box, dtype=float)
        if box.ndim != 2 or box.shape[1] != 2 or box.shape[0] < 1:
            raise ValueError(f"box must have shape (F, 2), got {box.shape}")
        if not np.all(np.isfinite(box)):
            raise ValueError("box bounds must be finite")
        if not np.all(box[:, 0] < box[:, 1]):
            raise ValueError("every box row needs lower < upper")
        cuts = tuple(self.linear_cuts)
        f = box.shape[0]
        for cut in cuts:
            if cut.coeffs.size != f:
                raise ValueError(f"cut has {cut.coeffs.size} coefficients, expected {f}")
        if self.quadratic_cap is not None and self.quadratic_cap.center.size != f:
            raise ValueError("ball center dimension must match the box")
        box.setflags(write=False)
        object.__setattr__(self, "box", box)
        object.__setattr__(self, "linear_cuts", cuts)

    @property
    def n_features(self) -> int:
        return self.box.shape[0]

    def contains(self, x: np.ndarray) -> bool:
        """Membership for a single point (box bounds inclusive, cuts strict)."""
        x = np.asarray(x, dtype=float)
        if np.any(x < self.box[:, 0]) or np.any(x > self.box[:, 1]):
            return False
        for cut in self.linear_cuts:
            value = float(cut.coeffs @ x)
            if cut.direction is Direction.LOWER:
                if not (cut.bound < value):
                    return False
            elif not (value < cut.bound):
                return False
        cap = self.quadratic_cap
        if cap is not None:
            delta = x - cap.center
            if float(delta @ delta) > cap.radius**2:
                return False
        return True

    def membership_mask(self, points: np.ndarray) -> np.ndarray:
        """Vectorized membership for an (N, F) array."""
        pts = np.asarray(points, dtype=float)
        ok = np.all(pts >= self.box[:, 0], axis=1) & np.all(pts <= self.box[:, 1], axis=1)
        for cut in self.linear_cuts:
            values = pts @ cut.coeffs
            if cut.direction is Direction.LOWER:
                ok &= cut.bound < values
            else:
                ok &= values < cut.bound
        cap = self.quadratic_cap
        if cap is not None:
            delta = pts - cap.center
            ok &= np.einsum("ij,ij->i", delta, delta) <= cap.radius**2
        return ok


# After this many rejections in a row (per requested point) the region is
# treated as effectively empty.
REJECTION_BUDGET_PER_POINT = 10_000


def generate(spec: RegionSpec, n: int, seed: int = 0) -> Dataset:
    """Draw ``n`` uniform points from the region; targets are all zero.

    Fully determined by (spec, n, seed).  Raises
    :class:`RejectionBudgetExceededError` after ``10000 * n`` consecutive
    rejections.
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    f = spec.n_features
    if n == 0:
        return Dataset(np.empty((0, f)))
    rng = np.random.default_rng(seed)
    lo, hi = spec.box[:, 0], spec.box[:, 1]
    budget = REJECTION_BUDGET_PER_POINT * n
    points = np.empty((n, f))
    accepted = 0
    consecutive = 0
    while accepted < n:
        candidate = rng.uniform(lo, hi)
        if spec.contains(candidate):
            points[accepted] = candidate
            accepted += 1
            consecutive = 0
        else:
            consecutive += 1
            if consecutive >= budget:
                raise RejectionBudgetExceededError(
                    f"{budget} consecutive rejections; the region appears empty"
                )
    return Dataset(points)


def _square_region() -> RegionSpec:
    return RegionSpec(
        box=[[-5.0, 25.0], [-5.0, 25.0]],
        linear_cuts=(LinearCut([1.0, 2.0], 4.0, Direction.LOWER),),
    )


def _circle_region() -> RegionSpec:
    r = math.sqrt(200.0)
    return RegionSpec(
        box=[[-r, r], [-r, r]],
        quadratic_cap=BallCap([0.0, 0.0], r),
    )


def _cube_region() -> RegionSpec:
    return RegionSpec(
        box=[[-5.0, 25.0], [-5.0, 25.0], [-5.0, 25.0]],
        linear_cuts=(LinearCut([1.0, 2.0, -3.0], 4.0, Direction.LOWER),),
    )


# name -> (region factory, point count)
PAPER_PRESETS: dict[str, tuple] = {
    "square-high": (_square_region, 600),
    "circle": (_circle_region, 250),
    "square-low": (_square_region, 100),
    "cube": (_cube_region, 2000),
}


def paper_dataset(name: str, seed: int = 0) -> Dataset:
    """Generate one of the named benchmark datasets."""
    try:
        factory, count = PAPER_PRESETS[name]
    except KeyError:
        raise ValueError(
            f"unknown preset {name!r}; choose from {sorted(PAPER_PRESETS)}"
        ) from None
    return generate(factory(), count, seed)


def region_spec_to_dict(spec: RegionSpec) -> dict:
    payload: dict = {
        "box": [[float(lo), float(hi)] for lo, hi in spec.box],
        "linear_cuts": [
            {
                "coeffs": [float(v) for v in cut.coeffs],
                "bound": cut.bound,
                "direction": cut.direction.value,
            }
            for cut in spec.linear_cuts
        ],
        "quadratic_cap": None,
    }
    if spec.quadratic_cap is not None:
        payload["quadratic_cap"] = {
            "center": [float(v) for v in spec.quadratic_cap.center],
            "radius": spec.quadratic_cap.radius,
        }
    return payload


def region_spec_from_dict(payload: dict) -> RegionSpec:
    try:
        cuts = tuple(
            LinearCut(
                np.asarray(c["coeffs"], dtype=float),
                float(c["bound"]),
                Direction(c.get("direction", "lower")),
            )
            for c in payload.get("linear_cuts", [])
        )
        cap = payload.get("quadratic_cap")
        ball = None
        if cap is not None:
            ball = BallCap(np.asarray(cap["center"], dtype=float), float(cap["radius"]))
        return RegionSpec(np.asarray(payload["box"], dtype=float), cuts, ball)
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed region spec: {exc}") from exc


def load_region_spec(path: str | Path) -> RegionSpec:
    """Read a region spec from JSON."""
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ValueError(f"cannot read region spec {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: invalid JSON: {exc}") from exc
    return region_spec_from_dict(payload)


def save_region_spec(spec: RegionSpec, path: str | Path) -> None:
    """Write a region spec as JSON."""
    Path(path).write_text(json.dumps(region_spec_to_dict(spec), indent=2) + "\n", encoding="utf-8")
