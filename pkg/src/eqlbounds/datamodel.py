"""Shared value types: datasets, configs, constraints, and training reports.

Everything defined here is an immutable value object.  File I/O keeps full
float precision (``repr`` round-trip in CSV, native floats in JSON) so that
saved artifacts reload bit-for-bit.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Sequence

import numpy as np

# A coefficient below this magnitude counts as absent when canonicalizing
# or displaying a constraint.
COEFF_EPS = 1e-9


class DatasetError(ValueError):
    """Malformed dataset file or invalid dataset contents."""


class EmptyDatasetError(DatasetError):
    """Dataset file contains no data rows."""


class RaggedRowError(DatasetError):
    """CSV row with the wrong number of cells."""


class NonNumericError(DatasetError):
    """CSV cell that does not parse as a finite number."""


class Direction(Enum):
    """Which side of a surface an inequality bounds.

    Used both for the training objective (LOWER seeks constraints of the
    form ``bound <= f(x)``, UPPER the reverse) and for the relation of an
    extracted :class:`LinearConstraint`.
    """

    LOWER = "lower"
    UPPER = "upper"

    def flipped(self) -> "Direction":
        return Direction.UPPER if self is Direction.LOWER else Direction.LOWER


def default_feature_names(n_features: int) -> tuple[str, ...]:
    return tuple(f"X{i}" for i in range(n_features))


@dataclass(frozen=True, eq=False)
class Dataset:
    """A feature matrix plus one scalar target per row.

    Targets default to all zeros, which is what the boundary-fitting
    protocol trains against; nonzero targets are representable for
    experimentation.  Arrays are copied and frozen on construction.
    """

    points: np.ndarray
    targets: np.ndarray | None = None
    feature_names: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        pts = np.array(self.points, dtype=float)
        if pts.ndim != 2:
            raise DatasetError(f"points must be 2-D (rows x features), got shape {pts.shape}")
        n, f = pts.shape
        if f < 1:
            raise DatasetError("dataset needs at least one feature column")
        if not np.all(np.isfinite(pts)):
            raise DatasetError("points contain non-finite values")
        tgt = np.zeros(n) if self.targets is None else np.array(self.targets, dtype=float)
        if tgt.shape != (n,):
            raise DatasetError(f"targets must have shape ({n},), got {tgt.shape}")
        if not np.all(np.isfinite(tgt)):
            raise DatasetError("targets contain non-finite values")
        names = self.feature_names
        names = default_feature_names(f) if names is None else tuple(str(s) for s in names)
        if len(names) != f:
            raise DatasetError(f"expected {f} feature names, got {len(names)}")
        pts.setflags(write=False)
        tgt.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "targets", tgt)
        object.__setattr__(self, "feature_names", names)

    @property
    def n_points(self) -> int:
        return self.points.shape[0]

    @property
    def n_features(self) -> int:
        return self.points.shape[1]


def load_dataset(path: str | Path) -> Dataset:
    """Read a CSV dataset (UTF-8, comma separated, mandatory header row).

    The header names the feature columns; every later row must hold the
    same number of finite numeric cells.  Targets are initialized to zero.
    Errors report the offending position, with rows counted from 1 starting
    at the first row below the header.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DatasetError(f"cannot read {path}: {exc}") from exc
    rows = [row for row in csv.reader(text.splitlines()) if row]
    if not rows:
        raise EmptyDatasetError(f"{path}: file is empty")
    header = [cell.strip() for cell in rows[0]]
    if any(not name for name in header):
        raise DatasetError(f"{path}: header has an empty column name")
    n_cols = len(header)
    data = np.empty((len(rows) - 1, n_cols))
    for r, row in enumerate(rows[1:], start=1):
        if len(row) != n_cols:
            raise RaggedRowError(f"{path}: row {r} has {len(row)} cells, expected {n_cols}")
        for c, cell in enumerate(row, start=1):
            try:
                value = float(cell)
            except ValueError:
                raise NonNumericError(
                    f"{path}: non-numeric value {cell.strip()!r} at row {r}, col {c}"
                ) from None
            if not math.isfinite(value):
                raise NonNumericError(f"{path}: non-finite value at row {r}, col {c}")
            data[r - 1, c - 1] = value
    if data.shape[0] == 0:
        raise EmptyDatasetError(f"{path}: no data rows below the header")
    return Dataset(data, feature_names=tuple(header))


def save_dataset(dataset: Dataset, path: str | Path) -> None:
    """Write a dataset as CSV with full float precision (repr round-trip)."""
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(dataset.feature_names)
        for row in dataset.points:
            writer.writerow([repr(float(v)) for v in row])


@dataclass(frozen=True, eq=False)
class LinearConstraint:
    """A linear inequality ``coeffs . x`` vs ``bound`` in canonical form.

    Canonical form: the highest-indexed coefficient with magnitude at least
    COEFF_EPS equals exactly 1.0.  The extraction module produces this form;
    hand-built constraints must already satisfy it.
    """

    coeffs: np.ndarray
    bound: float
    relation: Direction

    def __post_init__(self) -> None:
        a = np.array(self.coeffs, dtype=float)
        if a.ndim != 1 or a.size < 1:
            raise ValueError(f"coeffs must be a 1-D vector, got shape {a.shape}")
        if not np.all(np.isfinite(a)) or not math.isfinite(self.bound):
            raise ValueError("constraint contains non-finite values")
        if not isinstance(self.relation, Direction):
            raise ValueError(f"relation must be a Direction, got {self.relation!r}")
        significant = np.flatnonzero(np.abs(a) >= COEFF_EPS)
        if significant.size == 0:
            raise ValueError("constraint has no coefficient of significant magnitude")
        lead = significant[-1]
        if a[lead] != 1.0:
            raise ValueError(
                f"constraint is not canonical: coefficient {lead} is {a[lead]!r}, expected 1.0"
            )
        a.setflags(write=False)
        object.__setattr__(self, "coeffs", a)
        object.__setattr__(self, "bound", float(self.bound))

    @property
    def n_features(self) -> int:
        return self.coeffs.size


def _display_number(value: float) -> str:
    """Format a number with four decimals, trimming trailing zeros.

    Magnitudes outside [1e-3, 1e5) switch to scientific notation so that
    tiny surviving terms stay visible instead of printing as 0.
    """
    if value == 0:
        return "0"
    mag = abs(value)
    if 1e-3 <= mag < 1e5:
        text = f"{value:.4f}".rstrip("0").rstrip(".")
        return "0" if text in ("-0", "") else text
    return f"{value:.4e}"


def constraint_text(constraint: LinearConstraint, feature_names: Sequence[str] | None = None) -> str:
    """Render a constraint as human-readable text, e.g. ``2.1469 <= 0.4772*X0 + X1``.

    Zero coefficients are elided and unit coefficients print as the bare
    feature name.
    """
    names = (
        default_feature_names(constraint.n_features)
        if feature_names is None
        else tuple(feature_names)
    )
    if len(names) != constraint.n_features:
        raise ValueError(f"expected {constraint.n_features} feature names, got {len(names)}")
    pieces: list[str] = []
    for name, coeff in zip(names, constraint.coeffs):
        if coeff == 0:
            continue
        body = name if abs(coeff) == 1.0 else f"{_display_number(abs(coeff))}*{name}"
        if not pieces:
            pieces.append(f"-{body}" if coeff < 0 else body)
        else:
            pieces.append(f"{' - ' if coeff < 0 else ' + '}{body}")
    expr = "".join(pieces) if pieces else "0"
    bound = _display_number(constraint.bound)
    if constraint.relation is Direction.LOWER:
        return f"{bound} <= {expr}"
    return f"{expr} <= {bound}"


def constraint_to_dict(constraint: LinearConstraint) -> dict:
    return {
        "coeffs": [float(v) for v in constraint.coeffs],
        "bound": constraint.bound,
        "relation": constraint.relation.value,
    }


def constraint_from_dict(payload: dict) -> LinearConstraint:
    try:
        coeffs = payload["coeffs"]
        bound = payload["bound"]
        relation = Direction(payload["relation"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed constraint payload: {exc}") from exc
    return LinearConstraint(np.asarray(coeffs, dtype=float), float(bound), relation)


def _constraint_base(path: str | Path) -> Path:
    path = Path(path)
    if path.suffix in (".json", ".txt"):
        return path.with_suffix("")
    return path


def save_constraint(
    constraint: LinearConstraint,
    path: str | Path,
    feature_names: Sequence[str] | None = None,
) -> None:
    """Write ``<base>.txt`` (display text) and ``<base>.json`` (lossless).

    ``path`` may be the base name or either of the two file names; a
    trailing ``.txt``/``.json`` suffix is stripped before writing the pair.
    """
    base = _constraint_base(path)
    base.with_suffix(".txt").write_text(
        constraint_text(constraint, feature_names) + "\n", encoding="utf-8"
    )
    base.with_suffix(".json").write_text(
        json.dumps(constraint_to_dict(constraint)) + "\n", encoding="utf-8"
    )


def load_constraint(path: str | Path) -> LinearConstraint:
    """Read a constraint from the JSON half of a saved pair."""
    base = _constraint_base(path)
    target = base.with_suffix(".json")
    try:
        payload = json.loads(target.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ValueError(f"cannot read {target}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValueError(f"{target}: invalid JSON: {exc}") from exc
    return constraint_from_dict(payload)


@dataclass(frozen=True)
class LossConfig:
    """Weights and knobs for the three-term boundary loss.

    alpha1 scales the signed error mean, alpha2 the quadratic penalty on
    the percentile subset, alpha3 the worst-error anchor.  gamma is the
    percentile width in percent.  l1/l2 regularize the output-layer
    weights.  ``gamma_smallest_errors`` flips the percentile subset to the
    smallest errors instead of the largest (off by default).
    """

    alpha1: float = 1.0
    alpha2: float = 0.5
    alpha3: float = 0.5
    gamma: float = 5.0
    direction: Direction = Direction.LOWER
    l1: float = 0.05
    l2: float = 0.05
    gamma_smallest_errors: bool = False

    def __post_init__(self) -> None:
        for name in ("alpha1", "alpha2", "alpha3"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0):
                raise ValueError(f"{name} must be finite and non-negative, got {v}")
        if self.alpha1 + self.alpha2 + self.alpha3 <= 0:
            raise ValueError("at least one alpha must be positive")
        if not (0 < self.gamma <= 100):
            raise ValueError(f"gamma must lie in (0, 100], got {self.gamma}")
        for name in ("l1", "l2"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0):
                raise ValueError(f"{name} must be finite and non-negative, got {v}")
        if not isinstance(self.direction, Direction):
            raise ValueError(f"direction must be a Direction, got {self.direction!r}")


@dataclass(frozen=True)
class TrainConfig:
    """Descent-loop settings: epochs, step size, masking, seeding."""

    epochs: int = 400
    learning_rate: float = 1e-8
    mask_threshold: float | None = 0.001
    seed: int = 0
    runs: int = 1

    def __post_init__(self) -> None:
        if self.epochs < 1:
            raise ValueError(f"epochs must be >= 1, got {self.epochs}")
        if not (math.isfinite(self.learning_rate) and self.learning_rate > 0):
            raise ValueError(f"learning_rate must be positive, got {self.learning_rate}")
        if self.mask_threshold is not None and not (
            math.isfinite(self.mask_threshold) and self.mask_threshold >= 0
        ):
            raise ValueError(f"mask_threshold must be >= 0 or None, got {self.mask_threshold}")
        if self.runs < 1:
            raise ValueError(f"runs must be >= 1, got {self.runs}")


@dataclass(frozen=True)
class EpochRecord:
    """Loss breakdown recorded at the start of one epoch."""

    z: float
    term_e: float
    term_p: float
    term_anchor: float
    term_reg: float


@dataclass(frozen=True, eq=False)
class TrainReport:
    """Outcome of one training run: history, constraint, score, seed."""

    records: tuple[EpochRecord, ...]
    constraint: LinearConstraint
    violation_rate: float
    seed: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "records", tuple(self.records))
        if not self.records:
            raise ValueError("a training report needs at least one epoch record")
        for rec in self.records:
            values = (rec.z, rec.term_e, rec.term_p, rec.term_anchor, rec.term_reg)
            if not all(math.isfinite(v) for v in values):
                raise ValueError("epoch records contain non-finite values")
        if not math.isfinite(self.violation_rate):
            raise ValueError("violation_rate must be finite")
