"""Full-batch gradient descent with hand-derived gradients.

The loss is piecewise smooth: the percentile subset and the worst-error
index are held fixed while differentiating one evaluation, which matches
central finite differences everywhere away from membership ties.  The
update rule is plain descent, ``theta <- theta - lr * grad``, with optional
per-epoch magnitude masking that freezes small weights at exactly zero for
the rest of the run.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from .datamodel import (
    Dataset,
    Direction,
    EmptyDatasetError,
    EpochRecord,
    LossConfig,
    TrainConfig,
    TrainReport,
)
from .extract import extract_constraint, violation_rate
from .loss import (
    LossBreakdown,
    directional_errors,
    loss_total,
    p_gamma_subset,
    term_anchor,
    term_e,
    term_p,
    term_reg,
)
from .network import DEFAULT_PRIMITIVES, EqlNetwork, Primitive, apply_mask, forward_batch, initialize


class DivergenceError(ArithmeticError):
    """Training produced a non-finite loss value."""

    def __init__(self, epoch: int, message: str | None = None):
        self.epoch = epoch
        super().__init__(message or f"loss became non-finite at epoch {epoch}")


class NonFiniteGradientError(ArithmeticError):
    """A gradient array contains a non-finite value."""


@dataclass(eq=False)
class Gradients:
    """Partial derivatives of the total loss for every parameter."""

    d_w_in: np.ndarray
    d_w_out: np.ndarray
    d_b_out: float


def gradients(net: EqlNetwork, dataset: Dataset, cfg: LossConfig) -> tuple[LossBreakdown, Gradients]:
    """Evaluate the loss and its exact gradient at the current parameters.

    The percentile subset and the worst-error index are computed once from
    the current errors and treated as constant; at a tie the lower index
    wins, which picks one member of the subgradient set.  Masked positions
    always receive gradient exactly zero.
    """
    if dataset.n_points == 0:
        raise EmptyDatasetError("cannot take gradients on an empty dataset")
    points, y = dataset.points, dataset.targets
    n = dataset.n_points

    # Overflow on a diverging run shows up as inf/nan and is reported through
    # the explicit finiteness checks below, so numpy's warnings add nothing.
    with np.errstate(over="ignore", invalid="ignore"):
        return _gradients_impl(net, points, y, n, cfg)


def _gradients_impl(
    net: EqlNetwork, points: np.ndarray, y: np.ndarray, n: int, cfg: LossConfig
) -> tuple[LossBreakdown, Gradients]:
    preds = forward_batch(net, points)
    e = directional_errors(y, preds, cfg.direction)
    idx = p_gamma_subset(e, cfg.gamma, cfg.gamma_smallest_errors)
    t_e = term_e(e, cfg.alpha1)
    t_p = term_p(y, preds, idx, cfg.alpha2)
    t_a = term_anchor(e, cfg.alpha3)
    t_r = term_reg(net, cfg.l1, cfg.l2)
    breakdown = LossBreakdown(t_e + t_p + t_a + t_r, t_e, t_p, t_a, t_r, idx)

    # d(error)/d(pred) is -s with s = +1 for LOWER, -1 for UPPER.
    s = 1.0 if cfg.direction is Direction.LOWER else -1.0
    dz_dpred = np.full(n, -cfg.alpha1 * s / n)
    dz_dpred[idx] += (2.0 * cfg.alpha2 / n) * (preds[idx] - y[idx])
    worst = int(np.argmax(e))
    dz_dpred[worst] += -cfg.alpha3 * s * float(np.sign(e[worst]))

    # Chain rule through the affine network.  Identity units contribute
    # their weighted sum; constant units contribute 1 and carry no input
    # gradient.
    is_identity = np.array([p is Primitive.IDENTITY for p in net.primitives])
    sums = points @ net.w_in.T
    activations = np.where(is_identity[None, :], sums, 1.0)

    d_b_out = float(dz_dpred.sum())
    d_w_out = activations.T @ dz_dpred
    d_w_out += cfg.l1 * np.sign(net.w_out) + 2.0 * cfg.l2 * net.w_out
    d_w_in = np.outer(net.w_out * is_identity, points.T @ dz_dpred)

    d_w_in[net.mask_in] = 0.0
    d_w_out[net.mask_out] = 0.0

    # When the loss itself is non-finite the caller aborts on the breakdown
    # (divergence with an epoch index), so only flag gradients that went bad
    # while the loss still looked healthy.
    if math.isfinite(breakdown.z):
        for name, grad in (("d_w_in", d_w_in), ("d_w_out", d_w_out)):
            if not np.all(np.isfinite(grad)):
                raise NonFiniteGradientError(f"{name} contains non-finite values")
        if not math.isfinite(d_b_out):
            raise NonFiniteGradientError("d_b_out is non-finite")

    return breakdown, Gradients(d_w_in, d_w_out, d_b_out)


def train(
    dataset: Dataset,
    loss_cfg: LossConfig,
    train_cfg: TrainConfig,
    primitives: Sequence[Primitive] = DEFAULT_PRIMITIVES,
) -> tuple[EqlNetwork, TrainReport]:
    """Run one seeded training run and extract the resulting constraint.

    Each epoch records the loss breakdown at its start, then applies one
    descent step; when masking is enabled the step is followed by a mask
    pass, so a weight that ends an epoch below the threshold is zero for
    every later epoch.  A non-finite loss aborts with the epoch index.
    """
    if dataset.n_points == 0:
        raise EmptyDatasetError("cannot train on an empty dataset")
    net = initialize(dataset, primitives, train_cfg.seed)
    lr = train_cfg.learning_rate
    records: list[EpochRecord] = []
    for epoch in range(train_cfg.epochs):
        breakdown, grads = gradients(net, dataset, loss_cfg)
        terms = (
            breakdown.z,
            breakdown.term_e,
            breakdown.term_p,
            breakdown.term_anchor,
            breakdown.term_reg,
        )
        if not all(math.isfinite(v) for v in terms):
            raise DivergenceError(epoch)
        records.append(EpochRecord(*terms))
        net.w_in = net.w_in - lr * grads.d_w_in
        net.w_out = net.w_out - lr * grads.d_w_out
        net.b_out = net.b_out - lr * grads.d_b_out
        if train_cfg.mask_threshold is not None:
            net = apply_mask(net, train_cfg.mask_threshold)
    constraint = extract_constraint(net, loss_cfg.direction)
    rate = violation_rate(constraint, dataset)
    report = TrainReport(tuple(records), constraint, rate, train_cfg.seed)
    return net, report


def train_multi(
    dataset: Dataset,
    loss_cfg: LossConfig,
    train_cfg: TrainConfig,
    primitives: Sequence[Primitive] = DEFAULT_PRIMITIVES,
) -> list[tuple[EqlNetwork, TrainReport]]:
    """Run ``train_cfg.runs`` independent runs seeded seed, seed+1, ...

    Results come back sorted by final violation rate, best first; ties keep
    seed order.
    """
    results = []
    for offset in range(train_cfg.runs):
        cfg = replace(train_cfg, seed=train_cfg.seed + offset, runs=1)
        results.append(train(dataset, loss_cfg, cfg, primitives))
    results.sort(key=lambda pair: pair[1].violation_rate)
    return results


def export_history_csv(report: TrainReport, path: str | Path) -> None:
    """Write the per-epoch loss history as CSV."""
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["epoch", "z", "term_e", "term_p", "term_anchor", "term_reg"])
        for epoch, rec in enumerate(report.records):
            writer.writerow(
                [epoch] + [repr(v) for v in (rec.z, rec.term_e, rec.term_p, rec.term_anchor, rec.term_reg)]
            )


_LOSS_KEYS = {"alpha1", "alpha2", "alpha3", "gamma", "direction", "l1", "l2", "gamma_smallest_errors"}
_TRAIN_KEYS = {"epochs", "learning_rate", "mask_threshold", "seed", "runs"}


def configs_from_mapping(payload: dict) -> tuple[LossConfig, TrainConfig]:
    """Split one flat mapping into the two config objects.

    Keys absent from the mapping keep their defaults; unknown keys are an
    error so that typos do not silently fall back to defaults.
    """
    unknown = set(payload) - _LOSS_KEYS - _TRAIN_KEYS
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    loss_kwargs = {k: payload[k] for k in _LOSS_KEYS if k in payload}
    if "direction" in loss_kwargs:
        loss_kwargs["direction"] = Direction(loss_kwargs["direction"])
    train_kwargs = {k: payload[k] for k in _TRAIN_KEYS if k in payload}
    return LossConfig(**loss_kwargs), TrainConfig(**train_kwargs)


def load_configs(path: str | Path) -> tuple[LossConfig, TrainConfig]:
    """Read loss and training settings from one JSON file."""
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ValueError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise ValueError(f"{path}: config must be a JSON object")
    return configs_from_mapping(payload)
