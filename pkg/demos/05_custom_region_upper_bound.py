"""
Upper bounds, custom regions, and pruning
=========================================

Everything in the other demos used bundled presets and lower bounds.
Here we build a custom region whose interesting edge is an upper one --
points under the line 0.5*X0 + X1 = 8 -- train with direction=UPPER,
write a human-readable violation report, and finally show how pruning
strips numerically negligible coefficients from a constraint.
"""

import numpy as np

from eqlbounds import (
    Direction,
    LinearConstraint,
    LinearCut,
    LossConfig,
    RegionSpec,
    TrainConfig,
    constraint_text,
    generate,
    load_constraint,
    prune,
    save_constraint,
    train,
    violation_report,
)

# ---------------------------------------------------------------------------
# The region: box [0, 10]^2, keeping only points with 0.5*X0 + X1 < 8.
# An UPPER cut keeps the side where coeffs . x stays strictly below the
# bound.
# ---------------------------------------------------------------------------
region = RegionSpec(
    box=np.array([[0.0, 10.0], [0.0, 10.0]]),
    linear_cuts=(
        LinearCut(coeffs=np.array([0.5, 1.0]), bound=8.0, direction=Direction.UPPER),
    ),
)
data = generate(region, n=300, seed=3)
print(f"{data.n_points} points, edge value max "
      f"{np.max(0.5 * data.points[:, 0] + data.points[:, 1]):.4f} (true edge 8)")

# ---------------------------------------------------------------------------
# Train with direction=UPPER.  As in the square demo, the seed decides
# which supporting line of the hull the run settles on; this one lands
# near the top edge.
# ---------------------------------------------------------------------------
loss_cfg = LossConfig(direction=Direction.UPPER)
train_cfg = TrainConfig(epochs=400, learning_rate=1e-3,
                        mask_threshold=0.001, seed=7)
_, report = train(data, loss_cfg, train_cfg)
print(f"learned: {constraint_text(report.constraint)}")
print("(generating edge for reference: 0.5*X0 + X1 <= 8)")

# violation_report packages the score with exact counts, ready for JSON.
vr = violation_report(report.constraint, data)
print(f"check  : {vr['violations']} of {vr['n']} points violate "
      f"({vr['rate_percent']:.2f}%)")

# Constraints persist as a text line plus a JSON payload.
save_constraint(report.constraint, "demo-upper")
reloaded = load_constraint("demo-upper.json")
unchanged = (
    np.array_equal(reloaded.coeffs, report.constraint.coeffs)
    and reloaded.bound == report.constraint.bound
    and reloaded.relation is report.constraint.relation
)
print(f"round-trip through demo-upper.json is lossless: {unchanged}")
assert unchanged

# ---------------------------------------------------------------------------
# Pruning.  A coefficient several orders of magnitude below the largest
# one is usually reporting noise, not structure.  prune zeroes every
# coefficient smaller than rel_threshold times the largest magnitude,
# then re-canonicalizes.
# ---------------------------------------------------------------------------
noisy = LinearConstraint(
    coeffs=np.array([1e-5, 0.75, 1.0]),
    bound=2.0,
    relation=Direction.LOWER,
)
cleaned = prune(noisy, rel_threshold=0.01)
print(f"\nnoisy  : {constraint_text(noisy)}")
print(f"pruned : {constraint_text(cleaned)}")

# Pruning is idempotent: cleaning an already-clean constraint is a no-op.
again = prune(cleaned, rel_threshold=0.01)
assert np.array_equal(again.coeffs, cleaned.coeffs) and again.bound == cleaned.bound
print("pruning an already-pruned constraint changes nothing")

# If the trailing coefficient itself is the dust, the surviving ones are
# re-normalized so the constraint stays in canonical form (trailing
# nonzero coefficient exactly 1).
lopsided = LinearConstraint(
    coeffs=np.array([500.0, 200.0, 1.0]),
    bound=100.0,
    relation=Direction.LOWER,
)
print(f"\nlopsided: {constraint_text(lopsided)}")
print(f"pruned  : {constraint_text(prune(lopsided, rel_threshold=0.01))}")
