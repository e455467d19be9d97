"""
Generating uniform point clouds inside constrained regions
==========================================================

Every experiment in this package starts from a dataset of points drawn
uniformly from some feasible region: an axis-aligned box, optionally
carved down by strict linear cuts and/or capped by a ball.  This script
builds the four bundled presets, saves one to CSV, and then assembles a
custom region from scratch.
"""

import numpy as np

from eqlbounds import (
    BallCap,
    LinearCut,
    RegionSpec,
    generate,
    paper_dataset,
    save_dataset,
    save_region_spec,
)

# ---------------------------------------------------------------------------
# The bundled presets.  Each is fully determined by its name and a seed,
# so anyone running this script sees byte-identical data.
# ---------------------------------------------------------------------------
for name in ("square-high", "circle", "square-low", "cube"):
    data = paper_dataset(name, seed=0)
    mins = data.points.min(axis=0)
    maxs = data.points.max(axis=0)
    print(f"{name:12s} {data.n_points:5d} points, {data.n_features} features, "
          f"per-feature range {np.round(mins, 2)} .. {np.round(maxs, 2)}")

# The square presets live in the box [-5, 25]^2 with the half-plane
# 4 < X0 + 2*X1 cut away; verify the cut held.
square = paper_dataset("square-high", seed=0)
margin = square.points[:, 0] + 2.0 * square.points[:, 1] - 4.0
print(f"\nsquare-high cut margin: min {margin.min():.4f} (must be > 0)")

# Save the low-granularity variant: this CSV is the input for the other
# demo scripts.
save_dataset(square, "demo-square-high.csv")
print("wrote demo-square-high.csv")

# ---------------------------------------------------------------------------
# A custom region: a wedge in 2-D.  Start from the box [0, 10]^2, keep
# only points strictly below the diagonal (X1 < X0, written as the cut
# 0 < X0 - X1), and clip to a ball so the wedge has a curved outer edge.
# ---------------------------------------------------------------------------
wedge = RegionSpec(
    box=np.array([[0.0, 10.0], [0.0, 10.0]]),
    linear_cuts=(LinearCut(coeffs=np.array([1.0, -1.0]), bound=0.0),),
    quadratic_cap=BallCap(center=np.array([0.0, 0.0]), radius=8.0),
)
points = generate(wedge, n=400, seed=7)
inside = wedge.membership_mask(points.points)
print(f"\nwedge: {points.n_points} points, membership recheck "
      f"{int(inside.sum())}/{points.n_points}")

# Region specs round-trip through JSON, which is how the command line
# consumes them (eqlbounds gen --spec wedge.json --n 400).
save_region_spec(wedge, "demo-wedge.json")
print("wrote demo-wedge.json")
