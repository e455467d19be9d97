"""
What weight masking does to the extracted constraint
====================================================

During training, any weight whose magnitude drops below the mask
threshold is set to exactly zero and frozen there.  The payoff is
symbolic: a slope that decays through the threshold disappears from the
constraint entirely instead of lingering as numerical dust.  This script
trains the same seed twice -- once with masking, once without -- and
prints the two constraints side by side.
"""

import numpy as np

from eqlbounds import LossConfig, TrainConfig, constraint_text, paper_dataset, train

data = paper_dataset("square-high", seed=0)
loss_cfg = LossConfig()
SEED = 38   # a seed whose X0 slope decays toward zero during training


def run(mask_threshold):
    cfg = TrainConfig(epochs=400, learning_rate=1e-3,
                      mask_threshold=mask_threshold, seed=SEED)
    return train(data, loss_cfg, cfg)


masked_net, masked = run(0.001)
plain_net, plain = run(None)

print(f"seed {SEED}, 400 epochs, identical initialization\n")
print(f"  masked (threshold 0.001): {constraint_text(masked.constraint)}")
print(f"  unmasked                : {constraint_text(plain.constraint)}")

print("\ncoefficients:")
for i, name in enumerate(data.feature_names):
    print(f"  {name}: masked {masked.constraint.coeffs[i]:+.6f}   "
          f"unmasked {plain.constraint.coeffs[i]:+.6f}")

# The masked run's zero is exact -- the weight was frozen, not rounded.
zeroed = np.flatnonzero(masked.constraint.coeffs == 0.0)
print(f"\nexactly-zero coefficients in the masked constraint: "
      f"{[data.feature_names[i] for i in zeroed]}")
assert zeroed.size > 0

# Inside the network, the frozen positions are visible as mask flags.
print(f"input-weight mask rows with any frozen entry: "
      f"{int(masked_net.mask_in.any(axis=1).sum())} of {masked_net.mask_in.shape[0]}")
print(f"output-weight mask: {masked_net.mask_out.tolist()}")
print(f"violation rates: masked {masked.violation_rate:.2f}%, "
      f"unmasked {plain.violation_rate:.2f}%")
