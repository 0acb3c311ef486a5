"""How variable weights are derived from pairwise judgements.

A buyer panel compares feature importance two at a time ("cost matters
twice as much as size"), producing a reciprocal matrix. The principal
eigenvector of that matrix is the weight vector; the consistency ratio
says how self-contradictory the judgements were (<= 0.10 is acceptable).

Run:  python3 demos/derive_weights.py
"""

import numpy as np

from fuzzybasket import derive_weights, load_fixed_weights

# Judgements over three features: cost, performance, size.
# Entry [i][j] answers "how much more important is feature i than j?"
judgements = np.array([
    [1.0, 2.0, 4.0],
    [0.5, 1.0, 3.0],
    [0.25, 1 / 3, 1.0],
])

w = derive_weights(judgements)
print("pairwise judgement matrix:")
print(judgements)
print()
for name, weight in zip(("cost", "performance", "size"), w.weights):
    print(f"  weight[{name}] = {weight:.4f}")
print(f"consistency ratio = {w.consistency_ratio:.4f} "
      f"({'acceptable' if w.is_consistent else 'too inconsistent'})")

# Weights can also arrive pre-computed from an earlier study. They are
# renormalized to sum exactly to 1 and the deviation is kept on record.
print()
fixed = load_fixed_weights([0.115, 0.351, 0.067, 0.034, 0.021,
                            0.075, 0.146, 0.083, 0.106])
print(f"fixed 9-variable vector: raw sum {fixed.raw_sum:.3f}, "
      f"renormalized to {fixed.weights.sum():.1f}")
print("  ", np.round(fixed.weights, 4))
