"""Priority weights from pairwise comparison matrices (analytic hierarchy process)."""

import numpy as np

# Saaty random indices for matrix orders 1..15.
RANDOM_INDEX = {
    1: 0.0, 2: 0.0, 3: 0.58, 4: 0.90, 5: 1.12,
    6: 1.24, 7: 1.32, 8: 1.41, 9: 1.45, 10: 1.49,
    11: 1.51, 12: 1.48, 13: 1.56, 14: 1.57, 15: 1.59,
}

CONSISTENCY_LIMIT = 0.1


class AhpError(ValueError):
    pass


class WeightVector:
    """Positive weights summing to 1, with the consistency ratio of their source.

    Attributes
    ----------
    weights : ndarray
        Length-N positive vector, sums to 1 within 1e-9.
    consistency_ratio : float
        0 for fixed (non-derived) weights.
    raw_sum : float
        Sum of the input values before renormalization.
    """

    def __init__(self, weights, consistency_ratio=0.0, raw_sum=None):
        w = np.asarray(weights, dtype=float)
        if w.ndim != 1 or w.size == 0:
            raise AhpError("weights must be a non-empty 1-d vector")
        if np.any(w <= 0):
            raise AhpError("all weights must be positive")
        if abs(w.sum() - 1.0) > 1e-9:
            raise AhpError(f"weights must sum to 1, got {w.sum()!r}")
        self.weights = w
        self.consistency_ratio = float(consistency_ratio)
        self.raw_sum = float(w.sum() if raw_sum is None else raw_sum)

    def __len__(self):
        return self.weights.size

    @property
    def is_consistent(self):
        return self.consistency_ratio <= CONSISTENCY_LIMIT

    def __repr__(self):
        return (f"WeightVector({np.array2string(self.weights, precision=4)}, "
                f"CR={self.consistency_ratio:.4f})")


def validate_pcm(pcm):
    """Check that `pcm` is a valid reciprocal comparison matrix and return it."""
    a = np.asarray(pcm, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise AhpError("comparison matrix must be square")
    n = a.shape[0]
    if not (2 <= n <= 15):
        raise AhpError(f"matrix order {n} outside supported range 2..15")
    if np.any(a <= 0):
        raise AhpError("comparison matrix entries must be positive")
    if np.max(np.abs(np.diag(a) - 1.0)) > 1e-9:
        raise AhpError("comparison matrix diagonal must be 1")
    if np.max(np.abs(a * a.T - 1.0)) > 1e-9:
        raise AhpError("comparison matrix is not reciprocal")
    return a


def derive_weights(pcm, tol=1e-10, max_iter=1000):
    """Principal-eigenvector weights of a reciprocal comparison matrix.

    Power iteration on the matrix; the eigenvalue estimate lambda_max feeds
    the consistency ratio (lambda_max - n) / (n - 1) / RI(n).
    """
    a = validate_pcm(pcm)
    n = a.shape[0]
    w = np.full(n, 1.0 / n)
    for _ in range(max_iter):
        w_next = a @ w
        w_next /= w_next.sum()
        if np.max(np.abs(w_next - w)) <= tol * np.max(w_next):
            w = w_next
            break
        w = w_next
    lam = float(np.mean((a @ w) / w))
    ci = (lam - n) / (n - 1)
    cr = max(ci, 0.0) / RANDOM_INDEX[n] if RANDOM_INDEX[n] > 0 else 0.0
    return WeightVector(w, consistency_ratio=cr)


def load_fixed_weights(values):
    """Renormalize an explicit weight vector to sum exactly 1.

    The pre-normalization sum is kept on the result so callers can report
    inputs that deviate from 1 by more than 1e-6.
    """
    v = np.asarray(values, dtype=float)
    if v.ndim != 1 or v.size == 0:
        raise AhpError("weight values must be a non-empty 1-d vector")
    if np.any(v <= 0):
        raise AhpError("all weight values must be positive")
    s = float(v.sum())
    return WeightVector(v / s, consistency_ratio=0.0, raw_sum=s)


def consistent_pcm(weights):
    """Build the perfectly consistent comparison matrix w_i / w_j."""
    w = np.asarray(weights, dtype=float)
    return w[:, None] / w[None, :]
