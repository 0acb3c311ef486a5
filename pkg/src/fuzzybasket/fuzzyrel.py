"""Fuzzy relational clustering: similarity relation, max-min transitive
closure, alpha-cuts and partition extraction.

Relations are plain T x T float arrays in [0, 1]; crisp cuts are boolean
arrays. The closure runs by repeated squaring (R <- R o R), which for a
reflexive relation reaches the union of all powers in at most ceil(log2 T)
compositions. Max-min never creates new values, so the fixpoint test is
exact equality.
"""

import math
from dataclasses import dataclass

import numpy as np
from numba import njit, prange


class RelationError(ValueError):
    pass


def check_fuzzy_relation(r):
    r = np.ascontiguousarray(r, dtype=float)
    if r.ndim != 2 or r.shape[0] != r.shape[1]:
        raise RelationError("relation must be a square matrix")
    if np.any(r < 0) or np.any(r > 1):
        raise RelationError("relation entries must lie in [0, 1]")
    if np.any(np.diag(r) != 1.0):
        raise RelationError("relation must be reflexive (unit diagonal)")
    if np.max(np.abs(r - r.T)) > 1e-12:
        raise RelationError("relation must be symmetric")
    return r


def similarity_relation(d):
    """Fuzzy compatible relation 1 - d/d_max from a dissimilarity matrix.

    d_max is the largest off-diagonal distance; identical records everywhere
    (d_max = 0) give the all-ones relation. This conversion is an
    interpretation choice: it guarantees values in [0, 1], reflexivity and
    symmetry.
    """
    values = d.values if hasattr(d, "values") else np.asarray(d, float)
    t = values.shape[0]
    off = values[~np.eye(t, dtype=bool)]
    d_max = off.max() if off.size else 0.0
    if d_max == 0:
        return np.ones((t, t))
    r = 1.0 - values / d_max
    np.fill_diagonal(r, 1.0)
    return check_fuzzy_relation(r)


@njit(parallel=True, cache=True)
def _compose_kernel(r, s):
    n = r.shape[0]
    out = np.zeros((n, n))
    for i in prange(n):
        for k in range(n):
            rik = r[i, k]
            for j in range(n):
                v = rik if rik < s[k, j] else s[k, j]
                if v > out[i, j]:
                    out[i, j] = v
    return out


def maxmin_compose(r, s):
    """Max-min relational product: out[i, j] = max_k min(r[i, k], s[k, j])."""
    r = np.ascontiguousarray(r, dtype=float)
    s = np.ascontiguousarray(s, dtype=float)
    if r.shape != s.shape or r.ndim != 2 or r.shape[0] != r.shape[1]:
        raise RelationError(f"dimension mismatch: {r.shape} vs {s.shape}")
    return _compose_kernel(r, s)


def transitive_closure(r):
    """Least max-min transitive relation containing reflexive symmetric r."""
    r = check_fuzzy_relation(r)
    t = r.shape[0]
    max_squarings = max(1, math.ceil(math.log2(t))) if t > 1 else 1
    for _ in range(max_squarings):
        nxt = maxmin_compose(r, r)
        if np.array_equal(nxt, r):
            break
        r = nxt
    return r


def is_maxmin_transitive(r):
    return bool(np.all(maxmin_compose(r, r) <= r))


def alpha_cut(t_r, alpha):
    """Boolean thresholding at level alpha in (0, 1]."""
    if not 0 < alpha <= 1:
        raise RelationError(f"cut level must be in (0, 1], got {alpha}")
    return np.asarray(t_r, float) >= alpha


def cut_levels(t_r):
    """Distinct off-diagonal values of a closure: the meaningful cut levels."""
    t_r = np.asarray(t_r, float)
    n = t_r.shape[0]
    off = t_r[~np.eye(n, dtype=bool)]
    return sorted(set(float(x) for x in off if x > 0))


@dataclass(frozen=True)
class Partition:
    """Disjoint clusters of record indices covering 0..T-1, from one cut."""

    clusters: tuple  # tuple of sorted index tuples, ordered by first member
    cut_level: float

    def __post_init__(self):
        seen = [i for c in self.clusters for i in c]
        if sorted(seen) != list(range(len(seen))):
            raise RelationError("clusters must cover all indices exactly once")

    @property
    def size(self):
        return len(self.clusters)

    def label_of(self, index):
        for k, c in enumerate(self.clusters):
            if index in c:
                return k
        raise KeyError(index)

    def refines(self, coarser):
        """True if every cluster here is contained in one cluster of `coarser`."""
        containers = [set(c) for c in coarser.clusters]
        return all(any(set(c) <= big for big in containers)
                   for c in self.clusters)


def _find_violation(cut):
    # boolean composition via float matmul (BLAS) keeps this fast at T ~ 2000
    reach = (cut.astype(np.float64) @ cut.astype(np.float64)) > 0
    bad = reach & ~cut
    if not bad.any():
        return None
    i, j = np.argwhere(bad)[0]
    k = int(np.nonzero(cut[i] & cut[:, j])[0][0])
    return (int(i), int(k), int(j))


def extract_clusters(cut, alpha):
    """Equivalence classes of a boolean equivalence relation.

    Rows with identical contents join one cluster; agreement with
    connected-component grouping is asserted (they coincide exactly when the
    input is an equivalence relation, which is validated first).
    """
    cut = np.asarray(cut, bool)
    n = cut.shape[0]
    if not np.all(np.diag(cut)):
        raise RelationError("cut is not reflexive")
    if not np.array_equal(cut, cut.T):
        raise RelationError("cut is not symmetric")
    viol = _find_violation(cut)
    if viol is not None:
        raise RelationError(f"cut is not transitive: violating triple {viol}")

    by_row = {}
    for i in range(n):
        by_row.setdefault(cut[i].tobytes(), []).append(i)
    row_clusters = sorted((tuple(v) for v in by_row.values()), key=lambda c: c[0])

    # union-find over edges, as a cross-check
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(n):
        for j in np.nonzero(cut[i, i + 1:])[0]:
            parent[find(i)] = find(int(j) + i + 1)
    comp = {}
    for i in range(n):
        comp.setdefault(find(i), []).append(i)
    cc_clusters = sorted((tuple(v) for v in comp.values()), key=lambda c: c[0])
    assert row_clusters == cc_clusters, "row grouping != connected components"

    return Partition(tuple(row_clusters), float(alpha))


def cluster_domain(dataset, domain, alpha, method="maxmin"):
    """distance -> relation -> closure -> cut -> partition, for one domain."""
    from .distance import dissimilarity_matrix

    d = dissimilarity_matrix(dataset, domain=domain, method=method)
    closure = transitive_closure(similarity_relation(d))
    return extract_clusters(alpha_cut(closure, alpha), alpha), closure


def cluster_both_domains(dataset, alpha, beta, method="maxmin"):
    """Customer partition at alpha and product partition at beta."""
    from .schema import CUSTOMER_DOMAIN, FR_DOMAIN

    cust, _ = cluster_domain(dataset, CUSTOMER_DOMAIN, alpha, method)
    prod, _ = cluster_domain(dataset, FR_DOMAIN, beta, method)
    return cust, prod
