"""Mixed-type dissimilarity: weighted Euclidean + matching coefficients.

Per-family distances between two transaction instances:

* numerical: sqrt(sum_q (w_q * (x_qi - x_qj))^2) on max-min normalized values
  (the weight sits inside the square, as stated, so it contributes w_q^2);
* binary: mismatching positions / total binary variables (simple matching);
* nominal: (total - matching) / total nominal variables.

The composite is the family-weighted sum; weights of families absent from the
schema are redistributed proportionally among the present ones.
"""

from dataclasses import dataclass

import numpy as np

from .preprocess import MAXMIN, standardize
from .schema import FR_DOMAIN

FAMILIES = ("numerical", "binary", "nominal")


class DistanceError(ValueError):
    pass


def _check_lengths(a, b):
    if len(a) != len(b):
        raise DistanceError(f"length mismatch: {len(a)} vs {len(b)}")


def numerical_distance(vi, vj, w):
    vi, vj = np.asarray(vi, float), np.asarray(vj, float)
    _check_lengths(vi, vj)
    w = np.asarray(w, float)
    if w.shape != vi.shape:
        raise DistanceError("weight vector length must match the sub-vectors")
    return float(np.sqrt(np.sum((w * (vi - vj)) ** 2)))


def binary_distance(vi, vj):
    vi, vj = np.asarray(vi, int), np.asarray(vj, int)
    _check_lengths(vi, vj)
    return float(np.count_nonzero(vi != vj) / vi.size)


def nominal_distance(vi, vj):
    vi, vj = np.asarray(vi), np.asarray(vj)
    _check_lengths(vi, vj)
    if vi.size == 0:
        raise DistanceError("nominal distance needs at least one variable")
    return float(np.count_nonzero(vi != vj) / vi.size)


def redistribute_weights(family_weights, present):
    """Family weights renormalized over the families actually present."""
    w = np.asarray(family_weights, float)
    mask = np.asarray(present, bool)
    if not mask.any():
        raise DistanceError("no variable family present in the schema")
    kept = w * mask
    total = kept.sum()
    if total == 0:
        # declared weights put no mass on the present families: split evenly
        return mask / mask.sum()
    return kept / total


def combine_families(d_num, d_bin, d_nom, family_weights):
    """Weighted sum of the family distances; pass None for an absent family."""
    dists = (d_num, d_bin, d_nom)
    present = [d is not None for d in dists]
    w = redistribute_weights(family_weights, present)
    return float(sum(wi * di for wi, di in zip(w, dists) if di is not None))


@dataclass
class DomainData:
    """Per-family column blocks of one domain, ready for pairwise distances."""

    num: np.ndarray        # T x Q, max-min normalized
    num_weights: np.ndarray
    bin: np.ndarray        # T x B of 0/1
    nom: np.ndarray        # T x C of option indices
    family_weights: np.ndarray  # redistributed over present families

    @classmethod
    def from_dataset(cls, dataset, domain=FR_DOMAIN, standardized=None,
                     method=MAXMIN):
        schema = dataset.schema
        if standardized is None and schema.by_kind(domain, "numerical"):
            standardized = standardize(dataset, method, domain)
        if standardized is not None and standardized.values.size:
            num = standardized.values
            if domain == FR_DOMAIN:
                num_w = np.array([schema.fr_weight_of(c) for c in standardized.columns])
            else:
                specs = {v.id: v for v in schema.domain_vars(domain)}
                num_w = np.array([specs[c].weight for c in standardized.columns])
        else:
            num = np.empty((len(dataset), 0))
            num_w = np.empty(0)

        bin_specs = schema.by_kind(domain, "binary")
        b = np.empty((len(dataset), len(bin_specs)), dtype=np.int8)
        for j, var in enumerate(bin_specs):
            # first declared option codes as 1 (state present)
            for i, rec in enumerate(dataset.records):
                b[i, j] = 1 if rec.value(domain, var.id) == var.options[0] else 0

        nom_specs = schema.by_kind(domain, "nominal")
        c = np.empty((len(dataset), len(nom_specs)), dtype=np.int64)
        for j, var in enumerate(nom_specs):
            index = {opt: k for k, opt in enumerate(var.options)}
            for i, rec in enumerate(dataset.records):
                # unknown/imputed markers compare as a mismatch to everything
                c[i, j] = index.get(rec.value(domain, var.id), -1 - i)

        present = (num.shape[1] > 0, b.shape[1] > 0, c.shape[1] > 0)
        fam = redistribute_weights(schema.family_weights, present)
        return cls(num, num_w, b, c, fam)

    def pair_distance(self, i, j):
        d_num = (numerical_distance(self.num[i], self.num[j], self.num_weights)
                 if self.num.shape[1] else None)
        d_bin = binary_distance(self.bin[i], self.bin[j]) if self.bin.shape[1] else None
        d_nom = nominal_distance(self.nom[i], self.nom[j]) if self.nom.shape[1] else None
        return combine_families(d_num, d_bin, d_nom, self.family_weights)


@dataclass
class DissimilarityMatrix:
    """Symmetric zero-diagonal T x T distance matrix with family breakdown."""

    values: np.ndarray
    kind_breakdown: dict

    def __post_init__(self):
        v = self.values
        if np.max(np.abs(v - v.T)) > 1e-12:
            raise DistanceError("dissimilarity matrix must be symmetric")
        if np.any(np.diag(v) != 0):
            raise DistanceError("dissimilarity matrix diagonal must be zero")
        if np.any(v < 0):
            raise DistanceError("dissimilarity entries must be >= 0")


def dissimilarity_matrix(dataset, domain=FR_DOMAIN, standardized=None,
                         method=MAXMIN, breakdown=False):
    """Pairwise composite distances over all records of one domain."""
    dd = DomainData.from_dataset(dataset, domain, standardized, method)
    t = len(dataset)
    parts = {}

    if dd.num.shape[1]:
        acc = np.zeros((t, t))
        for q in range(dd.num.shape[1]):
            diff = dd.num[:, q, None] - dd.num[None, :, q]
            acc += (dd.num_weights[q] * diff) ** 2
        parts["numerical"] = np.sqrt(acc)
    if dd.bin.shape[1]:
        mism = (dd.bin[:, None, :] != dd.bin[None, :, :]).sum(axis=2)
        parts["binary"] = mism / dd.bin.shape[1]
    if dd.nom.shape[1]:
        mism = (dd.nom[:, None, :] != dd.nom[None, :, :]).sum(axis=2)
        parts["nominal"] = mism / dd.nom.shape[1]

    total = np.zeros((t, t))
    for fam, w in zip(FAMILIES, dd.family_weights):
        if fam in parts:
            total += w * parts[fam]
    np.fill_diagonal(total, 0.0)
    total = (total + total.T) / 2  # kill float asymmetry from the accumulation
    return DissimilarityMatrix(total, parts if breakdown else {})
