"""Standardization of numerical columns (z-score and max-min)."""

from dataclasses import dataclass

import numpy as np

from .schema import FR_DOMAIN

ZSCORE = "zscore"
MAXMIN = "maxmin"


@dataclass
class StandardizedMatrix:
    """T x Q standardized numerical block with its per-column statistics.

    For zscore, stats are (mean, std); for maxmin, (min, max). Columns with
    zero spread map to all-zero output and are flagged constant.
    """

    values: np.ndarray
    method: str
    columns: tuple
    stat_a: np.ndarray  # mean or min
    stat_b: np.ndarray  # std or max
    constant: np.ndarray


def numeric_matrix(dataset, domain=FR_DOMAIN):
    """Raw T x Q matrix of the domain's numerical variables (midpoint-coded)."""
    specs = dataset.schema.by_kind(domain, "numerical")
    cols = tuple(v.id for v in specs)
    out = np.empty((len(dataset), len(specs)))
    for j, var in enumerate(specs):
        for i, rec in enumerate(dataset.records):
            out[i, j] = var.numeric_value(rec.value(domain, var.id))
    return out, cols


def zscore_columns(x):
    """Column-wise (x - mean) / std with population (1/T) variance.

    Zero-spread columns become all zeros; the returned mask marks them.
    """
    x = np.asarray(x, dtype=float)
    mean = x.mean(axis=0)
    std = np.sqrt(np.mean(np.abs(x - mean) ** 2, axis=0))
    constant = std == 0
    safe = np.where(constant, 1.0, std)
    centered = x - mean
    centered -= centered.mean(axis=0)  # cancel float residue: exact mean 0
    out = centered / safe
    out[:, constant] = 0.0
    return out, mean, std, constant


def maxmin_columns(x):
    """Column-wise (x - min) / (max - min) into [0, 1]."""
    x = np.asarray(x, dtype=float)
    lo = x.min(axis=0)
    hi = x.max(axis=0)
    constant = hi == lo
    span = np.where(constant, 1.0, hi - lo)
    out = (x - lo) / span
    out[:, constant] = 0.0
    return out, lo, hi, constant


def zscore_standardize(dataset, domain=FR_DOMAIN):
    x, cols = numeric_matrix(dataset, domain)
    vals, mean, std, constant = zscore_columns(x)
    return StandardizedMatrix(vals, ZSCORE, cols, mean, std, constant)


def maxmin_normalize(dataset, domain=FR_DOMAIN):
    x, cols = numeric_matrix(dataset, domain)
    vals, lo, hi, constant = maxmin_columns(x)
    return StandardizedMatrix(vals, MAXMIN, cols, lo, hi, constant)


def standardize(dataset, method=MAXMIN, domain=FR_DOMAIN):
    if method == MAXMIN:
        return maxmin_normalize(dataset, domain)
    if method == ZSCORE:
        return zscore_standardize(dataset, domain)
    raise ValueError(f"unknown standardization method {method!r}")
