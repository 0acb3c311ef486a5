import os

import numpy as np
import pytest

from fuzzybasket import schema as sc
from fuzzybasket.ahp import load_fixed_weights

DATA_DIR = os.path.join(os.path.dirname(__file__), "..", "data")

PAPER_STYLE_WEIGHTS = [0.115, 0.351, 0.067, 0.034, 0.021, 0.075, 0.146,
                       0.083, 0.106]


@pytest.fixture(scope="session")
def store_schema():
    return sc.load_schema(os.path.join(DATA_DIR, "schema.json"))


@pytest.fixture(scope="session")
def store_dataset(store_schema):
    raw = sc.load_transactions(os.path.join(DATA_DIR, "transactions.csv"),
                               store_schema)
    return sc.validate_dataset(raw).dataset


@pytest.fixture(scope="session")
def config_path():
    return os.path.join(DATA_DIR, "config.json")


def tiny_schema(num=1, bin_=1, nom=1):
    """Minimal mixed schema for unit tests: v-num*, v-bin*, v-nom*."""
    fr = []
    for i in range(num):
        fr.append(sc.VariableSpec(f"n{i}", f"n{i}", "numerical", lo=0, hi=100))
    for i in range(bin_):
        fr.append(sc.VariableSpec(f"b{i}", f"b{i}", "binary",
                                  options=("yes", "no")))
    for i in range(nom):
        fr.append(sc.VariableSpec(f"c{i}", f"c{i}", "nominal",
                                  options=("x", "y", "z")))
    cust = (sc.VariableSpec("a0", "a0", "nominal", options=("hi", "lo")),)
    return sc.FeatureSchema(cust, tuple(fr),
                            load_fixed_weights([1.0] * len(fr)),
                            (0.4, 0.3, 0.3))


def make_records(schema, rows):
    """rows: list of (tid, needs dict, frs dict)."""
    return sc.Dataset(schema, tuple(
        sc.TransactionRecord(tid, needs, frs) for tid, needs, frs in rows))


def random_reflexive_symmetric(rng, n=5):
    r = rng.random((n, n))
    r = (r + r.T) / 2
    np.fill_diagonal(r, 1.0)
    return r
