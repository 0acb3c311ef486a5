"""Customer-to-product cluster mapping and transaction re-encoding.

Customer clusters are matched to the product clusters they depend on most
(dependency = Jaccard overlap of the clusters' record sets, both partitions
living on the same transaction universe). The records of the selected pairs
are then re-encoded into discrete items: numerical values become the owning
product cluster's mean/variation-range label, categorical values become
"var=state" items, and each transaction carries its customer-cluster
membership item. The encoded database is what the rule miner consumes.
"""

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .distance import combine_families
from .schema import CUSTOMER_DOMAIN, FR_DOMAIN


class MappingError(ValueError):
    pass


def _fmt(x):
    """Quantize to 3 significant figures to keep the item vocabulary finite."""
    return format(float(x), ".3g")


@dataclass(frozen=True)
class ClusterProfile:
    """Per-variable summary of one cluster: mean + range, or mode + counts."""

    cluster_id: str
    members: tuple                 # record indices
    tids: tuple
    numeric: dict = field(default_factory=dict)      # var -> (mean, lo, hi)
    categorical: dict = field(default_factory=dict)  # var -> (mode, Counter)

    @property
    def size(self):
        return len(self.members)

    def interval_label(self, var_id):
        mean, lo, hi = self.numeric[var_id]
        return f"{var_id}:{_fmt(lo)}-{_fmt(hi)}(μ{_fmt(mean)})"


def profile_cluster(cluster, dataset, cluster_id="g1", domain=FR_DOMAIN):
    if not cluster:
        raise MappingError("cannot profile an empty cluster")
    members = tuple(sorted(cluster))
    numeric, categorical = {}, {}
    for var in dataset.schema.domain_vars(domain):
        vals = [dataset.records[i].value(domain, var.id) for i in members]
        if var.kind == "numerical":
            xs = np.array([var.numeric_value(v) for v in vals])
            numeric[var.id] = (float(xs.mean()), float(xs.min()), float(xs.max()))
        else:
            counts = Counter(vals)
            # mode tie-break: declared option order
            best = max(var.options, key=lambda o: (counts.get(o, 0),))
            categorical[var.id] = (best, dict(counts))
    tids = tuple(dataset.records[i].tid for i in members)
    return ClusterProfile(cluster_id, members, tids, numeric, categorical)


def dependency(g, p):
    """Jaccard overlap of two clusters' record-index sets."""
    g, p = set(g), set(p)
    union = g | p
    if not union:
        return 0.0
    return len(g & p) / len(union)


@dataclass
class DependencyTable:
    """s x l dependency scores plus the selected (customer, product) pairs."""

    scores: np.ndarray
    customer_ids: tuple
    product_ids: tuple
    selected: tuple  # (customer_id, product_id, score)


def select_pairs(customer_partition, product_partition):
    """For each customer cluster pick the product cluster of max dependency.

    Ties go to the larger product cluster, then the lowest product index.
    """
    gs = customer_partition.clusters
    ps = product_partition.clusters
    scores = np.array([[dependency(g, p) for p in ps] for g in gs])
    cust_ids = tuple(f"g{i + 1}" for i in range(len(gs)))
    prod_ids = tuple(f"p{j + 1}" for j in range(len(ps)))
    selected = []
    for i, g in enumerate(gs):
        best = max(range(len(ps)),
                   key=lambda j: (scores[i, j], len(ps[j]), -j))
        selected.append((cust_ids[i], prod_ids[best], float(scores[i, best])))
    return DependencyTable(scores, cust_ids, prod_ids, tuple(selected))


@dataclass
class EncodedTransactionDB:
    """TID -> item set database in basket form, plus the profiles used."""

    transactions: tuple  # (tid, frozenset of items), sorted by tid
    product_profiles: dict
    customer_profiles: dict
    membership: dict     # tid -> customer cluster id

    def itemsets(self):
        return [items for _, items in self.transactions]

    def write_baskets(self, path):
        with open(path, "w") as fh:
            for tid, items in self.transactions:
                fh.write(tid + "," + ",".join(sorted(items)) + "\n")


def encode_for_mining(dataset, customer_partition, product_partition, table):
    """Build the item database from the records of the selected cluster pairs."""
    if not table.selected:
        raise MappingError("no representative transactions: empty selection")
    gs, ps = customer_partition.clusters, product_partition.clusters
    g_by_id = dict(zip(table.customer_ids, gs))
    p_by_id = dict(zip(table.product_ids, ps))

    keep = set()
    for gid, pid, _ in table.selected:
        keep |= set(g_by_id[gid]) | set(p_by_id[pid])

    product_profiles = {pid: profile_cluster(p, dataset, pid, FR_DOMAIN)
                        for pid, p in p_by_id.items()}
    customer_profiles = {gid: profile_cluster(g, dataset, gid, CUSTOMER_DOMAIN)
                         for gid, g in g_by_id.items()}
    prod_of = {i: pid for pid, p in p_by_id.items() for i in p}
    cust_of = {i: gid for gid, g in g_by_id.items() for i in g}

    schema = dataset.schema
    transactions, membership = [], {}
    for i in sorted(keep):
        rec = dataset.records[i]
        items = set()
        gid = cust_of[i]
        items.add(f"{gid}-member")
        for var in schema.customer_attrs:
            items.add(f"{var.id}={rec.value(CUSTOMER_DOMAIN, var.id)}")
        profile = product_profiles[prod_of[i]]
        for var in schema.fr_vars:
            if var.kind == "numerical":
                items.add(profile.interval_label(var.id))
            else:
                items.add(f"{var.id}={rec.value(FR_DOMAIN, var.id)}")
        transactions.append((rec.tid, frozenset(items)))
        membership[rec.tid] = gid
    transactions.sort(key=lambda t: t[0])
    return EncodedTransactionDB(tuple(transactions), product_profiles,
                                customer_profiles, membership)


def assign_new_customer(needs, profiles, schema):
    """Nearest customer-cluster profile for a new customer's need options.

    The profile representative is the modal state per categorical variable and
    the mean (range-normalized) per numerical one; the comparison reuses the
    mixed-type composite distance. Ties go to the larger cluster, then the
    lowest cluster id.
    """
    if not profiles:
        raise MappingError("no customer clusters to assign to")
    num_specs = schema.by_kind(CUSTOMER_DOMAIN, "numerical")
    bin_specs = schema.by_kind(CUSTOMER_DOMAIN, "binary")
    nom_specs = schema.by_kind(CUSTOMER_DOMAIN, "nominal")

    def dist(profile):
        d_num = d_bin = d_nom = None
        if num_specs:
            w = np.array([v.weight for v in num_specs])
            a = np.array([(v.numeric_value(needs[v.id]) - v.lo) / (v.hi - v.lo)
                          for v in num_specs])
            b = np.array([(profile.numeric[v.id][0] - v.lo) / (v.hi - v.lo)
                          for v in num_specs])
            d_num = float(np.sqrt(np.sum((w * (a - b)) ** 2)))
        if bin_specs:
            mism = sum(needs[v.id] != profile.categorical[v.id][0] for v in bin_specs)
            d_bin = mism / len(bin_specs)
        if nom_specs:
            mism = sum(needs[v.id] != profile.categorical[v.id][0] for v in nom_specs)
            d_nom = mism / len(nom_specs)
        return combine_families(d_num, d_bin, d_nom, schema.family_weights)

    ordered = sorted(profiles, key=lambda p: (dist(p), -p.size, p.cluster_id))
    return ordered[0].cluster_id
