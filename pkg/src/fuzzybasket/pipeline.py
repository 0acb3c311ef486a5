"""End-to-end orchestration: ingest -> weights -> cluster -> map -> mine.

A run produces a self-contained JSON knowledge base (rules, cluster profiles,
dependency table, encoded transactions, schema snapshot) for one store
location, plus a human-readable report. The knowledge base can later answer
recommendation queries for a new customer without the original raw data.
"""

import datetime
import json
import os
import tempfile
from fractions import Fraction
from dataclasses import dataclass, field

import numpy as np

from . import ahp, apriori, fuzzyrel, mapping, preprocess, schema as sc
from .distance import dissimilarity_matrix

KB_SCHEMA_VERSION = 1


class ConfigError(ValueError):
    pass


class StageError(RuntimeError):
    def __init__(self, stage, cause):
        super().__init__(f"stage '{stage}' failed: {cause}")
        self.stage = stage
        self.cause = cause


@dataclass
class PipelineConfig:
    schema_path: str
    data_path: str
    output_dir: str
    location: str = "default"
    standardization: str = preprocess.MAXMIN
    weights: dict = field(default_factory=dict)        # {"fixed": [...]} or {"ahp_matrix": [...]}
    family_weights: dict = field(default_factory=dict)  # {"numerical":..,..} or {"ahp_matrix": ...}
    alpha: object = "enumerate"
    beta: object = "enumerate"
    minsup: float = 0.4
    minconf: float = 0.6
    dump_intermediates: bool = False

    def __post_init__(self):
        for name, x in (("minsup", self.minsup), ("minconf", self.minconf)):
            if not 0 < x <= 1:
                raise ConfigError(f"{name} must be in (0, 1], got {x}")
        for name, x in (("alpha", self.alpha), ("beta", self.beta)):
            if x != "enumerate" and not 0 < x <= 1:
                raise ConfigError(f"{name} must be in (0, 1] or 'enumerate', got {x}")
        if self.standardization not in (preprocess.MAXMIN, preprocess.ZSCORE):
            raise ConfigError(f"unknown standardization {self.standardization!r}")
        for p in (self.schema_path, self.data_path):
            if not os.path.exists(p):
                raise ConfigError(f"input file not found: {p}")

    @classmethod
    def from_json(cls, path, **overrides):
        with open(path) as fh:
            doc = json.load(fh)
        base = os.path.dirname(os.path.abspath(path))

        def resolve(p):
            return p if os.path.isabs(p) else os.path.join(base, p)

        kwargs = dict(
            schema_path=resolve(doc["schema"]),
            data_path=resolve(doc["data"]),
            output_dir=resolve(doc.get("output_dir", "out")),
            location=doc.get("location", "default"),
            standardization=doc.get("standardization", preprocess.MAXMIN),
            weights=doc.get("weights", {}),
            family_weights=doc.get("family_weights", {}),
            alpha=doc.get("alpha", "enumerate"),
            beta=doc.get("beta", "enumerate"),
            minsup=doc.get("minsup", 0.4),
            minconf=doc.get("minconf", 0.6),
            dump_intermediates=doc.get("dump_intermediates", False),
        )
        kwargs.update(overrides)
        return cls(**kwargs)

    def snapshot(self):
        return {
            "location": self.location, "standardization": self.standardization,
            "alpha": self.alpha, "beta": self.beta,
            "minsup": self.minsup, "minconf": self.minconf,
        }


def resolve_weights(config, n_fr):
    """Weight vector for the FR variables, from config (fixed or AHP)."""
    spec = config.weights
    if "fixed" in spec:
        return ahp.load_fixed_weights(spec["fixed"])
    if "ahp_matrix" in spec:
        return ahp.derive_weights(np.asarray(spec["ahp_matrix"], float))
    if "ahp_matrix_file" in spec:
        with open(spec["ahp_matrix_file"]) as fh:
            return ahp.derive_weights(np.asarray(json.load(fh), float))
    return ahp.load_fixed_weights([1.0] * n_fr)


def resolve_family_weights(config):
    spec = config.family_weights
    if "ahp_matrix" in spec:
        w = ahp.derive_weights(np.asarray(spec["ahp_matrix"], float))
        return tuple(w.weights)
    if spec:
        return (spec["numerical"], spec["binary"], spec["nominal"])
    return (1 / 3, 1 / 3, 1 / 3)


def _resolve_cut(level, closure, name):
    """A concrete cut level; 'enumerate' picks the smallest level that still

    separates the records into at least two clusters (the coarsest
    non-trivial partition) and reports all candidates."""
    candidates = fuzzyrel.cut_levels(closure)
    if level != "enumerate":
        return float(level), candidates
    for lv in candidates:
        part = fuzzyrel.extract_clusters(fuzzyrel.alpha_cut(closure, lv), lv)
        if part.size >= 2:
            return lv, candidates
    # fully connected at every level: cut at 1 (possibly still one cluster)
    return 1.0, candidates


def _atomic_write(path, text):
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-kb-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _profile_doc(p):
    return {"cluster_id": p.cluster_id, "members": list(p.members),
            "tids": list(p.tids),
            "numeric": {k: list(v) for k, v in p.numeric.items()},
            "categorical": {k: [v[0], v[1]] for k, v in p.categorical.items()}}


def _profile_from_doc(doc):
    return mapping.ClusterProfile(
        doc["cluster_id"], tuple(doc["members"]), tuple(doc["tids"]),
        {k: tuple(v) for k, v in doc["numeric"].items()},
        {k: (v[0], v[1]) for k, v in doc["categorical"].items()})


def run_pipeline(config):
    """Execute every stage and persist the knowledge base; returns it as a dict."""
    # -- ingest ------------------------------------------------------------
    try:
        raw_schema = sc.load_schema(config.schema_path)
        raw = sc.load_transactions(config.data_path, raw_schema)
    except (sc.SchemaError, sc.ValidationError, KeyError, json.JSONDecodeError) as e:
        raise StageError("ingest", e)

    # -- weights -----------------------------------------------------------
    try:
        weights = resolve_weights(config, len(raw_schema.fr_vars))
        family = resolve_family_weights(config)
        full_schema = sc.load_schema(config.schema_path, fr_weights=weights,
                                     family_weights=family)
        dataset = sc.Dataset(full_schema, raw.records)
        report = sc.validate_dataset(dataset)
        dataset = report.dataset
    except (sc.SchemaError, sc.ValidationError, ahp.AhpError) as e:
        raise StageError("weights" if isinstance(e, ahp.AhpError) else "ingest", e)

    # -- cluster -----------------------------------------------------------
    try:
        d_cust = dissimilarity_matrix(dataset, domain=sc.CUSTOMER_DOMAIN,
                                      method=config.standardization)
        d_prod = dissimilarity_matrix(dataset, domain=sc.FR_DOMAIN,
                                      method=config.standardization)
        t_r = fuzzyrel.transitive_closure(fuzzyrel.similarity_relation(d_cust))
        t_g = fuzzyrel.transitive_closure(fuzzyrel.similarity_relation(d_prod))
        alpha, alpha_levels = _resolve_cut(config.alpha, t_r, "alpha")
        beta, beta_levels = _resolve_cut(config.beta, t_g, "beta")
        cust_part = fuzzyrel.extract_clusters(fuzzyrel.alpha_cut(t_r, alpha), alpha)
        prod_part = fuzzyrel.extract_clusters(fuzzyrel.alpha_cut(t_g, beta), beta)
    except (fuzzyrel.RelationError, ValueError) as e:
        raise StageError("cluster", e)

    # -- map ---------------------------------------------------------------
    try:
        table = mapping.select_pairs(cust_part, prod_part)
        encoded = mapping.encode_for_mining(dataset, cust_part, prod_part, table)
    except mapping.MappingError as e:
        raise StageError("map", e)

    # -- mine --------------------------------------------------------------
    try:
        result = apriori.mine(encoded, config.minsup, config.minconf)
    except apriori.MiningError as e:
        raise StageError("mine", e)

    # -- assemble & persist ------------------------------------------------
    rules_doc = []
    for k, r in enumerate(result.rules):
        rules_doc.append({
            "id": f"r{k + 1:03d}",
            "antecedent": list(r.antecedent), "consequent": list(r.consequent),
            "count": r.count, "ante_count": r.ante_count, "n": r.n,
            "support": r.support, "confidence": r.confidence,
        })
    kb = {
        "kb_schema_version": KB_SCHEMA_VERSION,
        "location": config.location,
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "config": config.snapshot(),
        "schema": sc.schema_to_doc(dataset.schema),
        "weights": {
            "values": list(weights.weights),
            "raw_sum": weights.raw_sum,
            "raw_sum_deviation": abs(weights.raw_sum - 1.0),
            "consistency_ratio": weights.consistency_ratio,
            "consistent": weights.is_consistent,
        },
        "validation": {
            "repaired": [[t, v, x] for t, v, x in report.repaired],
            "unrepairable": [[t, why] for t, why in report.unrepairable],
        },
        "cut_levels": {"alpha": alpha, "beta": beta,
                       "alpha_candidates": alpha_levels,
                       "beta_candidates": beta_levels},
        "customer_clusters": [_profile_doc(p) for p in
                              encoded.customer_profiles.values()],
        "product_clusters": [_profile_doc(p) for p in
                             encoded.product_profiles.values()],
        "dependency": {
            "scores": [[float(x) for x in row] for row in table.scores],
            "customer_ids": list(table.customer_ids),
            "product_ids": list(table.product_ids),
            "selected": [[g, p, s] for g, p, s in table.selected],
        },
        "transactions": [[tid, sorted(items)] for tid, items in
                         encoded.transactions],
        "membership": encoded.membership,
        "rules": rules_doc,
        "mining_report": {"level_counts": result.level_counts,
                          "rule_count": result.rule_count},
    }

    # the knowledge base is written last, atomically: its presence marks a
    # completed run, so a failure mid-way leaves no half-built kb behind
    os.makedirs(config.output_dir, exist_ok=True)
    if config.dump_intermediates:
        _dump_intermediates(config.output_dir, dataset, d_cust, d_prod,
                            t_r, t_g, cust_part, prod_part)
    _atomic_write(os.path.join(config.output_dir, f"report-{config.location}.txt"),
                  format_report(kb))
    kb_path = os.path.join(config.output_dir, f"kb-{config.location}.json")
    _atomic_write(kb_path, json.dumps(kb, sort_keys=True, indent=2))
    return kb


def _dump_intermediates(outdir, dataset, d_cust, d_prod, t_r, t_g,
                        cust_part, prod_part):
    inter = os.path.join(outdir, "intermediates")
    os.makedirs(inter, exist_ok=True)
    tids = dataset.tids
    for name, m in (("dissimilarity-customer", d_cust.values),
                    ("dissimilarity-product", d_prod.values),
                    ("closure-customer", t_r), ("closure-product", t_g)):
        np.savetxt(os.path.join(inter, name + ".csv"), m,
                   delimiter=",", fmt="%.6f")
    for name, part, prefix in (("partition-customer", cust_part, "g"),
                               ("partition-product", prod_part, "p")):
        with open(os.path.join(inter, name + ".csv"), "w") as fh:
            for k, c in enumerate(part.clusters):
                fh.write(f"{prefix}{k + 1}," +
                         ",".join(tids[i] for i in c) + "\n")


def format_report(kb):
    lines = [f"Location: {kb['location']}",
             f"Generated: {kb['timestamp']}",
             "",
             f"Weights (CR={kb['weights']['consistency_ratio']:.4f}): " +
             ", ".join(f"{w:.4f}" for w in kb['weights']['values'])]
    if kb["weights"]["raw_sum_deviation"] > 1e-6:
        lines.append(f"  note: input weights summed to {kb['weights']['raw_sum']}"
                     f" (deviation {kb['weights']['raw_sum_deviation']:.4g}),"
                     " renormalized")
    if kb["validation"]["repaired"]:
        lines.append(f"Repaired values: {len(kb['validation']['repaired'])}")
    if kb["validation"]["unrepairable"]:
        lines.append("Unrepairable records: " +
                     ", ".join(t for t, _ in kb["validation"]["unrepairable"]))
    lines += ["",
              f"Cut levels: alpha={kb['cut_levels']['alpha']:.4f}, "
              f"beta={kb['cut_levels']['beta']:.4f}",
              "Customer clusters: " +
              ", ".join(f"{p['cluster_id']}({len(p['members'])})"
                        for p in kb["customer_clusters"]),
              "Product clusters: " +
              ", ".join(f"{p['cluster_id']}({len(p['members'])})"
                        for p in kb["product_clusters"]),
              "",
              "Dependency (selected pairs):"]
    for g, p, s in kb["dependency"]["selected"]:
        lines.append(f"  {g} -> {p} (score {s:.3f})")
    lines += ["", f"Rules mined: {kb['mining_report']['rule_count']}"]
    for r in kb["rules"][:20]:
        lines.append(f"  [{r['id']}] {{{', '.join(r['antecedent'])}}} => "
                     f"{{{', '.join(r['consequent'])}}} "
                     f"(s={r['support']:.3f}, c={r['confidence']:.3f})")
    return "\n".join(lines) + "\n"


def load_kb(path):
    """Load a knowledge base and re-check every rule against its thresholds."""
    with open(path) as fh:
        kb = json.load(fh)
    if kb.get("kb_schema_version") != KB_SCHEMA_VERSION:
        raise ConfigError(f"unsupported knowledge-base version in {path}")
    transactions = [frozenset(items) for _, items in kb["transactions"]]
    n = len(transactions)
    minsup, minconf = kb["config"]["minsup"], kb["config"]["minconf"]
    for r in kb["rules"]:
        both = set(r["antecedent"]) | set(r["consequent"])
        count = sum(1 for t in transactions if both <= t)
        ante = sum(1 for t in transactions if set(r["antecedent"]) <= t)
        if count != r["count"] or ante != r["ante_count"] or r["n"] != n:
            raise ConfigError(f"rule {r['id']}: stored counts disagree with "
                              "the stored transactions")
        # decimal reading of thresholds, matching the miner
        if Fraction(count, n) < Fraction(str(minsup)) or \
                Fraction(count, ante) < Fraction(str(minconf)):
            raise ConfigError(f"rule {r['id']} violates the stored thresholds")
    return kb


def recommend(kb, needs):
    """Ranked rule suggestions for a new customer's need options.

    The customer is assigned to the nearest cluster profile; returned rules
    are those whose antecedent items all occur in that cluster's transaction
    vocabulary, ranked by confidence, support, then antecedent.
    """
    schema = sc.schema_from_doc(kb["schema"])
    profiles = [_profile_from_doc(d) for d in kb["customer_clusters"]]
    cluster_id = mapping.assign_new_customer(needs, profiles, schema)
    vocab = set()
    for tid, items in kb["transactions"]:
        if kb["membership"].get(tid) == cluster_id:
            vocab |= set(items)
    hits = [r for r in kb["rules"] if set(r["antecedent"]) <= vocab]
    hits.sort(key=lambda r: (-r["confidence"], -r["support"], r["antecedent"]))
    return {"cluster": cluster_id, "suggestions": hits,
            "warning": None if hits else "no rule antecedent matches this cluster"}


def explain(kb, rule_id):
    """Provenance of one rule: supporting TIDs, source clusters, dependency."""
    rule = next((r for r in kb["rules"] if r["id"] == rule_id), None)
    if rule is None:
        raise KeyError(f"unknown rule id {rule_id!r}")
    both = set(rule["antecedent"]) | set(rule["consequent"])
    support_tids = [tid for tid, items in kb["transactions"] if both <= set(items)]
    clusters = sorted({kb["membership"][t] for t in support_tids})
    pairs = [(g, p, s) for g, p, s in kb["dependency"]["selected"] if g in clusters]
    return {"rule": rule, "supporting_tids": support_tids,
            "source_clusters": clusters, "selected_pairs": pairs}
