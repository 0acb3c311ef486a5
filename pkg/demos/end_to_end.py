"""Full pipeline on the bundled 15-transaction store, then a recommendation.

Stages: validate the CSV, derive/renormalize variable weights, cluster
customers (by stated needs) and products (by purchase features) via fuzzy
transitive closure, map customer clusters to product clusters, re-encode
transactions as discrete items, and mine association rules. The result is
a self-contained JSON knowledge base that can answer queries for a brand
new customer without the raw data.

Run:  python3 demos/end_to_end.py
"""

import os
import tempfile

from fuzzybasket import load_kb, recommend, run_pipeline
from fuzzybasket.pipeline import PipelineConfig, explain

HERE = os.path.dirname(os.path.abspath(__file__))
CONFIG = os.path.join(HERE, "..", "data", "config.json")

with tempfile.TemporaryDirectory() as out:
    cfg = PipelineConfig.from_json(CONFIG, output_dir=out)
    kb = run_pipeline(cfg)

    print(f"records kept: {len(kb['transactions'])}")
    print(f"customer clusters: "
          f"{[c['cluster_id'] for c in kb['customer_clusters']]}")
    print(f"product clusters:  "
          f"{[c['cluster_id'] for c in kb['product_clusters']]}")
    print(f"selected cluster pairs: {kb['dependency']['selected']}")
    print(f"rules mined: {len(kb['rules'])}")

    top = kb["rules"][0]
    print(f"\nstrongest rule {top['id']}: "
          f"{top['antecedent']} => {top['consequent']} "
          f"(support {top['support']:.2f}, confidence {top['confidence']:.2f})")

    # A new walk-in customer states their needs; the knowledge base assigns
    # them to the nearest customer cluster and ranks that cluster's rules.
    kb = load_kb(os.path.join(out, f"kb-{cfg.location}.json"))
    needs = {"a1": "a11", "a2": "a21", "a3": "a31",
             "a4": "a41", "a5": "a51", "a6": "a61"}
    out_rec = recommend(kb, needs)
    print(f"\nnew customer with needs {needs}")
    print(f"assigned cluster: {out_rec['cluster']}")
    for s in out_rec["suggestions"][:3]:
        print(f"  suggest {s['consequent']} when {s['antecedent']} "
              f"(confidence {s['confidence']:.2f})")

    trace = explain(kb, top["id"])
    print(f"\nwhy {top['id']}? supported by transactions "
          f"{trace['supporting_tids']} from clusters "
          f"{trace['source_clusters']}")
