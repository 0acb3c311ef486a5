"""Command-line front end.

Subcommands run the pipeline up to a given stage (`ingest`, `weights`,
`cluster`, `map`, `mine`), the whole flow (`run`), or query a persisted
knowledge base (`recommend`, `explain`). Exit codes: 0 success, 1 validation
failure, 2 stage failure.
"""

import argparse
import json
import sys

import numpy as np

from . import ahp, apriori, fuzzyrel, mapping, pipeline, schema as sc
from .distance import dissimilarity_matrix

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_STAGE = 2


def _add_common(p):
    p.add_argument("--config", required=True, help="pipeline config JSON")
    p.add_argument("--alpha", type=float, help="customer-domain cut level")
    p.add_argument("--beta", type=float, help="product-domain cut level")
    p.add_argument("--minsup", type=float, help="minimum support")
    p.add_argument("--minconf", type=float, help="minimum confidence")
    p.add_argument("--location", help="location label for the knowledge base")
    p.add_argument("--dump-intermediates", action="store_true", default=None)


def _load_config(args):
    overrides = {}
    for key in ("alpha", "beta", "minsup", "minconf", "location"):
        val = getattr(args, key, None)
        if val is not None:
            overrides[key] = val
    if getattr(args, "dump_intermediates", None):
        overrides["dump_intermediates"] = True
    return pipeline.PipelineConfig.from_json(args.config, **overrides)


def _prepare(config):
    weights = pipeline.resolve_weights(
        config, len(sc.load_schema(config.schema_path).fr_vars))
    family = pipeline.resolve_family_weights(config)
    schema = sc.load_schema(config.schema_path, fr_weights=weights,
                            family_weights=family)
    raw = sc.load_transactions(config.data_path, schema)
    report = sc.validate_dataset(raw)
    return weights, report


def cmd_ingest(args):
    config = _load_config(args)
    _, report = _prepare(config)
    print(f"records accepted: {len(report.dataset)}")
    for tid, var, val in report.repaired:
        print(f"repaired: {tid} {var} <- {val:g}")
    for tid, why in report.unrepairable:
        print(f"unrepairable: {tid}: {why}")
    return EXIT_OK


def cmd_weights(args):
    config = _load_config(args)
    weights, _ = _prepare(config)
    for i, w in enumerate(weights.weights):
        print(f"w{i + 1} = {w:.6f}")
    print(f"consistency ratio: {weights.consistency_ratio:.4f}"
          + ("" if weights.is_consistent else "  (INCONSISTENT, CR > 0.1)"))
    if abs(weights.raw_sum - 1.0) > 1e-6:
        print(f"note: input sum {weights.raw_sum} renormalized to 1")
    return EXIT_OK


def _partitions(config, report):
    dataset = report.dataset
    parts = {}
    for name, domain, level in (("customer", sc.CUSTOMER_DOMAIN, config.alpha),
                                ("product", sc.FR_DOMAIN, config.beta)):
        d = dissimilarity_matrix(dataset, domain=domain,
                                 method=config.standardization)
        closure = fuzzyrel.transitive_closure(fuzzyrel.similarity_relation(d))
        lv, _ = pipeline._resolve_cut(level, closure, name)
        parts[name] = fuzzyrel.extract_clusters(
            fuzzyrel.alpha_cut(closure, lv), lv)
    return dataset, parts["customer"], parts["product"]


def cmd_cluster(args):
    config = _load_config(args)
    _, report = _prepare(config)
    dataset, cust, prod = _partitions(config, report)
    tids = dataset.tids
    for label, part, prefix in (("customer", cust, "g"), ("product", prod, "p")):
        print(f"{label} partition (cut {part.cut_level:.4f}):")
        for k, c in enumerate(part.clusters):
            print(f"  {prefix}{k + 1}: " + ", ".join(tids[i] for i in c))
    return EXIT_OK


def cmd_map(args):
    config = _load_config(args)
    _, report = _prepare(config)
    _, cust, prod = _partitions(config, report)
    table = mapping.select_pairs(cust, prod)
    print("dependency scores:")
    print(np.array2string(table.scores, precision=3))
    for g, p, s in table.selected:
        print(f"selected: {g} -> {p} (score {s:.3f})")
    return EXIT_OK


def cmd_mine(args):
    config = _load_config(args)
    _, report = _prepare(config)
    dataset, cust, prod = _partitions(config, report)
    table = mapping.select_pairs(cust, prod)
    encoded = mapping.encode_for_mining(dataset, cust, prod, table)
    result = apriori.mine(encoded, config.minsup, config.minconf)
    print(f"{result.rule_count} rules "
          f"(minsup={config.minsup}, minconf={config.minconf})")
    for r in result.rules:
        print(" ", r)
    return EXIT_OK


def cmd_run(args):
    config = _load_config(args)
    kb = pipeline.run_pipeline(config)
    print(pipeline.format_report(kb))
    return EXIT_OK


def cmd_recommend(args):
    kb = pipeline.load_kb(args.kb)
    with open(args.needs) as fh:
        needs = json.load(fh)
    out = pipeline.recommend(kb, needs)
    print(f"assigned cluster: {out['cluster']}")
    if out["warning"]:
        print(f"warning: {out['warning']}")
    for r in out["suggestions"]:
        print(f"  [{r['id']}] {{{', '.join(r['antecedent'])}}} => "
              f"{{{', '.join(r['consequent'])}}} "
              f"(s={r['support']:.3f}, c={r['confidence']:.3f})")
    return EXIT_OK


def cmd_explain(args):
    kb = pipeline.load_kb(args.kb)
    trace = pipeline.explain(kb, args.rule_id)
    r = trace["rule"]
    print(f"[{r['id']}] {{{', '.join(r['antecedent'])}}} => "
          f"{{{', '.join(r['consequent'])}}}")
    print("supporting TIDs: " + ", ".join(trace["supporting_tids"]))
    print("source clusters: " + ", ".join(trace["source_clusters"]))
    for g, p, s in trace["selected_pairs"]:
        print(f"  pair {g} -> {p} (dependency {s:.3f})")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="fuzzybasket",
        description="Fuzzy-clustering + association-rule decision support "
                    "for retail transaction data")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in (("ingest", cmd_ingest), ("weights", cmd_weights),
                     ("cluster", cmd_cluster), ("map", cmd_map),
                     ("mine", cmd_mine), ("run", cmd_run)):
        p = sub.add_parser(name)
        _add_common(p)
        p.set_defaults(fn=fn)
    p = sub.add_parser("recommend")
    p.add_argument("--kb", required=True, help="knowledge base JSON")
    p.add_argument("--needs", required=True, help="JSON of need options")
    p.set_defaults(fn=cmd_recommend)
    p = sub.add_parser("explain")
    p.add_argument("--kb", required=True)
    p.add_argument("rule_id")
    p.set_defaults(fn=cmd_explain)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (pipeline.ConfigError, sc.ValidationError, sc.SchemaError,
            ahp.AhpError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except pipeline.StageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VALIDATION if e.stage == "ingest" else EXIT_STAGE
    except Exception as e:  # unexpected: treat as stage failure
        print(f"error: {e}", file=sys.stderr)
        return EXIT_STAGE


if __name__ == "__main__":
    sys.exit(main())
