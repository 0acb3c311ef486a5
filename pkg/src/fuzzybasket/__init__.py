"""Decision support for retail assortment: fuzzy relational clustering of
mixed-type transaction features, customer-to-product cluster mapping, and
association rule mining over the re-encoded transactions."""

from .ahp import WeightVector, derive_weights, load_fixed_weights
from .apriori import AssociationRule, Itemset, frequent_itemsets, generate_rules, mine
from .distance import (binary_distance, combine_families, dissimilarity_matrix,
                       nominal_distance, numerical_distance)
from .fuzzyrel import (Partition, alpha_cut, cluster_both_domains, cut_levels,
                       extract_clusters, maxmin_compose, similarity_relation,
                       transitive_closure)
from .mapping import (ClusterProfile, DependencyTable, assign_new_customer,
                      dependency, encode_for_mining, profile_cluster,
                      select_pairs)
from .pipeline import PipelineConfig, explain, load_kb, recommend, run_pipeline
from .preprocess import maxmin_normalize, zscore_standardize
from .schema import (Dataset, FeatureSchema, TransactionRecord, VariableSpec,
                     load_schema, load_transactions, validate_dataset)

__all__ = [
    "WeightVector", "derive_weights", "load_fixed_weights",
    "AssociationRule", "Itemset", "frequent_itemsets", "generate_rules",
    "mine",
    "binary_distance", "combine_families", "dissimilarity_matrix",
    "nominal_distance", "numerical_distance",
    "Partition", "alpha_cut", "cluster_both_domains", "cut_levels",
    "extract_clusters", "maxmin_compose", "similarity_relation",
    "transitive_closure",
    "ClusterProfile", "DependencyTable", "assign_new_customer", "dependency",
    "encode_for_mining", "profile_cluster", "select_pairs",
    "PipelineConfig", "explain", "load_kb", "recommend", "run_pipeline",
    "maxmin_normalize", "zscore_standardize",
    "Dataset", "FeatureSchema", "TransactionRecord", "VariableSpec",
    "load_schema", "load_transactions", "validate_dataset",
]

__version__ = "0.1.0"
