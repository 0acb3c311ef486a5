"""Feature schema, transaction records and dataset validation.

A dataset covers two variable domains: qualitative customer-need attributes
(what the buyer values) and functional-requirement variables (what a purchase
instance looks like). Variables are numerical, binary or nominal; interval
options such as an age bracket "21-40" are declared numerical and valued at
the interval midpoint.
"""

import csv
import json
from dataclasses import dataclass, field

import numpy as np

from .ahp import WeightVector, load_fixed_weights

KINDS = ("numerical", "binary", "nominal")

CUSTOMER_DOMAIN = "customer"
FR_DOMAIN = "fr"


class SchemaError(ValueError):
    pass


class ValidationError(ValueError):
    """Dataset-level rejection (empty, duplicate TIDs, too few records...)."""


@dataclass(frozen=True)
class VariableSpec:
    """Declaration of one variable: kind, admissible values, weight.

    Numerical variables carry a [lo, hi] range and optionally a mapping of
    interval option codes to sub-ranges; records may then hold either a raw
    number or an interval code (valued at the sub-range midpoint).
    """

    id: str
    label: str
    kind: str
    options: tuple = ()
    lo: float = 0.0
    hi: float = 1.0
    intervals: dict = field(default_factory=dict)
    weight: float = 1.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SchemaError(f"{self.id}: unknown kind {self.kind!r}")
        if self.kind == "binary" and len(self.options) != 2:
            raise SchemaError(f"{self.id}: binary variables need exactly 2 options")
        if self.kind == "nominal" and len(self.options) < 2:
            raise SchemaError(f"{self.id}: nominal variables need >= 2 options")
        if self.kind == "numerical":
            if not self.lo < self.hi:
                raise SchemaError(f"{self.id}: numerical range needs lo < hi")
            for code, (a, b) in self.intervals.items():
                if not (self.lo <= a <= b <= self.hi):
                    raise SchemaError(
                        f"{self.id}: interval {code} outside range [{self.lo}, {self.hi}]")
        if not 0 < self.weight <= 1:
            raise SchemaError(f"{self.id}: weight must be in (0, 1]")

    def numeric_value(self, raw):
        """Coerce a raw cell (number or interval code) to a float, or raise."""
        if self.kind != "numerical":
            raise SchemaError(f"{self.id} is not numerical")
        if isinstance(raw, str) and raw in self.intervals:
            a, b = self.intervals[raw]
            return (a + b) / 2.0
        try:
            x = float(raw)
        except (TypeError, ValueError):
            raise SchemaError(f"{self.id}: cannot interpret {raw!r} as a number")
        if not self.lo <= x <= self.hi:
            raise SchemaError(f"{self.id}: {x} outside range [{self.lo}, {self.hi}]")
        return x

    def accepts(self, raw):
        if self.kind == "numerical":
            try:
                self.numeric_value(raw)
                return True
            except SchemaError:
                return False
        return raw in self.options


@dataclass(frozen=True)
class FeatureSchema:
    """All variable declarations for both domains plus the weight structure."""

    customer_attrs: tuple
    fr_vars: tuple
    fr_weights: WeightVector
    family_weights: tuple = (1 / 3, 1 / 3, 1 / 3)

    def __post_init__(self):
        if not self.fr_vars:
            raise SchemaError("schema has zero functional-requirement variables")
        ids = [v.id for v in self.customer_attrs] + [v.id for v in self.fr_vars]
        if len(set(ids)) != len(ids):
            raise SchemaError("variable ids must be unique across the schema")
        if len(self.fr_weights) != len(self.fr_vars):
            raise SchemaError("fr_weights length must match fr_vars")
        if len(self.family_weights) != 3 or any(w < 0 for w in self.family_weights):
            raise SchemaError("family_weights must be 3 non-negative reals")
        if abs(sum(self.family_weights) - 1.0) > 1e-9:
            raise SchemaError("family_weights must sum to 1")

    def domain_vars(self, domain):
        if domain == CUSTOMER_DOMAIN:
            return self.customer_attrs
        if domain == FR_DOMAIN:
            return self.fr_vars
        raise SchemaError(f"unknown domain {domain!r}")

    def fr_weight_of(self, var_id):
        for v, w in zip(self.fr_vars, self.fr_weights.weights):
            if v.id == var_id:
                return w
        raise SchemaError(f"unknown FR variable {var_id!r}")

    def by_kind(self, domain, kind):
        return tuple(v for v in self.domain_vars(domain) if v.kind == kind)


@dataclass(frozen=True)
class TransactionRecord:
    """One customer order: TID, chosen need options, FR values."""

    tid: str
    need_options: dict
    fr_values: dict

    def value(self, domain, var_id):
        source = self.need_options if domain == CUSTOMER_DOMAIN else self.fr_values
        return source.get(var_id)


@dataclass(frozen=True)
class Dataset:
    schema: FeatureSchema
    records: tuple

    def __len__(self):
        return len(self.records)

    @property
    def tids(self):
        return [r.tid for r in self.records]


@dataclass
class ValidationReport:
    """Outcome of validate_dataset: the clean dataset plus what changed."""

    dataset: Dataset
    repaired: list = field(default_factory=list)   # (tid, var_id, imputed value)
    unrepairable: list = field(default_factory=list)  # (tid, reason)

    @property
    def clean(self):
        return not self.repaired and not self.unrepairable


def _is_missing(raw):
    return raw is None or (isinstance(raw, str) and raw.strip() == "")


def validate_dataset(dataset):
    """Validate every record against the schema; returns a ValidationReport.

    Missing numerical values are repaired by column-mean imputation (falling
    back to the range midpoint if the whole column is missing) and flagged.
    Missing or unknown categorical values make a record unrepairable; it is
    dropped from the clean dataset and listed with the reason. Empty datasets,
    duplicate TIDs and fewer than 2 surviving records are rejected outright.
    """
    schema = dataset.schema
    if not dataset.records:
        raise ValidationError("empty dataset")
    tids = [r.tid for r in dataset.records]
    dupes = sorted({t for t in tids if tids.count(t) > 1})
    if dupes:
        raise ValidationError(f"duplicate TIDs: {', '.join(dupes)}")

    # column means of the values that are present, per numerical variable
    col_mean = {}
    for domain in (CUSTOMER_DOMAIN, FR_DOMAIN):
        for var in schema.by_kind(domain, "numerical"):
            vals = []
            for rec in dataset.records:
                raw = rec.value(domain, var.id)
                if not _is_missing(raw) and var.accepts(raw):
                    vals.append(var.numeric_value(raw))
            col_mean[var.id] = float(np.mean(vals)) if vals else (var.lo + var.hi) / 2

    repaired, unrepairable, clean_records = [], [], []
    for rec in dataset.records:
        problems = []
        new_needs, new_frs = dict(rec.need_options), dict(rec.fr_values)
        for domain, store in ((CUSTOMER_DOMAIN, new_needs), (FR_DOMAIN, new_frs)):
            for var in schema.domain_vars(domain):
                raw = rec.value(domain, var.id)
                if _is_missing(raw):
                    if var.kind == "numerical":
                        store[var.id] = col_mean[var.id]
                        repaired.append((rec.tid, var.id, col_mean[var.id]))
                    else:
                        problems.append(f"{var.id} missing ({var.kind})")
                elif not var.accepts(raw):
                    problems.append(f"{var.id}={raw!r} not admissible")
        if problems:
            unrepairable.append((rec.tid, "; ".join(problems)))
        else:
            clean_records.append(TransactionRecord(rec.tid, new_needs, new_frs))

    if len(clean_records) < 2:
        raise ValidationError(
            f"T < 2: only {len(clean_records)} valid record(s), "
            "pairwise distance undefined")
    return ValidationReport(Dataset(schema, tuple(clean_records)),
                            repaired, unrepairable)


# ---------------------------------------------------------------------------
# file formats: JSON schema declaration, CSV transaction table

def _spec_from_json(obj):
    kind = obj["kind"]
    intervals = {k: tuple(v) for k, v in obj.get("intervals", {}).items()}
    lo, hi = obj.get("range", (0.0, 1.0))
    return VariableSpec(
        id=obj["id"], label=obj.get("label", obj["id"]), kind=kind,
        options=tuple(obj.get("options", ())),
        lo=float(lo), hi=float(hi), intervals=intervals,
        weight=float(obj.get("weight", 1.0)),
    )


def load_schema(path, fr_weights=None, family_weights=None):
    """Read a schema declaration from a JSON file.

    `fr_weights` / `family_weights` override the values in the file (the
    pipeline uses this to inject AHP-derived weights).
    """
    with open(path) as fh:
        doc = json.load(fh)
    customer = tuple(_spec_from_json(o) for o in doc["customer_attrs"])
    fr = tuple(_spec_from_json(o) for o in doc["fr_vars"])
    if fr_weights is None:
        fr_weights = load_fixed_weights(doc.get("fr_weights", [1.0] * len(fr)))
    fam = tuple(family_weights if family_weights is not None
                else doc.get("family_weights", (1 / 3, 1 / 3, 1 / 3)))
    return FeatureSchema(customer, fr, fr_weights, fam)


def _spec_to_doc(spec):
    doc = {"id": spec.id, "label": spec.label, "kind": spec.kind,
           "weight": spec.weight}
    if spec.kind == "numerical":
        doc["range"] = [spec.lo, spec.hi]
        if spec.intervals:
            doc["intervals"] = {k: list(v) for k, v in spec.intervals.items()}
    else:
        doc["options"] = list(spec.options)
    return doc


def schema_to_doc(schema):
    """JSON-serializable snapshot of a schema, weights included."""
    return {
        "customer_attrs": [_spec_to_doc(v) for v in schema.customer_attrs],
        "fr_vars": [_spec_to_doc(v) for v in schema.fr_vars],
        "fr_weights": list(schema.fr_weights.weights),
        "fr_weights_consistency_ratio": schema.fr_weights.consistency_ratio,
        "family_weights": list(schema.family_weights),
    }


def schema_from_doc(doc):
    customer = tuple(_spec_from_json(o) for o in doc["customer_attrs"])
    fr = tuple(_spec_from_json(o) for o in doc["fr_vars"])
    weights = WeightVector(doc["fr_weights"],
                           doc.get("fr_weights_consistency_ratio", 0.0))
    return FeatureSchema(customer, fr, weights, tuple(doc["family_weights"]))


def load_transactions(path, schema):
    """Read a CSV transaction table (header: tid, then variable ids)."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or "tid" not in reader.fieldnames:
            raise ValidationError(f"{path}: missing 'tid' column")
        need_ids = {v.id for v in schema.customer_attrs}
        fr_ids = {v.id for v in schema.fr_vars}
        unknown = set(reader.fieldnames) - need_ids - fr_ids - {"tid"}
        if unknown:
            raise ValidationError(f"{path}: unknown columns {sorted(unknown)}")
        records = []
        for row in reader:
            needs = {k: row[k] for k in row if k in need_ids}
            frs = {k: row[k] for k in row if k in fr_ids}
            records.append(TransactionRecord(row["tid"], needs, frs))
    return Dataset(schema, tuple(records))
