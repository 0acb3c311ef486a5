import pytest

from fuzzybasket import schema as sc
from fuzzybasket.schema import (SchemaError, ValidationError, VariableSpec,
                                validate_dataset)

from conftest import make_records, tiny_schema


def test_store_fixture_accepted_no_repairs(store_schema, store_dataset):
    report = validate_dataset(store_dataset)
    assert len(report.dataset) == 15
    assert report.repaired == []
    assert report.unrepairable == []


def test_single_record_rejected():
    schema = tiny_schema()
    ds = make_records(schema, [
        ("T1", {"a0": "hi"}, {"n0": 1.0, "b0": "yes", "c0": "x"}),
    ])
    with pytest.raises(ValidationError, match="T < 2"):
        validate_dataset(ds)


def test_unknown_nominal_is_unrepairable():
    schema = tiny_schema()
    ds = make_records(schema, [
        ("T1", {"a0": "hi"}, {"n0": 1.0, "b0": "yes", "c0": "x"}),
        ("T2", {"a0": "lo"}, {"n0": 2.0, "b0": "no", "c0": "BOGUS"}),
        ("T3", {"a0": "hi"}, {"n0": 3.0, "b0": "no", "c0": "y"}),
    ])
    report = validate_dataset(ds)
    assert len(report.dataset) == 2
    assert report.unrepairable == [("T2", "c0='BOGUS' not admissible")]


def test_duplicate_tids_rejected_with_identifiers():
    schema = tiny_schema()
    row = ({"a0": "hi"}, {"n0": 1.0, "b0": "yes", "c0": "x"})
    ds = make_records(schema, [("T1", *row), ("T1", *row), ("T2", *row)])
    with pytest.raises(ValidationError, match="T1"):
        validate_dataset(ds)


def test_empty_dataset_rejected():
    with pytest.raises(ValidationError, match="empty"):
        validate_dataset(make_records(tiny_schema(), []))


def test_missing_numerical_mean_imputed_and_flagged():
    schema = tiny_schema()
    ds = make_records(schema, [
        ("T1", {"a0": "hi"}, {"n0": 2.0, "b0": "yes", "c0": "x"}),
        ("T2", {"a0": "lo"}, {"n0": None, "b0": "no", "c0": "y"}),
        ("T3", {"a0": "hi"}, {"n0": 4.0, "b0": "no", "c0": "z"}),
    ])
    report = validate_dataset(ds)
    assert report.repaired == [("T2", "n0", 3.0)]
    assert report.dataset.records[1].fr_values["n0"] == 3.0


def test_missing_categorical_is_unrepairable():
    schema = tiny_schema()
    ds = make_records(schema, [
        ("T1", {"a0": "hi"}, {"n0": 2.0, "b0": "yes", "c0": "x"}),
        ("T2", {"a0": "lo"}, {"n0": 1.0, "b0": None, "c0": "y"}),
        ("T3", {"a0": "hi"}, {"n0": 4.0, "b0": "no", "c0": "z"}),
    ])
    report = validate_dataset(ds)
    assert [t for t, _ in report.unrepairable] == ["T2"]


def test_validation_idempotent(store_dataset):
    once = validate_dataset(store_dataset)
    twice = validate_dataset(once.dataset)
    assert twice.repaired == [] and twice.unrepairable == []
    # idempotent also after a repair pass
    schema = tiny_schema()
    ds = make_records(schema, [
        ("T1", {"a0": "hi"}, {"n0": 2.0, "b0": "yes", "c0": "x"}),
        ("T2", {"a0": "lo"}, {"n0": None, "b0": "no", "c0": "y"}),
        ("T3", {"a0": "hi"}, {"n0": 4.0, "b0": "no", "c0": "z"}),
    ])
    clean = validate_dataset(ds).dataset
    again = validate_dataset(clean)
    assert again.repaired == [] and again.unrepairable == []


def test_variable_spec_invariants():
    with pytest.raises(SchemaError):
        VariableSpec("b", "b", "binary", options=("one",))
    with pytest.raises(SchemaError):
        VariableSpec("c", "c", "nominal", options=("only",))
    with pytest.raises(SchemaError):
        VariableSpec("n", "n", "numerical", lo=5, hi=5)
    with pytest.raises(SchemaError):
        VariableSpec("n", "n", "numerical", lo=0, hi=10,
                     intervals={"k": (5, 20)})


def test_interval_midpoint_coding(store_schema):
    v5 = next(v for v in store_schema.fr_vars if v.id == "v5")
    assert v5.numeric_value("v51") == 10.0
    assert v5.numeric_value("v52") == 30.5
    assert v5.numeric_value(35) == 35.0
    with pytest.raises(SchemaError):
        v5.numeric_value(99)  # outside declared range


def test_schema_doc_roundtrip(store_schema):
    doc = sc.schema_to_doc(store_schema)
    back = sc.schema_from_doc(doc)
    assert [v.id for v in back.fr_vars] == [v.id for v in store_schema.fr_vars]
    assert tuple(back.family_weights) == tuple(store_schema.family_weights)
    assert list(back.fr_weights.weights) == list(store_schema.fr_weights.weights)


def test_unique_ids_enforced():
    a = VariableSpec("x", "x", "nominal", options=("p", "q"))
    from fuzzybasket.ahp import load_fixed_weights
    with pytest.raises(SchemaError, match="unique"):
        sc.FeatureSchema((a,), (a,), load_fixed_weights([1.0]))
