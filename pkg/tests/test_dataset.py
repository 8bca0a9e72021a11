import io

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spcdt.dataset import (
    DatasetError,
    ZERO_WIDTH_EPS,
    attribute_range,
    load_csv,
    split,
    to_csv,
)

SMALL_CSV = """a,b,class
1,4.5,x
2,?,y
3,6.0,x
"""


def test_load_counts_iris(iris):
    assert len(iris) == 150
    assert len(iris.attributes) == 4
    assert iris.classes == ("Iris-setosa", "Iris-versicolor", "Iris-virginica")


def test_load_counts_wine(wine):
    assert len(wine) == 178
    assert len(wine.attributes) == 13
    assert wine.classes == ("class_1", "class_2", "class_3")


def test_load_counts_wbc(wbc):
    assert len(wbc) == 699
    assert len(wbc.attributes) == 9
    assert wbc.classes == ("benign", "malignant")
    bn = wbc.attribute_index("bnuclei")
    missing = sum(1 for c in wbc.cases if c.values[bn] is None)
    assert missing == 16


def test_missing_is_not_zero():
    ds = load_csv(SMALL_CSV)
    assert ds.cases[1].values[1] is None
    # missing values never participate in range computation
    assert attribute_range(ds, "b") == (4.5, 6.0)


def test_case_ids_dense():
    ds = load_csv(SMALL_CSV)
    assert [c.id for c in ds.cases] == [0, 1, 2]


def test_empty_stream_errors():
    with pytest.raises(DatasetError, match="empty input"):
        load_csv("")


def test_unknown_label_column():
    with pytest.raises(DatasetError, match="label column"):
        load_csv(SMALL_CSV, label_column="target")


def test_malformed_row_arity():
    with pytest.raises(DatasetError, match="expected 3 fields"):
        load_csv("a,b,class\n1,2,x\n1,2\n")


def test_non_numeric_feature():
    with pytest.raises(DatasetError, match="non-numeric"):
        load_csv("a,class\nfoo,x\n")


def test_accepts_byte_stream():
    ds = load_csv(io.BytesIO(SMALL_CSV.encode()))
    assert len(ds) == 3


def test_round_trip(wbc):
    again = load_csv(to_csv(wbc))
    assert again.classes == wbc.classes
    assert len(again) == len(wbc)
    assert [c.values for c in again.cases] == [c.values for c in wbc.cases]
    assert [c.label for c in again.cases] == [c.label for c in wbc.cases]
    for a, b in zip(again.attributes, wbc.attributes):
        assert (a.observed_min, a.observed_max) == (b.observed_min, b.observed_max)


def test_split_sizes_wbc(wbc):
    train, val = split(wbc, 0.9, seed=7)
    assert len(train) == 629
    assert len(val) == 70


def test_split_preserves_classes(wbc):
    train, val = split(wbc, 0.9, seed=7)
    assert train.classes == wbc.classes == val.classes


def test_split_deterministic(wbc):
    a = split(wbc, 0.8, seed=123)
    b = split(wbc, 0.8, seed=123)
    assert [c.id for c in a[0].cases] == [c.id for c in b[0].cases]
    assert [c.id for c in a[1].cases] == [c.id for c in b[1].cases]


def test_split_rejects_bad_fraction(wbc):
    with pytest.raises(DatasetError):
        split(wbc, 1.5, seed=0)
    ds = load_csv(SMALL_CSV)
    with pytest.raises(DatasetError, match="empty side"):
        split(ds, 0.99, seed=0)


@settings(max_examples=40, deadline=None)
@given(
    frac=st.floats(min_value=0.05, max_value=0.95),
    seed=st.integers(min_value=0, max_value=2**31),
)
def test_split_is_partition(iris, frac, seed):
    k = int(round(frac * len(iris)))
    if k in (0, len(iris)):
        return
    train, val = split(iris, frac, seed)
    train_ids = {c.id for c in train.cases}
    val_ids = {c.id for c in val.cases}
    assert train_ids & val_ids == set()
    assert train_ids | val_ids == {c.id for c in iris.cases}
    assert len(train) == k


def test_attribute_range_declared_beats_observed(wbc):
    # the wbc fixture declares [1, 10] for every attribute
    assert attribute_range(wbc, "ucellsize") == (1.0, 10.0)


def test_attribute_range_observed(iris):
    pl = iris.attribute_index("petal-length")
    lo = min(c.values[pl] for c in iris.cases)
    hi = max(c.values[pl] for c in iris.cases)
    assert (lo, hi) == (1.0, 6.9)
    assert attribute_range(iris, "petal-length") == (1.0, 6.9)


def test_attribute_range_zero_width():
    ds = load_csv("c,class\n5,x\n5,y\n")
    assert attribute_range(ds, "c") == (5 - ZERO_WIDTH_EPS, 5 + ZERO_WIDTH_EPS)


def test_attribute_range_unknown(iris):
    with pytest.raises(DatasetError, match="unknown attribute"):
        attribute_range(iris, "nope")


def test_declared_range_must_contain_observed():
    with pytest.raises(DatasetError, match="declared range"):
        load_csv(SMALL_CSV, declared_ranges={"a": (2.0, 10.0)})
