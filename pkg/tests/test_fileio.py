import json

import pytest

from comfactor import SchemaError, compress
from comfactor.cli import fixture_path
from comfactor.crv import CountedFactor
from comfactor.fileio import Document, dumps, load, loads

from .conftest import PHI3_TABLE


def test_fixture_contents(phi3, counterexample):
    assert phi3.table == PHI3_TABLE
    assert phi3.arg_names() == ["ComA", "ComB", "Rev"]
    assert phi3.args[0].range.values == ("high", "low")
    assert counterexample.arg_names() == ["R1", "R2", "R3", "R4"]


@pytest.mark.parametrize("name", ["phi3.json", "counterexample.json"])
def test_fixtures_are_canonical(name):
    text = fixture_path(name).read_text(encoding="utf-8")
    assert dumps(loads(text)) == text


def test_round_trip_idempotent(phi3):
    doc = Document((phi3.args[0].range,), phi3.args, (phi3,))
    text = dumps(doc)
    assert dumps(loads(text)) == text


def test_counted_round_trip(phi3):
    doc = load(fixture_path("phi3.json"))
    counted = doc.replace(compress(phi3, (0, 1)))
    text = dumps(counted)
    data = json.loads(text)
    block = data["factors"][0]["counted"]
    assert block == {"rvs": ["ComA", "ComB"], "histograms": [[2, 0], [1, 1], [0, 2]]}
    assert len(data["factors"][0]["table"]) == 6
    again = loads(text)
    assert isinstance(again.factors[0], CountedFactor)
    assert dumps(again) == text
    assert again.graph().factor("phi3") == phi3


def test_numbers_accepted_and_written_as_strings():
    doc = loads(json.dumps({
        "ranges": {"b": [0, 1]},
        "rvs": {"A": "b"},
        "factors": [{"name": "f", "args": ["A"], "table": [1, 2.50]}],
    }))
    assert doc.factors[0].table == ("1", "2.5")
    assert json.loads(dumps(doc))["factors"][0]["table"] == ["1", "2.5"]


def _doc(**over):
    base = {
        "ranges": {"b": ["x", "y"]},
        "rvs": {"A": "b", "B": "b"},
        "factors": [{"name": "f", "args": ["A", "B"], "table": ["1", "2", "2", "3"]}],
    }
    base.update(over)
    return base


@pytest.mark.parametrize(
    "data",
    [
        {**_doc(), "extra": 1},
        _doc(factors=[{"name": "f", "args": ["A", "B"], "table": ["1", "2", "2", "3"], "colour": "red"}]),
        _doc(factors=[{"name": "f", "args": ["A", "C"], "table": ["1", "2", "2", "3"]}]),
        _doc(factors=[{"name": "f", "args": ["A", "B"], "table": ["1", "2", "3"]}]),
        _doc(factors=[{"name": "f", "args": ["A", "B"], "table": ["1", "2", "2", True]}]),
        _doc(rvs={"A": "nope", "B": "b"}),
        _doc(ranges={"b": ["x"]}),
        _doc(factors=[{"name": "f", "args": ["A", "B"], "table": ["-1", "2", "2", "3"]}]),
        _doc(factors=[{"name": "f", "args": ["A", "B"], "counted": {"rvs": ["A", "B"], "histograms": [[1, 1]]}, "table": ["1", "2", "3"]}]),
    ],
)
def test_rejections(data):
    with pytest.raises(SchemaError):
        loads(json.dumps(data))


def test_invalid_json():
    with pytest.raises(SchemaError):
        loads("{not json")


def test_unknown_factor():
    with pytest.raises(KeyError):
        load(fixture_path("phi3.json")).factor("nope")
