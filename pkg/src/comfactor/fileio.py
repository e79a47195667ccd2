"""JSON factor-graph files.

Layout::

    {
      "ranges":  {"bool": ["high", "low"]},
      "rvs":     {"A": "bool", "B": "bool"},
      "factors": [{"name": "f", "args": ["A", "B"], "table": ["1", "2", "2", "3"]}]
    }

A counted factor adds ``"counted": {"rvs": [...], "histograms": [[...], ...]}``;
its ``args`` still list every ground argument in order and its table follows
the counted layout of :mod:`comfactor.crv`.  Tokens are written as strings;
numbers are accepted on load.  Output is canonical: fixed key order, two-space
indent, trailing newline, so load followed by dump is idempotent.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Union

from .core import Factor, FactorGraph, RandomVariable, RangeSpec, canonical_token
from .crv import CountedFactor, expand
from .errors import ComfactorError, SchemaError

AnyFactor = Union[Factor, CountedFactor]

_TOP_KEYS = {"ranges", "rvs", "factors"}
_FACTOR_KEYS = {"name", "args", "table", "counted"}
_COUNTED_KEYS = {"rvs", "histograms"}


@dataclass(frozen=True)
class Document:
    ranges: tuple[RangeSpec, ...]
    rvs: tuple[RandomVariable, ...]
    factors: tuple[AnyFactor, ...]

    def factor(self, name: str) -> AnyFactor:
        for f in self.factors:
            if f.name == name:
                return f
        raise KeyError(f"no factor named {name!r}")

    def replace(self, new: AnyFactor) -> "Document":
        self.factor(new.name)
        return Document(self.ranges, self.rvs, tuple(new if f.name == new.name else f for f in self.factors))

    def graph(self) -> FactorGraph:
        """Ground factor graph; counted factors are expanded."""
        ground = tuple(expand(f) if isinstance(f, CountedFactor) else f for f in self.factors)
        return FactorGraph(self.rvs, ground)

    @classmethod
    def from_graph(cls, fg: FactorGraph) -> "Document":
        ranges: list[RangeSpec] = []
        for rv in fg.rvs:
            if rv.range not in ranges:
                ranges.append(rv.range)
        return cls(tuple(ranges), fg.rvs, fg.factors)


def _check_keys(obj, allowed: set[str], required: set[str], where: str) -> None:
    if not isinstance(obj, dict):
        raise SchemaError(f"{where} must be an object")
    unknown = set(obj) - allowed
    if unknown:
        raise SchemaError(f"{where}: unknown keys {sorted(unknown)}")
    missing = required - set(obj)
    if missing:
        raise SchemaError(f"{where}: missing keys {sorted(missing)}")


def _token(raw, where: str):
    if isinstance(raw, bool) or not isinstance(raw, (str, int, float)):
        raise SchemaError(f"{where}: potentials must be strings or numbers")
    return raw


def parse_document(data) -> Document:
    _check_keys(data, _TOP_KEYS, _TOP_KEYS, "document")
    if not isinstance(data["ranges"], dict) or not isinstance(data["rvs"], dict):
        raise SchemaError("ranges and rvs must be objects")
    if not isinstance(data["factors"], list):
        raise SchemaError("factors must be a list")
    try:
        ranges = {}
        for name, values in data["ranges"].items():
            if not isinstance(values, list) or not all(
                isinstance(v, (str, int)) and not isinstance(v, bool) for v in values
            ):
                raise SchemaError(f"range {name!r} must list string or integer labels")
            ranges[name] = RangeSpec(tuple(values), name)
        rvs = {}
        for name, rng in data["rvs"].items():
            if rng not in ranges:
                raise SchemaError(f"rv {name!r} uses unknown range {rng!r}")
            rvs[name] = RandomVariable(name, ranges[rng])
        factors: list[AnyFactor] = []
        for i, fd in enumerate(data["factors"]):
            where = f"factors[{i}]"
            _check_keys(fd, _FACTOR_KEYS, {"name", "args", "table"}, where)
            if not isinstance(fd["args"], list) or not isinstance(fd["table"], list):
                raise SchemaError(f"{where}: args and table must be lists")
            missing = [a for a in fd["args"] if a not in rvs]
            if missing:
                raise SchemaError(f"{where}: undeclared rvs {missing}")
            args = tuple(rvs[a] for a in fd["args"])
            table = [_token(t, where) for t in fd["table"]]
            if "counted" in fd:
                factors.append(_parse_counted(fd, args, table, where))
            else:
                factors.append(Factor.from_values(fd["name"], args, table))
        doc = Document(tuple(ranges.values()), tuple(rvs.values()), tuple(factors))
        doc.graph()
    except SchemaError:
        raise
    except ComfactorError as e:
        raise SchemaError(str(e)) from e
    return doc


def _parse_counted(fd, args, table, where) -> CountedFactor:
    block = fd["counted"]
    _check_keys(block, _COUNTED_KEYS, _COUNTED_KEYS, f"{where}.counted")
    names = [a.name for a in args]
    if not all(r in names for r in block["rvs"]):
        raise SchemaError(f"{where}: counted rvs must be among the factor's args")
    positions = tuple(names.index(r) for r in block["rvs"])
    if list(positions) != sorted(positions):
        raise SchemaError(f"{where}: counted rvs must follow argument order")
    cf = CountedFactor(fd["name"], args, positions, tuple(canonical_token(t) for t in table))
    if [list(h) for h in cf.histograms] != block["histograms"]:
        raise SchemaError(f"{where}: histogram keys do not match the enumeration order")
    return cf


def _factor_json(f: AnyFactor) -> dict:
    out: dict = {"name": f.name, "args": [a.name for a in f.args]}
    if isinstance(f, CountedFactor):
        out["counted"] = {
            "rvs": [a.name for a in f.counted_args],
            "histograms": [list(h) for h in f.histograms],
        }
    out["table"] = list(f.table)
    return out


def _range_name(rng: RangeSpec, i: int) -> str:
    return rng.name if rng.name else f"range{i}"


def document_json(doc: Document) -> dict:
    labels = [_range_name(r, i) for i, r in enumerate(doc.ranges)]
    by_value = {r: name for name, r in zip(labels, doc.ranges)}

    def range_of(rv: RandomVariable) -> str:
        # ranges with equal values compare equal, so prefer the declared name
        return rv.range.name if rv.range.name in labels else by_value[rv.range]

    return {
        "ranges": {name: list(r.values) for name, r in zip(labels, doc.ranges)},
        "rvs": {rv.name: range_of(rv) for rv in doc.rvs},
        "factors": [_factor_json(f) for f in doc.factors],
    }


def dumps(doc: Document) -> str:
    return json.dumps(document_json(doc), indent=2, ensure_ascii=False) + "\n"


def loads(text: str) -> Document:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"not valid JSON: {e}") from e
    return parse_document(data)


def load(path: str | Path) -> Document:
    return loads(Path(path).read_text(encoding="utf-8"))


def save(doc: Document, path: str | Path) -> None:
    Path(path).write_text(dumps(doc), encoding="utf-8")
