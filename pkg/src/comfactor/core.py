"""Ranges, random variables, factors and factor graphs.

Potentials are carried as string tokens. Two potentials are identical iff
their tokens are equal; numeric inputs are turned into canonical decimal
strings (optionally snapped to a grid of width ``eps``) before any algorithm
sees them, so grouping never depends on float comparisons.

Table rows follow mixed-radix order: ``args[0]`` is most significant and the
last argument varies fastest, each argument enumerating its range in the
declared order.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

from .errors import (
    IncompleteAssignment,
    InvalidAssignment,
    InvalidFactor,
    InvalidGraph,
    NonNumericPotential,
    StateSpaceTooLarge,
)

Label = Union[str, int]
Assignment = tuple[int, ...]

DEFAULT_STATE_CAP = 2**24


def _decimal_text(d: Decimal) -> str:
    if not d.is_finite():
        raise InvalidFactor(f"potential {d} is not finite")
    text = format(d.normalize(), "f")
    return "0" if text in ("-0", "0") else text


def canonical_token(value) -> str:
    """Map a raw potential to its identity token.

    Strings are kept verbatim (symbolic potentials such as ``"φ1"``);
    numbers become their shortest exact decimal text, so ``1``, ``1.0`` and
    ``Decimal("1.00")`` all map to ``"1"``.
    """
    if isinstance(value, str):
        if not value:
            raise InvalidFactor("empty potential token")
        return value
    if isinstance(value, (bool, np.bool_)):
        raise InvalidFactor("booleans are not potentials")
    if isinstance(value, Decimal):
        return _decimal_text(value)
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return _decimal_text(Decimal(repr(float(value))))
    raise InvalidFactor(f"unsupported potential type {type(value).__name__}")


def quantise(values: Iterable, eps: float = 0.0) -> list[str]:
    """Tokenise raw potentials, snapping numbers to multiples of ``eps``.

    With ``eps == 0`` this is exact tokenisation. Symbolic strings are never
    snapped.
    """
    if eps < 0:
        raise ValueError("eps must be non-negative")
    if eps == 0:
        return [canonical_token(v) for v in values]
    step = Decimal(repr(float(eps)))
    out = []
    for v in values:
        if isinstance(v, str):
            out.append(canonical_token(v))
            continue
        d = Decimal(repr(float(v))) if not isinstance(v, (int, Decimal)) else Decimal(v)
        out.append(_decimal_text((d / step).to_integral_value() * step))
    return out


def potential_value(token: str) -> float:
    """Numeric value of a token; symbolic tokens raise NonNumericPotential."""
    try:
        d = Decimal(token)
    except InvalidOperation:
        raise NonNumericPotential(f"potential {token!r} is symbolic") from None
    if not d.is_finite():
        raise NonNumericPotential(f"potential {token!r} is not a finite number")
    return float(d)


def _numeric_or_none(token: str) -> Decimal | None:
    try:
        d = Decimal(token)
    except InvalidOperation:
        return None
    return d if d.is_finite() else None


@dataclass(frozen=True)
class RangeSpec:
    """Ordered value labels of a discrete range.

    The name is a serialisation handle only; equality is value-list equality
    including order.
    """

    values: tuple[Label, ...]
    name: str | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        vals = tuple(self.values)
        object.__setattr__(self, "values", vals)
        if len(vals) < 2:
            raise InvalidFactor(f"range {self.name or vals} needs at least 2 values")
        if len(set(vals)) != len(vals):
            raise InvalidFactor(f"range {self.name or vals} has duplicate values")

    @property
    def size(self) -> int:
        return len(self.values)

    def index(self, label: Label) -> int:
        try:
            return self.values.index(label)
        except ValueError:
            raise InvalidAssignment(f"{label!r} is not in range {self.values}") from None


@dataclass(frozen=True)
class RandomVariable:
    name: str
    range: RangeSpec

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Factor:
    """A factor with a dense potential table in canonical row order.

    Besides the declared fields, construction precomputes ``codes`` (integer
    token ids, equal iff tokens are equal) and ``assignments`` (the value
    index matrix, one row per table row) as read-only numpy arrays.
    """

    name: str
    args: tuple[RandomVariable, ...]
    table: tuple[str, ...] = field(repr=False)

    def __post_init__(self) -> None:
        args = tuple(self.args)
        table = tuple(canonical_token(t) for t in self.table)
        object.__setattr__(self, "args", args)
        object.__setattr__(self, "table", table)
        if not args:
            raise InvalidFactor(f"factor {self.name} has no arguments")
        names = [a.name for a in args]
        if len(set(names)) != len(names):
            raise InvalidFactor(f"factor {self.name} repeats an argument")
        shape = tuple(a.range.size for a in args)
        expected = math.prod(shape)
        if len(table) != expected:
            raise InvalidFactor(
                f"factor {self.name}: table has {len(table)} entries, expected {expected}"
            )
        numeric = [_numeric_or_none(t) for t in table]
        if any(d is not None and d < 0 for d in numeric):
            raise InvalidFactor(f"factor {self.name} has a negative potential")
        if all(d is not None for d in numeric) and not any(d > 0 for d in numeric):
            raise InvalidFactor(f"factor {self.name} has no non-zero potential")

        strides = [1] * len(shape)
        for i in range(len(shape) - 2, -1, -1):
            strides[i] = strides[i + 1] * shape[i + 1]

        ids: dict[str, int] = {}
        codes = np.fromiter((ids.setdefault(t, len(ids)) for t in table), dtype=np.int64, count=len(table))
        dtype = np.uint8 if max(shape) <= 256 else np.int32
        assignments = np.indices(shape, dtype=dtype).reshape(len(shape), -1).T.copy()
        codes.setflags(write=False)
        assignments.setflags(write=False)

        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "strides", tuple(strides))
        object.__setattr__(self, "codes", codes)
        object.__setattr__(self, "assignments", assignments)
        object.__setattr__(self, "n_tokens", len(ids))

    @classmethod
    def from_values(
        cls, name: str, args: Sequence[RandomVariable], values: Iterable, eps: float = 0.0
    ) -> "Factor":
        return cls(name, tuple(args), tuple(quantise(values, eps)))

    @property
    def arity(self) -> int:
        return len(self.args)

    def __len__(self) -> int:
        return len(self.table)

    def arg_names(self, positions: Iterable[int] | None = None) -> list[str]:
        if positions is None:
            positions = range(self.arity)
        return [self.args[p].name for p in positions]

    def position(self, name: str) -> int:
        for i, a in enumerate(self.args):
            if a.name == name:
                return i
        raise KeyError(f"factor {self.name} has no argument {name!r}")

    def labels(self, a: Assignment) -> tuple[Label, ...]:
        return tuple(arg.range.values[v] for arg, v in zip(self.args, a))

    def rows(self) -> Iterable[Assignment]:
        """All assignments in table order."""
        return itertools.product(*(range(s) for s in self.shape))


def assignment_index(factor: Factor, a: Sequence[int]) -> int:
    if len(a) != factor.arity:
        raise InvalidAssignment(
            f"assignment of length {len(a)} for factor {factor.name} of arity {factor.arity}"
        )
    idx = 0
    for value, size, stride in zip(a, factor.shape, factor.strides):
        if not 0 <= value < size:
            raise InvalidAssignment(f"value index {value} outside range of size {size}")
        idx += value * stride
    return idx


def index_to_assignment(factor: Factor, index: int) -> Assignment:
    if not 0 <= index < len(factor.table):
        raise InvalidAssignment(f"row {index} outside table of factor {factor.name}")
    out = []
    for size, stride in zip(factor.shape, factor.strides):
        out.append((index // stride) % size)
    return tuple(out)


def assignment_from_labels(factor: Factor, labels: Sequence[Label]) -> Assignment:
    if len(labels) != factor.arity:
        raise InvalidAssignment(f"expected {factor.arity} labels, got {len(labels)}")
    return tuple(arg.range.index(lab) for arg, lab in zip(factor.args, labels))


def lookup(factor: Factor, a: Sequence[int]) -> str:
    return factor.table[assignment_index(factor, a)]


@dataclass(frozen=True)
class FactorGraph:
    """Bipartite graph of random variables and factors.

    Edges are implied: an RV is adjacent to every factor listing it.
    """

    rvs: tuple[RandomVariable, ...]
    factors: tuple[Factor, ...]

    def __post_init__(self) -> None:
        rvs = tuple(self.rvs)
        factors = tuple(self.factors)
        object.__setattr__(self, "rvs", rvs)
        object.__setattr__(self, "factors", factors)
        by_name = {}
        for rv in rvs:
            if rv.name in by_name:
                raise InvalidGraph(f"duplicate random variable {rv.name}")
            by_name[rv.name] = rv
        fnames = set()
        for f in factors:
            if f.name in fnames:
                raise InvalidGraph(f"duplicate factor {f.name}")
            fnames.add(f.name)
            for arg in f.args:
                if by_name.get(arg.name) != arg:
                    raise InvalidGraph(f"factor {f.name} uses undeclared variable {arg.name}")

    @property
    def edges(self) -> frozenset[tuple[str, str]]:
        return frozenset((arg.name, f.name) for f in self.factors for arg in f.args)

    def factor(self, name: str) -> Factor:
        for f in self.factors:
            if f.name == name:
                return f
        raise KeyError(f"no factor named {name!r}")

    def replace_factor(self, new: Factor) -> "FactorGraph":
        self.factor(new.name)
        return FactorGraph(self.rvs, tuple(new if f.name == new.name else f for f in self.factors))


def joint_unnormalised(fg: FactorGraph, full: Mapping) -> float:
    """Product of all factor potentials under a full assignment.

    ``full`` maps RVs (or their names) to range labels.
    """
    values = {}
    for key, label in full.items():
        values[key.name if isinstance(key, RandomVariable) else key] = label
    missing = [rv.name for rv in fg.rvs if rv.name not in values]
    if missing:
        raise IncompleteAssignment(f"no value for {', '.join(missing)}")
    product = 1.0
    for f in fg.factors:
        a = tuple(arg.range.index(values[arg.name]) for arg in f.args)
        product *= potential_value(lookup(f, a))
    return product


def numeric_table(factor: Factor) -> np.ndarray:
    """Potentials as a float array shaped like the factor's ranges."""
    return np.array([potential_value(t) for t in factor.table], dtype=float).reshape(factor.shape)


def normalisation_constant(fg: FactorGraph, cap: int = DEFAULT_STATE_CAP) -> float:
    """Sum of the unnormalised joint over the whole state space."""
    states = math.prod(rv.range.size for rv in fg.rvs)
    if states > cap:
        raise StateSpaceTooLarge(f"{states} joint states exceed the cap of {cap}")
    used = {arg.name for f in fg.factors for arg in f.args}
    axis = {name: i for i, name in enumerate(sorted(used))}
    operands = []
    for f in fg.factors:
        operands.append(numeric_table(f))
        operands.append([axis[arg.name] for arg in f.args])
    free = math.prod(rv.range.size for rv in fg.rvs if rv.name not in used)
    if not operands:
        return float(free)
    z = float(np.einsum(*operands, [], optimize=True)) * free
    return z
