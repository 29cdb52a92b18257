"""Finite experiments, inference bases, statistics-as-partitions and relabelings.

Everything here is immutable and validated on construction, so any
``Experiment`` that exists has exact nonnegative rows summing to one.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from .rational import as_rational, format_rational, parse_rational


class ModelError(ValueError):
    """Base class for malformed experiments, bases and partitions."""


class RowSumError(ModelError):
    pass


class NegativeDensity(ModelError):
    pass


class DuplicateLabel(ModelError):
    pass


class EmptySpace(ModelError):
    pass


class DimensionMismatch(ModelError):
    pass


class PartitionMismatch(ModelError):
    pass


class ImpossibleData(ModelError):
    pass


def _check_labels(labels: Sequence[str], what: str) -> tuple[str, ...]:
    labels = tuple(labels)
    if not labels:
        raise EmptySpace(f"{what} is empty")
    for lab in labels:
        if not isinstance(lab, str):
            raise ModelError(f"{what} label {lab!r} is not a string")
    dup = [lab for lab, k in Counter(labels).items() if k > 1]
    if dup:
        raise DuplicateLabel(f"duplicate {what} label(s): {sorted(dup)}")
    return labels


@dataclass(frozen=True)
class Experiment:
    """Sample space, parameter set and the exact density table ``[parameter][point]``."""

    sample_points: tuple[str, ...]
    parameters: tuple[str, ...]
    densities: tuple[tuple[Fraction, ...], ...]
    _point_index: dict = field(init=False, repr=False, compare=False)
    _param_index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        points = _check_labels(self.sample_points, "sample point")
        params = _check_labels(self.parameters, "parameter")
        rows = tuple(tuple(as_rational(v) for v in row) for row in self.densities)
        if len(rows) != len(params):
            raise DimensionMismatch(f"{len(rows)} density rows for {len(params)} parameters")
        for theta, row in zip(params, rows):
            if len(row) != len(points):
                raise DimensionMismatch(
                    f"row {theta!r} has {len(row)} entries for {len(points)} sample points"
                )
            if any(v < 0 for v in row):
                raise NegativeDensity(f"row {theta!r} has a negative entry")
            total = sum(row, Fraction(0))
            if total != 1:
                raise RowSumError(f"row {theta!r} sums to {format_rational(total)}, not 1")
        object.__setattr__(self, "sample_points", points)
        object.__setattr__(self, "parameters", params)
        object.__setattr__(self, "densities", rows)
        object.__setattr__(self, "_point_index", {x: i for i, x in enumerate(points)})
        object.__setattr__(self, "_param_index", {t: i for i, t in enumerate(params)})

    def density(self, theta: str, x: str) -> Fraction:
        return self.densities[self._param_index[theta]][self._point_index[x]]

    def column(self, x: str) -> tuple[Fraction, ...]:
        """Densities of ``x`` under each parameter, in parameter order."""
        j = self._point_index[x]
        return tuple(row[j] for row in self.densities)

    def row(self, theta: str) -> tuple[Fraction, ...]:
        return self.densities[self._param_index[theta]]

    def mass(self, theta: str, points: Iterable[str]) -> Fraction:
        row = self.row(theta)
        return sum((row[self._point_index[x]] for x in points), Fraction(0))

    def __contains__(self, x: str) -> bool:
        return x in self._point_index

    def to_dict(self) -> dict:
        return {
            "sample_space": list(self.sample_points),
            "parameters": list(self.parameters),
            "densities": [[format_rational(v) for v in row] for row in self.densities],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "Experiment":
        try:
            points, params, rows = data["sample_space"], data["parameters"], data["densities"]
        except (KeyError, TypeError) as exc:
            raise ModelError(f"experiment JSON missing field {exc}") from None
        if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
            raise ModelError("densities must be a list of lists")
        return validate_experiment(points, params, [[parse_rational(v) for v in r] for r in rows])


def validate_experiment(sample_points, parameters, densities) -> Experiment:
    """Build an :class:`Experiment`, raising a :class:`ModelError` subclass on bad input."""
    return Experiment(tuple(sample_points), tuple(parameters), tuple(tuple(r) for r in densities))


@dataclass(frozen=True)
class InferenceBase:
    experiment: Experiment
    data: str

    def __post_init__(self):
        if self.data not in self.experiment:
            raise ImpossibleData(f"data {self.data!r} is not a sample point")
        if not any(self.experiment.column(self.data)):
            raise ImpossibleData(f"data {self.data!r} has zero probability under every parameter")

    @property
    def parameters(self) -> tuple[str, ...]:
        return self.experiment.parameters

    def to_dict(self) -> dict:
        return {**self.experiment.to_dict(), "data": self.data}

    @classmethod
    def from_dict(cls, data: Mapping) -> "InferenceBase":
        if "data" not in data:
            raise ModelError("inference base JSON missing field 'data'")
        return cls(Experiment.from_dict(data), data["data"])


@dataclass(frozen=True)
class StatisticPartition:
    """A statistic up to relabeling: disjoint nonempty cells of sample points."""

    cells: frozenset[frozenset[str]]

    def __post_init__(self):
        cells = frozenset(frozenset(c) for c in self.cells)
        if any(not c for c in cells):
            raise PartitionMismatch("partition has an empty cell")
        if sum(len(c) for c in cells) != len(frozenset().union(*cells)):
            raise PartitionMismatch("partition cells overlap")
        object.__setattr__(self, "cells", cells)

    @classmethod
    def of(cls, cells: Iterable[Iterable[str]]) -> "StatisticPartition":
        return cls(frozenset(frozenset(c) for c in cells))

    @classmethod
    def from_statistic(cls, points: Iterable[str], statistic) -> "StatisticPartition":
        """Partition ``points`` by the value of ``statistic(x)``."""
        groups = defaultdict(set)
        for x in points:
            groups[statistic(x)].add(x)
        return cls.of(groups.values())

    @classmethod
    def trivial(cls, points: Iterable[str]) -> "StatisticPartition":
        return cls.of([points])

    @classmethod
    def discrete(cls, points: Iterable[str]) -> "StatisticPartition":
        return cls.of([x] for x in points)

    @property
    def points(self) -> frozenset[str]:
        return frozenset().union(*self.cells)

    def cell_of(self, x: str) -> frozenset[str]:
        for c in self.cells:
            if x in c:
                return c
        raise PartitionMismatch(f"{x!r} lies in no cell")

    def check_covers(self, experiment: Experiment) -> None:
        if self.points != frozenset(experiment.sample_points):
            raise PartitionMismatch("partition does not cover exactly the sample space")

    def refines(self, other: "StatisticPartition") -> bool:
        """True iff every cell of ``self`` lies inside a cell of ``other``."""
        return all(any(c <= d for d in other.cells) for c in self.cells)

    def sorted_cells(self) -> list[list[str]]:
        return sorted(sorted(c) for c in self.cells)

    def __len__(self) -> int:
        return len(self.cells)

    def to_json(self) -> list[list[str]]:
        return self.sorted_cells()

    @classmethod
    def from_json(cls, data) -> "StatisticPartition":
        if not isinstance(data, list) or not all(isinstance(c, list) for c in data):
            raise PartitionMismatch("partition JSON must be a list of label lists")
        if sum(len(c) for c in data) != len({x for c in data for x in c}):
            raise PartitionMismatch("partition cells overlap")
        return cls.of(data)


def cell_label(cell: Iterable[str]) -> str:
    """Deterministic label for a reduced point made from a cell of points."""
    return "{" + "|".join(sorted(cell)) + "}"


@dataclass(frozen=True)
class ModelBijection:
    """Sample-point and parameter relabelings between two experiments."""

    sample_map: Mapping[str, str]
    parameter_map: Mapping[str, str]

    def __post_init__(self):
        for name in ("sample_map", "parameter_map"):
            m = dict(getattr(self, name))
            if len(set(m.values())) != len(m):
                raise ModelError(f"{name} is not injective")
            object.__setattr__(self, name, m)

    def inverse(self) -> "ModelBijection":
        return ModelBijection(
            {v: k for k, v in self.sample_map.items()},
            {v: k for k, v in self.parameter_map.items()},
        )

    def then(self, other: "ModelBijection") -> "ModelBijection":
        """Composite map: apply ``self`` first, then ``other``."""
        return ModelBijection(
            {x: other.sample_map[y] for x, y in self.sample_map.items()},
            {t: other.parameter_map[s] for t, s in self.parameter_map.items()},
        )

    @classmethod
    def identity(cls, experiment: Experiment) -> "ModelBijection":
        return cls(
            {x: x for x in experiment.sample_points},
            {t: t for t in experiment.parameters},
        )

    def to_dict(self) -> dict:
        return {
            "sample_map": dict(sorted(self.sample_map.items())),
            "parameter_map": dict(sorted(self.parameter_map.items())),
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "ModelBijection":
        try:
            return cls(dict(data["sample_map"]), dict(data["parameter_map"]))
        except (KeyError, TypeError) as exc:
            raise ModelError(f"bijection JSON malformed: {exc}") from None


def canonicalize_experiment(experiment: Experiment) -> Experiment:
    """Drop points impossible under every parameter and sort the sample labels.

    Parameter order is left alone; it is part of the experiment's identity.
    """
    keep = sorted(x for x in experiment.sample_points if any(experiment.column(x)))
    if tuple(keep) == experiment.sample_points:
        return experiment
    return Experiment(
        tuple(keep),
        experiment.parameters,
        tuple(tuple(experiment.density(t, x) for x in keep) for t in experiment.parameters),
    )


def canonicalize_base(base: InferenceBase) -> InferenceBase:
    return InferenceBase(canonicalize_experiment(base.experiment), base.data)


def likelihood_vector(base: InferenceBase) -> dict[str, Fraction]:
    e = base.experiment
    return {t: e.density(t, base.data) for t in e.parameters}


def dimension_mismatch(e1: Experiment, e2: Experiment) -> str | None:
    """Reason string when no bijection can exist for size reasons, else None."""
    if len(e1.sample_points) != len(e2.sample_points):
        return (
            f"DimensionMismatch: {len(e1.sample_points)} vs "
            f"{len(e2.sample_points)} sample points"
        )
    if len(e1.parameters) != len(e2.parameters):
        return f"DimensionMismatch: {len(e1.parameters)} vs {len(e2.parameters)} parameters"
    return None


def _parameter_maps(e1: Experiment, e2: Experiment) -> Iterator[dict[str, str]]:
    # Backtrack over parameter assignments; prune on sorted rows and on the
    # multiset of partial columns over the parameters assigned so far.
    rows2 = {s: sorted(e2.row(s)) for s in e2.parameters}
    order = list(e1.parameters)

    def partial_columns(e, params):
        return Counter(tuple(e.density(t, x) for t in params) for x in e.sample_points)

    def extend(k: int, assigned: dict[str, str]):
        if k == len(order):
            yield dict(assigned)
            return
        t = order[k]
        row = sorted(e1.row(t))
        used = set(assigned.values())
        for s in e2.parameters:
            if s in used or rows2[s] != row:
                continue
            assigned[t] = s
            done = order[: k + 1]
            if partial_columns(e1, done) == partial_columns(e2, [assigned[u] for u in done]):
                yield from extend(k + 1, assigned)
            del assigned[t]

    yield from extend(0, {})


def _match_columns(
    e1: Experiment, e2: Experiment, pmap: Mapping[str, str], anchor: tuple[str, str] | None
) -> dict[str, str] | None:
    buckets: dict[tuple, list[str]] = defaultdict(list)
    for y in e2.sample_points:
        buckets[tuple(e2.density(pmap[t], y) for t in e1.parameters)].append(y)
    smap: dict[str, str] = {}
    if anchor is not None:
        x1, x2 = anchor
        key = e1.column(x1)
        if x2 not in buckets.get(key, ()):
            return None
        buckets[key].remove(x2)
        smap[x1] = x2
    for x in e1.sample_points:
        if x in smap:
            continue
        bucket = buckets.get(e1.column(x))
        if not bucket:
            return None
        smap[x] = bucket.pop(0)
    return smap


def experiments_isomorphic(
    e1: Experiment,
    e2: Experiment,
    fix_parameters: bool = False,
    anchor: tuple[str, str] | None = None,
) -> ModelBijection | None:
    """Find relabelings carrying ``e1``'s density table exactly onto ``e2``'s.

    With ``fix_parameters`` the parameter map must be the identity, which
    requires equal parameter label sets. ``anchor=(x1, x2)`` additionally
    forces the sample map to send ``x1`` to ``x2``. Returns None when no
    such pair of bijections exists.
    """
    if dimension_mismatch(e1, e2) is not None:
        return None
    if anchor is not None and (anchor[0] not in e1 or anchor[1] not in e2):
        return None
    if fix_parameters:
        if set(e1.parameters) != set(e2.parameters):
            return None
        candidates: Iterable[dict[str, str]] = [{t: t for t in e1.parameters}]
    else:
        candidates = _parameter_maps(e1, e2)
    for pmap in candidates:
        smap = _match_columns(e1, e2, pmap, anchor)
        if smap is not None:
            return ModelBijection(smap, pmap)
    return None
