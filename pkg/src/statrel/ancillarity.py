"""Ancillary partitions, conditioning, and the conditionality relation.

Subset masses are tabulated over bitmasks, so the enumeration routines are
exponential in the number of sample points and refuse spaces larger than
``max_points`` (12 by default).
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping

from .model import (
    Experiment,
    InferenceBase,
    ModelError,
    StatisticPartition,
    canonicalize_experiment,
    experiments_isomorphic,
)
from .rational import format_rational
from .relations import minimal_sufficient_partition, related_L

DEFAULT_MAX_POINTS = 12

LEFT = "left-conditions"
RIGHT = "right-conditions"


class NotAncillary(ModelError):
    pass


class SpaceTooLarge(ModelError):
    pass


@dataclass(frozen=True)
class ConditionalityWitness:
    """One side, conditioned on its cell of ``ancillary``, is the other side.

    ``direction`` is :data:`LEFT` when the first base is the conditioned one.
    ``relabel`` maps the support of the conditional model onto the other
    base's (canonical) sample space.
    """

    direction: str
    ancillary: StatisticPartition
    relabel: Mapping[str, str]
    kind = "C"

    def __post_init__(self):
        if self.direction not in (LEFT, RIGHT):
            raise ValueError(f"bad direction {self.direction!r}")
        object.__setattr__(self, "relabel", dict(self.relabel))

    def inverse(self) -> "ConditionalityWitness":
        return ConditionalityWitness(RIGHT if self.direction == LEFT else LEFT,
                                     self.ancillary, self.relabel)

    def to_dict(self) -> dict:
        return {
            "kind": "C",
            "direction": self.direction,
            "ancillary": self.ancillary.to_json(),
            "relabel": dict(sorted(self.relabel.items())),
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "ConditionalityWitness":
        return cls(
            data["direction"],
            StatisticPartition.from_json(data["ancillary"]),
            dict(data["relabel"]),
        )


def is_ancillary(experiment: Experiment, partition: StatisticPartition) -> bool:
    partition.check_covers(experiment)
    return all(
        len({experiment.mass(t, cell) for t in experiment.parameters}) == 1
        for cell in partition.cells
    )


def satisfies_durbin(experiment: Experiment, partition: StatisticPartition) -> bool:
    """True iff ``partition`` is a function of the minimal sufficient statistic."""
    return minimal_sufficient_partition(experiment).refines(partition)


class _MassTable:
    """Per-parameter masses of every subset of the sample space, by bitmask."""

    def __init__(self, experiment: Experiment, max_points: int):
        n = len(experiment.sample_points)
        if n > max_points:
            raise SpaceTooLarge(f"{n} sample points exceeds the enumeration bound {max_points}")
        self.points = experiment.sample_points
        cols = [experiment.column(x) for x in self.points]
        zero = (Fraction(0),) * len(experiment.parameters)
        mass = [zero] * (1 << n)
        constant = bytearray(1 << n)
        constant[0] = 1
        for mask in range(1, 1 << n):
            low = mask & -mask
            col = cols[low.bit_length() - 1]
            mass[mask] = tuple(a + b for a, b in zip(mass[mask ^ low], col))
            constant[mask] = len(set(mass[mask])) == 1
        self.constant = constant

    def to_cells(self, masks) -> StatisticPartition:
        return StatisticPartition.of(
            [x for i, x in enumerate(self.points) if m >> i & 1] for m in masks
        )

    def mask_of(self, cell) -> int:
        return sum(1 << i for i, x in enumerate(self.points) if x in cell)

    def splittable(self, mask: int) -> bool:
        """Does the cell have a proper nonempty subset of constant mass?"""
        sub = (mask - 1) & mask
        while sub:
            if self.constant[sub]:
                return True
            sub = (sub - 1) & mask
        return False


def iter_ancillaries(
    experiment: Experiment, max_points: int = DEFAULT_MAX_POINTS
) -> Iterator[StatisticPartition]:
    table = _MassTable(experiment, max_points)
    constant = table.constant

    def assemble(remaining: int, cells: list[int]):
        if not remaining:
            yield list(cells)
            return
        low = remaining & -remaining
        rest = remaining ^ low
        sub = rest
        while True:
            cell = sub | low
            if constant[cell]:
                cells.append(cell)
                yield from assemble(remaining ^ cell, cells)
                cells.pop()
            if not sub:
                break
            sub = (sub - 1) & rest

    for masks in assemble((1 << len(table.points)) - 1, []):
        yield table.to_cells(masks)


def enumerate_ancillaries(
    experiment: Experiment, max_points: int = DEFAULT_MAX_POINTS
) -> list[StatisticPartition]:
    """All ancillary partitions, coarsest (trivial) first, in a fixed order."""
    return list(iter_ancillaries(experiment, max_points))


def maximal_ancillaries(
    experiment: Experiment, max_points: int = DEFAULT_MAX_POINTS
) -> list[StatisticPartition]:
    # An ancillary partition has a strict ancillary refinement exactly when
    # one of its cells splits into two constant-mass pieces (the complement of
    # a constant-mass piece inside a constant-mass cell is constant too).
    table = _MassTable(experiment, max_points)
    return [
        p
        for p in iter_ancillaries(experiment, max_points)
        if not any(table.splittable(table.mask_of(c)) for c in p.cells)
    ]


def conditional_experiment(experiment: Experiment, cell) -> Experiment:
    """Experiment restricted to ``cell`` and renormalised; ``cell`` must have constant mass."""
    cell = sorted(cell)
    masses = {experiment.mass(t, cell) for t in experiment.parameters}
    if len(masses) != 1:
        raise NotAncillary("cell mass depends on the parameter")
    (m,) = masses
    if m == 0:
        raise NotAncillary("cell has zero mass")
    return canonicalize_experiment(
        Experiment(
            tuple(cell),
            experiment.parameters,
            tuple(tuple(experiment.density(t, x) / m for x in cell) for t in experiment.parameters),
        )
    )


def condition_on_cell(base: InferenceBase, ancillary: StatisticPartition) -> InferenceBase:
    if not is_ancillary(base.experiment, ancillary):
        raise NotAncillary("partition is not ancillary for this experiment")
    return InferenceBase(
        conditional_experiment(base.experiment, ancillary.cell_of(base.data)), base.data
    )


def witness_with_ancillary(
    cond: InferenceBase, other: InferenceBase, ancillary: StatisticPartition, direction: str
) -> ConditionalityWitness | None:
    """Witness that conditioning ``cond`` on ``ancillary`` yields ``other``, if it does."""
    if cond.parameters != other.parameters:
        return None
    conditioned = condition_on_cell(cond, ancillary)
    bij = experiments_isomorphic(
        conditioned.experiment,
        canonicalize_experiment(other.experiment),
        fix_parameters=True,
        anchor=(cond.data, other.data),
    )
    if bij is None:
        return None
    return ConditionalityWitness(direction, ancillary, bij.sample_map)


def _choose_durbin_cells(experiment, targets, anchor_cell):
    """Pick minimal-sufficient cells, including ``anchor_cell``, whose columns are ``targets``."""
    msuf = sorted((c for c in minimal_sufficient_partition(experiment).cells
                   if c != anchor_cell), key=sorted)
    need = targets - Counter(experiment.column(x) for x in anchor_cell)
    if any(v < 0 for v in need.values()):
        return None
    need = +need
    usable = []
    for c in msuf:
        cnt = Counter(experiment.column(x) for x in c)
        if not cnt - targets:
            usable.append((c, cnt))

    def pick(i, need):
        if not need:
            return []
        for j in range(i, len(usable)):
            c, cnt = usable[j]
            if not cnt - need:
                found = pick(j + 1, need - cnt)
                if found is not None:
                    return [c] + found
        return None

    chosen = pick(0, need)
    if chosen is None:
        return None
    return set(anchor_cell).union(*chosen)


def _conditioning_witness(cond: InferenceBase, other: InferenceBase, direction: str,
                          durbin: bool) -> ConditionalityWitness | None:
    # The cell mass m must equal the likelihood constant, and the cell's
    # columns must be exactly m times the other experiment's columns. Any such
    # set A of points has mass m under every parameter, so {A, rest} is
    # ancillary and no partition enumeration is needed.
    lw = related_L(cond, other)
    if lw is None or lw.c > 1:
        return None
    m = lw.c
    e1 = canonicalize_experiment(cond.experiment)
    e2 = canonicalize_experiment(other.experiment)
    x1, x2 = cond.data, other.data
    targets = {y: tuple(m * v for v in e2.column(y)) for y in e2.sample_points}

    if durbin:
        anchor_cell = minimal_sufficient_partition(e1).cell_of(x1)
        chosen = _choose_durbin_cells(e1, Counter(targets.values()), anchor_cell)
        if chosen is None:
            return None
        pool = [x for x in e1.sample_points if x in chosen and x != x1]
    else:
        pool = [x for x in e1.sample_points if x != x1]

    buckets = defaultdict(list)
    for x in pool:
        buckets[e1.column(x)].append(x)
    relabel = {x1: x2}
    for y in e2.sample_points:
        if y == x2:
            continue
        bucket = buckets.get(targets[y])
        if not bucket:
            return None
        relabel[bucket.pop(0)] = y
    if durbin and any(buckets.values()):
        return None

    cell = set(relabel)
    rest = set(e1.sample_points) - cell
    impossible = set(cond.experiment.sample_points) - set(e1.sample_points)
    ancillary = StatisticPartition.of(c for c in (cell, rest, impossible) if c)
    return ConditionalityWitness(direction, ancillary, {x: relabel[x] for x in sorted(relabel)})


def _related_C(b1, b2, durbin):
    if b1.parameters != b2.parameters:
        return None
    return (_conditioning_witness(b1, b2, LEFT, durbin)
            or _conditioning_witness(b2, b1, RIGHT, durbin))


def related_C(b1: InferenceBase, b2: InferenceBase) -> ConditionalityWitness | None:
    """Conditionality relation, allowing a parameter-fixing relabel of the conditional model."""
    return _related_C(b1, b2, durbin=False)


def related_C_durbin(b1: InferenceBase, b2: InferenceBase) -> ConditionalityWitness | None:
    """As :func:`related_C`, restricted to ancillaries that are functions of the
    minimal sufficient statistic."""
    return _related_C(b1, b2, durbin=True)


def mle(base: InferenceBase) -> str:
    """Maximum likelihood parameter; the first in parameter order wins ties."""
    e = base.experiment
    return max(e.parameters, key=lambda t: (e.density(t, base.data), -e.parameters.index(t)))


@dataclass(frozen=True)
class AccuracyReport:
    """Conditional chance, per parameter, that the MLE picks that parameter."""

    cell: tuple[str, ...]
    estimates: Mapping[str, str]
    correct: Mapping[str, Fraction]

    def lines(self) -> list[str]:
        return [f"P_{t}(mle = {t} | cell) = {format_rational(p)}" for t, p in self.correct.items()]


def conditional_accuracy(base: InferenceBase, ancillary: StatisticPartition) -> AccuracyReport:
    e = base.experiment
    if not is_ancillary(e, ancillary):
        raise NotAncillary("partition is not ancillary for this experiment")
    cell = tuple(x for x in e.sample_points if x in ancillary.cell_of(base.data))
    m = e.mass(e.parameters[0], cell)
    estimates = {x: mle(InferenceBase(e, x)) if any(e.column(x)) else e.parameters[0]
                 for x in cell}
    correct = {
        t: sum((e.density(t, x) for x in cell if estimates[x] == t), Fraction(0)) / m
        for t in e.parameters
    }
    return AccuracyReport(cell, estimates, correct)
