"""Likelihood, sufficiency and invariance relations between inference bases.

Each ``related_*`` function returns a witness object when the pair is
related and ``None`` otherwise; :func:`why_not` gives a short reason.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .model import (
    Experiment,
    InferenceBase,
    ModelBijection,
    StatisticPartition,
    canonicalize_base,
    cell_label,
    dimension_mismatch,
    experiments_isomorphic,
    likelihood_vector,
)
from .rational import as_rational, format_rational, parse_rational


@dataclass(frozen=True)
class LikelihoodWitness:
    """``f1(theta, x1) == c * f2(theta, x2)`` for every parameter."""

    c: Fraction
    kind = "L"

    def __post_init__(self):
        c = as_rational(self.c)
        if c <= 0:
            raise ValueError(f"likelihood constant must be positive, got {c}")
        object.__setattr__(self, "c", c)

    def inverse(self) -> "LikelihoodWitness":
        return LikelihoodWitness(1 / self.c)

    def then(self, other: "LikelihoodWitness") -> "LikelihoodWitness":
        return LikelihoodWitness(self.c * other.c)

    def to_dict(self) -> dict:
        return {"kind": "L", "c": format_rational(self.c)}

    @classmethod
    def from_dict(cls, data: Mapping) -> "LikelihoodWitness":
        return cls(parse_rational(data["c"]))


@dataclass(frozen=True)
class SufficiencyWitness:
    """Parameter-fixing bijection between the two minimal sufficient reductions.

    ``data_cells`` holds the reduced labels of the cells containing the two
    observed points; the bijection sends the first to the second.
    """

    reduced_bijection: ModelBijection
    data_cells: tuple[str, str]
    kind = "S"

    def inverse(self) -> "SufficiencyWitness":
        return SufficiencyWitness(self.reduced_bijection.inverse(), self.data_cells[::-1])

    def then(self, other: "SufficiencyWitness") -> "SufficiencyWitness":
        return SufficiencyWitness(
            self.reduced_bijection.then(other.reduced_bijection),
            (self.data_cells[0], other.data_cells[1]),
        )

    def to_dict(self) -> dict:
        return {
            "kind": "S",
            "bijection": self.reduced_bijection.to_dict(),
            "cells": list(self.data_cells),
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "SufficiencyWitness":
        cells = tuple(data["cells"])
        if len(cells) != 2:
            raise ValueError("S witness needs exactly two data cells")
        return cls(ModelBijection.from_dict(data["bijection"]), cells)


def invariance_witness_to_dict(bij: ModelBijection) -> dict:
    return {"kind": "G", **bij.to_dict()}


def why_not(kind: str, b1: InferenceBase, b2: InferenceBase) -> str:
    """Human-readable reason for a negative verdict."""
    if kind != "G" and b1.parameters != b2.parameters:
        return (
            f"ParameterMismatch: {list(b1.parameters)} vs {list(b2.parameters)}"
        )
    if kind == "G":
        reason = dimension_mismatch(b1.experiment, b2.experiment)
        if reason:
            return reason
        return "no density-preserving relabeling carries the data point to the data point"
    if kind == "L":
        return "likelihood functions are not proportional"
    if kind == "S":
        return "minimal sufficient reductions differ or do not match the observed cells"
    return "no ancillary conditioning relates the two bases"


def related_L(b1: InferenceBase, b2: InferenceBase) -> LikelihoodWitness | None:
    if b1.parameters != b2.parameters:
        return None
    l1, l2 = likelihood_vector(b1), likelihood_vector(b2)
    # the data of a base has positive likelihood somewhere, so c is pinned down
    pivot = next(t for t in b2.parameters if l2[t] > 0)
    c = l1[pivot] / l2[pivot]
    if c == 0:
        return None
    if all(l1[t] == c * l2[t] for t in b1.parameters):
        return LikelihoodWitness(c)
    return None


def _normalized_column(column: tuple[Fraction, ...]) -> tuple[Fraction, ...] | None:
    total = sum(column, Fraction(0))
    if total == 0:
        return None
    return tuple(v / total for v in column)


def minimal_sufficient_partition(experiment: Experiment) -> StatisticPartition:
    """Group sample points whose likelihood columns are positively proportional.

    Points impossible under every parameter (absent after canonicalization)
    are pooled in a cell of their own.
    """
    return StatisticPartition.from_statistic(
        experiment.sample_points, lambda x: _normalized_column(experiment.column(x))
    )


def reduce_experiment(
    experiment: Experiment, partition: StatisticPartition
) -> tuple[Experiment, dict[str, str]]:
    """Marginal experiment of the statistic ``partition`` and the projection map."""
    partition.check_covers(experiment)
    cells = sorted(partition.cells, key=cell_label)
    labels = [cell_label(c) for c in cells]
    reduced = Experiment(
        tuple(labels),
        experiment.parameters,
        tuple(tuple(experiment.mass(t, c) for c in cells) for t in experiment.parameters),
    )
    projection = {x: lab for c, lab in zip(cells, labels) for x in c}
    return reduced, projection


def sufficient_reduction(base: InferenceBase) -> tuple[Experiment, str]:
    """Reduce a base by its minimal sufficient partition; returns the reduced data label."""
    base = canonicalize_base(base)
    reduced, projection = reduce_experiment(
        base.experiment, minimal_sufficient_partition(base.experiment)
    )
    return reduced, projection[base.data]


def related_S(b1: InferenceBase, b2: InferenceBase) -> SufficiencyWitness | None:
    if b1.parameters != b2.parameters:
        return None
    r1, y1 = sufficient_reduction(b1)
    r2, y2 = sufficient_reduction(b2)
    bij = experiments_isomorphic(r1, r2, fix_parameters=True, anchor=(y1, y2))
    if bij is None:
        return None
    return SufficiencyWitness(bij, (y1, y2))


def related_G(b1: InferenceBase, b2: InferenceBase) -> ModelBijection | None:
    return experiments_isomorphic(
        b1.experiment, b2.experiment, fix_parameters=False, anchor=(b1.data, b2.data)
    )

