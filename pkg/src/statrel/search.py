"""Exhaustive search for small experiments with several maximal ancillaries.

Density tables have entries in ``{0, 1/d, ..., d/d}``. Tables that differ by
a permutation of sample points are generated once (the first row is taken
nonincreasing); remaining duplicates, including parameter relabelings, are
rejected with :func:`statrel.model.experiments_isomorphic`.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from multiprocessing import Pool
from typing import Iterator

from .ancillarity import maximal_ancillaries
from .generators import param_labels
from .model import Experiment, canonicalize_experiment, experiments_isomorphic

BOUNDS = {"x_size": 6, "theta_size": 3, "denominator": 24}


class SearchBoundsError(ValueError):
    pass


def check_bounds(x_size: int, theta_size: int, denominator: int, force: bool = False) -> None:
    for name, value in (("x_size", x_size), ("theta_size", theta_size),
                        ("denominator", denominator)):
        if value < 1:
            raise SearchBoundsError(f"{name} must be positive")
        if value > BOUNDS[name] and not force:
            raise SearchBoundsError(f"{name}={value} exceeds default bound {BOUNDS[name]}")


def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Weak compositions of ``total`` into ``parts``, lexicographically decreasing."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def _nonincreasing(total: int, parts: int, cap: int | None = None) -> Iterator[tuple[int, ...]]:
    cap = total if cap is None else cap
    if parts == 1:
        if total <= cap:
            yield (total,)
        return
    for first in range(min(total, cap), -1, -1):
        if first * parts < total:
            break
        for rest in _nonincreasing(total - first, parts - 1, first):
            yield (first,) + rest


def _shape_key(e: Experiment) -> tuple:
    # invariant under sample and parameter relabeling
    return (len(e.sample_points), tuple(sorted(tuple(sorted(e.row(t))) for t in e.parameters)))


def _candidates(args) -> list[Experiment]:
    first, x_size, theta_size, d = args
    points = tuple(f"x{i}" for i in range(x_size))
    params = param_labels(theta_size)
    found = []
    for others in product(list(compositions(d, x_size)), repeat=theta_size - 1):
        rows = (first,) + others
        e = canonicalize_experiment(Experiment(
            points, params, tuple(tuple(Fraction(w, d) for w in r) for r in rows)))
        if len(e.sample_points) >= 2 and len(maximal_ancillaries(e)) >= 2:
            found.append(e)
    return found


def search_maximal(
    x_size: int,
    theta_size: int,
    denominator: int,
    limit: int | None = None,
    workers: int = 1,
) -> Iterator[Experiment]:
    """Yield pairwise non-isomorphic experiments with at least two maximal ancillaries.

    Output order is the enumeration order regardless of ``workers``.
    One-parameter experiments always have a single maximal ancillary and are
    skipped outright.
    """
    if theta_size < 2 or (limit is not None and limit <= 0):
        return
    tasks = [(first, x_size, theta_size, denominator)
             for first in _nonincreasing(denominator, x_size)]
    seen: dict[tuple, list[Experiment]] = {}
    emitted = 0
    pool = Pool(workers) if workers > 1 else None
    try:
        batches = pool.imap(_candidates, tasks) if pool else map(_candidates, tasks)
        for batch in batches:
            for e in batch:
                bucket = seen.setdefault(_shape_key(e), [])
                if any(experiments_isomorphic(e, other) for other in bucket):
                    continue
                bucket.append(e)
                yield e
                emitted += 1
                if limit is not None and emitted >= limit:
                    return
    finally:
        if pool:
            pool.terminate()
