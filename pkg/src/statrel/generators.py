"""Seeded random experiments and related pairs for corpus runs and property tests.

All densities are integer weights over a common row denominator, so the
generated tables stay small and exact.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .model import Experiment, InferenceBase, ModelBijection, StatisticPartition


def composition(rng: random.Random, total: int, parts: int) -> list[int]:
    """Uniform random weak composition of ``total`` into ``parts`` nonnegative integers."""
    cuts = sorted(rng.randint(0, total) for _ in range(parts - 1))
    bounds = [0] + cuts + [total]
    return [b - a for a, b in zip(bounds, bounds[1:])]


def param_labels(k: int) -> tuple[str, ...]:
    return tuple(f"t{i + 1}" for i in range(k))


def random_experiment(
    rng: random.Random,
    n_points: int,
    n_params: int,
    denominator: int = 12,
    prefix: str = "x",
    parameters: tuple[str, ...] | None = None,
) -> Experiment:
    params = parameters or param_labels(n_params)
    rows = tuple(
        tuple(Fraction(w, denominator) for w in composition(rng, denominator, n_points))
        for _ in params
    )
    return Experiment(tuple(f"{prefix}{i}" for i in range(n_points)), params, rows)


def random_base(rng: random.Random, max_points: int = 5, max_params: int = 3,
                denominator: int | None = None, prefix: str = "x",
                parameters: tuple[str, ...] | None = None) -> InferenceBase:
    n = rng.randint(1, max_points)
    k = len(parameters) if parameters else rng.randint(1, max_params)
    d = denominator or rng.randint(2, 24)
    e = random_experiment(rng, n, k, d, prefix, parameters)
    possible = [x for x in e.sample_points if any(e.column(x))]
    return InferenceBase(e, rng.choice(possible))


def _with_data_column(rng, n_points, params, d, weights, prefix):
    """Experiment on ``n_points`` whose point ``data`` has density ``weights[t] / d``."""
    pos = rng.randrange(n_points)
    rows = []
    for t in params:
        rest = composition(rng, d - weights[t], n_points - 1)
        rows.append(tuple(Fraction(w, d) for w in rest[:pos] + [weights[t]] + rest[pos:]))
    e = Experiment(tuple(f"{prefix}{i}" for i in range(n_points)), params, tuple(rows))
    return InferenceBase(e, f"{prefix}{pos}")


def likelihood_pair(
    rng: random.Random,
    mode: str = "any",
    max_points: int = 5,
    max_params: int = 3,
    max_denominator: int = 60,
    min_points: int = 2,
) -> tuple[InferenceBase, InferenceBase]:
    """Two bases with ``f1(x1) = c * f2(x2)``; ``mode`` picks c > 1, c < 1 or c = 1."""
    if mode == "any":
        mode = rng.choice(["gt", "lt", "eq"])
    if mode == "eq":
        k = j = 1
    else:
        k, j = rng.sample(range(1, 5), 2)
        if (mode == "gt") != (k > j):
            k, j = j, k
    d = rng.randint(max(k, j) + 1, max_denominator)
    params = param_labels(rng.randint(1, max_params))
    unit = {t: rng.randint(1, d // max(k, j)) for t in params}
    b1 = _with_data_column(rng, rng.randint(min_points, max_points), params, d,
                           {t: k * unit[t] for t in params}, "x")
    b2 = _with_data_column(rng, rng.randint(min_points, max_points), params, d,
                           {t: j * unit[t] for t in params}, "y")
    return b1, b2


def likelihood_corpus(seed: int, size: int = 200, **kwargs) -> list[tuple[InferenceBase, InferenceBase]]:
    """Cycle through c > 1, c < 1 and c = 1 so every case is represented."""
    rng = random.Random(seed)
    modes = ["gt", "lt", "eq"]
    return [likelihood_pair(rng, modes[i % 3], **kwargs) for i in range(size)]


def relabeled(
    rng: random.Random, base: InferenceBase, prefix: str = "g", rename_parameters: bool = True
) -> tuple[InferenceBase, ModelBijection]:
    """Random density-preserving relabeling of sample points (and optionally parameters)."""
    e = base.experiment
    new_points = [f"{prefix}{i}" for i in range(len(e.sample_points))]
    rng.shuffle(new_points)
    smap = dict(zip(e.sample_points, new_points))
    if rename_parameters:
        new_params = [f"{prefix}p{i}" for i in range(len(e.parameters))]
        rng.shuffle(new_params)
        pmap = dict(zip(e.parameters, new_params))
    else:
        pmap = {t: t for t in e.parameters}
    points = tuple(sorted(new_points))
    inv_s = {v: k for k, v in smap.items()}
    params = tuple(pmap[t] for t in e.parameters)
    if rename_parameters:
        params = tuple(rng.sample(params, len(params)))
    inv_p = {v: k for k, v in pmap.items()}
    rows = tuple(tuple(e.density(inv_p[s], inv_s[y]) for y in points) for s in params)
    return InferenceBase(Experiment(points, params, rows), smap[base.data]), ModelBijection(smap, pmap)


def split_point(rng: random.Random, base: InferenceBase, prefix: str = "s") -> InferenceBase:
    """Split a random point into two with proportional columns; the result is S-related."""
    e = base.experiment
    x = rng.choice(e.sample_points)
    a = rng.randint(1, 5)
    lam = Fraction(a, a + rng.randint(1, 5))
    points = [y for y in e.sample_points if y != x] + [f"{prefix}{x}#0", f"{prefix}{x}#1"]
    rows = tuple(
        tuple(e.density(t, y) for y in e.sample_points if y != x)
        + (lam * e.density(t, x), (1 - lam) * e.density(t, x))
        for t in e.parameters
    )
    new = Experiment(tuple(points), e.parameters, rows)
    if base.data == x:
        data = f"{prefix}{x}#{rng.randint(0, 1)}"
    else:
        data = base.data
    return InferenceBase(new, data)


def sufficiency_pair(rng: random.Random, max_points: int = 4, max_params: int = 3):
    b = random_base(rng, max_points, max_params)
    b2 = split_point(rng, b)
    if rng.random() < 0.5:
        b2, _ = relabeled(rng, b2, prefix="r", rename_parameters=False)
    return b, b2


def experiment_with_ancillary(
    rng: random.Random, cell_sizes: list[int], n_params: int, denominator: int = 6
) -> tuple[Experiment, StatisticPartition]:
    """Experiment built from parameter-free cell masses and per-cell conditional rows."""
    masses = [w for w in composition(rng, denominator - len(cell_sizes), len(cell_sizes))]
    masses = [Fraction(w + 1, denominator) for w in masses]
    params = param_labels(n_params)
    points, cells, cols = [], [], []
    for ci, size in enumerate(cell_sizes):
        cell = [f"c{ci}_{i}" for i in range(size)]
        cells.append(cell)
        points += cell
    rows = []
    for _ in params:
        row = []
        for size, m in zip(cell_sizes, masses):
            dd = rng.randint(1, 6)
            row += [m * Fraction(w, dd) for w in composition(rng, dd, size)]
        rows.append(tuple(row))
    return Experiment(tuple(points), params, tuple(rows)), StatisticPartition.of(cells)


def conditionality_pair(rng: random.Random, max_cells: int = 3, max_cell: int = 3,
                        max_params: int = 3):
    """(E, x) and the model conditioned on x's cell, relabeled."""
    from .ancillarity import condition_on_cell

    sizes = [rng.randint(1, max_cell) for _ in range(rng.randint(1, max_cells))]
    e, anc = experiment_with_ancillary(rng, sizes, rng.randint(1, max_params))
    possible = [x for x in e.sample_points if any(e.column(x))]
    b = InferenceBase(e, rng.choice(possible))
    cond = condition_on_cell(b, anc)
    cond, _ = relabeled(rng, cond, prefix="k", rename_parameters=False)
    return (b, cond) if rng.random() < 0.5 else (cond, b)


def random_pair(rng: random.Random):
    """Mixed source: unrelated, L-, S- and C-related pairs, shuffled in order."""
    kind = rng.choice(["random", "L", "S", "C"])
    if kind == "L":
        return likelihood_pair(rng, max_points=4)
    if kind == "S":
        return sufficiency_pair(rng)
    if kind == "C":
        return conditionality_pair(rng)
    k = rng.randint(1, 3)
    params = param_labels(k)
    return (random_base(rng, 4, parameters=params, denominator=rng.choice([2, 3, 4, 6])),
            random_base(rng, 4, parameters=params, denominator=rng.choice([2, 3, 4, 6]),
                        prefix="y"))


def likelihood_partner(rng: random.Random, base: InferenceBase, prefix: str,
                       max_points: int = 4) -> InferenceBase:
    """A random base over the same parameters whose likelihood is proportional to ``base``'s."""
    e = base.experiment
    lik = [e.density(t, base.data) for t in e.parameters]
    scale = max(lik)
    # target column = lik * s with s chosen so every entry stays <= 1
    s = Fraction(rng.randint(1, 4), rng.randint(1, 4))
    if scale * s > 1:
        s = 1 / scale
    col = [v * s for v in lik]
    n = rng.randint(2, max_points)
    pos = rng.randrange(n)
    rows = []
    for t, v in zip(e.parameters, col):
        d = rng.randint(1, 6)
        rest = [Fraction(w, d) * (1 - v) for w in composition(rng, d, n - 1)]
        rows.append(tuple(rest[:pos] + [v] + rest[pos:]))
    new = Experiment(tuple(f"{prefix}{i}" for i in range(n)), e.parameters, tuple(rows))
    return InferenceBase(new, f"{prefix}{pos}")


def random_LG_chain(rng: random.Random, length: int):
    """Random chain over {L, G} with fresh labels at every step."""
    from .certificate import ChainCertificate, Link
    from .relations import related_L

    b1, _ = likelihood_pair(rng, max_points=4)
    bases, links = [b1], []
    for step in range(length):
        cur = bases[-1]
        if rng.random() < 0.5:
            nxt, bij = relabeled(rng, cur, prefix=f"g{step}_")
            links.append(Link.make("G", bij))
        else:
            nxt = likelihood_partner(rng, cur, prefix=f"l{step}_")
            links.append(Link.make("L", related_L(cur, nxt)))
        bases.append(nxt)
    return ChainCertificate(tuple(bases), tuple(links))
