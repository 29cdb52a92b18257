"""Constructive chains between likelihood-related inference bases.

* :func:`efm_chain` joins two L-related bases by four conditionality links
  through a pair of two-ancillary auxiliary experiments.
* :func:`birnbaum_chain` joins them by conditionality, sufficiency,
  conditionality through the half-half mixture of the two experiments.
* :func:`theorem8_pair` is a small pair that is L-related but neither
  S- nor C-related.
* :func:`rewrite_LG_to_CG` expands every L link of an {L, G} chain.

Sample labels of constructed experiments are ``"<i>:<x>"`` for an index
``i`` and an original label ``x``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .ancillarity import (
    LEFT,
    RIGHT,
    ConditionalityWitness,
    enumerate_ancillaries,
    related_C,
    witness_with_ancillary,
)
from .certificate import ChainCertificate, Link
from .model import Experiment, InferenceBase, ModelError, StatisticPartition
from .relations import LikelihoodWitness, SufficiencyWitness, related_L, related_S
from .verify import VerificationReport, check_link, verify_chain

__all__ = [
    "ConstantOutOfRange",
    "DegenerateSampleSpace",
    "LinkVerificationFailed",
    "NotLikelihoodRelated",
    "Table4Parameters",
    "Theorem8Report",
    "birnbaum_chain",
    "efm_chain",
    "mixture_experiment",
    "rewrite_LG_to_CG",
    "table4_experiment",
    "table4_parameters",
    "theorem8_pair",
    "verify_chain",
]


class NotLikelihoodRelated(ModelError):
    pass


class DegenerateSampleSpace(ModelError):
    pass


class ConstantOutOfRange(ModelError):
    pass


class LinkVerificationFailed(ModelError):
    pass


def tag(i, x: str) -> str:
    return f"{i}:{x}"


@dataclass(frozen=True)
class Table4Parameters:
    c: Fraction
    p: Fraction

    def __post_init__(self):
        if self.c <= 0 or not 0 <= self.p < 1 or self.p * (1 + self.c) != 1:
            raise ConstantOutOfRange(f"p={self.p} does not satisfy p/(1-p) = 1/c for c={self.c}")


def table4_parameters(c: Fraction) -> Table4Parameters:
    c = Fraction(c)
    return Table4Parameters(c, 1 / (1 + c))


def table4_experiment(
    base: InferenceBase, c: Fraction
) -> tuple[Experiment, StatisticPartition, StatisticPartition]:
    """Two-ancillary auxiliary experiment on ``{0, 1} x X``.

    Row ``i=1`` carries ``p * f(x)``; row ``i=0`` carries ``1 - p - p*f(x1)``
    at the data point ``x1``, ``p * f(x1)`` at the first other point and zero
    elsewhere. Returns the experiment with the partitions by ``i`` (U) and by
    ``[x == x1]`` (V), both ancillary.
    """
    c = Fraction(c)
    if c < 1:
        raise ConstantOutOfRange(f"c = {c} < 1; start the construction from the other base")
    e, x1 = base.experiment, base.data
    if len(e.sample_points) < 2:
        raise DegenerateSampleSpace("the construction needs a second sample point")
    p = table4_parameters(c).p
    x10 = next(x for x in e.sample_points if x != x1)
    points = [tag(1, x) for x in e.sample_points] + [tag(0, x) for x in e.sample_points]
    rows = []
    for t in e.parameters:
        f1 = e.density(t, x1)
        rest = 1 - p - p * f1
        if rest < 0:
            raise ConstantOutOfRange(f"f({x1!r}) = {f1} exceeds c = {c} at parameter {t!r}")
        upper = [p * e.density(t, x) for x in e.sample_points]
        lower = [rest if x == x1 else p * f1 if x == x10 else Fraction(0) for x in e.sample_points]
        rows.append(upper + lower)
    star = Experiment(tuple(points), e.parameters, tuple(tuple(r) for r in rows))
    by_i = StatisticPartition.from_statistic(points, lambda z: z.split(":", 1)[0])
    at_x1 = StatisticPartition.of([[tag(1, x1), tag(0, x1)],
                                   [z for z in points if z.split(":", 1)[1] != x1]])
    return star, by_i, at_x1


def _bernoulli(parameters, success: dict) -> InferenceBase:
    e = Experiment(("0", "1"), tuple(parameters),
                   tuple((1 - success[t], success[t]) for t in parameters))
    return InferenceBase(e, "1")


def _c_link(cond: InferenceBase, other: InferenceBase, ancillary, direction) -> Link:
    w = witness_with_ancillary(cond, other, ancillary, direction)
    if w is None:
        raise LinkVerificationFailed("conditioning did not reproduce the target base")
    return Link.make("C", w)


def efm_chain(b1: InferenceBase, b2: InferenceBase) -> ChainCertificate:
    """Four C links: b1 - b1* - Bernoulli - b2* - b2."""
    lw = related_L(b1, b2)
    if lw is None:
        raise NotLikelihoodRelated("the bases do not have proportional likelihoods")
    if lw.c < 1:
        return efm_chain(b2, b1).reversed()
    c = lw.c
    e1 = b1.experiment
    if len(b2.experiment.sample_points) < 2:
        raise DegenerateSampleSpace("the construction needs a second sample point")

    star1, u1, v1 = table4_experiment(b1, c)
    star2, u2, v2 = table4_experiment(b2, Fraction(1))
    s1 = InferenceBase(star1, tag(1, b1.data))
    s2 = InferenceBase(star2, tag(1, b2.data))
    mid = _bernoulli(e1.parameters, {t: e1.density(t, b1.data) / c for t in e1.parameters})

    links = (
        _c_link(s1, b1, u1, RIGHT),
        _c_link(s1, mid, v1, LEFT),
        _c_link(s2, mid, v2, RIGHT),
        _c_link(s2, b2, u2, LEFT),
    )
    return ChainCertificate((b1, s1, mid, s2, b2), links)


def mixture_experiment(e1: Experiment, e2: Experiment) -> tuple[Experiment, StatisticPartition]:
    """Half-half mixture on ``(1, X1) u (2, X2)`` and the partition by component."""
    if e1.parameters != e2.parameters:
        raise NotLikelihoodRelated("parameter lists differ")
    half = Fraction(1, 2)
    points = [tag(1, x) for x in e1.sample_points] + [tag(2, x) for x in e2.sample_points]
    rows = tuple(
        tuple(half * v for v in e1.row(t)) + tuple(half * v for v in e2.row(t))
        for t in e1.parameters
    )
    mix = Experiment(tuple(points), e1.parameters, rows)
    component = StatisticPartition.from_statistic(points, lambda z: z.split(":", 1)[0])
    return mix, component


def birnbaum_chain(b1: InferenceBase, b2: InferenceBase) -> ChainCertificate:
    """Links [C, S, C]: (E1, x1) - (E, 1:x1) - (E, 2:x2) - (E2, x2)."""
    if related_L(b1, b2) is None:
        raise NotLikelihoodRelated("the bases do not have proportional likelihoods")
    mix, component = mixture_experiment(b1.experiment, b2.experiment)
    j1 = InferenceBase(mix, tag(1, b1.data))
    j2 = InferenceBase(mix, tag(2, b2.data))
    sw = related_S(j1, j2)
    if sw is None:
        raise LinkVerificationFailed("mixture points are not sufficiency-related")
    links = (
        _c_link(j1, b1, component, RIGHT),
        Link.make("S", sw),
        _c_link(j2, b2, component, LEFT),
    )
    return ChainCertificate((b1, j1, j2, b2), links)


@dataclass(frozen=True)
class Theorem8Report:
    likelihood: LikelihoodWitness | None
    sufficiency: SufficiencyWitness | None
    conditionality: ConditionalityWitness | None
    ancillaries: tuple[list[StatisticPartition], list[StatisticPartition]]
    chain: ChainCertificate
    chain_report: VerificationReport

    @property
    def separates(self) -> bool:
        return (
            self.likelihood is not None
            and self.likelihood.c == 1
            and self.sufficiency is None
            and self.conditionality is None
            and self.chain_report.ok
            and set(self.chain.kinds) == {"C"}
        )


THETA8 = (Fraction(1, 4), Fraction(1, 2))


def theorem8_bases(thetas=THETA8) -> tuple[InferenceBase, InferenceBase]:
    """Bernoulli observed at 1 and a three-point geometric truncation observed at 0."""
    params = tuple(str(t) for t in thetas)
    bern = Experiment(("0", "1"), params, tuple((1 - t, t) for t in thetas))
    geom = Experiment(("0", "1", "2"), params,
                      tuple((t, t * (1 - t), (1 - t) ** 2) for t in thetas))
    return InferenceBase(bern, "1"), InferenceBase(geom, "0")


def theorem8_pair(thetas=THETA8) -> tuple[InferenceBase, InferenceBase, Theorem8Report]:
    b1, b2 = theorem8_bases(thetas)
    chain = efm_chain(b1, b2)
    report = Theorem8Report(
        likelihood=related_L(b1, b2),
        sufficiency=related_S(b1, b2),
        conditionality=related_C(b1, b2),
        ancillaries=(enumerate_ancillaries(b1.experiment), enumerate_ancillaries(b2.experiment)),
        chain=chain,
        chain_report=verify_chain(chain),
    )
    return b1, b2, report


def rewrite_LG_to_CG(chain: ChainCertificate) -> ChainCertificate:
    """Replace every L link by its four-link C expansion; G links are kept."""
    if not chain.bases:
        return chain
    out = ChainCertificate.single(chain.bases[0])
    for i, link in enumerate(chain.links):
        a, b = chain.bases[i], chain.bases[i + 1]
        if link.kind not in ("L", "G"):
            raise LinkVerificationFailed(f"link {i} has kind {link.kind}, expected L or G")
        msg = check_link(a, b, link)
        if msg:
            raise LinkVerificationFailed(f"link {i} ({link.kind}): {msg}")
        piece = efm_chain(a, b) if link.kind == "L" else ChainCertificate((a, b), (link,))
        out = out.then(piece)
    return out
