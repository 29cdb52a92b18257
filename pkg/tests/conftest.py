from fractions import Fraction

import pytest
from hypothesis import settings

from statrel.demos import U_PARTITION, V_PARTITION, lemma5_bases
from statrel.model import Experiment, InferenceBase

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

F = Fraction


@pytest.fixture
def lemma5():
    return lemma5_bases()


@pytest.fixture
def table1(lemma5):
    return lemma5[0].experiment


@pytest.fixture
def U():
    return U_PARTITION


@pytest.fixture
def V():
    return V_PARTITION


def two_toss(thetas=(F(1, 4), F(1, 2))) -> Experiment:
    pts = ("00", "01", "10", "11")

    def f(t, x):
        heads = x.count("1")
        return t ** heads * (1 - t) ** (2 - heads)

    return Experiment(pts, tuple(str(t) for t in thetas),
                      tuple(tuple(f(t, x) for x in pts) for t in thetas))


@pytest.fixture
def bernoulli_pair():
    e = two_toss()
    return InferenceBase(e, "01"), InferenceBase(e, "10")
