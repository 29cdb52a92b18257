import random
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import (
    all_ancillaries,
    brute_C,
    brute_C_durbin,
    canon,
    mass,
    maximal_by_refinement,
    set_partitions,
)
from statrel.ancillarity import (
    LEFT,
    NotAncillary,
    SpaceTooLarge,
    condition_on_cell,
    conditional_accuracy,
    enumerate_ancillaries,
    is_ancillary,
    maximal_ancillaries,
    mle,
    related_C,
    related_C_durbin,
    satisfies_durbin,
)
from statrel.constructions import mixture_experiment
from statrel.generators import conditionality_pair, experiment_with_ancillary
from statrel.model import (
    Experiment,
    InferenceBase,
    PartitionMismatch,
    StatisticPartition,
    canonicalize_base,
    canonicalize_experiment,
)
from statrel.relations import minimal_sufficient_partition, related_L
from strategies import base_pairs, bases, experiments

DIAGONAL = StatisticPartition.of([["(1,1)", "(2,2)"], ["(1,2)", "(2,1)"]])


# -- is_ancillary ------------------------------------------------------------

def test_U_is_ancillary(table1, U):
    assert [table1.mass(t, ["(1,1)", "(1,2)"]) for t in "12"] == [F(1, 3), F(1, 3)]
    assert is_ancillary(table1, U)


def test_diagonal_is_not_ancillary(table1):
    assert mass(table1, "1", ["(1,1)", "(2,2)"]) == F(1, 2)
    assert mass(table1, "2", ["(1,1)", "(2,2)"]) == F(1, 3)
    assert not is_ancillary(table1, DIAGONAL)


def test_trivial_is_ancillary(table1):
    assert is_ancillary(table1, StatisticPartition.trivial(table1.sample_points))


def test_partition_mismatch(table1):
    with pytest.raises(PartitionMismatch):
        is_ancillary(table1, StatisticPartition.of([["(1,1)", "(1,2)"]]))


# -- enumeration --------------------------------------------------------------

def test_table1_ancillaries(table1, U, V):
    # exhaust all 15 partitions of the 4-set with the oracle
    assert sum(1 for _ in set_partitions(table1.sample_points)) == 15
    expected = all_ancillaries(table1)
    assert expected == sorted([canon([table1.sample_points]), U.to_json(), V.to_json()])
    assert sorted(p.to_json() for p in enumerate_ancillaries(table1)) == expected


def test_table2_only_trivial(lemma5):
    e = canonicalize_experiment(lemma5[1].experiment)
    assert [p.to_json() for p in enumerate_ancillaries(e)] == [[list(e.sample_points)]]
    assert maximal_ancillaries(e) == [StatisticPartition.trivial(e.sample_points)]


def test_single_parameter_all_partitions():
    e = Experiment(tuple("abcd"), ("t",), ((F(1, 4),) * 4,))
    assert len(enumerate_ancillaries(e)) == 15
    assert maximal_ancillaries(e) == [StatisticPartition.discrete("abcd")]


def test_maximal_table1(table1, U, V):
    got = sorted(p.to_json() for p in maximal_ancillaries(table1))
    assert got == sorted([U.to_json(), V.to_json()])
    assert not U.refines(V) and not V.refines(U)


def test_space_too_large():
    n = 13
    e = Experiment(tuple(f"p{i}" for i in range(n)), ("t",), ((F(1, n),) * n,))
    with pytest.raises(SpaceTooLarge):
        enumerate_ancillaries(e)


def test_enumeration_is_deterministic(table1):
    assert enumerate_ancillaries(table1) == enumerate_ancillaries(table1)
    assert enumerate_ancillaries(table1)[0] == StatisticPartition.trivial(table1.sample_points)


@given(experiments(max_points=5, max_params=2, max_weight=3))
def test_enumeration_matches_oracle(e):
    found = [p.to_json() for p in enumerate_ancillaries(e)]
    assert len(found) == len(set(map(str, found)))
    assert sorted(found) == all_ancillaries(e)
    assert all(is_ancillary(e, p) for p in enumerate_ancillaries(e))


@given(experiments(max_points=5, max_params=2, max_weight=3))
def test_maximal_matches_refinement_filter(e):
    allp = [p.to_json() for p in enumerate_ancillaries(e)]
    assert sorted(p.to_json() for p in maximal_ancillaries(e)) == maximal_by_refinement(allp)


# -- conditioning ---------------------------------------------------------------

def test_condition_on_U_gives_table2(lemma5, U):
    out = condition_on_cell(lemma5[0], U)
    assert out.experiment.densities == ((F(1, 2), F(1, 2)), (F(1, 4), F(3, 4)))
    assert out == canonicalize_base(lemma5[1])


def test_condition_on_V_gives_table3(lemma5, V):
    out = condition_on_cell(lemma5[0], V)
    assert out.experiment.densities == ((F(1, 3), F(2, 3)), (F(1, 6), F(5, 6)))
    assert out == canonicalize_base(lemma5[2])


def test_condition_on_trivial(lemma5):
    i1 = lemma5[0]
    assert condition_on_cell(i1, StatisticPartition.trivial(i1.experiment.sample_points)) == i1


def test_condition_requires_ancillary(lemma5):
    with pytest.raises(NotAncillary):
        condition_on_cell(lemma5[0], DIAGONAL)


@given(st.lists(st.integers(1, 3), min_size=1, max_size=3), st.integers(1, 3),
       st.randoms(use_true_random=False))
def test_conditioning_preserves_validity(sizes, k, rnd):
    e, anc = experiment_with_ancillary(random.Random(rnd.random()), sizes, k)
    for x in e.sample_points:
        if any(e.column(x)):
            out = condition_on_cell(InferenceBase(e, x), anc)
            assert all(sum(r) == 1 for r in out.experiment.densities)


# -- C ----------------------------------------------------------------------------

def test_C_lemma5_verdicts(lemma5, U, V):
    i1, i2, i3 = lemma5
    w12, w13 = related_C(i1, i2), related_C(i1, i3)
    assert w12.direction == LEFT and w12.ancillary == U
    assert w13.direction == LEFT and w13.ancillary == V
    assert related_C(i2, i3) is None


def test_C_reflexive_trivial(lemma5):
    i1 = lemma5[0]
    w = related_C(i1, i1)
    assert w.ancillary == StatisticPartition.trivial(i1.experiment.sample_points)
    assert w.relabel == {x: x for x in i1.experiment.sample_points}


def test_C_not_transitive(lemma5):
    i1, i2, i3 = lemma5
    assert related_C(i2, i1) and related_C(i1, i3) and not related_C(i2, i3)


@given(base_pairs(max_points=4, max_weight=3))
def test_C_matches_brute_force(pair):
    assert (related_C(*pair) is not None) == brute_C(*pair)


@given(st.randoms(use_true_random=False))
def test_C_matches_brute_force_on_constructed_pairs(rnd):
    a, b = conditionality_pair(random.Random(rnd.random()), max_cells=2, max_cell=3)
    assert related_C(a, b) is not None
    assert brute_C(a, b)


@given(base_pairs(max_points=4, max_weight=3))
def test_C_symmetric(pair):
    a, b = pair
    assert (related_C(a, b) is None) == (related_C(b, a) is None)


@given(base_pairs(max_points=4, max_weight=3))
def test_C_implies_L_with_cell_mass(pair):
    a, b = pair
    w = related_C(a, b)
    if w is None:
        return
    lw = related_L(a, b)
    assert lw is not None
    cond = a if w.direction == LEFT else b
    m = cond.experiment.mass(cond.parameters[0], w.ancillary.cell_of(cond.data))
    assert lw.c == (m if w.direction == LEFT else 1 / m)


# -- Durbin restriction -----------------------------------------------------------

def test_durbin_rejects_mixture_component(lemma5):
    _, i2, i3 = lemma5
    mix, comp = mixture_experiment(i2.experiment, i3.experiment)
    msuf = minimal_sufficient_partition(mix)
    assert msuf.cell_of("1:(1,1)") == msuf.cell_of("2:(1,1)")
    assert not satisfies_durbin(mix, comp)


def test_durbin_reflexive(lemma5):
    assert related_C_durbin(lemma5[1], lemma5[1]) is not None


def test_durbin_table1_unrestricted(lemma5):
    i1, i2, _ = lemma5
    assert minimal_sufficient_partition(i1.experiment) == StatisticPartition.discrete(
        i1.experiment.sample_points)
    assert related_C_durbin(i1, i2) is not None


@given(base_pairs(max_points=4, max_weight=3))
def test_durbin_matches_brute_force(pair):
    assert (related_C_durbin(*pair) is not None) == brute_C_durbin(*pair)


@given(base_pairs(max_points=4, max_weight=3))
def test_durbin_subset_of_C(pair):
    w = related_C_durbin(*pair)
    if w is not None:
        assert related_C(*pair) is not None
        from statrel.verify import check_C
        assert check_C(*pair, w, durbin=True) is None
        assert check_C(*pair, w) is None


# -- MLE and accuracy ----------------------------------------------------------------

def test_mle(lemma5):
    e2 = lemma5[1].experiment
    assert mle(InferenceBase(e2, "(1,1)")) == "1"
    assert mle(InferenceBase(e2, "(1,2)")) == "2"


def test_mle_tie_first_parameter():
    e = Experiment(("a", "b"), ("s", "t"), ((F(1, 2), F(1, 2)), (F(1, 2), F(1, 2))))
    assert mle(InferenceBase(e, "a")) == "s"


def test_accuracy_U(lemma5, U):
    r = conditional_accuracy(lemma5[0], U)
    assert r.correct == {"1": F(1, 2), "2": F(3, 4)}
    assert r.estimates == {"(1,1)": "1", "(1,2)": "2"}


def test_accuracy_V(lemma5, V):
    assert conditional_accuracy(lemma5[0], V).correct == {"1": F(1, 3), "2": F(5, 6)}


def test_accuracy_single_parameter():
    e = Experiment(("a", "b"), ("t",), ((F(1, 3), F(2, 3)),))
    r = conditional_accuracy(InferenceBase(e, "a"), StatisticPartition.trivial("ab"))
    assert r.correct == {"t": 1}


def test_accuracy_requires_ancillary(lemma5):
    with pytest.raises(NotAncillary):
        conditional_accuracy(lemma5[0], DIAGONAL)


@given(bases(max_points=4))
def test_accuracy_probabilities_in_unit_interval(b):
    r = conditional_accuracy(b, StatisticPartition.trivial(b.experiment.sample_points))
    assert all(0 <= p <= 1 for p in r.correct.values())
