"""Built-in reproductions of the worked examples, each value recomputed by the engine."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

from .ancillarity import (
    condition_on_cell,
    conditional_accuracy,
    enumerate_ancillaries,
    maximal_ancillaries,
    mle,
    related_C,
    satisfies_durbin,
)
from .certificate import ChainCertificate, Link
from .constructions import (
    birnbaum_chain,
    efm_chain,
    mixture_experiment,
    rewrite_LG_to_CG,
    table4_parameters,
    theorem8_pair,
)
from .model import Experiment, InferenceBase, StatisticPartition, canonicalize_base
from .rational import format_rational
from .relations import minimal_sufficient_partition, related_G, related_L
from .verify import verify_chain

FIXTURES = ("table1", "table2", "table3", "theorem8_bernoulli", "theorem8_geometric")


def load_fixture(name: str) -> InferenceBase:
    text = resources.files("statrel").joinpath("fixtures", f"{name}.json").read_text()
    return InferenceBase.from_dict(json.loads(text))


def lemma5_bases() -> tuple[InferenceBase, InferenceBase, InferenceBase]:
    return load_fixture("table1"), load_fixture("table2"), load_fixture("table3")


U_PARTITION = StatisticPartition.of([["(1,1)", "(1,2)"], ["(2,1)", "(2,2)"]])
V_PARTITION = StatisticPartition.of([["(1,1)", "(2,1)"], ["(1,2)", "(2,2)"]])


@dataclass
class DemoScript:
    name: str
    checks: list[tuple[str, str, str]] = field(default_factory=list)

    def expect(self, label: str, expected, actual) -> None:
        self.checks.append((label, _show(expected), _show(actual)))

    @property
    def ok(self) -> bool:
        return all(e == a for _, e, a in self.checks)

    def lines(self) -> list[str]:
        out = [f"== {self.name}"]
        for label, e, a in self.checks:
            mark = "ok  " if e == a else "FAIL"
            out.append(f"  [{mark}] {label}: expected {e}, got {a}")
        return out


def _show(value) -> str:
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, StatisticPartition):
        return json.dumps(value.to_json())
    if isinstance(value, (list, tuple)) and value and isinstance(value[0], Fraction):
        return "[" + ", ".join(format_rational(v) for v in value) + "]"
    return str(value)


def _rows(base: InferenceBase) -> list[str]:
    return [format_rational(v) for row in base.experiment.densities for v in row]


def _verdict(w) -> str:
    return "related" if w is not None else "not related"


def _partition_set(parts) -> str:
    return json.dumps(sorted(p.to_json() for p in parts))


def demo_lemma5() -> DemoScript:
    d = DemoScript("lemma5: conditioning Table 1 on two maximal ancillaries")
    i1, i2, i3 = lemma5_bases()
    cond_u = condition_on_cell(i1, U_PARTITION)
    cond_v = condition_on_cell(i1, V_PARTITION)
    d.expect("Table 2 support", "['(1,1)', '(1,2)']", list(cond_u.experiment.sample_points))
    d.expect("Table 2 densities", "['1/2', '1/2', '1/4', '3/4']", _rows(cond_u))
    d.expect("Table 3 support", "['(1,1)', '(2,1)']", list(cond_v.experiment.sample_points))
    d.expect("Table 3 densities", "['1/3', '2/3', '1/6', '5/6']", _rows(cond_v))
    d.expect("conditional model = Table 2 fixture", True,
             cond_u == canonicalize_base(i2))
    d.expect("conditional model = Table 3 fixture", True,
             cond_v == canonicalize_base(i3))
    trivial = StatisticPartition.trivial(i1.experiment.sample_points)
    d.expect("ancillaries of Table 1", _partition_set([trivial, U_PARTITION, V_PARTITION]),
             _partition_set(enumerate_ancillaries(i1.experiment)))
    d.expect("maximal ancillaries of Table 1", _partition_set([U_PARTITION, V_PARTITION]),
             _partition_set(maximal_ancillaries(i1.experiment)))
    for name, b in (("Table 2", i2), ("Table 3", i3)):
        e = canonicalize_base(b).experiment
        d.expect(f"ancillaries of {name}", _partition_set([StatisticPartition.trivial(
            e.sample_points)]), _partition_set(enumerate_ancillaries(e)))
    d.expect("C(I1, I2)", "related", _verdict(related_C(i1, i2)))
    d.expect("C(I1, I3)", "related", _verdict(related_C(i1, i3)))
    d.expect("C(I2, I3)", "not related", _verdict(related_C(i2, i3)))
    d.expect("G(I2, I3)", "not related", _verdict(related_G(i2, i3)))
    d.expect("MLE at (1,1)", "1", mle(i1))
    return d


def demo_accuracy() -> DemoScript:
    d = DemoScript("accuracy: conditional chance the MLE is right")
    i1, _, _ = lemma5_bases()
    u = conditional_accuracy(i1, U_PARTITION).correct
    v = conditional_accuracy(i1, V_PARTITION).correct
    d.expect("P_1(mle=1 | U=1)", Fraction(1, 2), u["1"])
    d.expect("P_2(mle=2 | U=1)", Fraction(3, 4), u["2"])
    d.expect("P_1(mle=1 | V=1)", Fraction(1, 3), v["1"])
    d.expect("P_2(mle=2 | V=1)", Fraction(5, 6), v["2"])
    return d


def demo_theorem6() -> DemoScript:
    d = DemoScript("theorem6: four conditionality links join the Table 2 and Table 3 bases")
    _, i2, i3 = lemma5_bases()
    lw = related_L(i2, i3)
    d.expect("likelihood constant", Fraction(3, 2), lw.c if lw else None)
    d.expect("Table 4 p", Fraction(2, 5), table4_parameters(lw.c).p)
    chain = efm_chain(i2, i3)
    d.expect("link kinds", "['C', 'C', 'C', 'C']", chain.kinds)
    d.expect("certificate verifies", True, verify_chain(chain).ok)
    d.expect("C(I2, I3) directly", "not related", _verdict(related_C(i2, i3)))
    return d


def demo_theorem7() -> DemoScript:
    d = DemoScript("theorem7: conditionality, sufficiency, conditionality through a mixture")
    _, i2, i3 = lemma5_bases()
    chain = birnbaum_chain(i2, i3)
    d.expect("link kinds", "['C', 'S', 'C']", chain.kinds)
    d.expect("certificate verifies", True, verify_chain(chain).ok)
    mix, component = mixture_experiment(i2.experiment, i3.experiment)
    d.expect("component label is ancillary", True,
             chain.links[0].witness.ancillary == component)
    msuf = minimal_sufficient_partition(mix)
    d.expect("mixture data points share a sufficient cell", True,
             msuf.cell_of("1:(1,1)") == msuf.cell_of("2:(1,1)"))
    d.expect("component label is a function of the sufficient statistic", False,
             satisfies_durbin(mix, component))
    return d


def demo_theorem8() -> DemoScript:
    d = DemoScript("theorem8: L-related but neither S- nor C-related")
    b1, b2, report = theorem8_pair()
    d.expect("Bernoulli fixture matches construction", True, load_fixture("theorem8_bernoulli") == b1)
    d.expect("geometric fixture matches construction", True, load_fixture("theorem8_geometric") == b2)
    d.expect("L", "c = 1", f"c = {format_rational(report.likelihood.c)}"
             if report.likelihood else "not related")
    d.expect("S", "not related", _verdict(report.sufficiency))
    d.expect("C", "not related", _verdict(report.conditionality))
    d.expect("ancillaries of the Bernoulli model", 1, len(report.ancillaries[0]))
    d.expect("ancillaries of the three-point model", 1, len(report.ancillaries[1]))
    d.expect("efm chain verifies", True, report.chain_report.ok)
    d.expect("efm chain link kinds", "['C', 'C', 'C', 'C']", report.chain.kinds)
    return d


def _rename(base: InferenceBase, points: dict, params: dict) -> InferenceBase:
    e = base.experiment
    moved = Experiment(tuple(points[x] for x in e.sample_points),
                       tuple(params[t] for t in e.parameters), e.densities)
    return InferenceBase(moved, points[base.data])


def demo_lemma10() -> DemoScript:
    d = DemoScript("lemma10: rewriting an {L, G} chain into a {C, G} chain")
    _, i2, i3 = lemma5_bases()
    same = {t: t for t in i2.parameters}
    start = _rename(i2, {"(1,1)": "a", "(1,2)": "b", "(2,1)": "c", "(2,2)": "d"}, same)
    end = _rename(i3, {x: f"v{x}" for x in i3.experiment.sample_points}, {"1": "one", "2": "two"})
    chain = ChainCertificate(
        (start, i2, i3, end),
        (
            Link.make("G", related_G(start, i2)),
            Link.make("L", related_L(i2, i3)),
            Link.make("G", related_G(i3, end)),
        ),
    )
    d.expect("input chain verifies", True, verify_chain(chain).ok)
    out = rewrite_LG_to_CG(chain)
    d.expect("rewritten kinds", "['G', 'C', 'C', 'C', 'C', 'G']", out.kinds)
    d.expect("rewritten chain verifies", True, verify_chain(out).ok)
    d.expect("L(start, end) without relabeling", "not related", _verdict(related_L(start, end)))
    return d


DEMOS = {
    "lemma5": demo_lemma5,
    "accuracy": demo_accuracy,
    "theorem6": demo_theorem6,
    "theorem7": demo_theorem7,
    "theorem8": demo_theorem8,
    "lemma10": demo_lemma10,
}
