"""Independent re-checking of chain certificates.

Nothing here calls the search routines in :mod:`statrel.relations` or
:mod:`statrel.ancillarity`. Every witness is checked against the density
tables directly: proportionality by cross-multiplication, ancillarity by
summing cells, relabelings by bijectivity and exact transport.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Mapping

from .ancillarity import LEFT, RIGHT
from .certificate import ChainCertificate, Link, normalize_kind
from .model import Experiment, InferenceBase, ModelError, cell_label, validate_experiment
from .rational import RationalFormatError


@dataclass
class VerificationReport:
    n_bases: int = 0
    n_links: int = 0
    failures: list[tuple[str, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    @property
    def first_failure(self) -> tuple[str, str] | None:
        return self.failures[0] if self.failures else None

    def lines(self) -> list[str]:
        if self.ok:
            return [f"OK: {self.n_bases} bases, {self.n_links} links verified"]
        return [f"FAIL {where}: {msg}" for where, msg in self.failures]


def _support(e: Experiment) -> list[str]:
    return [x for x in e.sample_points if any(e.column(x))]


def _proportional(a, b) -> bool:
    n = len(a)
    return all(a[i] * b[j] == a[j] * b[i] for i in range(n) for j in range(i + 1, n)) and all(
        (u == 0) == (v == 0) for u, v in zip(a, b)
    )


def _sufficient_classes(e: Experiment) -> list[list[str]]:
    classes: list[list[str]] = []
    for x in _support(e):
        col = e.column(x)
        for cls in classes:
            if _proportional(e.column(cls[0]), col):
                cls.append(x)
                break
        else:
            classes.append([x])
    return classes


def _bijection(m: Mapping[str, str], domain, codomain) -> str | None:
    if set(m) != set(domain):
        return "map is not defined exactly on its domain"
    if sorted(m.values()) != sorted(codomain) or len(set(m.values())) != len(m):
        return "map is not a bijection onto its codomain"
    return None


def check_L(b1: InferenceBase, b2: InferenceBase, w) -> str | None:
    if b1.parameters != b2.parameters:
        return "parameter lists differ"
    if w.c <= 0:
        return "constant is not positive"
    e1, e2 = b1.experiment, b2.experiment
    for t in b1.parameters:
        if e1.density(t, b1.data) != w.c * e2.density(t, b2.data):
            return f"likelihoods not proportional by {w.c} at parameter {t!r}"
    return None


def _reduced(b: InferenceBase):
    e = b.experiment
    classes = _sufficient_classes(e)
    table = {cell_label(c): {t: sum((e.density(t, x) for x in c), Fraction(0))
                             for t in e.parameters} for c in classes}
    data_label = next(cell_label(c) for c in classes if b.data in c)
    return table, data_label


def check_S(b1: InferenceBase, b2: InferenceBase, w) -> str | None:
    if b1.parameters != b2.parameters:
        return "parameter lists differ"
    t1, d1 = _reduced(b1)
    t2, d2 = _reduced(b2)
    if tuple(w.data_cells) != (d1, d2):
        return f"data cells {list(w.data_cells)} are not the minimal sufficient cells {[d1, d2]}"
    bij = w.reduced_bijection
    bad = _bijection(bij.sample_map, t1, t2)
    if bad:
        return f"reduced sample {bad}"
    if any(bij.parameter_map.get(t) != t for t in b1.parameters) or len(
        bij.parameter_map
    ) != len(b1.parameters):
        return "parameter map is not the identity"
    if bij.sample_map[d1] != d2:
        return "bijection does not match the observed cells"
    for z, row in t1.items():
        if row != t2[bij.sample_map[z]]:
            return f"reduced densities differ at {z!r}"
    return None


def check_C(b1: InferenceBase, b2: InferenceBase, w, durbin: bool = False) -> str | None:
    if b1.parameters != b2.parameters:
        return "parameter lists differ"
    if w.direction not in (LEFT, RIGHT):
        return f"unknown direction {w.direction!r}"
    cond, other = (b1, b2) if w.direction == LEFT else (b2, b1)
    e, f = cond.experiment, other.experiment
    cells = [set(c) for c in w.ancillary.cells]
    if sorted(x for c in cells for x in c) != sorted(e.sample_points):
        return "ancillary does not partition the conditioned sample space"
    for c in cells:
        masses = {sum((e.density(t, x) for x in c), Fraction(0)) for t in e.parameters}
        if len(masses) != 1:
            return f"cell {sorted(c)} has parameter-dependent mass"
    cell = next(c for c in cells if cond.data in c)
    m = sum((e.density(e.parameters[0], x) for x in cell), Fraction(0))
    if m == 0:
        return "observed cell has zero mass"
    support = [x for x in e.sample_points if x in cell and any(e.column(x))]
    bad = _bijection(w.relabel, support, _support(f))
    if bad:
        return f"relabel {bad}"
    if w.relabel[cond.data] != other.data:
        return "relabel does not carry data to data"
    for x in support:
        for t in e.parameters:
            if e.density(t, x) / m != f.density(t, w.relabel[x]):
                return f"conditional density differs at {x!r}, parameter {t!r}"
    if durbin:
        zero = {x for x in e.sample_points if not any(e.column(x))}
        blocks = _sufficient_classes(e) + ([sorted(zero)] if zero else [])
        if not all(any(set(k) <= c for c in cells) for k in blocks):
            return "ancillary is not a function of the minimal sufficient statistic"
    return None


def check_G(b1: InferenceBase, b2: InferenceBase, w) -> str | None:
    e1, e2 = b1.experiment, b2.experiment
    bad = _bijection(w.sample_map, e1.sample_points, e2.sample_points)
    if bad:
        return f"sample {bad}"
    bad = _bijection(w.parameter_map, e1.parameters, e2.parameters)
    if bad:
        return f"parameter {bad}"
    if w.sample_map[b1.data] != b2.data:
        return "sample map does not carry data to data"
    for t in e1.parameters:
        for x in e1.sample_points:
            if e1.density(t, x) != e2.density(w.parameter_map[t], w.sample_map[x]):
                return f"density not preserved at {x!r}, parameter {t!r}"
    return None


def check_link(b1: InferenceBase, b2: InferenceBase, link: Link) -> str | None:
    kind = normalize_kind(link.kind)
    try:
        if kind == "L":
            return check_L(b1, b2, link.witness)
        if kind == "S":
            return check_S(b1, b2, link.witness)
        if kind == "G":
            return check_G(b1, b2, link.witness)
        if link.orientation != link.witness.direction:
            return "orientation disagrees with witness direction"
        return check_C(b1, b2, link.witness, durbin=kind == "C_durbin")
    except (KeyError, AttributeError, TypeError, ZeroDivisionError) as exc:
        return f"malformed witness ({type(exc).__name__}: {exc})"


def _revalidate(b: InferenceBase) -> InferenceBase:
    e = b.experiment
    return InferenceBase(validate_experiment(e.sample_points, e.parameters, e.densities), b.data)


def verify_chain(cert: ChainCertificate) -> VerificationReport:
    report = VerificationReport(len(cert.bases), len(cert.links))
    bases = []
    for i, b in enumerate(cert.bases):
        try:
            bases.append(_revalidate(b))
        except ModelError as exc:
            report.failures.append((f"base {i}", f"{type(exc).__name__}: {exc}"))
            return report
    for i, link in enumerate(cert.links):
        msg = check_link(bases[i], bases[i + 1], link)
        if msg:
            report.failures.append((f"link {i} ({link.kind})", msg))
            return report
    return report


def verify_certificate_json(data: Any) -> VerificationReport:
    """Parse and verify; parse problems become report entries, not exceptions."""
    report = VerificationReport()
    if not isinstance(data, Mapping) or "bases" not in data or "links" not in data:
        report.failures.append(("certificate", "expected an object with 'bases' and 'links'"))
        return report
    bases = []
    for i, raw in enumerate(data["bases"]):
        try:
            bases.append(InferenceBase.from_dict(raw))
        except (ModelError, RationalFormatError, TypeError) as exc:
            report.failures.append((f"base {i}", f"{type(exc).__name__}: {exc}"))
            return report
    links = []
    for i, raw in enumerate(data["links"]):
        try:
            if raw.get("position", i) != i:
                raise ModelError(f"position {raw.get('position')} out of order")
            links.append(Link.from_dict(raw))
        except (ModelError, ValueError, KeyError, TypeError, AttributeError) as exc:
            report.failures.append((f"link {i}", f"{type(exc).__name__}: {exc}"))
            return report
    try:
        cert = ChainCertificate(tuple(bases), tuple(links))
    except ValueError as exc:
        report.failures.append(("certificate", str(exc)))
        return report
    return verify_chain(cert)
