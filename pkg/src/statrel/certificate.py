"""Chain certificates: a path of inference bases with one witnessed link per step."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Mapping

from .ancillarity import LEFT, RIGHT, ConditionalityWitness
from .model import InferenceBase, ModelBijection, ModelError
from .relations import LikelihoodWitness, SufficiencyWitness, invariance_witness_to_dict

KINDS = ("L", "S", "C", "C_durbin", "G")
FORWARD = "left-to-right"


def normalize_kind(kind: str) -> str:
    k = kind.strip().replace("-", "_")
    if k.lower() == "c_durbin":
        k = "C_durbin"
    if k not in KINDS:
        raise ValueError(f"unknown relation kind {kind!r}; expected one of {', '.join(KINDS)}")
    return k


def witness_to_dict(kind: str, witness: Any) -> dict:
    if kind == "G":
        return invariance_witness_to_dict(witness)
    return witness.to_dict()


def witness_from_dict(kind: str, data: Mapping) -> Any:
    kind = normalize_kind(kind)
    try:
        if kind == "L":
            return LikelihoodWitness.from_dict(data)
        if kind == "S":
            return SufficiencyWitness.from_dict(data)
        if kind == "G":
            return ModelBijection.from_dict(data)
        return ConditionalityWitness.from_dict(data)
    except (KeyError, TypeError) as exc:
        raise ModelError(f"malformed {kind} witness: {exc}") from None


def invert_witness(kind: str, witness: Any) -> Any:
    """Witness for the same link read right-to-left."""
    return witness.inverse()


def orientation_of(kind: str, witness: Any) -> str:
    if kind in ("C", "C_durbin"):
        return witness.direction
    return FORWARD


def _flip(orientation: str) -> str:
    return {LEFT: RIGHT, RIGHT: LEFT}.get(orientation, orientation)


@dataclass(frozen=True)
class Link:
    kind: str
    witness: Any
    orientation: str

    @classmethod
    def make(cls, kind: str, witness: Any) -> "Link":
        kind = normalize_kind(kind)
        return cls(kind, witness, orientation_of(kind, witness))

    def inverse(self) -> "Link":
        return Link(self.kind, invert_witness(self.kind, self.witness), _flip(self.orientation))

    def to_dict(self, position: int) -> dict:
        return {
            "position": position,
            "kind": self.kind,
            "witness": witness_to_dict(self.kind, self.witness),
            "orientation": self.orientation,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "Link":
        kind = normalize_kind(data["kind"])
        witness = witness_from_dict(kind, data["witness"])
        return cls(kind, witness, data.get("orientation", orientation_of(kind, witness)))


@dataclass(frozen=True)
class ChainCertificate:
    """``links[i]`` relates ``bases[i]`` to ``bases[i + 1]``."""

    bases: tuple[InferenceBase, ...]
    links: tuple[Link, ...]

    def __post_init__(self):
        object.__setattr__(self, "bases", tuple(self.bases))
        object.__setattr__(self, "links", tuple(self.links))
        if self.bases and len(self.links) != len(self.bases) - 1:
            raise ValueError(f"{len(self.links)} links for {len(self.bases)} bases")
        if not self.bases and self.links:
            raise ValueError("links without bases")

    @property
    def kinds(self) -> list[str]:
        return [link.kind for link in self.links]

    def __len__(self) -> int:
        return len(self.links)

    def reversed(self) -> "ChainCertificate":
        return ChainCertificate(self.bases[::-1], tuple(l.inverse() for l in reversed(self.links)))

    def then(self, other: "ChainCertificate") -> "ChainCertificate":
        if not self.bases:
            return other
        if not other.bases:
            return self
        if self.bases[-1] != other.bases[0]:
            raise ValueError("chains do not meet at a common base")
        return ChainCertificate(self.bases + other.bases[1:], self.links + other.links)

    @classmethod
    def single(cls, base: InferenceBase) -> "ChainCertificate":
        return cls((base,), ())

    def to_dict(self) -> dict:
        return {
            "bases": [b.to_dict() for b in self.bases],
            "links": [link.to_dict(i) for i, link in enumerate(self.links)],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "ChainCertificate":
        try:
            bases = [InferenceBase.from_dict(b) for b in data["bases"]]
            links = [Link.from_dict(l) for l in data["links"]]
        except (KeyError, TypeError) as exc:
            raise ModelError(f"malformed certificate: {exc}") from None
        return cls(tuple(bases), tuple(links))
