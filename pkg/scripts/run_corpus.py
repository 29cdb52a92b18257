"""Build certificates for a random corpus of likelihood-related pairs.

For every pair the script builds both constructive chains, verifies them
independently and tallies the outcome. Optionally writes every certificate
to a directory as JSON.

    python3 scripts/run_corpus.py --size 200 --seed 1 --out /tmp/certs
"""

from __future__ import annotations

import argparse
import json
import time
from collections import Counter
from dataclasses import asdict, dataclass
from pathlib import Path

from statrel.ancillarity import related_C
from statrel.constructions import birnbaum_chain, efm_chain
from statrel.generators import likelihood_corpus
from statrel.relations import related_L, related_S
from statrel.verify import verify_chain


@dataclass(frozen=True)
class CorpusConfig:
    seed: int = 2024
    size: int = 200
    out: str | None = None

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("size must be positive")


def run(cfg: CorpusConfig) -> Counter:
    tally: Counter = Counter()
    out = Path(cfg.out) if cfg.out else None
    if out:
        out.mkdir(parents=True, exist_ok=True)
    for k, (b1, b2) in enumerate(likelihood_corpus(cfg.seed, cfg.size)):
        c = related_L(b1, b2).c
        tally["c>1" if c > 1 else "c<1" if c < 1 else "c=1"] += 1
        tally["S"] += related_S(b1, b2) is not None
        tally["C"] += related_C(b1, b2) is not None
        for name, build in (("efm", efm_chain), ("birnbaum", birnbaum_chain)):
            chain = build(b1, b2)
            tally[f"{name} verified"] += verify_chain(chain).ok
            if out:
                (out / f"{k:04d}_{name}.json").write_text(json.dumps(chain.to_dict(), indent=2))
    return tally


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=CorpusConfig.seed)
    ap.add_argument("--size", type=int, default=CorpusConfig.size)
    ap.add_argument("--out")
    cfg = CorpusConfig(**vars(ap.parse_args()))
    start = time.perf_counter()
    tally = run(cfg)
    print(json.dumps(asdict(cfg)))
    for key in ("c>1", "c<1", "c=1", "S", "C", "efm verified", "birnbaum verified"):
        print(f"{key:>18}: {tally[key]}")
    print(f"{'seconds':>18}: {time.perf_counter() - start:.2f}")


if __name__ == "__main__":
    main()
