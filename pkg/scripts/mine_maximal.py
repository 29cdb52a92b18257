"""Mine small experiments that have two or more maximal ancillaries.

Prints a summary per hit and flags hits isomorphic to the Table 1 fixture.

    python3 scripts/mine_maximal.py --x-size 4 --theta-size 2 --denominator 12
"""

from __future__ import annotations

import argparse
import json
import time
from dataclasses import asdict, dataclass

from statrel.ancillarity import maximal_ancillaries
from statrel.demos import load_fixture
from statrel.model import experiments_isomorphic
from statrel.search import check_bounds, search_maximal


@dataclass(frozen=True)
class MiningConfig:
    x_size: int = 4
    theta_size: int = 2
    denominator: int = 12
    limit: int | None = None
    workers: int = 1
    force: bool = False

    def __post_init__(self):
        check_bounds(self.x_size, self.theta_size, self.denominator, force=self.force)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--x-size", type=int, default=MiningConfig.x_size)
    ap.add_argument("--theta-size", type=int, default=MiningConfig.theta_size)
    ap.add_argument("--denominator", type=int, default=MiningConfig.denominator)
    ap.add_argument("--limit", type=int)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--force", action="store_true")
    cfg = MiningConfig(**vars(ap.parse_args()))
    print(json.dumps(asdict(cfg)))

    table1 = load_fixture("table1").experiment
    start = time.perf_counter()
    hits = 0
    for e in search_maximal(cfg.x_size, cfg.theta_size, cfg.denominator,
                            limit=cfg.limit, workers=cfg.workers):
        hits += 1
        mark = "  <- Table 1" if experiments_isomorphic(e, table1) is not None else ""
        rows = " | ".join(" ".join(str(v) for v in r) for r in e.densities)
        print(f"{hits:4d}  {len(maximal_ancillaries(e))} maximal  {rows}{mark}")
    print(f"{hits} experiments in {time.perf_counter() - start:.2f} s")


if __name__ == "__main__":
    main()
