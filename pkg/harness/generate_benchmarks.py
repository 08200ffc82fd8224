from __future__ import annotations
import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence, Tuple
ROOT = Path(__file__).resolve().parents[1]
sys.path.append(str(ROOT))
from graphs.core import write_graph
from graphs.generators import BARABASI_ALBERT, ERDOS_RENYI, TRIANGULAR_LATTICE, GenSpec, generate
from utils.seeds import derive_seed

logger = logging.getLogger(__name__)

DEFAULT_SUITE: Tuple[Tuple[str, int], ...] = (
    (ERDOS_RENYI, 256),
    (ERDOS_RENYI, 1024),
    (BARABASI_ALBERT, 243),
    (BARABASI_ALBERT, 729),
    (TRIANGULAR_LATTICE, 256),
    (TRIANGULAR_LATTICE, 1024),
)


def write_suite(
    output_dir: str | Path,
    suite: Sequence[Tuple[str, int]] = DEFAULT_SUITE,
    instances: int = 5,
    k_avg: float = 10.0,
    seed: int = 0,
) -> List[Path]:
    """One edge list per (family, size, instance); lattices are deterministic so get a single file."""
    target = Path(output_dir)
    target.mkdir(parents=True, exist_ok=True)
    written: List[Path] = []
    for family, n in suite:
        count = 1 if family == TRIANGULAR_LATTICE else instances
        for index in range(1, count + 1):
            instance_seed = derive_seed(seed, family, n, index)
            g = generate(GenSpec(family, n, k_avg, instance_seed))
            header = json.dumps(
                {"family": family, "n": g.n, "m": g.m, "k_avg": g.k_avg, "k_avg_requested": k_avg, "seed": instance_seed}, sort_keys=True
            )
            filename = target / f"{family}_{n}n_{index:02d}.txt"
            write_graph(g, filename, header=header)
            written.append(filename)
    logger.info("wrote %d edge lists to %s", len(written), target)
    return written


def main(argv: Optional[Sequence[str]] = None) -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--output-dir", default="benchmarks/synthetic")
    parser.add_argument("--instances", type=int, default=5)
    parser.add_argument("--k-avg", type=float, default=10.0)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)
    logging.basicConfig(stream=sys.stderr, level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    write_suite(args.output_dir, instances=args.instances, k_avg=args.k_avg, seed=args.seed)

if __name__ == "__main__":
    main()
