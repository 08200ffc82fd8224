from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from graphs.core import Graph, from_edges
from utils.errors import InvalidParameterError

logger = logging.getLogger(__name__)

ERDOS_RENYI = "erdos_renyi"
BARABASI_ALBERT = "barabasi_albert"
TRIANGULAR_LATTICE = "triangular_lattice"

FAMILY_ALIASES = {
    "er": ERDOS_RENYI,
    "ba": BARABASI_ALBERT,
    "tri": TRIANGULAR_LATTICE,
    ERDOS_RENYI: ERDOS_RENYI,
    BARABASI_ALBERT: BARABASI_ALBERT,
    TRIANGULAR_LATTICE: TRIANGULAR_LATTICE,
}

# Above this many nodes pairs are skipped geometrically instead of tried one by one.
BERNOULLI_LIMIT = 10_000


def canonical_family(name: str) -> str:
    try:
        return FAMILY_ALIASES[name]
    except KeyError:
        raise InvalidParameterError(
            f"unknown graph family {name!r}; expected one of {sorted(FAMILY_ALIASES)}"
        ) from None


@dataclass(frozen=True)
class GenSpec:
    family: str
    n: int
    k_avg: float = 10.0
    seed: Optional[int] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "family", canonical_family(self.family))
        if self.n < 2:
            raise InvalidParameterError("a generated graph needs at least 2 nodes")
        if self.family != TRIANGULAR_LATTICE and not self.k_avg < self.n:
            raise InvalidParameterError("k_avg must be smaller than n")


def erdos_renyi(n: int, k_avg: float, seed: Optional[int]) -> Graph:
    """G(n, p) with ``p = k_avg / (n - 1)``; may be disconnected."""
    if n < 2:
        raise InvalidParameterError("erdos_renyi needs n >= 2")
    if not 0 < k_avg <= n - 1:
        raise InvalidParameterError(f"k_avg must lie in (0, {n - 1}], got {k_avg}")
    p = k_avg / (n - 1)
    rng = np.random.default_rng(seed)
    if n <= BERNOULLI_LIMIT:
        us: List[np.ndarray] = []
        vs: List[np.ndarray] = []
        for i in range(n - 1):
            hits = np.flatnonzero(rng.random(n - i - 1) < p)
            if hits.size:
                us.append(np.full(hits.size, i, dtype=np.int64))
                vs.append(hits + i + 1)
        if not us:
            return from_edges(n, [])
        return from_edges(n, np.column_stack((np.concatenate(us), np.concatenate(vs))))
    return from_edges(n, _geometric_pairs(n, p, rng))


def _geometric_pairs(n: int, p: float, rng: np.random.Generator) -> np.ndarray:
    # Linear index over the upper triangle, row-major: row i starts at offsets[i].
    total = n * (n - 1) // 2
    rows = np.arange(n, dtype=np.int64)
    offsets = rows * (2 * n - rows - 1) // 2
    expected = int(total * p) + 1
    batch = max(1024, int(expected * 1.1))
    chosen: List[np.ndarray] = []
    position = -1
    while True:
        gaps = rng.geometric(p, size=batch)
        positions = position + np.cumsum(gaps)
        inside = positions[positions < total]
        chosen.append(inside)
        if inside.size < positions.size:
            break
        position = int(positions[-1])
    linear = np.concatenate(chosen)
    i = np.searchsorted(offsets, linear, side="right") - 1
    j = linear - offsets[i] + i + 1
    return np.column_stack((i, j))


def barabasi_albert(n: int, k_avg: float, seed: Optional[int]) -> Graph:
    """Preferential attachment grown from a clique on ``k_avg / 2 + 1`` nodes.

    Every new node attaches to ``k_avg / 2`` distinct existing nodes, each draw
    taken uniformly from the list of all edge endpoints (so proportional to degree).
    """
    if k_avg < 2 or not float(k_avg).is_integer() or int(k_avg) % 2:
        raise InvalidParameterError(f"barabasi_albert needs an even k_avg >= 2, got {k_avg}")
    attach = int(k_avg) // 2
    if n <= attach:
        raise InvalidParameterError(f"barabasi_albert needs n > {attach}, got {n}")
    rng = random.Random(seed)
    edges: List[Tuple[int, int]] = [
        (i, j) for i in range(attach + 1) for j in range(i + 1, attach + 1)
    ]
    endpoints: List[int] = [node for edge in edges for node in edge]
    for new in range(attach + 1, n):
        targets: List[int] = []
        seen = set()
        while len(targets) < attach:
            target = endpoints[rng.randrange(len(endpoints))]
            if target in seen:
                continue
            seen.add(target)
            targets.append(target)
        for target in targets:
            edges.append((target, new))
            endpoints.append(target)
            endpoints.append(new)
    return from_edges(n, edges)


def triangular_lattice(n: int) -> Graph:
    """Non-periodic L x L triangular lattice, ``L = floor(sqrt(n))``.

    Node ``(r, c)`` is ``r * L + c`` and links to ``(r, c+1)``, ``(r+1, c)`` and ``(r+1, c+1)``.
    """
    if n < 4:
        raise InvalidParameterError("triangular_lattice needs n >= 4")
    side = math.isqrt(n)
    if side * side != n:
        logger.info("triangular lattice: %d is not a square, using n=%d", n, side * side)
    grid = np.arange(side * side, dtype=np.int64).reshape(side, side)
    right = np.column_stack((grid[:, :-1].ravel(), grid[:, 1:].ravel()))
    down = np.column_stack((grid[:-1, :].ravel(), grid[1:, :].ravel()))
    diagonal = np.column_stack((grid[:-1, :-1].ravel(), grid[1:, 1:].ravel()))
    return from_edges(side * side, np.concatenate((right, down, diagonal)))


def generate(spec: GenSpec) -> Graph:
    if spec.family == ERDOS_RENYI:
        return erdos_renyi(spec.n, spec.k_avg, spec.seed)
    if spec.family == BARABASI_ALBERT:
        return barabasi_albert(spec.n, spec.k_avg, spec.seed)
    return triangular_lattice(spec.n)
