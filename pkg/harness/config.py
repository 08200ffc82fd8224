from __future__ import annotations

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Dict, Optional, Tuple

from analysis.centrality import SHORT_NAMES, canonical_measure
from analysis.metrics import AUTO, DEFAULT_SOURCES, EXACT, SAMPLED
from graphs.generators import BARABASI_ALBERT, canonical_family
from spanning.tree import TREE_ALGORITHMS
from utils.errors import InvalidParameterError

SCALING_SYNTHETIC = "scaling_synthetic"
COLLECTION_REAL = "collection_real"
CORRELATION = "correlation"
KINDS = (SCALING_SYNTHETIC, COLLECTION_REAL, CORRELATION)
GRAPH = "graph"


def default_sizes(family: str) -> Tuple[int, ...]:
    if family == BARABASI_ALBERT:
        return tuple(3**k for k in range(4, 9))
    return tuple(2**k for k in range(7, 13))


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str
    family: Optional[str] = None
    input_dir: Optional[str] = None
    sizes: Tuple[int, ...] = ()
    k_avg: float = 10.0
    algorithms: Tuple[str, ...] = (GRAPH, "prim", "kruskal", "bfs")
    measures: Tuple[str, ...] = ("dc", "cc", "bc")
    realizations: Optional[int] = None
    seed: int = 0
    metric_mode: str = AUTO
    sources: int = DEFAULT_SOURCES
    threads: Optional[int] = None
    bootstraps: int = 0

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise InvalidParameterError(f"unknown experiment kind {self.kind!r}; expected one of {KINDS}")
        if self.family is not None:
            object.__setattr__(self, "family", canonical_family(self.family))
        if self.kind == SCALING_SYNTHETIC and self.family is None:
            raise InvalidParameterError("scaling_synthetic needs a family")
        if self.kind == COLLECTION_REAL and self.input_dir is None:
            raise InvalidParameterError("collection_real needs an input_dir")
        if self.kind == CORRELATION and self.input_dir is None and self.family is None:
            raise InvalidParameterError("correlation needs an input_dir or a synthetic family")
        if self.family is not None and not self.sizes:
            object.__setattr__(self, "sizes", default_sizes(self.family))
        object.__setattr__(self, "sizes", tuple(int(size) for size in self.sizes))
        if any(b <= a for a, b in zip(self.sizes, self.sizes[1:])):
            raise InvalidParameterError("size ladder must be strictly increasing")
        if self.realizations is None:
            object.__setattr__(self, "realizations", 25 if self.kind == CORRELATION else 100)
        if self.realizations < 1:
            raise InvalidParameterError("realizations must be at least 1")
        unknown = [name for name in self.algorithms if name != GRAPH and name not in TREE_ALGORITHMS]
        if unknown:
            raise InvalidParameterError(f"unknown algorithms {unknown}")
        object.__setattr__(self, "algorithms", tuple(self.algorithms))
        object.__setattr__(
            self, "measures", tuple(SHORT_NAMES[canonical_measure(name)] for name in self.measures)
        )
        if self.metric_mode not in (AUTO, EXACT, SAMPLED):
            raise InvalidParameterError(f"unknown metric_mode {self.metric_mode!r}")

    @property
    def tree_algorithms(self) -> Tuple[str, ...]:
        return tuple(name for name in self.algorithms if name != GRAPH)

    def to_dict(self) -> Dict[str, object]:
        return asdict(self)


def _ladder(spec: Dict[str, int]) -> Tuple[int, ...]:
    try:
        base, start, stop = int(spec["base"]), int(spec["start"]), int(spec["stop"])
    except KeyError as exc:
        raise InvalidParameterError(f"ladder needs base, start and stop (missing {exc})") from None
    return tuple(base**k for k in range(start, stop + 1))


def load_config(path: str | Path) -> ExperimentConfig:
    with Path(path).open("rb") as handle:
        try:
            raw = tomllib.load(handle)
        except tomllib.TOMLDecodeError as exc:
            raise InvalidParameterError(f"{path}: {exc}") from None
    known = {item.name for item in fields(ExperimentConfig)}
    ladder = raw.pop("ladder", None)
    unknown = sorted(set(raw) - known)
    if unknown:
        raise InvalidParameterError(f"unknown config keys: {unknown}")
    if ladder is not None:
        if "sizes" in raw:
            raise InvalidParameterError("give either sizes or ladder, not both")
        raw["sizes"] = _ladder(ladder)
    for key in ("sizes", "algorithms", "measures"):
        if key in raw:
            raw[key] = tuple(raw[key])
    try:
        return ExperimentConfig(**raw)
    except TypeError as exc:
        raise InvalidParameterError(str(exc)) from None
