from __future__ import annotations

import io
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import BinaryIO, Dict, Iterable, List, Optional, Sequence, Tuple

from utils.errors import EdgeListParseError, EmptyGraphError

COMMENT_PREFIXES = ("#", "%")


@dataclass
class EdgeList:
    """Edges in file order, as dense ids, plus the raw label of every id.

    Multiplicity and self-loops are kept; ``graphs.core.simplify`` drops them.
    """

    edges: List[Tuple[int, int]]
    labels: List[str]

    @property
    def num_nodes(self) -> int:
        return len(self.labels)

    @property
    def label_map(self) -> Dict[str, int]:
        return {label: idx for idx, label in enumerate(self.labels)}

    def raw_edges(self) -> List[Tuple[str, str]]:
        return [(self.labels[u], self.labels[v]) for u, v in self.edges]


def _parse_lines(lines: Iterable[str | bytes]) -> EdgeList:
    label_map: Dict[str, int] = {}
    labels: List[str] = []
    edges: List[Tuple[int, int]] = []
    for number, raw in enumerate(lines, start=1):
        if isinstance(raw, bytes):
            try:
                raw = raw.decode("utf-8")
            except UnicodeDecodeError as exc:
                raise EdgeListParseError(f"not valid UTF-8 ({exc.reason})", number) from exc
        line = raw.strip()
        if not line or line.startswith(COMMENT_PREFIXES):
            continue
        tokens = line.split()
        if len(tokens) < 2:
            raise EdgeListParseError(f"expected two node labels, got {line!r}", number)
        pair = []
        for token in tokens[:2]:
            idx = label_map.get(token)
            if idx is None:
                idx = len(labels)
                label_map[token] = idx
                labels.append(token)
            pair.append(idx)
        edges.append((pair[0], pair[1]))
    if not edges:
        raise EmptyGraphError("edge list contains no edges")
    return EdgeList(edges=edges, labels=labels)


def parse_edge_list(data: str | bytes | BinaryIO | Iterable[str | bytes]) -> EdgeList:
    if isinstance(data, (str, bytes)):
        return _parse_lines(data.splitlines())
    return _parse_lines(data)


def parse_edge_file(path: str | Path) -> EdgeList:
    if str(path) == "-":
        return _parse_lines(sys.stdin.buffer)
    with Path(path).open("rb") as handle:
        return _parse_lines(handle)


def _label_key(label: str) -> Tuple[int, int, str]:
    try:
        return (0, int(label), "")
    except ValueError:
        return (1, 0, label)


def format_edge_list(
    pairs: Iterable[Tuple[int, int]],
    labels: Optional[Sequence[str]] = None,
    header: Optional[str] = None,
) -> str:
    """Canonical text form: optional ``# header`` line, then one ``u v`` per edge.

    ``pairs`` must already be in canonical (sorted, u < v) order. With ``labels`` each
    line is re-sorted by label, integers numerically and before any other label.
    """
    out = io.StringIO()
    if header is not None:
        out.write(f"# {header}\n")
    if labels is None:
        for u, v in pairs:
            out.write(f"{u} {v}\n")
    else:
        named = [sorted((labels[u], labels[v]), key=_label_key) for u, v in pairs]
        named.sort(key=lambda pair: (_label_key(pair[0]), _label_key(pair[1])))
        for a, b in named:
            out.write(f"{a} {b}\n")
    return out.getvalue()
