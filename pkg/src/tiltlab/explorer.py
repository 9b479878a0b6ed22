"""Bounded breadth-first search of the exchange graph under simple tilts.

Nodes are deduplicated by the state key, so a heart and its even shifts (or
hearts differing by a pure braid) share a node.  Node counts are therefore
lower bounds once such collisions can occur.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from typing import Dict, List, Tuple

from . import hearts as he
from . import trees as tc


@dataclass(frozen=True)
class Arc:
    source: int
    target: int
    step: he.Step


@dataclass(frozen=True)
class ExchangeGraph:
    nodes: Tuple[he.HeartState, ...]
    arcs: Tuple[Arc, ...]
    root: int
    depth: Tuple[int, ...]  # BFS distance of each node

    def index(self, state: he.HeartState) -> int:
        return self.nodes.index(state)

    def twins(self) -> List[Tuple[int, int]]:
        """Pairs of nodes with the same tree and negated classes."""
        where = {n.key: k for k, n in enumerate(self.nodes)}
        out = []
        for k, s in enumerate(self.nodes):
            neg = he.shift(s, 1)
            j = where.get(neg.key)
            if j is not None and k < j:
                out.append((k, j))
        return out


def _neighbours(state: he.HeartState):
    for i in range(1, state.n + 1):
        yield he.Left(i), he.left_tilt_simple(state, i)
        yield he.Right(i), he.right_tilt_simple(state, i)


def explore(start: he.HeartState, depth: int) -> ExchangeGraph:
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    root = he.HeartState(start.tree, start.classes)
    dist = {root: 0}
    found = {root: root}
    frontier = [root]
    for d in range(1, depth + 1):
        nxt = []
        for s in frontier:
            for step, t in _neighbours(s):
                if t not in dist:
                    dist[t] = d
                    found[t] = t
                    nxt.append(t)
        frontier = nxt
    nodes = sorted(found.values(), key=lambda s: s.key)
    pos = {s.key: k for k, s in enumerate(nodes)}
    arcs = set()
    for s in nodes:
        for step, t in _neighbours(s):
            if t.key in pos:
                arcs.add((pos[s.key], pos[t.key], step))
    arc_list = sorted(arcs, key=lambda a: (a[0], a[1], str(a[2])))
    return ExchangeGraph(
        tuple(nodes),
        tuple(Arc(*a) for a in arc_list),
        pos[root.key],
        tuple(dist[s] for s in nodes),
    )


def classify_tiles(graph: ExchangeGraph) -> Dict[bytes, int]:
    return dict(Counter(tc.canonical_key(s.tree, labelled=False) for s in graph.nodes))


def tile_census(graph: ExchangeGraph) -> Dict[str, int]:
    """classify_tiles with readable tree names."""
    out: Dict[str, int] = {}
    for s in graph.nodes:
        name = tc.describe(s.tree)
        out[name] = out.get(name, 0) + 1
    return dict(sorted(out.items()))


def _classes_text(s: he.HeartState) -> str:
    return " ".join("(" + ",".join(map(str, c)) + ")" for c in s.classes)


def dot_export(graph: ExchangeGraph) -> str:
    lines = ["digraph exchange {"]
    for k, s in enumerate(graph.nodes):
        label = f"{tc.describe(s.tree)}\\n{_classes_text(s)}"
        extra = ", shape=doublecircle" if k == graph.root else ""
        lines.append(f'  n{k} [label="{label}"{extra}];')
    for a in graph.arcs:
        lines.append(f'  n{a.source} -> n{a.target} [label="{a.step}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def graph_to_dict(graph: ExchangeGraph) -> dict:
    return {
        "root": graph.root,
        "nodes": [
            {
                "id": k,
                "depth": graph.depth[k],
                "tree": tc.describe(s.tree),
                "classes": [list(c) for c in s.classes],
            }
            for k, s in enumerate(graph.nodes)
        ],
        "arcs": [{"source": a.source, "target": a.target, "step": str(a.step)} for a in graph.arcs],
        "tiles": tile_census(graph),
        "twins": [list(p) for p in graph.twins()],
    }


def graph_json(graph: ExchangeGraph) -> str:
    return json.dumps(graph_to_dict(graph), sort_keys=True)
