"""Planar Brauer trees with multiplicity one.

A tree stores its vertices, the two ends of every edge, the cyclic order of
edges around every vertex and a labelling of the edges by 1..n.  Vertex and
edge ids are preserved by every operation here, in particular by `mutate`,
so the vertex bijection it reports is always the identity.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from typing import Dict, Hashable, Iterable, List, Mapping, Sequence, Tuple

from .errors import (
    CycleDetected,
    Disconnected,
    InconsistentCyclicOrder,
    NotIncident,
    ParseError,
    UnknownLabel,
)

Vertex = Hashable


def _rot(order: Sequence[int]) -> Tuple[int, ...]:
    # cyclic orders are stored starting from their smallest edge id
    order = tuple(order)
    if not order:
        return order
    k = order.index(min(order))
    return order[k:] + order[:k]


@dataclass(frozen=True)
class BrauerTree:
    vertices: Tuple[Vertex, ...]
    ends: Mapping[int, Tuple[Vertex, Vertex]]
    cyclic: Mapping[Vertex, Tuple[int, ...]]
    labels: Mapping[int, int]  # edge id -> label

    # -- basic accessors -------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.ends)

    @property
    def edges(self) -> Tuple[int, ...]:
        return tuple(sorted(self.ends))

    def edge_of(self, label: int) -> int:
        for e, lab in self.labels.items():
            if lab == label:
                return e
        raise UnknownLabel(f"no edge carries label {label}")

    def label_of(self, edge: int) -> int:
        return self.labels[edge]

    def label_map(self) -> Dict[int, int]:
        """label -> edge"""
        return {lab: e for e, lab in self.labels.items()}

    def valence(self, v: Vertex) -> int:
        return len(self.cyclic[v])

    def other_end(self, e: int, v: Vertex) -> Vertex:
        a, b = self.ends[e]
        if v == a:
            return b
        if v == b:
            return a
        raise NotIncident(f"edge {e} is not incident to vertex {v!r}")

    def shared_vertices(self, e: int, f: int) -> List[Vertex]:
        return [v for v in self.ends[e] if v in self.ends[f]]

    def __hash__(self):
        return hash(canonical_key(self, labelled=True))


def make_tree(
    ends: Mapping[int, Sequence[Vertex]],
    cyclic: Mapping[Vertex, Sequence[int]],
    labels: Mapping[int, int] | None = None,
    vertices: Iterable[Vertex] | None = None,
    check: bool = True,
) -> BrauerTree:
    if vertices is None:
        vertices = list(cyclic)
    if labels is None:
        labels = {e: e for e in ends}
    tree = BrauerTree(
        vertices=tuple(vertices),
        ends={int(e): (vw[0], vw[1]) for e, vw in ends.items()},
        cyclic={v: _rot(int(e) for e in es) for v, es in cyclic.items()},
        labels={int(e): int(lab) for e, lab in labels.items()},
    )
    if check:
        validate(tree)
    return tree


def validate(tree: BrauerTree) -> None:
    """Raise if `tree` is not a planar tree with a total edge labelling."""
    vs = set(tree.vertices)
    if len(vs) != len(tree.vertices):
        raise InconsistentCyclicOrder("duplicate vertex ids")
    for e, (a, b) in tree.ends.items():
        if a not in vs or b not in vs:
            raise InconsistentCyclicOrder(f"edge {e} has an unknown end")
        if a == b:
            raise CycleDetected(f"edge {e} is a loop at vertex {a!r}")
    if set(tree.cyclic) != vs:
        missing = vs.symmetric_difference(tree.cyclic)
        raise InconsistentCyclicOrder(f"cyclic order missing or extra for vertices {sorted(map(str, missing))}")
    for v in tree.vertices:
        order = tree.cyclic[v]
        incident = sorted(e for e, ab in tree.ends.items() if v in ab)
        if sorted(order) != incident:
            bad = sorted(set(order).symmetric_difference(incident)) or list(order)
            raise InconsistentCyclicOrder(f"cyclic order at vertex {v!r} does not list its incident edges (edge {bad[0]})")

    # connectivity and acyclicity via union-find
    parent = {v: v for v in vs}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in sorted(tree.ends):
        a, b = tree.ends[e]
        ra, rb = find(a), find(b)
        if ra == rb:
            raise CycleDetected(f"edge {e} closes a cycle")
        parent[ra] = rb
    roots = {find(v) for v in vs}
    if len(roots) > 1:
        lonely = sorted((v for v in vs if find(v) != find(tree.vertices[0])), key=str)
        raise Disconnected(f"vertex {lonely[0]!r} is not connected to {tree.vertices[0]!r}")

    labs = sorted(tree.labels.values())
    if sorted(tree.labels) != sorted(tree.ends) or labs != list(range(1, len(labs) + 1)):
        raise UnknownLabel("labelling is not a bijection onto 1..n")


# -- cyclic order combinatorics ----------------------------------------------


def successor(tree: BrauerTree, vertex: Vertex, edge: int) -> int:
    order = tree.cyclic.get(vertex, ())
    if edge not in order:
        raise NotIncident(f"edge {edge} is not incident to vertex {vertex!r}")
    k = order.index(edge)
    return order[(k + 1) % len(order)]


def predecessor(tree: BrauerTree, vertex: Vertex, edge: int) -> int:
    order = tree.cyclic.get(vertex, ())
    if edge not in order:
        raise NotIncident(f"edge {edge} is not incident to vertex {vertex!r}")
    k = order.index(edge)
    return order[(k - 1) % len(order)]


def _check_label(tree: BrauerTree, label: int) -> int:
    if label not in tree.labels.values():
        raise UnknownLabel(f"label {label} not in 1..{tree.n}")
    return tree.edge_of(label)


def ext_dim(tree: BrauerTree, i: int, j: int) -> int:
    """Dimension of Ext^1(S_i, S_j) for labels i, j.

    Counts shared vertices of valence at least two at which j follows i.
    The one-edge tree is the local algebra k[x]/x^2, whose simple has a
    one-dimensional self-extension.
    """
    ei, ej = _check_label(tree, i), _check_label(tree, j)
    if tree.n == 1:
        return 1
    count = 0
    for v in tree.shared_vertices(ei, ej):
        if tree.valence(v) >= 2 and successor(tree, v, ei) == ej and ei != ej:
            count += 1
    return count


def uniserial(tree: BrauerTree, edge: int, vertex: Vertex) -> List[int]:
    """Composition factors (edges) of the uniserial summand of rad P/soc P at
    `vertex`, listed from top to socle."""
    order = tree.cyclic[vertex]
    k = order.index(edge)
    return [order[(k + s) % len(order)] for s in range(1, len(order))]


def cartan_matrix(tree: BrauerTree) -> List[List[int]]:
    """Cartan matrix indexed by labels: 2 on the diagonal, 1 for adjacent edges."""
    n = tree.n
    lab = tree.label_map()
    c = [[0] * n for _ in range(n)]
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i == j:
                c[i - 1][j - 1] = 2
            elif tree.shared_vertices(lab[i], lab[j]):
                c[i - 1][j - 1] = 1
    return c


# -- mutation -------------------------------------------------------------------


def _neighbours(tree: BrauerTree, v: Vertex) -> List[Vertex]:
    return [tree.other_end(e, v) for e in tree.cyclic[v]]


def _edge_between(tree: BrauerTree, u: Vertex, w: Vertex) -> int:
    for e in tree.cyclic[u]:
        if tree.other_end(e, u) == w:
            return e
    raise NotIncident(f"no edge between {u!r} and {w!r}")


def _new_end(tree: BrauerTree, x: Vertex, y: Vertex, moving: frozenset) -> Vertex:
    # Walk around x starting from y; the first neighbour joined by a fixed
    # edge receives this end of the moving edge.
    nbrs = _neighbours(tree, x)
    k = nbrs.index(y)
    for s in range(len(nbrs)):
        u = nbrs[(k + s) % len(nbrs)]
        if _edge_between(tree, x, u) not in moving:
            return u
    return x


def _new_order(tree: BrauerTree, x: Vertex, moving: frozenset) -> Tuple[int, ...]:
    order = tree.cyclic[x]
    fixed = [e for e in order if e not in moving]
    if not fixed:
        return tuple(order)
    start = order.index(fixed[0])
    rotated = order[start:] + order[:start]
    out: List[int] = []
    for e in rotated:
        if e in moving:
            continue
        out.append(e)
        y = tree.other_end(e, x)
        ny = tree.cyclic[y]
        k = ny.index(e)
        # moving edges just before {x, y} at y land on x; they follow the
        # fixed edge farthest first
        block = []
        for s in range(1, len(ny)):
            f = ny[(k - s) % len(ny)]
            if f not in moving:
                break
            block.append(f)
        out.extend(reversed(block))
    return tuple(out)


def mutate(tree: BrauerTree, labels: Iterable[int]):
    """Tree of the tilted heart at the simples with the given labels.

    Returns (tree', labelling', vertex bijection).  Ids are preserved, so the
    labelling is unchanged and the bijection is the identity.
    """
    labels = set(labels)
    for lab in labels:
        _check_label(tree, lab)
    moving = frozenset(tree.edge_of(lab) for lab in labels)
    new_ends = {}
    for e, (x, y) in tree.ends.items():
        if e in moving:
            new_ends[e] = (_new_end(tree, x, y, moving), _new_end(tree, y, x, moving))
        else:
            new_ends[e] = (x, y)
    new_cyclic = {v: _rot(_new_order(tree, v, moving)) for v in tree.vertices}
    new = BrauerTree(tree.vertices, new_ends, new_cyclic, dict(tree.labels))
    validate(new)
    return new, dict(new.label_map()), {v: v for v in tree.vertices}


def mutate_tree(tree: BrauerTree, labels: Iterable[int]) -> BrauerTree:
    return mutate(tree, labels)[0]


def mirror(tree: BrauerTree) -> BrauerTree:
    """Reverse every cyclic order (the tree of the opposite algebra)."""
    return BrauerTree(
        tree.vertices,
        dict(tree.ends),
        {v: _rot(reversed(es)) for v, es in tree.cyclic.items()},
        dict(tree.labels),
    )


def comutate_tree(tree: BrauerTree, labels: Iterable[int]) -> BrauerTree:
    """Tree of the right tilt at the given simples; inverse of `mutate_tree`."""
    return mirror(mutate_tree(mirror(tree), labels))


def relabel_tree(tree: BrauerTree, perm: Mapping[int, int]) -> BrauerTree:
    """Send label i to perm[i]."""
    return BrauerTree(
        tree.vertices,
        dict(tree.ends),
        dict(tree.cyclic),
        {e: perm[lab] for e, lab in tree.labels.items()},
    )


# -- canonical forms ------------------------------------------------------------


def centroids(tree: BrauerTree) -> List[Vertex]:
    nv = len(tree.vertices)
    if nv == 1:
        return [tree.vertices[0]]
    root = tree.vertices[0]
    parent = {root: None}
    orderv = [root]
    dq = deque([root])
    while dq:
        v = dq.popleft()
        for u in _neighbours(tree, v):
            if u not in parent:
                parent[u] = v
                orderv.append(u)
                dq.append(u)
    size = {v: 1 for v in tree.vertices}
    for v in reversed(orderv):
        if parent[v] is not None:
            size[parent[v]] += size[v]
    best, out = None, []
    for v in tree.vertices:
        worst = nv - size[v]
        for u in _neighbours(tree, v):
            if parent.get(u) == v:
                worst = max(worst, size[u])
        if best is None or worst < best:
            best, out = worst, [v]
        elif worst == best:
            out.append(v)
    return out


def _encode(tree: BrauerTree, v: Vertex, start: int, parent_edge, labelled: bool) -> str:
    order = tree.cyclic[v]
    k = order.index(start)
    items = []
    for s in range(len(order)):
        e = order[(k + s) % len(order)]
        if e == parent_edge:
            continue
        u = tree.other_end(e, v)
        tag = str(tree.labels[e]) if labelled else ""
        items.append(tag + _encode(tree, u, e, e, labelled))
    return "(" + ",".join(items) + ")"


def canonical_key(tree: BrauerTree, labelled: bool = True) -> bytes:
    """Invariant of the planar tree, optionally keeping edge labels.

    Rooted at the centroid(s); the minimum over starting edges is taken.
    Reflections are not identified.
    """
    if tree.n == 0:
        return b"()"
    candidates = []
    for c in centroids(tree):
        for e in tree.cyclic[c]:
            candidates.append(_encode(tree, c, e, None, labelled))
    return min(candidates).encode()


def is_isomorphic(a: BrauerTree, b: BrauerTree, mode: str = "labelled") -> bool:
    if mode not in ("labelled", "abstract"):
        raise ValueError(f"unknown mode {mode!r}")
    lab = mode == "labelled"
    return canonical_key(a, lab) == canonical_key(b, lab)


def bipartite_signs(tree: BrauerTree, anchor: Vertex, anchor_sign: int = -1) -> Dict[Vertex, int]:
    if anchor_sign not in (1, -1):
        raise ValueError("anchor_sign must be +1 or -1")
    signs = {anchor: anchor_sign}
    dq = deque([anchor])
    while dq:
        v = dq.popleft()
        for u in _neighbours(tree, v):
            if u not in signs:
                signs[u] = -signs[v]
                dq.append(u)
    return signs


# -- standard trees ------------------------------------------------------------


def line(n: int) -> BrauerTree:
    """The line T_n: vertices 0..n, edge i joins i-1 and i, labelled i."""
    ends = {i: (i - 1, i) for i in range(1, n + 1)}
    cyclic = {0: (1,)} if n else {0: ()}
    for v in range(1, n):
        cyclic[v] = (v, v + 1)
    if n:
        cyclic[n] = (n,)
    return make_tree(ends, cyclic, vertices=range(n + 1))


def star(n: int, order: Sequence[int] | None = None) -> BrauerTree:
    """Star with centre 0 and leaves 1..n; edge i ends at leaf i."""
    order = tuple(order) if order is not None else tuple(range(1, n + 1))
    ends = {i: (0, i) for i in range(1, n + 1)}
    cyclic = {0: order}
    for i in range(1, n + 1):
        cyclic[i] = (i,)
    return make_tree(ends, cyclic, vertices=range(n + 1))


def random_tree(n: int, rng) -> BrauerTree:
    """Uniform-ish random planar tree on n edges with a random labelling."""
    ends = {}
    for v in range(1, n + 1):
        ends[v] = (rng.randrange(v), v)
    incident: Dict[int, List[int]] = {v: [] for v in range(n + 1)}
    for e, (a, b) in ends.items():
        incident[a].append(e)
        incident[b].append(e)
    cyclic = {}
    for v, es in incident.items():
        es = list(es)
        rng.shuffle(es)
        cyclic[v] = tuple(es)
    labs = list(range(1, n + 1))
    rng.shuffle(labs)
    return make_tree(ends, cyclic, labels=dict(zip(range(1, n + 1), labs)), vertices=range(n + 1))


def all_planar_trees(n: int) -> List[BrauerTree]:
    """Every labelled planar tree on n edges up to isomorphism (small n only)."""
    from itertools import permutations, product

    seen = {}
    # Pruefer-free brute force: parent arrays on vertices 1..n.
    for parents in product(*[range(v) for v in range(1, n + 1)]):
        ends = {v: (parents[v - 1], v) for v in range(1, n + 1)}
        incident: Dict[int, List[int]] = {v: [] for v in range(n + 1)}
        for e, (a, b) in ends.items():
            incident[a].append(e)
            incident[b].append(e)
        per_vertex = []
        for v in range(n + 1):
            es = incident[v]
            if len(es) <= 2:
                per_vertex.append([tuple(es)])
            else:
                first = es[0]
                per_vertex.append([(first,) + p for p in permutations(es[1:])])
        for choice in product(*per_vertex):
            cyclic = {v: choice[v] for v in range(n + 1)}
            t = make_tree(ends, cyclic, vertices=range(n + 1), check=False)
            seen.setdefault(canonical_key(t, labelled=False), t)
    return [seen[k] for k in sorted(seen)]


# -- JSON ---------------------------------------------------------------------


def tree_to_dict(tree: BrauerTree) -> dict:
    return {
        "vertices": list(tree.vertices),
        "edges": [
            {"id": e, "label": tree.labels[e], "ends": list(tree.ends[e])}
            for e in sorted(tree.ends)
        ],
        "cyclic": {str(v): list(tree.cyclic[v]) for v in tree.vertices},
    }


def tree_from_dict(data: dict) -> BrauerTree:
    try:
        vertices = list(data["vertices"])
        by_str = {str(v): v for v in vertices}
        ends, labels = {}, {}
        for item in data["edges"]:
            e = int(item["id"])
            a, b = item["ends"]
            ends[e] = (by_str.get(str(a), a), by_str.get(str(b), b))
            labels[e] = int(item.get("label", e))
        cyclic = {}
        for key, es in data["cyclic"].items():
            if key not in by_str:
                raise InconsistentCyclicOrder(f"cyclic order given for unknown vertex {key!r}")
            cyclic[by_str[key]] = [int(e) for e in es]
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InconsistentCyclicOrder):
            raise
        raise ParseError(f"malformed tree document: {exc}") from exc
    for v in vertices:
        cyclic.setdefault(v, [])
    return make_tree(ends, cyclic, labels=labels, vertices=vertices)


def dumps(tree: BrauerTree) -> str:
    return json.dumps(tree_to_dict(tree), sort_keys=True)


def loads(text: str) -> BrauerTree:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(str(exc)) from exc
    return tree_from_dict(data)


def describe(tree: BrauerTree) -> str:
    """Short human readable shape name."""
    degs = sorted((tree.valence(v) for v in tree.vertices), reverse=True)
    if degs[0] <= 2:
        return "line"
    if degs[0] == tree.n:
        return "star"
    return "tree" + "".join(str(d) for d in degs if d > 1)


__all__ = [
    "BrauerTree",
    "make_tree",
    "validate",
    "successor",
    "predecessor",
    "ext_dim",
    "uniserial",
    "cartan_matrix",
    "mutate",
    "mutate_tree",
    "comutate_tree",
    "mirror",
    "relabel_tree",
    "canonical_key",
    "is_isomorphic",
    "bipartite_signs",
    "centroids",
    "line",
    "star",
    "random_tree",
    "all_planar_trees",
    "tree_to_dict",
    "tree_from_dict",
    "dumps",
    "loads",
    "describe",
]
