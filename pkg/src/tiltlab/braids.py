"""Twists and braids on K0, and the signed incidence (decomposition) maps.

Matrices follow the column convention: column j is the image of the j-th
standard simple class.  They are sympy integer matrices; exactness comes
for free and no floating point is involved anywhere.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from sympy import ImmutableMatrix, Matrix, eye, zeros

from . import hearts as he
from . import trees as tc
from .errors import IndexOutOfRange, InvalidSigns, ParseError
from .trees import BrauerTree


def twist_matrix(n: int, i: int) -> ImmutableMatrix:
    """K0 matrix of the twist at P_i on the line algebra A_n."""
    if not 1 <= i <= n:
        raise IndexOutOfRange(f"twist index {i} not in 1..{n}")
    m = eye(n)
    for k in (i - 1, i, i + 1):
        if 1 <= k <= n:
            m[k - 1, i - 1] = -1
    return ImmutableMatrix(m)


def _tau(n: int) -> ImmutableMatrix:
    m = zeros(n)
    for j in range(n):
        m[n - 1 - j, j] = 1
    return ImmutableMatrix(m)


# -- braid words --------------------------------------------------------------


@dataclass(frozen=True)
class Gen:
    """s_i (index >= 1), z (index 0); power is +1 or -1."""

    index: int
    power: int = 1

    def __str__(self):
        base = "z" if self.index == 0 else f"s{self.index}"
        return base if self.power == 1 else base + "^-1"


@dataclass(frozen=True)
class BraidShift:
    k: int

    def __str__(self):
        return f"[{self.k}]"


BraidStep = Union[Gen, BraidShift]
_BRAID_RE = re.compile(r"^(?:s(?P<i>\d+)|(?P<z>z))(?P<inv>\^-1)?$|^\[(?P<k>[+-]?\d+)\]$")


def parse_braid(text: str, n: Optional[int] = None) -> Tuple[BraidStep, ...]:
    """Parse `s1 s2^-1 s3 z [1]`, executed left to right."""
    out: List[BraidStep] = []
    for tok in text.split():
        m = _BRAID_RE.match(tok)
        if not m:
            raise ParseError(f"cannot parse braid generator {tok!r}")
        if m.group("k") is not None:
            out.append(BraidShift(int(m.group("k"))))
            continue
        power = -1 if m.group("inv") else 1
        out.append(Gen(0 if m.group("z") else int(m.group("i")), power))
    if n is not None:
        for g in out:
            _check_gen(g, n)
    return tuple(out)


def format_braid(word: Sequence[BraidStep]) -> str:
    return " ".join(str(g) for g in word)


def _check_gen(g: BraidStep, n: int) -> None:
    if isinstance(g, BraidShift):
        return
    if g.index == 0:
        if n != 3:
            raise IndexOutOfRange("the generator z only exists for n = 3")
    elif not 1 <= g.index <= n:
        raise IndexOutOfRange(f"generator s{g.index} not in s1..s{n}")


def generator_matrix(n: int, g: BraidStep) -> ImmutableMatrix:
    _check_gen(g, n)
    if isinstance(g, BraidShift):
        return ImmutableMatrix(eye(n) * (-1) ** (g.k % 2))
    if g.index == 0:
        # z acts as [1] composed with the diagram flip
        m = -_tau(n)
    else:
        # s_i acts as the inverse twist; twists are involutions on K0
        m = twist_matrix(n, g.index)
    return ImmutableMatrix(m if g.power == 1 else m.inv())


def braid_word_matrix(n: int, word: Union[str, Sequence[BraidStep]]) -> ImmutableMatrix:
    if isinstance(word, str):
        word = parse_braid(word, n)
    m = eye(n)
    for g in word:
        m = generator_matrix(n, g) * m
    return ImmutableMatrix(m)


def longest_element_word(m: int) -> str:
    """A reduced positive word for the longest element of S_m, in s1..s_{m-1}."""
    gens = []
    for top in range(1, m):
        gens.extend(f"s{k}" for k in range(top, 0, -1))
    return " ".join(gens)


def full_twist_word(n: int) -> str:
    """Positive lift of the longest element of S_{n+1}, squared."""
    w = longest_element_word(n + 1)
    return (w + " " + w).strip()


def braid_presentation_relations(n: int = 3) -> List[Tuple[str, str]]:
    rels = []
    for i in range(1, n):
        rels.append((f"s{i} s{i + 1} s{i}", f"s{i + 1} s{i} s{i + 1}"))
    for i in range(1, n + 1):
        for j in range(i + 2, n + 1):
            rels.append((f"s{i} s{j}", f"s{j} s{i}"))
    if n == 3:
        rels += [
            ("z s1^-1 z", "s3"),
            ("z s2^-1 z", "s2"),
            ("z s3^-1 z", "s1"),
            ("z z z", "s1 s2 s3 s1 s2 s1"),
        ]
    return rels


def check_braid_presentation(n: int = 3) -> List[dict]:
    out = []
    for lhs, rhs in braid_presentation_relations(n):
        ok = braid_word_matrix(n, lhs) == braid_word_matrix(n, rhs)
        out.append({"lhs": lhs, "rhs": rhs, "ok": ok})
    return out


def apply_braid_to_state(state: he.HeartState, word: Union[str, Sequence[BraidStep]]) -> he.HeartState:
    """Transport the classes of a heart by a braid word; the tree and the
    labelling are unchanged since an autoequivalence preserves both."""
    m = braid_word_matrix(state.n, word)
    classes = []
    for c in state.classes:
        v = m * Matrix(c)
        classes.append(tuple(int(x) for x in v))
    return he.HeartState(state.tree, tuple(classes), state.history)


# -- decomposition maps -------------------------------------------------------


@dataclass(frozen=True)
class DecompositionMap:
    """Images of the vertex basis vectors in K0.

    `vertices` fixes the order of the source basis; `images[k]` is the image
    of vertices[k] in the basis of simple classes 1..n.
    """

    vertices: Tuple
    images: Tuple[Tuple[int, ...], ...]

    def matrix(self) -> ImmutableMatrix:
        # n x |V|, columns are images
        return ImmutableMatrix(Matrix([list(v) for v in self.images]).T)

    def __neg__(self):
        return DecompositionMap(self.vertices, tuple(tuple(-x for x in v) for v in self.images))


def decomposition_map_line(n: int) -> DecompositionMap:
    images = []
    for i in range(1, n + 2):
        v = [0] * n
        if i >= 2:
            v[i - 2] = 1
        if i <= n:
            v[i - 1] = 1
        s = (-1) ** (i - 1)
        images.append(tuple(s * x for x in v))
    return DecompositionMap(tuple(range(n + 1)), tuple(images))


def line_signs(n: int) -> Dict[int, int]:
    """Signs on the line giving the standard decomposition map."""
    return {v: (-1) ** v for v in range(n + 1)}


def check_signs(tree: BrauerTree, signs: Mapping) -> None:
    for v in tree.vertices:
        if signs.get(v) not in (1, -1):
            raise InvalidSigns(f"vertex {v!r} has no sign +1/-1")
    for e, (a, b) in tree.ends.items():
        if signs[a] == signs[b]:
            raise InvalidSigns(f"edge {e} joins two vertices of sign {signs[a]}")


def _vertex_order(tree: BrauerTree) -> Tuple:
    return tuple(sorted(tree.vertices, key=lambda v: (str(type(v)), v)))


def decomposition_map_tree(tree: BrauerTree, signs: Mapping) -> DecompositionMap:
    check_signs(tree, signs)
    verts = _vertex_order(tree)
    images = []
    for v in verts:
        vec = [0] * tree.n
        for e in tree.cyclic[v]:
            vec[tree.label_of(e) - 1] += signs[v]
        images.append(tuple(vec))
    return DecompositionMap(verts, tuple(images))


def dual_decomposition(tree: BrauerTree, signs: Mapping, edge_charges: Mapping[int, object]) -> Dict:
    """Vertex v goes to n(v) times the sum of the charges of the edges at v.

    `edge_charges` is keyed by label.  Values only need + and unary -.
    """
    check_signs(tree, signs)
    out = {}
    for v in _vertex_order(tree):
        total = None
        for e in tree.cyclic[v]:
            z = edge_charges[tree.label_of(e)]
            total = z if total is None else total + z
        out[v] = total if signs[v] == 1 else -total
    return out


def dual_decomposition_rank(tree: BrauerTree, signs: Mapping) -> int:
    return decomposition_map_tree(tree, signs).matrix().T.rank()


def check_equivariance(n: int) -> List[dict]:
    """Swapping vertices i, i+1 then decomposing equals decomposing then
    applying the twist at i."""
    d = decomposition_map_line(n).matrix()
    out = []
    for i in range(1, n + 1):
        p = eye(n + 1)
        p[i - 1, i - 1] = p[i, i] = 0
        p[i - 1, i] = p[i, i - 1] = 1
        ok = d * p == twist_matrix(n, i) * d
        out.append({"generator": f"({i} {i + 1})", "twist": i, "ok": bool(ok)})
    return out


def _class_matrix(state: he.HeartState) -> Matrix:
    return Matrix([list(c) for c in state.classes]).T


def _induced_signs(tree: BrauerTree, signs: Mapping, labels) -> Dict:
    # a leaf hanging on a tilted edge changes side; every other vertex keeps
    # its sign
    moving = {tree.edge_of(lab) for lab in labels}
    out = {}
    for v in tree.vertices:
        flip = tree.valence(v) == 1 and tree.cyclic[v][0] in moving
        out[v] = -signs[v] if flip else signs[v]
    return out


def check_intertwining(
    tree: BrauerTree,
    word: Union[str, Sequence[he.Step]],
    signs: Optional[Mapping] = None,
) -> dict:
    """Check d_{G'} = sign * [L] d_G along a word of simple tilts.

    [L] is the K0 map of the composite equivalence, written in the bases of
    simples on either side.  Each simple tilt contributes minus the inverse
    of its class-transport matrix (the equivalence carries the tilted heart
    to the module category one shift away).
    """
    state = he.standard_heart(tree)
    if isinstance(word, str):
        word = he.parse_word(word, state.n)
    if signs is None:
        anchor = _vertex_order(tree)[0]
        signs = tc.bipartite_signs(tree, anchor, 1)
    check_signs(tree, signs)
    n = state.n
    total = eye(n)
    sign = 1
    cur_signs = dict(signs)
    steps_report = []
    for step in word:
        if not isinstance(step, (he.Left, he.Right)):
            raise ParseError("intertwining is checked on simple tilts only")
        before = state
        state = he.apply_step(state, step)
        c_before = _class_matrix(before)
        c_after = _class_matrix(state)
        transport = c_after.inv() * c_before  # old simples in new simple basis
        lmat = -transport
        d_old = decomposition_map_tree(before.tree, cur_signs).matrix()
        new_signs = _induced_signs(before.tree, cur_signs, [step.label])
        try:
            d_new = decomposition_map_tree(state.tree, new_signs).matrix()
        except InvalidSigns:
            return {"ok": False, "sign": None, "steps": steps_report, "reason": f"induced signs invalid after {step}"}
        lhs = lmat * d_old
        if lhs == d_new:
            s = 1
        elif lhs == -d_new:
            s = -1
        else:
            return {"ok": False, "sign": None, "steps": steps_report, "reason": f"no sign works at {step}"}
        steps_report.append({"step": str(step), "sign": s})
        sign *= s
        total = lmat * total
        cur_signs = new_signs
    # composite check on the whole word
    d0 = decomposition_map_tree(tree, signs).matrix()
    d1 = decomposition_map_tree(state.tree, cur_signs).matrix()
    ok = total * d0 == sign * d1
    return {"ok": bool(ok), "sign": sign, "steps": steps_report}


def matrix_rows(m) -> List[List[int]]:
    return [[int(x) for x in m.row(r)] for r in range(m.rows)]
