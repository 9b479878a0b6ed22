"""Ordered hearts as states, tilts with exact K0 bookkeeping.

A state records the Morita tree of the heart, the labelling of its simples
(carried by the tree) and the K0 class of every labelled simple, written in
the basis of standard simples.  Two states are considered equal when their
labelled planar trees are isomorphic and their class tuples agree; this
cannot tell a heart from its even shifts, nor from hearts differing by a
pure braid.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

from . import trees as tc
from .errors import InternalTreeMismatch, ParseError, UnknownLabel
from .trees import BrauerTree

Vector = Tuple[int, ...]
Perm = Tuple[int, ...]  # perm[i-1] = image of i


# -- permutations -------------------------------------------------------------


def identity_perm(n: int) -> Perm:
    return tuple(range(1, n + 1))


def perm_from_cycles(text: str, n: int) -> Perm:
    """Parse cycle notation such as "(123)", "(1 3)(2 4)" or "id"."""
    img = list(range(1, n + 1))
    text = text.strip()
    if text in ("", "id", "()"):
        return tuple(img)
    cycles = re.findall(r"\(([^()]*)\)", text)
    if not cycles or re.sub(r"\([^()]*\)", "", text).strip():
        raise ParseError(f"bad permutation {text!r}")
    for cyc in cycles:
        parts = cyc.replace(",", " ").split()
        if len(parts) == 1 and len(parts[0]) > 1:
            parts = list(parts[0])
        pts = [int(p) for p in parts]
        if any(p < 1 or p > n for p in pts) or len(set(pts)) != len(pts):
            raise ParseError(f"bad cycle {cyc!r} for n={n}")
        for a, b in zip(pts, pts[1:] + pts[:1]):
            img[a - 1] = b
    if sorted(img) != list(range(1, n + 1)):
        raise ParseError(f"cycles {text!r} overlap")
    return tuple(img)


def perm_to_cycles(p: Perm) -> str:
    seen, out = set(), []
    for start in range(1, len(p) + 1):
        if start in seen or p[start - 1] == start:
            continue
        cyc, x = [], start
        while x not in seen:
            seen.add(x)
            cyc.append(x)
            x = p[x - 1]
        out.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(out) or "id"


def perm_compose(p: Perm, q: Perm) -> Perm:
    """p after q."""
    return tuple(p[q[i] - 1] for i in range(len(q)))


def perm_inverse(p: Perm) -> Perm:
    inv = [0] * len(p)
    for i, pi in enumerate(p, start=1):
        inv[pi - 1] = i
    return tuple(inv)


def perm_from_pairs(*pairs: Tuple[int, int], n: int) -> Perm:
    img = list(range(1, n + 1))
    for a, b in pairs:
        img[a - 1], img[b - 1] = b, a
    return tuple(img)


# -- tilt words ---------------------------------------------------------------


@dataclass(frozen=True)
class Left:
    label: int

    def __str__(self):
        return f"L{self.label}"


@dataclass(frozen=True)
class Right:
    label: int

    def __str__(self):
        return f"R{self.label}"


@dataclass(frozen=True)
class Multi:
    labels: FrozenSet[int]
    direction: int = 1

    def __str__(self):
        body = "M{" + ",".join(map(str, sorted(self.labels))) + "}"
        return body if self.direction > 0 else body + "^-1"


@dataclass(frozen=True)
class Shift:
    k: int

    def __str__(self):
        return f"S{self.k}"


@dataclass(frozen=True)
class Permute:
    """Relabel by a permutation: label i becomes perm[i-1]."""

    perm: Perm

    def __str__(self):
        return "P" + perm_to_cycles(self.perm).replace(" ", ",")


Step = Union[Left, Right, Multi, Shift, Permute]

_STEP_RE = re.compile(
    r"^(?:(?P<lr>[LR])(?P<lab>\d+)|M\{(?P<set>[\d,\s]*)\}(?P<inv>\^-1)?|S(?P<shift>[+-]?\d+)|P(?P<perm>(?:\([\d,]*\))+|id))$"
)


def parse_word(text: str, n: Optional[int] = None) -> Tuple[Step, ...]:
    """Parse `L1 L2 L1`, `R3`, `M{1,3}`, `M{1,3}^-1`, `S-1`, `P(1,2,3)`.

    Steps are executed left to right.
    """
    # split on whitespace outside braces
    tokens, buf, depth = [], "", 0
    for ch in text.strip():
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
        if ch.isspace() and depth == 0:
            if buf:
                tokens.append(buf)
            buf = ""
        else:
            buf += ch
    if buf:
        tokens.append(buf)
    steps: List[Step] = []
    for tok in tokens:
        m = _STEP_RE.match(tok)
        if not m:
            raise ParseError(f"cannot parse tilt step {tok!r}")
        if m.group("lr"):
            lab = int(m.group("lab"))
            steps.append(Left(lab) if m.group("lr") == "L" else Right(lab))
        elif m.group("set") is not None:
            body = m.group("set").replace(" ", "")
            labs = frozenset(int(x) for x in body.split(",") if x)
            steps.append(Multi(labs, -1 if m.group("inv") else 1))
        elif m.group("shift") is not None:
            steps.append(Shift(int(m.group("shift"))))
        else:
            if n is None:
                raise ParseError("a permutation step needs the number of labels")
            steps.append(Permute(perm_from_cycles(m.group("perm").replace(",", " "), n)))
    if n is not None:
        for s in steps:
            labs = []
            if isinstance(s, (Left, Right)):
                labs = [s.label]
            elif isinstance(s, Multi):
                labs = list(s.labels)
            for lab in labs:
                if not 1 <= lab <= n:
                    raise UnknownLabel(f"label {lab} not in 1..{n}")
    return tuple(steps)


def format_word(word: Iterable[Step]) -> str:
    return " ".join(str(s) for s in word)


def composition_word(text: str) -> Tuple[Step, ...]:
    """Read a composition written with the rightmost factor applied first,
    e.g. "L1 L3 L1 L2 L3" runs L3 first."""
    return tuple(reversed(parse_word(text)))


# -- states -------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class HeartState:
    tree: BrauerTree
    classes: Tuple[Vector, ...]  # classes[i-1] is the class of simple i
    history: Tuple[Step, ...] = field(default=())

    @property
    def n(self) -> int:
        return len(self.classes)

    def cls(self, label: int) -> Vector:
        return self.classes[label - 1]

    @property
    def key(self):
        return (tc.canonical_key(self.tree, labelled=True), self.classes)

    def __eq__(self, other):
        if not isinstance(other, HeartState):
            return NotImplemented
        return self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def with_history(self, history) -> "HeartState":
        return HeartState(self.tree, self.classes, tuple(history))


def _unit(n: int, i: int) -> Vector:
    return tuple(1 if k == i else 0 for k in range(1, n + 1))


def _add(u: Vector, v: Vector, c: int = 1) -> Vector:
    return tuple(a + c * b for a, b in zip(u, v))


def _neg(u: Vector) -> Vector:
    return tuple(-a for a in u)


def standard_heart(tree: BrauerTree) -> HeartState:
    tc.validate(tree)
    n = tree.n
    return HeartState(tree, tuple(_unit(n, i) for i in range(1, n + 1)))


def standard_line(n: int) -> HeartState:
    return standard_heart(tc.line(n))


def _check_labels(state: HeartState, labels: Iterable[int]) -> None:
    for lab in labels:
        if not isinstance(lab, int) or not 1 <= lab <= state.n:
            raise UnknownLabel(f"label {lab} not in 1..{state.n}")


def left_tilt_simple(state: HeartState, i: int) -> HeartState:
    _check_labels(state, [i])
    t = state.tree
    ci = state.cls(i)
    new = []
    for j in range(1, state.n + 1):
        if j == i:
            new.append(_neg(ci))
        else:
            new.append(_add(state.cls(j), ci, tc.ext_dim(t, i, j)))
    return HeartState(tc.mutate_tree(t, [i]), tuple(new), state.history + (Left(i),))


def right_tilt_simple(state: HeartState, i: int) -> HeartState:
    _check_labels(state, [i])
    t = state.tree
    ci = state.cls(i)
    new = []
    for j in range(1, state.n + 1):
        if j == i:
            new.append(_neg(ci))
        else:
            new.append(_add(state.cls(j), ci, tc.ext_dim(t, j, i)))
    return HeartState(tc.comutate_tree(t, [i]), tuple(new), state.history + (Right(i),))


def _segment(tree: BrauerTree, edge: int, vertex, moving, towards_socle: bool) -> List[int]:
    # consecutive factors of the uniserial at `vertex` lying in `moving`,
    # read from the socle end (left tilts) or from the top end (right tilts)
    factors = tc.uniserial(tree, edge, vertex)
    if towards_socle:
        factors = factors[::-1]
    out = []
    for f in factors:
        if f not in moving:
            break
        out.append(f)
    return out


def _tilt_multi_classes(state: HeartState, labels, towards_socle: bool) -> Tuple[Vector, ...]:
    t = state.tree
    moving = {t.edge_of(lab) for lab in labels}
    new = []
    for j in range(1, state.n + 1):
        if j in labels:
            new.append(_neg(state.cls(j)))
            continue
        e = t.edge_of(j)
        c = state.cls(j)
        for v in t.ends[e]:
            for f in _segment(t, e, v, moving, towards_socle):
                c = _add(c, state.cls(t.label_of(f)))
        new.append(c)
    return tuple(new)


def left_tilt_multi_direct(state: HeartState, labels: Iterable[int]) -> HeartState:
    """Left tilt at the torsion class generated by several simples.

    A simple S outside the set is replaced by the largest submodule of its
    projective cover containing the socle whose remaining factors all lie in
    the set; simples in the set are shifted by [-1].
    """
    labels = frozenset(labels)
    _check_labels(state, labels)
    classes = _tilt_multi_classes(state, labels, towards_socle=True)
    return HeartState(tc.mutate_tree(state.tree, labels), classes, state.history + (Multi(labels, 1),))


def right_tilt_multi(state: HeartState, labels: Iterable[int]) -> HeartState:
    labels = frozenset(labels)
    _check_labels(state, labels)
    classes = _tilt_multi_classes(state, labels, towards_socle=False)
    return HeartState(tc.comutate_tree(state.tree, labels), classes, state.history + (Multi(labels, -1),))


def shift(state: HeartState, k: int) -> HeartState:
    if k % 2 == 0:
        classes = state.classes
    else:
        classes = tuple(_neg(c) for c in state.classes)
    return HeartState(state.tree, classes, state.history + (Shift(k),))


def relabel(state: HeartState, perm: Perm) -> HeartState:
    """The relabelled state whose simple perm[i] is the old simple i."""
    perm = tuple(perm)
    if sorted(perm) != list(range(1, state.n + 1)):
        raise UnknownLabel(f"{perm} is not a permutation of 1..{state.n}")
    classes = [None] * state.n
    for i, pi in enumerate(perm, start=1):
        classes[pi - 1] = state.cls(i)
    mapping = {i: pi for i, pi in enumerate(perm, start=1)}
    return HeartState(tc.relabel_tree(state.tree, mapping), tuple(classes), state.history + (Permute(perm),))


def apply_step(state: HeartState, step: Step) -> HeartState:
    if isinstance(step, Left):
        return left_tilt_simple(state, step.label)
    if isinstance(step, Right):
        return right_tilt_simple(state, step.label)
    if isinstance(step, Multi):
        if step.direction > 0:
            return left_tilt_multi(state, step.labels)
        return right_tilt_multi(state, step.labels)
    if isinstance(step, Shift):
        return shift(state, step.k)
    if isinstance(step, Permute):
        return relabel(state, step.perm)
    raise TypeError(f"not a tilt step: {step!r}")


def apply_word(state: HeartState, word: Union[str, Iterable[Step]]) -> HeartState:
    if isinstance(word, str):
        word = parse_word(word, state.n)
    for step in word:
        state = apply_step(state, step)
    return state


def states_equal_up_to_relabel(a: HeartState, b: HeartState) -> Optional[Perm]:
    """The permutation s with a.cls(s(i)) == b.cls(i) and compatible trees,
    or None.  Equivalently a == relabel(b, s)."""
    if a.n != b.n:
        return None
    where = {c: k for k, c in enumerate(a.classes, start=1)}
    if len(where) != a.n:
        return None
    perm = []
    for c in b.classes:
        if c not in where:
            return None
        perm.append(where[c])
    perm = tuple(perm)
    if sorted(perm) != list(range(1, a.n + 1)):
        return None
    if relabel(b, perm).key != a.key:
        return None
    return perm


def determinant(state: HeartState) -> int:
    from sympy import Matrix

    return int(Matrix([list(c) for c in state.classes]).det())


# -- decomposition into simple tilts -------------------------------------------


@dataclass(frozen=True)
class Decomposition:
    """L_I(H) == relabel(apply_word(shift(H, shift), word), sigma)."""

    word: Tuple[Step, ...]
    sigma: Perm
    shift: int

    def apply(self, state: HeartState) -> HeartState:
        out = apply_word(shift(state, self.shift), self.word)
        return relabel(out, self.sigma)


def _ordered_on_star(tree: BrauerTree, v, edges: Sequence[int]) -> List[int]:
    order = tree.cyclic[v]
    return [e for e in order if e in edges]


def _flip(step: Step) -> Step:
    if isinstance(step, Left):
        return Right(step.label)
    if isinstance(step, Right):
        return Left(step.label)
    if isinstance(step, Multi):
        return Multi(step.labels, -step.direction)
    if isinstance(step, Shift):
        return Shift(-step.k)
    return step


def _mirror_state(state: HeartState) -> HeartState:
    return HeartState(tc.mirror(state.tree), state.classes)


class _Expander:
    """Rewrites multi tilts into simple tilts, a shift and a relabelling.

    Works on a running state so that every intermediate tilt is expanded on
    the heart where it is actually applied.  Relabellings are pushed to the
    end: tilting a relabelled state at label x equals relabelling the tilt at
    the preimage of x.
    """

    def __init__(self, state: HeartState):
        self.state = state  # current state, without the pending relabelling
        self.steps: List[Step] = []
        self.shift = 0
        self.sigma = identity_perm(state.n)  # pending relabelling

    # label seen by the caller -> label in self.state
    def _pre(self, lab: int) -> int:
        return perm_inverse(self.sigma)[lab - 1]

    def simple(self, lab: int, direction: int) -> None:
        lab = self._pre(lab)
        step = Left(lab) if direction > 0 else Right(lab)
        self.steps.append(step)
        self.state = apply_step(self.state, step)

    def do_shift(self, k: int) -> None:
        self.shift += k
        self.state = shift(self.state, k)

    def relabel(self, perm: Perm) -> None:
        self.sigma = perm_compose(perm, self.sigma)

    def multi(self, labels: Iterable[int], direction: int) -> None:
        labels = frozenset(self._pre(lab) for lab in labels)
        # from here on work in the unrelabelled frame
        saved = self.sigma
        self.sigma = identity_perm(self.state.n)
        if direction > 0:
            _expand_left(self, self.state, labels)
        else:
            _expand_right(self, labels)
        self.sigma = perm_compose(saved, self.sigma)


def _expand_right(ex: _Expander, labels: FrozenSet[int]) -> None:
    # A right tilt is a left tilt for the opposite algebra, which has the
    # mirrored tree and the same classes; shifts change sign.
    sub = _Expander(_mirror_state(ex.state))
    _expand_left(sub, sub.state, labels)
    for st in sub.steps:
        flipped = _flip(st)
        ex.steps.append(flipped)
        ex.state = apply_step(ex.state, flipped)
    # in the opposite frame shifts came first; the sign flips
    ex.state = shift(ex.state, -sub.shift)
    ex.shift -= sub.shift
    ex.relabel(sub.sigma)


def _expand_left(ex: _Expander, state: HeartState, K: FrozenSet[int]) -> None:
    n = state.n
    t = state.tree
    if not K:
        return
    if len(K) == 1:
        (k,) = K
        ex.simple(k, 1)
        return
    if len(K) == n:
        ex.do_shift(-1)
        return
    edges = {lab: t.edge_of(lab) for lab in K}
    common = set(t.ends[edges[min(K)]])
    for lab in K:
        common &= set(t.ends[edges[lab]])
    if not common:
        # two members of K share no vertex: split them apart
        first, last = _far_pair(t, K)
        I = K - {last}
        J = K - {first}
        _split(ex, I, J)
        return
    (s,) = common if len(common) == 1 else (sorted(common, key=str)[0],)
    star_edges = t.cyclic[s]
    ordered = _ordered_on_star(t, s, [edges[lab] for lab in K])
    if len(ordered) < len(star_edges):
        # rotate so that a gap edge sits between the last and the first
        k = len(ordered)
        pos = {e: star_edges.index(e) for e in ordered}
        for r in range(k):
            seq = ordered[r:] + ordered[:r]
            nxt = seq[-1]
            after = star_edges[(pos[nxt] + 1) % len(star_edges)]
            if after not in ordered:
                ordered = seq
                break
        labs = [t.label_of(e) for e in ordered]
        I = frozenset(labs[:-1])
        J = frozenset(labs[1:])
        _split(ex, I, J)
        return
    # K is the whole star at s (and not everything)
    labs = [t.label_of(e) for e in ordered]
    I = frozenset(labs[:-1])
    J = frozenset(labs[1:])
    _split_full_star(ex, state, I, J)


def _far_pair(t: BrauerTree, K) -> Tuple[int, int]:
    for a, b in combinations(sorted(K), 2):
        if not t.shared_vertices(t.edge_of(a), t.edge_of(b)):
            return a, b
    raise AssertionError("no disjoint pair")


def _split(ex: _Expander, I, J) -> None:
    # When I - J and J - I are separated (no shared vertex, or a gap edge
    # outside I | J): tilting at J then I equals tilting at I & J then at
    # K = I | J, and the nested tilts commute, so L_K = R_{I & J} L_I L_J.
    ex.multi(J, 1)
    ex.multi(I, 1)
    ex.multi(I & J, -1)


def _split_full_star(ex: _Expander, state: HeartState, I, J) -> None:
    # J, I, J in turn equals (a b) applied to L_K L_{I & J}^2, where a, b
    # are the two end edges of the star
    ex.multi(J, 1)
    ex.multi(I, 1)
    ex.multi(J, 1)
    C = I & J
    ex.multi(C, -1)
    ex.multi(C, -1)
    (a,) = I - J
    (b,) = J - I
    ex.relabel(perm_from_pairs((a, b), n=state.n))


def decompose_multi(state: HeartState, labels: Iterable[int]) -> Decomposition:
    labels = frozenset(labels)
    _check_labels(state, labels)
    ex = _Expander(HeartState(state.tree, state.classes))
    ex.multi(labels, 1)
    # shifts commute with tilts, so move them to the front
    return Decomposition(tuple(ex.steps), ex.sigma, ex.shift)


def left_tilt_multi(state: HeartState, labels: Iterable[int], check: bool = True) -> HeartState:
    labels = frozenset(labels)
    direct = left_tilt_multi_direct(state, labels)
    if check:
        dec = decompose_multi(state, labels)
        via = dec.apply(HeartState(state.tree, state.classes))
        if via.key[0] != direct.key[0]:
            raise InternalTreeMismatch(
                f"tilt word {format_word(dec.word)} for {sorted(labels)} gives a tree different from direct mutation"
            )
        if via.classes != direct.classes:
            raise InternalTreeMismatch(
                f"tilt word {format_word(dec.word)} for {sorted(labels)} gives classes {via.classes}, expected {direct.classes}"
            )
    return direct


# -- relation families ---------------------------------------------------------


def edges_between(tree: BrauerTree, a: int, b: int) -> List[int]:
    """Edges met strictly after edge a and before edge b going round a
    vertex shared by a and b."""
    out = []
    for v in tree.shared_vertices(a, b):
        k = tc.successor(tree, v, a)
        while k not in (a, b):
            out.append(k)
            k = tc.successor(tree, v, k)
    return out


def separated_hypothesis(tree: BrauerTree, I: FrozenSet[int], J: FrozenSet[int]) -> bool:
    """Every i in I - J and j in J - I sharing a vertex have some edge outside
    I | J lying after j and before i around that vertex."""
    for i in I - J:
        for j in J - I:
            ei, ej = tree.edge_of(i), tree.edge_of(j)
            if not tree.shared_vertices(ei, ej):
                continue
            gap = [k for k in edges_between(tree, ej, ei) if tree.label_of(k) not in I | J]
            if not gap:
                return False
    return True


def swap_involutions(tree: BrauerTree, I: FrozenSet[int], J: FrozenSet[int]) -> List[Perm]:
    """Involutions exchanging I - J with J - I and fixing everything else,
    where each i is adjacent to its partner s(i) with nothing in between
    going from s(i) to i, and distinct pairs share no vertex."""
    A, B = sorted(I - J), sorted(J - I)
    n = tree.n
    if len(A) != len(B):
        return []
    out = []
    for image in permutations(B):
        pairs = list(zip(A, image))
        ok = True
        for i, si in pairs:
            ei, es = tree.edge_of(i), tree.edge_of(si)
            if not tree.shared_vertices(ei, es) or edges_between(tree, es, ei):
                ok = False
                break
        if ok:
            for (a, b), (c, d) in combinations(pairs, 2):
                if any(tree.shared_vertices(tree.edge_of(x), tree.edge_of(y)) for x in (a, b) for y in (c, d)):
                    ok = False
                    break
        if ok:
            out.append(perm_from_pairs(*pairs, n=n))
    return out


def check_prop_relations(state: HeartState, I: Iterable[int], J: Iterable[int]) -> dict:
    """Evaluate both relation families for the pair (I, J) on the state.

    Separated family: tilting at J and then at I agrees with tilting at
    I & J and then at I | J.  Swap family: J, I, J in turn agrees with
    I & J twice and then I | J, up to the swap involution s.
    """
    I, J = frozenset(I), frozenset(J)
    _check_labels(state, I | J)
    base = HeartState(state.tree, state.classes)
    C, U = I & J, I | J
    report = {"I": sorted(I), "J": sorted(J)}

    held = separated_hypothesis(state.tree, I, J)
    sep = {"hypothesis_held": held, "identity_verified": None}
    if held:
        lhs = left_tilt_multi(left_tilt_multi(base, J), I)
        rhs = left_tilt_multi(left_tilt_multi(base, C), U)
        sep["identity_verified"] = lhs == rhs
    report["separated"] = sep

    sigmas = swap_involutions(state.tree, I, J)
    swap = {"hypothesis_held": bool(sigmas), "identity_verified": None, "sigma": [], "sigma_found": None}
    if sigmas:
        lhs = left_tilt_multi(left_tilt_multi(left_tilt_multi(base, J), I), J)
        rhs = left_tilt_multi(left_tilt_multi(left_tilt_multi(base, C), C), U)
        found = states_equal_up_to_relabel(lhs, rhs)
        swap["sigma"] = [perm_to_cycles(s) for s in sigmas]
        swap["sigma_found"] = None if found is None else perm_to_cycles(found)
        swap["identity_verified"] = found is not None and found in sigmas
    report["swap"] = swap
    return report
