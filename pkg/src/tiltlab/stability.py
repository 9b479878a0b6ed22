"""Exact central charges, wall-crossing by rotation, and the A_3 image.

Charges are Gaussian rationals.  Every phase question is answered with a
cross product, so nothing here ever computes an angle.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import List, Optional, Sequence, Tuple, Union

from . import braids as br
from . import hearts as he
from . import trees as tc
from .errors import (
    InternalSweepViolation,
    MultiWallRequired,
    NotInH,
    ParseError,
    SimpleChargeInvalid,
    WallStart,
)

Number = Union[int, Fraction]


@dataclass(frozen=True)
class ExactComplex:
    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    def __add__(self, other: "ExactComplex") -> "ExactComplex":
        return ExactComplex(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "ExactComplex") -> "ExactComplex":
        return ExactComplex(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "ExactComplex":
        return ExactComplex(-self.re, -self.im)

    def scale(self, k: Number) -> "ExactComplex":
        return ExactComplex(self.re * k, self.im * k)

    def __mul__(self, other):
        if isinstance(other, ExactComplex):
            return ExactComplex(self.re * other.re - self.im * other.im, self.re * other.im + self.im * other.re)
        return self.scale(other)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __str__(self):
        return format_charge(self)


def _frac_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_charge(z: ExactComplex) -> str:
    if z.im == 0:
        return _frac_str(z.re)
    im = _frac_str(z.im) + "i"
    if z.re == 0:
        return im
    return _frac_str(z.re) + ("" if z.im < 0 else "+") + im


_NUM = r"\d+(?:/\d+)?"
_CHARGE_RE = re.compile(
    rf"^(?:(?P<re>[+-]?{_NUM})(?P<ims>[+-])(?P<im>{_NUM})?\*?i"
    rf"|(?P<re_only>[+-]?{_NUM})"
    rf"|(?P<ims2>[+-]?)(?P<im2>{_NUM})?\*?i)$"
)


def parse_charge(text: str) -> ExactComplex:
    """Parse `-1+1i`, `5/2+1i`, `1i`, `i`, `-3/4`, `2-i`."""
    m = _CHARGE_RE.match(text.strip().replace(" ", ""))
    if not m:
        raise ParseError(f"cannot parse charge {text!r}")
    try:
        return _charge_from_match(m)
    except ZeroDivisionError as exc:
        raise ParseError(f"zero denominator in charge {text!r}") from exc


def _charge_from_match(m) -> ExactComplex:
    if m.group("re_only") is not None:
        return ExactComplex(Fraction(m.group("re_only")), 0)
    if m.group("re") is not None:
        re_part, sign, mag = Fraction(m.group("re")), m.group("ims"), m.group("im")
    else:
        re_part, sign, mag = Fraction(0), m.group("ims2"), m.group("im2")
    im_part = Fraction(mag) if mag else Fraction(1)
    return ExactComplex(re_part, -im_part if sign == "-" else im_part)


def parse_charges(text: str) -> Tuple[ExactComplex, ...]:
    return tuple(parse_charge(t) for t in text.split(","))


def in_H(z: ExactComplex) -> bool:
    """Strict upper half-plane or the negative real ray."""
    return z.im > 0 or (z.im == 0 and z.re < 0)


def _cross(z: ExactComplex, w: ExactComplex) -> Fraction:
    return z.re * w.im - z.im * w.re


def phase_compare(z: ExactComplex, w: ExactComplex) -> int:
    """-1, 0 or 1 as the phase of z is below, equal to or above that of w."""
    for x in (z, w):
        if not in_H(x):
            raise NotInH(f"{x} is not in the upper half-plane")
    c = _cross(z, w)
    return (c < 0) - (c > 0)


def arg_compare(z: ExactComplex, w: ExactComplex) -> int:
    """Compare arguments taken in (-pi, pi]; both must be nonzero."""

    def half(x):
        return 1 if in_H(x) else 0

    hz, hw = half(z), half(w)
    if hz != hw:
        return -1 if hz < hw else 1
    c = _cross(z, w)
    return (c < 0) - (c > 0)


# -- charges on hearts ---------------------------------------------------------


Charge = Tuple[ExactComplex, ...]


def evaluate(charge: Charge, vector: Sequence[int]) -> ExactComplex:
    total = ExactComplex()
    for z, c in zip(charge, vector):
        if c:
            total = total + z.scale(c)
    return total


@dataclass(frozen=True)
class StabilityPoint:
    heart: he.HeartState
    charge: Charge

    def simple_charges(self) -> Tuple[ExactComplex, ...]:
        return tuple(evaluate(self.charge, c) for c in self.heart.classes)


def validate_point(heart: he.HeartState, charge: Sequence[ExactComplex]) -> StabilityPoint:
    charge = tuple(charge)
    if len(charge) != heart.n:
        raise ParseError(f"expected {heart.n} charges, got {len(charge)}")
    for lab, c in enumerate(heart.classes, start=1):
        z = evaluate(charge, c)
        if not in_H(z):
            raise SimpleChargeInvalid(lab, str(z))
    return StabilityPoint(heart, charge)


def tile_membership(heart: he.HeartState, charge: Sequence[ExactComplex]) -> bool:
    try:
        validate_point(heart, charge)
    except SimpleChargeInvalid:
        return False
    return True


def charge_from_simple_values(heart: he.HeartState, values: Sequence[ExactComplex]) -> Charge:
    """The charge on standard simples giving the heart's simples `values`."""
    from sympy import Matrix, Rational

    m = Matrix([list(c) for c in heart.classes])  # row i = class of simple i
    inv = m.inv()
    out = []
    for k in range(heart.n):
        re_, im_ = Fraction(0), Fraction(0)
        for i in range(heart.n):
            coef = inv[k, i]
            coef = Fraction(int(coef.p), int(coef.q)) if isinstance(coef, Rational) else Fraction(int(coef))
            re_ += coef * values[i].re
            im_ += coef * values[i].im
        out.append(ExactComplex(re_, im_))
    return tuple(out)


# -- rotation ------------------------------------------------------------------


@dataclass(frozen=True)
class CrossingEvent:
    labels: Tuple[int, ...]
    classes: Tuple[Tuple[int, ...], ...]

    @property
    def kind(self) -> str:
        return "simple-left-tilt" if len(self.labels) == 1 else "multi-left-tilt"

    def as_dict(self) -> dict:
        return {"kind": self.kind, "labels": list(self.labels), "classes": [list(c) for c in self.classes]}


@dataclass(frozen=True)
class RotationResult:
    events: Tuple[CrossingEvent, ...]
    end: StabilityPoint
    relabelling: he.Perm  # relabel(end heart, this) == start heart shifted by -1

    @property
    def tilt_labels(self) -> List[Union[int, Tuple[int, ...]]]:
        return [e.labels[0] if len(e.labels) == 1 else e.labels for e in self.events]

    def word(self) -> Tuple[he.Step, ...]:
        out = []
        for e in self.events:
            out.append(he.Left(e.labels[0]) if len(e.labels) == 1 else he.Multi(frozenset(e.labels), 1))
        return tuple(out)


def rotate_unit(point: StabilityPoint, mode: str = "sequential") -> RotationResult:
    """Rotate the charge counterclockwise by pi, tilting at each wall.

    A simple whose charge reaches the negative real ray is tilted away; the
    simples crossing next are those of largest argument among the ones still
    in the open upper half-plane.  The run ends in the tile of the shifted
    heart with the negated charge.
    """
    if mode not in ("sequential", "multiwall"):
        raise ValueError(f"unknown mode {mode!r}")
    start = point.heart
    charge = point.charge
    validate_point(start, charge)
    for lab, z in enumerate(point.simple_charges(), start=1):
        if z.im == 0:
            raise WallStart(f"simple {lab} already has phase 1")
    state = he.HeartState(start.tree, start.classes)
    events: List[CrossingEvent] = []
    last: Optional[ExactComplex] = None
    while True:
        values = {lab: evaluate(charge, state.cls(lab)) for lab in range(1, state.n + 1)}
        live = [lab for lab, z in values.items() if z.im > 0]
        if not live:
            break
        top = live[0]
        for lab in live[1:]:
            if arg_compare(values[lab], values[top]) > 0:
                top = lab
        crossing = tuple(lab for lab in live if arg_compare(values[lab], values[top]) == 0)
        if last is not None and arg_compare(values[top], last) > 0:
            raise InternalSweepViolation(f"simple {top} has argument above the last wall")
        if len(crossing) > 1 and mode == "sequential":
            raise MultiWallRequired(f"simples {list(crossing)} cross together")
        events.append(CrossingEvent(crossing, tuple(state.cls(lab) for lab in crossing)))
        if len(crossing) == 1:
            state = he.left_tilt_simple(state, crossing[0])
        else:
            state = he.left_tilt_multi(state, crossing)
        last = values[top]
    target = he.shift(he.HeartState(start.tree, start.classes), -1)
    sigma = he.states_equal_up_to_relabel(target, state)
    if sigma is None:
        raise InternalSweepViolation("rotation by pi did not reach the shifted heart")
    end = validate_point(state, tuple(-z for z in charge))
    return RotationResult(tuple(events), end, sigma)


# -- the image of the central charge map for A_3 ----------------------------------


@dataclass(frozen=True)
class Membership:
    member: bool
    reason: Optional[str]
    u: Tuple[ExactComplex, ...]

    def as_dict(self) -> dict:
        return {
            "verdict": "member" if self.member else f"excluded({self.reason})",
            "member": self.member,
            "reason": self.reason,
            "u": [format_charge(x) for x in self.u],
        }


_BASE_LINE = (1, -1, 1, -1)


def excised_lines() -> List[Tuple[int, ...]]:
    """Directions of the orbit of the line u1 = u3 = -u2 = -u4 under
    coordinate permutations and global negation, one per line."""
    seen = []
    for p in permutations(range(4)):
        for s in (1, -1):
            d = tuple(s * _BASE_LINE[p[k]] for k in range(4))
            if d[0] < 0:
                d = tuple(-x for x in d)
            if d not in seen:
                seen.append(d)
    return sorted(seen, reverse=True)


_HYPERPLANES = ("z1=0", "z1+z2=0", "z2+z3=0", "z3=0")


def image_point(z1: ExactComplex, z2: ExactComplex, z3: ExactComplex) -> Tuple[ExactComplex, ...]:
    return (z1, -(z1 + z2), z2 + z3, -z3)


def image_membership_A3(z1: ExactComplex, z2: ExactComplex, z3: ExactComplex) -> Membership:
    u = image_point(z1, z2, z3)
    for k, x in enumerate(u):
        if x.is_zero():
            return Membership(False, _HYPERPLANES[k], u)
    for d in excised_lines():
        lam = u[0] if d[0] == 1 else -u[0]
        if all(u[k] == lam.scale(d[k]) for k in range(4)):
            name = "on line l" if d == _BASE_LINE else f"on line {d}"
            return Membership(False, name, u)
    return Membership(True, None, u)


# -- lifts and demonstrations ----------------------------------------------------


def find_lifts(charge: Sequence[ExactComplex], depth: int, start: Optional[he.HeartState] = None) -> List[he.HeartState]:
    from .explorer import explore

    charge = tuple(charge)
    if start is None:
        start = he.standard_line(len(charge))
    graph = explore(start, depth)
    return [s for s in graph.nodes if tile_membership(s, charge)]


def _i(k: Number) -> ExactComplex:
    return ExactComplex(0, k)


def braid_image_permutation(word: str, n: int) -> he.Perm:
    """Image in S_{n+1} of a positive/negative braid word, s_i -> (i i+1)."""
    p = he.identity_perm(n + 1)
    for g in br.parse_braid(word, n):
        if isinstance(g, br.BraidShift) or g.index == 0:
            raise ParseError("only s_i generators have a permutation image")
        t = he.perm_from_pairs((g.index, g.index + 1), n=n + 1)
        p = he.perm_compose(t, p)
    return p


def noninjectivity_witness(n: int = 3, charge: Optional[Sequence[ExactComplex]] = None) -> dict:
    """A standard-heart point fixed at the charge level by g = phi1 phi2 phi1,
    whose permutation image (1 3) is not the identity.

    The charge is fixed exactly when Z(S1) = Z(S2) + Z(S3).
    """
    if n < 3:
        raise ValueError("the witness needs n >= 3")
    if charge is None:
        charge = (_i(3), _i(2)) + tuple(_i(1) for _ in range(n - 2))
    charge = tuple(charge)
    word = "s1 s2 s1"
    m = br.braid_word_matrix(n, word)
    moved = tuple(evaluate(charge, [int(m[r, c]) for r in range(n)]) for c in range(n))
    fixed = moved == charge
    perm = braid_image_permutation(word, n)
    valid = tile_membership(he.standard_line(n), charge)
    return {
        "ok": bool(fixed and perm != he.identity_perm(n + 1) and valid),
        "n": n,
        "g": word,
        "charge": [format_charge(z) for z in charge],
        "charge_after_g": [format_charge(z) for z in moved],
        "charge_fixed": fixed,
        "image_permutation": he.perm_to_cycles(perm),
        "valid_on_standard_heart": valid,
    }


def gamma_tree() -> tc.BrauerTree:
    """The four-edge tree with a trivalent vertex c: leaves a, b on c, and a
    path c - w - d.  Labels: 1 = a-c, 2 = c-b, 3 = c-w, 4 = w-d."""
    ends = {1: ("a", "c"), 2: ("c", "b"), 3: ("c", "w"), 4: ("w", "d")}
    cyclic = {"a": (1,), "b": (2,), "c": (1, 2, 3), "w": (3, 4), "d": (4,)}
    return tc.make_tree(ends, cyclic, vertices=("a", "b", "c", "d", "w"))


def a4_counterexample() -> dict:
    line = tc.line(4)
    line_charge = {1: _i(3), 2: _i(1), 3: _i(1), 4: _i(1)}
    line_vals = br.dual_decomposition(line, br.line_signs(4), line_charge)
    line_vec = [line_vals[v] for v in range(5)]

    gamma = gamma_tree()
    gamma_signs = tc.bipartite_signs(gamma, "d", -1)
    gamma_charge = {1: _i(2), 2: _i(1), 3: _i(1), 4: _i(2)}
    gamma_vals = br.dual_decomposition(gamma, gamma_signs, gamma_charge)
    gamma_vec = [gamma_vals[v] for v in ("a", "c", "b", "w", "d")]

    key = lambda z: (z.re, z.im)  # noqa: E731
    same_multiset = sorted(line_vec, key=key) == sorted(gamma_vec, key=key)
    # gamma_vec[k] == line_vec[s(k)] for the printed 4-cycle s
    s = he.perm_from_cycles("(1 3 5 4)", 5)
    related = all(gamma_vec[k] == line_vec[s[k] - 1] for k in range(5))
    non_iso = not tc.is_isomorphic(line, gamma, "abstract")
    valid_line = tile_membership(he.standard_heart(line), tuple(line_charge[k] for k in range(1, 5)))
    valid_gamma = tile_membership(he.standard_heart(gamma), tuple(gamma_charge[k] for k in range(1, 5)))
    return {
        "ok": bool(same_multiset and related and non_iso and valid_line and valid_gamma),
        "line_values": [format_charge(z) for z in line_vec],
        "gamma_values": [format_charge(z) for z in gamma_vec],
        "same_multiset": same_multiset,
        "related_by_(1 3 5 4)": related,
        "non_isomorphic": non_iso,
        "valid_on_standard_hearts": valid_line and valid_gamma,
    }


def covering_path(t: Fraction) -> Charge:
    return (_i(1), _i(t), _i(2))


def covering_failure_demo(samples: int = 5, depth: int = 4) -> dict:
    """Walk Z_t = (i, t i, 2i) down to t = 0.

    Every point stays in the image, the standard lift degenerates as the
    smallest simple charge has modulus t, and at t = 0 only other hearts lift.
    """
    from sympy import Rational, sqrt

    if samples < 2:
        raise ValueError("samples must be at least 2")
    ts = [Fraction(1, 2 ** k) for k in range(samples - 1)] + [Fraction(0)]
    std = he.standard_line(3)
    rows = []
    members = True
    moduli_ok = True
    prev = None
    for t in ts:
        z = covering_path(t)
        mem = image_membership_A3(*z)
        members &= mem.member
        lift = tile_membership(std, z)
        m2 = min(evaluate(z, c).abs2() for c in std.classes)
        modulus = sqrt(Rational(m2.numerator, m2.denominator))
        exact = modulus == Rational(t.numerator, t.denominator)
        moduli_ok &= exact and (t == 0 or lift) and (prev is None or modulus < prev)
        prev = modulus
        rows.append(
            {
                "t": _frac_str(t),
                "member": mem.member,
                "standard_lift_valid": lift,
                "min_simple_modulus": str(modulus),
            }
        )
    lifts0 = find_lifts(covering_path(Fraction(0)), depth)
    std_excluded = std not in lifts0
    ok = members and moduli_ok and bool(lifts0) and std_excluded and not tile_membership(std, covering_path(Fraction(0)))
    return {
        "ok": bool(ok),
        "samples": rows,
        "lifts_at_zero": [
            {"tree": tc.describe(s.tree), "classes": [list(c) for c in s.classes], "word": he.format_word(s.history)}
            for s in lifts0
        ],
        "standard_excluded_at_zero": std_excluded,
    }
