"""The twelve acceptance criteria, one test each.

Each test records PASS/FAIL in RESULTS; conftest prints one line per
criterion at the end of the run.  `python tests/test_acceptance.py` runs them
without pytest.
"""

import random
import sys
from fractions import Fraction

from sympy import eye

from tiltlab import braids as br
from tiltlab import hearts as he
from tiltlab import stability as st
from tiltlab import trees as tc
from tiltlab.explorer import explore
from tiltlab.suites import seed

RESULTS = {}
A3 = he.standard_line(3)
C = st.ExactComplex


def criterion(number, title):
    def wrap(fn):
        def test():
            RESULTS[number] = (title, "FAIL")
            detail = fn()
            assert not detail, detail
            RESULTS[number] = (title, "PASS")

        test.__name__ = fn.__name__
        test.number = number
        return test

    return wrap


def _subsets(n):
    return [frozenset(i for i in range(1, n + 1) if m >> (i - 1) & 1) for m in range(2**n)]


@criterion(1, "mutation table for the line T3")
def test_criterion_01_mutation_table():
    t = tc.line(3)
    rows = {
        "T3": (tc.mutate_tree(t, ()), tc.line(3)),
        "L1(T3)": (tc.mutate_tree(t, {1}), tc.star(3, (1, 3, 2))),
        "L2(T3)": (tc.mutate_tree(t, {2}), tc.line(3)),
        "L3(T3)": (tc.mutate_tree(t, {3}), tc.star(3, (1, 2, 3))),
    }
    return [name for name, (got, want) in rows.items() if not tc.is_isomorphic(got, want, "labelled")]


@criterion(2, "first tilts of A3 and the braid relation")
def test_criterion_02_first_tilts():
    bad = []
    if he.left_tilt_simple(A3, 1).classes != ((-1, 0, 0), (1, 1, 0), (0, 0, 1)):
        bad.append("L1 classes")
    a, b = he.apply_word(A3, "L1 L2 L1"), he.apply_word(A3, "L2 L1 L2")
    if a != b:
        bad.append("L1 L2 L1 != L2 L1 L2")
    if he.states_equal_up_to_relabel(a, he.left_tilt_multi(A3, {1, 2})) != (2, 1, 3):
        bad.append("L1 L2 L1 != (12) L{1,2}")
    return bad


@criterion(3, "pair relations on T3 and St3, all hypotheses that hold")
def test_criterion_03_pair_relations():
    bad, held = [], 0
    for name, tree in (("T3", tc.line(3)), ("St3", tc.star(3))):
        h = he.standard_heart(tree)
        for I in _subsets(3):
            for J in _subsets(3):
                rep = he.check_prop_relations(h, I, J)
                for fam in ("separated", "swap"):
                    if rep[fam]["hypothesis_held"]:
                        held += 1
                        if not rep[fam]["identity_verified"]:
                            bad.append((name, fam, sorted(I), sorted(J)))
                if rep["swap"]["hypothesis_held"] and not rep["swap"]["sigma"]:
                    bad.append((name, "no sigma reported", sorted(I), sorted(J)))
    return bad or ([] if held else ["no hypothesis ever held"])


@criterion(4, "multi tilts decompose into simple tilts")
def test_criterion_04_decomposition():
    rng = random.Random(seed())
    trees = [t for n in range(1, 5) for t in tc.all_planar_trees(n)]
    trees += [tc.random_tree(rng.randint(1, 5), rng) for _ in range(50)]
    bad = []
    for t in trees:
        h = he.standard_heart(t)
        for J in _subsets(t.n):
            d = he.decompose_multi(h, J)
            simple = all(isinstance(s, (he.Left, he.Right)) for s in d.word)
            if not simple or d.apply(h) != he.left_tilt_multi_direct(h, J):
                bad.append((tc.dumps(t), sorted(J)))
    return bad


# (relation as printed, executed rightmost first; permutation; charge; mode)
SIX_RELATIONS = [
    ("L1 L3 L1 L2 L3", "(123)", "-1+1i,5+1i,-10+1i", "sequential"),
    ("L3 L1 L2 L3 L2", "(132)", "10+1i,-10+1i,-1+1i", "sequential"),
    ("L2 M{1,3} L2 M{1,3}", "(13)", "1i,1+1i,1i", "multiwall"),
    ("L3 L1 L3 L2 L3", "(132)", "5+4i,2i,-1+3i", "sequential"),
    ("L3 L1 L3 L2 L1", "(123)", "-6+1i,4+1i,2i", "sequential"),
    ("M{1,3} L2 M{1,3} L2", "id", "4+1i,5+4i,4+1i", "multiwall"),
]


@criterion(5, "six relations reaching A3[-1], by words and by rotation")
def test_criterion_05_six_relations():
    target = he.shift(A3, -1)
    bad = []
    for text, printed, charge, mode in SIX_RELATIONS:
        word = he.composition_word(text)
        sigma = he.perm_from_cycles(printed, 3)
        direct = he.relabel(he.apply_word(A3, word), sigma) == target
        rot = st.rotate_unit(st.validate_point(A3, st.parse_charges(charge)), mode)
        rotated = rot.word() == word and he.relabel(rot.end.heart, sigma) == target
        if not (direct and rotated):
            found = he.states_equal_up_to_relabel(target, he.apply_word(A3, word))
            bad.append(f"{printed} {text}: found {found and he.perm_to_cycles(found)}")
    return bad


@criterion(6, "tilts against braids on A3")
def test_criterion_06_tilts_against_braids():
    rows = [
        # execution order, braid word, shift, permutation
        ("L1 L3", "s2", -1, "id"),
        ("L1 L2", "s1^-1", -1, "(12)"),
        ("L1 L1", "s2 s3 s2", 0, "(23)"),
    ]
    bad = []
    for word, braid, k, printed in rows:
        lhs = he.relabel(he.apply_word(A3, word), he.perm_from_cycles(printed, 3))
        rhs = he.shift(br.apply_braid_to_state(A3, braid), k)
        if lhs != rhs:
            bad.append(f"{word} = {printed} {braid} [{k}]")
    return bad


@criterion(7, "equivariance, extended braid presentation and full twist on K0")
def test_criterion_07_k0_identities():
    bad = [f"equivariance n={n}" for n in range(1, 7) if not all(r["ok"] for r in br.check_equivariance(n))]
    bad += [f'{r["lhs"]} = {r["rhs"]}' for r in br.check_braid_presentation(3) if not r["ok"]]
    if br.braid_word_matrix(3, "z z z") != br.braid_word_matrix(3, "s1 s2 s3 s1 s2 s1"):
        bad.append("z^3")
    bad += [f"full twist n={n}" for n in (2, 3, 4) if br.braid_word_matrix(n, br.full_twist_word(n)) != eye(n)]
    return bad


@criterion(8, "single tilts intertwine decomposition maps with sign -1")
def test_criterion_08_intertwining():
    bad = []
    for n in range(1, 6):
        for i in range(1, n + 1):
            rep = br.check_intertwining(tc.line(n), f"L{i}")
            if not (rep["ok"] and rep["sign"] == -1):
                bad.append((n, i, rep.get("sign")))
    return bad


@criterion(9, "two non-isomorphic A4 trees with the same vertex values")
def test_criterion_09_a4_trees():
    i = C(0, 1)
    line_vals = br.dual_decomposition(tc.line(4), br.line_signs(4), {1: i.scale(3), 2: i, 3: i, 4: i})
    gamma = st.gamma_tree()
    gamma_vals = br.dual_decomposition(gamma, tc.bipartite_signs(gamma, "d", -1), {1: i.scale(2), 2: i, 3: i, 4: i.scale(2)})
    bad = []
    if [line_vals[v] for v in range(5)] != [i.scale(k) for k in (3, -4, 2, -2, 1)]:
        bad.append("line values")
    key = lambda z: (z.re, z.im)  # noqa: E731
    if sorted(gamma_vals.values(), key=key) != sorted((i.scale(k) for k in (2, -4, 1, 3, -2)), key=key):
        bad.append("gamma multiset")
    if tc.is_isomorphic(tc.line(4), gamma, "abstract"):
        bad.append("trees isomorphic")
    return bad


@criterion(10, "image of the central charge map for A3")
def test_criterion_10_image_membership():
    rng = random.Random(seed())
    nodes = explore(A3, 4).nodes
    bad = []
    for _ in range(1000):
        h = rng.choice(nodes)
        values = [
            C(-rng.randint(1, 9), 0) if rng.random() < 0.05
            else C(Fraction(rng.randint(-20, 20), rng.randint(1, 5)), Fraction(rng.randint(1, 20), rng.randint(1, 5)))
            for _ in range(3)
        ]
        z = st.charge_from_simple_values(h, values)
        if not st.image_membership_A3(*z).member:
            bad.append([str(x) for x in z])
    for witness in ("0,1i,1i", "1i,0,1i", "1i,-1i,2i"):
        if st.image_membership_A3(*st.parse_charges(witness)).member:
            bad.append(f"witness {witness} accepted")
    return bad[:5]


@criterion(11, "path to (i, 0, 2i) stays in the image but loses the standard lift")
def test_criterion_11_covering_failure():
    bad = []
    for t in [Fraction(1, 2**k) for k in range(6)] + [Fraction(0)]:
        z = st.covering_path(t)
        if not st.image_membership_A3(*z).member:
            bad.append(f"t={t} not a member")
        m2 = min(st.evaluate(z, c).abs2() for c in A3.classes)
        if m2 != t * t:
            bad.append(f"t={t} modulus^2 {m2}")
        if t > 0 and not st.tile_membership(A3, z):
            bad.append(f"t={t} standard lift invalid")
    lifts = st.find_lifts(st.covering_path(Fraction(0)), 4)
    if not lifts or A3 in lifts:
        bad.append("lifts at t=0")
    return bad


@criterion(12, "rotation by pi ends at the shifted heart with negated charge")
def test_criterion_12_rotation():
    rng = random.Random(seed())
    graphs = {n: explore(he.standard_line(n), 2).nodes for n in (2, 3, 4)}
    bad = []
    for _ in range(200):
        n = rng.choice((2, 3, 4))
        h = rng.choice(graphs[n])
        values = [C(Fraction(rng.randint(-20, 20), rng.randint(1, 5)), Fraction(rng.randint(1, 20), rng.randint(1, 5))) for _ in range(n)]
        z = st.charge_from_simple_values(h, values)
        p = st.validate_point(h, z)
        try:
            r = st.rotate_unit(p, "sequential")
        except st.MultiWallRequired:
            r = st.rotate_unit(p, "multiwall")
        if he.relabel(r.end.heart, r.relabelling) != he.shift(h, -1) or r.end.charge != tuple(-x for x in z):
            bad.append((h.classes, [str(x) for x in z]))
    r = st.rotate_unit(st.validate_point(A3, st.parse_charges("-1+1i,5+1i,-10+1i")))
    crossed = sorted(c for e in r.events for c in e.classes)
    if crossed != sorted([(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0), (0, 1, 1)]):
        bad.append(f"crossing classes {crossed}")
    return bad[:5]


def main() -> int:
    tests = sorted((v for k, v in globals().items() if k.startswith("test_criterion_")), key=lambda f: f.number)
    failed = 0
    for t in tests:
        try:
            t()
        except AssertionError:
            failed += 1
        title, verdict = RESULTS[t.number]
        print(f"criterion {t.number:2d}: {verdict}  {title}")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
