"""Checks computed independently of the tilting code."""

from sympy import Matrix

from tiltlab import trees as tc


def class_matrix(state):
    return Matrix([list(c) for c in state.classes]).T


def cartan_consistent(start_tree, state):
    """The Cartan matrix transported along the derived equivalence, M^-1 C M^-T,
    must be the Cartan matrix of the tree attached to `state`."""
    m = class_matrix(state)
    c0 = Matrix(tc.cartan_matrix(start_tree))
    return m.inv() * c0 * m.inv().T == Matrix(tc.cartan_matrix(state.tree))


def cartan_by_hand(tree):
    """2 on the diagonal, 1 for edges sharing a vertex (single edge: [2])."""
    n = tree.n
    out = [[0] * n for _ in range(n)]
    for a in range(1, n + 1):
        for b in range(1, n + 1):
            ea, eb = tree.edge_of(a), tree.edge_of(b)
            if a == b:
                out[a - 1][b - 1] = 2
            else:
                out[a - 1][b - 1] = len(set(tree.ends[ea]) & set(tree.ends[eb]))
    return out
