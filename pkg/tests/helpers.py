"""Seeded random instance generators for the test suite.

Every generator takes a random.Random so each test controls its own seeds;
string seeds hash deterministically across runs and platforms.
"""

import random
from fractions import Fraction

from znrank.graph import RowStochasticMatrix, StateSpace, WeightedDigraph

MAX_W = 6  # integer weights stay small so denominators do too


def rng_for(tag):
    return random.Random(tag)


def rand_row(rng, n, support=None):
    """Stochastic row with small rational entries on the given support."""
    if support is None:
        k = rng.randint(1, min(n, 4))
        support = rng.sample(range(n), k)
    weights = {j: rng.randint(1, MAX_W) for j in support}
    total = sum(weights.values())
    return tuple(Fraction(weights.get(j, 0), total) for j in range(n))


def rand_stochastic(rng, n):
    """Arbitrary stochastic matrix; may be reducible or leave transients."""
    return RowStochasticMatrix(StateSpace(n), tuple(rand_row(rng, n) for _ in range(n)))


def _cycle_plus_extras(rng, nodes, extras):
    """Edge set containing a permutation cycle over nodes (hence strongly
    connected) plus a few random extra edges."""
    order = list(nodes)
    rng.shuffle(order)
    edges = set()
    k = len(order)
    for i in range(k):
        if k == 1:
            edges.add((order[0], order[0]))
        else:
            edges.add((order[i], order[(i + 1) % k]))
    for _ in range(extras):
        u, v = rng.choice(order), rng.choice(order)
        if u != v:
            edges.add((u, v))
    return edges


def rand_irreducible(rng, n):
    """Irreducible stochastic matrix: permutation-cycle support + extras."""
    edges = _cycle_plus_extras(rng, range(n), rng.randint(0, n))
    rows = []
    for u in range(n):
        support = sorted(v for (s, v) in edges if s == u)
        rows.append(rand_row(rng, n, support=support))
    return RowStochasticMatrix(StateSpace(n), tuple(rows))


def rand_sizes(rng, m, lo=1, hi=4, total_cap=6):
    """m class sizes in [lo, hi] whose sum stays within the cap."""
    sizes = [rng.randint(lo, hi) for _ in range(m)]
    while sum(sizes) > total_cap:
        i = max(range(m), key=lambda k: sizes[k])
        if sizes[i] == lo:
            break
        sizes[i] -= 1
    return sizes


def rand_reducible_no_transient(rng, sizes):
    """Block-diagonal chain: one irreducible block per closed class."""
    n = sum(sizes)
    rows = [[Fraction(0)] * n for _ in range(n)]
    offset = 0
    for size in sizes:
        block = rand_irreducible(rng, size)
        for i in range(size):
            for j in range(size):
                rows[offset + i][offset + j] = block.entry(i, j)
        offset += size
    return RowStochasticMatrix(StateSpace(n), tuple(tuple(r) for r in rows))


def rand_block_q(rng, sizes):
    """Block-structured perturbation: Q(x, y) = gamma_ij for x in class i,
    y in class j, with an irreducible class-level support (cycle + extras)
    and rows normalized so sum_j gamma_ij |C_j| = 1."""
    m = len(sizes)
    support = _cycle_plus_extras(rng, range(m), rng.randint(0, m))
    n = sum(sizes)
    starts = [sum(sizes[:k]) for k in range(m)]
    rows = [[Fraction(0)] * n for _ in range(n)]
    gamma = []
    for i in range(m):
        succ = sorted(j for (s, j) in support if s == i)
        if not succ:
            succ = [(i + 1) % m]
        u = {j: rng.randint(1, MAX_W) for j in succ}
        denom = sum(u[j] * sizes[j] for j in succ)
        gamma.append([Fraction(u.get(j, 0), denom) for j in range(m)])
    for i in range(m):
        for x in range(starts[i], starts[i] + sizes[i]):
            for j in range(m):
                for y in range(starts[j], starts[j] + sizes[j]):
                    rows[x][y] = gamma[i][j]
    q = RowStochasticMatrix(StateSpace(n), tuple(tuple(r) for r in rows))
    return q, gamma


def rand_with_transients(rng, sizes, t):
    """Closed blocks plus t transient states, each with at least one direct
    edge into a closed state."""
    n_closed = sum(sizes)
    n = n_closed + t
    base = rand_reducible_no_transient(rng, sizes)
    rows = [list(base.row(i)) + [Fraction(0)] * t for i in range(n_closed)]
    for s in range(t):
        forced = rng.randrange(n_closed)
        k = rng.randint(0, min(3, n - 1))
        extra = rng.sample([j for j in range(n) if j != n_closed + s], k)
        support = sorted(set([forced] + extra))
        rows.append(list(rand_row(rng, n, support=support)))
    return RowStochasticMatrix(StateSpace(n), tuple(tuple(r) for r in rows))


def rand_dense_stochastic(rng, n):
    """Stochastic matrix with every entry positive."""
    return RowStochasticMatrix(
        StateSpace(n), tuple(rand_row(rng, n, support=range(n)) for _ in range(n))
    )


def rand_personalization(rng, n):
    """Strictly positive probability vector with small denominators."""
    w = [rng.randint(1, MAX_W) for _ in range(n)]
    s = sum(w)
    return tuple(Fraction(x, s) for x in w)


def rand_strong_digraph(rng, n):
    """Strongly connected unit-weight digraph without self-loops."""
    edges = _cycle_plus_extras(rng, range(n), rng.randint(0, n))
    if n == 1:
        edges = set()
    return WeightedDigraph(
        StateSpace(n), tuple((u, v, Fraction(1)) for u, v in sorted(edges))
    )
