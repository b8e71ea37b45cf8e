"""Spanning arborescences, tree-theorem stationary laws and exact
perturbation polynomials.

An arborescence rooted at r assigns every other node one out-neighbor so
that iterating the assignment reaches r; its weight is the product of the
chosen entries. Two independent routes to the same numbers live here: full
enumeration (the search kernel) and principal minors of I - P (the tree
theorem). The perturbation oracle expands sum-over-trees polynomials in the
mixing parameter with exact rational coefficients; nothing here is floating
point unless the input matrix is.
"""

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iter_product

from znrank.errors import GuardExceeded, NotIrreducible, TransientStatesPresent
from znrank.graph import strongly_connected
from znrank.kernels import enumerate_parents, sum_tree_products
from znrank.linalg import det_exact, det_float
from znrank.polynomial import EpsPolynomial
from znrank.rational import EXACT, format_rational
from znrank.stationary import Distribution

DEFAULT_ASSIGNMENT_BUDGET = 10_000_000
ENUMERATION_N_GUARD = 12
SYMBOLIC_N_GUARD = 10
SKELETON_M_GUARD = 5


def resolve_budget(budget=None):
    """Candidate-assignment budget: explicit argument, then ZNR_GUARD, then
    the default of 10**7."""
    if budget is not None:
        return int(budget)
    env = os.environ.get("ZNR_GUARD")
    if env:
        return int(env)
    return DEFAULT_ASSIGNMENT_BUDGET


@dataclass(frozen=True)
class Arborescence:
    root: int
    parents: tuple  # sorted (node, chosen out-neighbor) pairs, root absent

    def as_dict(self):
        return dict(self.parents)

    @property
    def edges(self):
        return self.parents


def _assignment_count(cands, nodes):
    count = 1
    for u in nodes:
        count *= len(cands[u])
        if count == 0:
            return 0
    return count


def _check_budget(cands, nodes, budget):
    count = _assignment_count(cands, nodes)
    if count > budget:
        raise GuardExceeded(
            f"{count} candidate assignments exceed the budget of {budget}"
            " (raise ZNR_GUARD or pass budget= to override)"
        )


def enumerate_arborescences(g, root, budget=None, n_guard=ENUMERATION_N_GUARD):
    """All arborescences of the digraph g rooted at root, in lexicographic
    order of their parent maps. Self-loops can never appear in one."""
    n = g.states.n
    if not 0 <= root < n:
        raise ValueError(f"root {root} outside the state space")
    if n > n_guard:
        raise GuardExceeded(f"n = {n} exceeds the enumeration guard {n_guard}")
    budget = resolve_budget(budget)
    cands = [sorted(v for v in g.successors(u) if v != u) for u in range(n)]
    nodes = [u for u in range(n) if u != root]
    _check_budget(cands, nodes, budget)
    out = []
    for vec in enumerate_parents(n, root, cands):
        pairs = tuple((u, vec[u]) for u in nodes)
        out.append(Arborescence(root, pairs))
    return out


def arborescence_weight(a, w):
    """Product of the matrix entries along the arborescence's edges."""
    acc = Fraction(1) if w.numeric_mode == EXACT else 1.0
    for u, v in a.parents:
        acc *= w.entry(u, v)
    return acc


def _support_cands(w, extra=None):
    """Sorted positive-entry candidates per node, self-loops excluded;
    extra is a second matrix whose support is unioned in."""
    n = w.n
    cands = []
    for u in range(n):
        cs = set(v for v in range(n) if v != u and w.positive(w.entry(u, v)))
        if extra is not None:
            cs.update(v for v in range(n) if v != u and extra.positive(extra.entry(u, v)))
        cands.append(sorted(cs))
    return cands


def enumerated_root_weight(w, root, budget=None):
    """Sum of arborescence weights rooted at root, via the search kernel.

    The enumeration route: exact in rational mode. One integer sum per root;
    each row contributes exactly one factor, so the common denominator is
    the product of per-row lcms.
    """
    n = w.n
    budget = resolve_budget(budget)
    cands = _support_cands(w)
    nodes = [u for u in range(n) if u != root]
    _check_budget(cands, nodes, budget)
    if w.numeric_mode == EXACT:
        denom = 1
        factors = []
        for u in range(n):
            row = [w.entry(u, v) for v in cands[u]]
            l = math.lcm(*(x.denominator for x in row)) if row else 1
            if u != root:
                denom *= l
            factors.append([(int(x * l),) for x in row])
        total = sum_tree_products(n, root, cands, factors, 1)[0]
        return Fraction(total, denom)
    # floating route: enumerate and sum products
    total = 0.0
    for vec in enumerate_parents(n, root, cands):
        prod = 1.0
        for u in nodes:
            prod *= w.entry(u, vec[u])
        total += prod
    return total


def root_weight_minor(w, root):
    """Tree-theorem route: determinant of I - W with the root row and
    column deleted. Equals the sum of arborescence weights at the root."""
    n = w.n
    idx = [i for i in range(n) if i != root]
    one = Fraction(1) if w.numeric_mode == EXACT else 1.0
    m = [[(one if i == j else 0 * one) - w.entry(i, j) for j in idx] for i in idx]
    if w.numeric_mode == EXACT:
        return det_exact(m)
    return max(0.0, det_float(m))


@dataclass(frozen=True)
class RootWeights:
    values: tuple  # per-state scalars, or EpsPolynomial in symbolic mode
    mode: str  # "scalar" | "symbolic"


def root_weights(w):
    return RootWeights(tuple(root_weight_minor(w, r) for r in range(w.n)), "scalar")


def mctt_stationary(p):
    """Stationary law from the tree theorem: pi(i) proportional to the
    root-i minor of I - P."""
    from znrank.graph import is_irreducible

    if not is_irreducible(p):
        raise NotIrreducible("the tree-theorem stationary law needs an irreducible chain")
    vals = [root_weight_minor(p, r) for r in range(p.n)]
    total = sum(vals)
    return Distribution(tuple(v / total for v in vals), p.numeric_mode)


def _require_exact(*mats):
    for m in mats:
        if m.numeric_mode != EXACT:
            raise ValueError("symbolic perturbation work needs exact (rational) matrices")


def perturbed_root_polynomial(p, q, root, budget=None, n_guard=SYMBOLIC_N_GUARD):
    """Exact polynomial, in the mixing weight, of the sum of arborescence
    weights rooted at root for (1-eps) P + eps Q.

    Enumeration runs over the union support of P and Q; each edge carries
    the linear factor P(u,v) + eps (Q(u,v) - P(u,v)).
    """
    _require_exact(p, q)
    n = p.n
    if q.n != n:
        raise ValueError("P and Q must share a state space")
    if n > n_guard:
        raise GuardExceeded(f"n = {n} exceeds the symbolic guard {n_guard}")
    budget = resolve_budget(budget)
    cands = _support_cands(p, extra=q)
    nodes = [u for u in range(n) if u != root]
    _check_budget(cands, nodes, budget)
    denom = 1
    factors = []
    for u in range(n):
        pairs = [(p.entry(u, v), q.entry(u, v) - p.entry(u, v)) for v in cands[u]]
        dens = [x.denominator for a, b in pairs for x in (a, b)]
        l = math.lcm(*dens) if dens else 1
        if u != root:
            denom *= l
        factors.append([(int(a * l), int(b * l)) for a, b in pairs])
    coeffs = sum_tree_products(n, root, cands, factors, 2)
    return EpsPolynomial(Fraction(c, denom) for c in coeffs)


def all_root_polynomials(p, q, budget=None, n_guard=SYMBOLIC_N_GUARD):
    return tuple(perturbed_root_polynomial(p, q, r, budget=budget, n_guard=n_guard) for r in range(p.n))


def min_degree(poly):
    """Lowest degree with a nonzero coefficient; ZeroPolynomial if none."""
    return poly.min_degree()


def exact_limit_from_polynomials(p, q, budget=None, n_guard=SYMBOLIC_N_GUARD):
    """Exact small-mixing limit of the stationary law of (1-eps) P + eps Q:
    the ratio of lowest-order coefficients of the root polynomials.

    Works with transient states present; their limit mass is zero.
    """
    _require_exact(p, q)
    n = p.n
    cands = _support_cands(p, extra=q)
    if not strongly_connected(cands, n) and n > 1:
        raise NotIrreducible("the union support of P and Q is not strongly connected")
    polys = all_root_polynomials(p, q, budget=budget, n_guard=n_guard)
    total = EpsPolynomial()
    for h in polys:
        total = total + h
    d = total.min_degree()
    lead = total.coefficient(d)
    return Distribution(tuple(h.coefficient(d) / lead for h in polys), EXACT)


def root_weight_polynomials(p, q, budget=None, n_guard=SYMBOLIC_N_GUARD):
    return RootWeights(all_root_polynomials(p, q, budget=budget, n_guard=n_guard), "symbolic")


def _is_block_structured(q, part):
    cells = list(part.closed_classes)
    for ci in cells:
        for cj in cells:
            vals = {q.entry(x, y) for x in ci for y in cj}
            if len(vals) > 1:
                return False
    return True


def skeleton_identity_check(p, q, part, m_guard=SKELETON_M_GUARD):
    """Adjudicate, per skeleton, the claimed identity between the product
    of reduced-chain weights and the label-averaged product of Q entries.

    A skeleton is an arborescence over the class indices (edges restricted
    to positive reduced weights). For each one the report records

        lhs = prod over skeleton edges (u, v) of Gamma(u, v)
        rhs = (prod_k |C_k|)^-1 * sum over labelings (x_1..x_m) in
              C_1 x ... x C_m of prod over skeleton edges of Q(x_u, x_v)

    computed literally, and whether they are equal. Requires a transient
    free partition and block-structured Q; nothing downstream assumes the
    identity, this is measurement only.
    """
    _require_exact(q)
    if part.transient:
        raise TransientStatesPresent("skeleton adjudication needs a transient-free partition")
    if not _is_block_structured(q, part):
        raise ValueError("Q is not block structured over the closed classes")
    m = part.m
    if m > m_guard:
        raise GuardExceeded(f"m = {m} exceeds the skeleton guard {m_guard}")
    cells = list(part.closed_classes)
    sizes = [len(c) for c in cells]
    gamma = [
        [sum((q.entry(x, y) for x in cells[i] for y in cells[j]), Fraction(0)) / sizes[i] for j in range(m)]
        for i in range(m)
    ]
    cands = [sorted(j for j in range(m) if j != i and gamma[i][j] > 0) for i in range(m)]
    size_prod = math.prod(sizes)
    skeletons = []
    n_equal = 0
    for root in range(m):
        for vec in enumerate_parents(m, root, cands):
            edges = tuple((u, vec[u]) for u in range(m) if u != root)
            lhs = math.prod((gamma[u][v] for u, v in edges), start=Fraction(1))
            rhs = Fraction(0)
            for labels in iter_product(*cells):
                rhs += math.prod((q.entry(labels[u], labels[v]) for u, v in edges), start=Fraction(1))
            rhs /= size_prod
            equal = lhs == rhs
            n_equal += equal
            skeletons.append(
                {
                    "root": root,
                    "edges": [list(e) for e in edges],
                    "lhs": format_rational(lhs),
                    "rhs": format_rational(rhs),
                    "equal": equal,
                }
            )
    return {
        "m": m,
        "class_sizes": sizes,
        "skeletons": skeletons,
        "num_skeletons": len(skeletons),
        "num_equal": n_equal,
        "num_discrepant": len(skeletons) - n_equal,
    }
