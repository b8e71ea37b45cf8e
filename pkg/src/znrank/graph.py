"""State spaces, weighted digraphs, row-stochastic matrices and the
closed-class decomposition.

States are 0-based. Closed communicating classes are the strongly connected
components no positive entry leaves; they are listed in increasing order of
their smallest member. Everything else is transient. In floating mode an
entry counts as positive above 1e-15.
"""

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

from znrank.errors import InputFormatError
from znrank.rational import EXACT, FLOAT, json_to_number, number_to_json, parse_rational

POSITIVE_EPS = 1e-15


@dataclass(frozen=True)
class StateSpace:
    n: int
    labels: tuple = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("state space needs at least one state")
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(self.labels))
            if len(self.labels) != self.n:
                raise ValueError("label count does not match n")
            if len(set(self.labels)) != self.n:
                raise ValueError("duplicate labels")

    def label_list(self):
        if self.labels is not None:
            return list(self.labels)
        return [str(i) for i in range(self.n)]


@dataclass
class WeightedDigraph:
    """Directed graph with nonnegative rational edge weights. Parallel edges
    are not allowed; edge order is the order of first appearance."""

    states: StateSpace
    edges: tuple  # of (src, dst, Fraction weight)
    _adj: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self.edges = tuple((int(s), int(d), Fraction(w)) for s, d, w in self.edges)
        seen = set()
        self._adj = {u: [] for u in range(self.states.n)}
        for s, d, w in self.edges:
            if not (0 <= s < self.states.n and 0 <= d < self.states.n):
                raise ValueError(f"edge ({s}, {d}) outside the state space")
            if w < 0:
                raise ValueError(f"negative weight on edge ({s}, {d})")
            if (s, d) in seen:
                raise ValueError(f"duplicate edge ({s}, {d})")
            seen.add((s, d))
            self._adj[s].append((d, w))

    def successors(self, u):
        return [d for d, _ in self._adj[u]]

    def out_edges(self, u):
        return list(self._adj[u])

    def out_degree(self, u):
        return len(self._adj[u])


def parse_edge_list(text):
    """Parse edge-list text into a WeightedDigraph.

    Lines hold `src dst [weight]` separated by whitespace; a line with a
    single token declares an isolated node; `#` starts a comment; the weight
    defaults to 1 and accepts "3", "3/4" or "0.5" (decimal semantics).
    Node ids become 0-based indices in order of first appearance.
    """
    index = {}
    order = []
    edges = []
    seen = set()

    def node(tok):
        if tok not in index:
            index[tok] = len(order)
            order.append(tok)
        return index[tok]

    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if len(toks) == 1:
            node(toks[0])
            continue
        if len(toks) > 3:
            raise InputFormatError(f"expected `src dst [weight]`, got {len(toks)} fields", line=ln)
        s, d = node(toks[0]), node(toks[1])
        w = parse_rational(toks[2], line=ln) if len(toks) == 3 else Fraction(1)
        if w < 0:
            raise InputFormatError("negative weight", line=ln)
        if (s, d) in seen:
            raise InputFormatError(f"duplicate edge {toks[0]} -> {toks[1]}", line=ln)
        seen.add((s, d))
        edges.append((s, d, w))
    if not order:
        raise InputFormatError("no nodes in input")
    return WeightedDigraph(StateSpace(len(order), tuple(order)), tuple(edges))


def serialize_edge_list(g):
    """Inverse of parse_edge_list: node declarations in index order, then
    edges in stored order with explicit rational weights."""
    labels = g.states.label_list()
    lines = [labels[i] for i in range(g.states.n)]
    for s, d, w in g.edges:
        lines.append(f"{labels[s]}\t{labels[d]}\t{w.numerator}/{w.denominator}")
    return "\n".join(lines) + "\n"


@dataclass
class RowStochasticMatrix:
    states: StateSpace
    rows: tuple
    numeric_mode: str = EXACT

    def __post_init__(self):
        n = self.states.n
        if len(self.rows) != n or any(len(r) != n for r in self.rows):
            raise ValueError("matrix shape does not match the state space")
        if self.numeric_mode == EXACT:
            self.rows = tuple(tuple(Fraction(x) for x in row) for row in self.rows)
            for i, row in enumerate(self.rows):
                if any(x < 0 for x in row):
                    raise ValueError(f"negative entry in row {i}")
                if sum(row) != 1:
                    raise ValueError(f"row {i} sums to {sum(row)}, not 1")
        elif self.numeric_mode == FLOAT:
            self.rows = tuple(tuple(float(x) for x in row) for row in self.rows)
            for i, row in enumerate(self.rows):
                if any(x < -POSITIVE_EPS for x in row):
                    raise ValueError(f"negative entry in row {i}")
                if abs(sum(row) - 1.0) > 1e-12:
                    raise ValueError(f"row {i} sums to {sum(row)!r}, not 1")
        else:
            raise ValueError(f"unknown numeric mode {self.numeric_mode!r}")

    @property
    def n(self):
        return self.states.n

    def entry(self, i, j):
        return self.rows[i][j]

    def row(self, i):
        return self.rows[i]

    def to_float(self):
        if self.numeric_mode == FLOAT:
            return self
        return RowStochasticMatrix(self.states, tuple(tuple(float(x) for x in r) for r in self.rows), FLOAT)

    def positive(self, x):
        if self.numeric_mode == EXACT:
            return x > 0
        return x > POSITIVE_EPS

    def support_successors(self, include_self=True):
        """Adjacency lists of the positive-entry digraph."""
        out = []
        for i, row in enumerate(self.rows):
            out.append([j for j, x in enumerate(row) if self.positive(x) and (include_self or j != i)])
        return out

    def submatrix(self, indices):
        """Restriction to the given states; rows must stay stochastic."""
        sub = StateSpace(len(indices), tuple(self.states.label_list()[i] for i in indices))
        rows = tuple(tuple(self.rows[i][j] for j in indices) for i in indices)
        return RowStochasticMatrix(sub, rows, self.numeric_mode)


def uniform_matrix(n, states=None):
    w = Fraction(1, n)
    return RowStochasticMatrix(states or StateSpace(n), tuple(tuple(w for _ in range(n)) for _ in range(n)))


def ones_outer(nu_values, states=None):
    """Rank-one matrix with every row equal to nu."""
    n = len(nu_values)
    row = tuple(Fraction(x) for x in nu_values)
    return RowStochasticMatrix(states or StateSpace(n), tuple(row for _ in range(n)))


@dataclass(frozen=True)
class ClassPartition:
    closed_classes: tuple  # of sorted tuples of state indices
    transient: tuple

    def __post_init__(self):
        object.__setattr__(self, "closed_classes", tuple(tuple(c) for c in self.closed_classes))
        object.__setattr__(self, "transient", tuple(self.transient))
        all_states = [s for c in self.closed_classes for s in c] + list(self.transient)
        if len(all_states) != len(set(all_states)):
            raise ValueError("partition cells overlap")
        if not self.closed_classes:
            raise ValueError("at least one closed class is required")

    @property
    def m(self):
        return len(self.closed_classes)

    def class_of(self, state):
        """Index of the closed class containing state, or None if transient."""
        for k, c in enumerate(self.closed_classes):
            if state in c:
                return k
        return None


def _tarjan_sccs(adj, n):
    """Strongly connected components, iterative, in a deterministic order."""
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack = []
    sccs = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, pi = work[-1]
            if pi == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            advanced = False
            for i in range(pi, len(adj[v])):
                w = adj[v][i]
                if index[w] == -1:
                    work[-1] = (v, i + 1)
                    work.append((w, 0))
                    advanced = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                sccs.append(tuple(sorted(comp)))
            if work:
                u, _ = work[-1]
                low[u] = min(low[u], low[v])
    return sccs


def strongly_connected(adj, n):
    return len(_tarjan_sccs(adj, n)) == 1


def classify_states(p):
    """Closed communicating classes and transient states of P."""
    n = p.n
    adj = p.support_successors(include_self=False)
    sccs = _tarjan_sccs(adj, n)
    comp_of = {}
    for ci, comp in enumerate(sccs):
        for v in comp:
            comp_of[v] = ci
    closed = []
    transient = []
    for comp in sccs:
        members = set(comp)
        leaves = any(w not in members for v in comp for w in adj[v])
        if leaves:
            transient.extend(comp)
        else:
            closed.append(comp)
    closed.sort(key=min)
    transient.sort()
    part = ClassPartition(tuple(closed), tuple(transient))
    # every transient state must reach some closed class; true for any
    # finite stochastic matrix, so a failure here means corrupted input
    reach = set(s for c in closed for s in c)
    changed = True
    while changed:
        changed = False
        for t in part.transient:
            if t not in reach and any(w in reach for w in adj[t]):
                reach.add(t)
                changed = True
    if any(t not in reach for t in part.transient):
        raise ValueError("transient state cannot reach any closed class")
    return part


def is_irreducible(p):
    part = classify_states(p)
    return part.m == 1 and not part.transient


DANGLING_POLICIES = ("self_loop", "uniform_row")


def to_stochastic(g, dangling="self_loop"):
    """Row-normalize a weighted digraph into a stochastic matrix.

    Rows with zero total weight follow the dangling policy: "self_loop"
    makes the state absorbing, "uniform_row" spreads mass evenly.
    """
    if dangling not in DANGLING_POLICIES:
        raise ValueError(f"unknown dangling policy {dangling!r}")
    n = g.states.n
    rows = []
    for u in range(n):
        out = g.out_edges(u)
        total = sum((w for _, w in out), Fraction(0))
        if total == 0:
            if dangling == "self_loop":
                row = [Fraction(0)] * n
                row[u] = Fraction(1)
            else:
                row = [Fraction(1, n)] * n
        else:
            row = [Fraction(0)] * n
            for d, w in out:
                row[d] += w / total
        rows.append(tuple(row))
    return RowStochasticMatrix(g.states, tuple(rows), EXACT)


def load_matrix_json(text, numeric_mode=EXACT):
    """Read {"n": int, "rows": [[...]]} with entries as numbers or "p/q"
    strings. In exact mode decimal literals keep decimal semantics."""
    try:
        obj = json.loads(text, parse_float=Fraction) if numeric_mode == EXACT else json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"bad JSON: {exc}") from None
    if not isinstance(obj, dict) or "n" not in obj or "rows" not in obj:
        raise InputFormatError('matrix JSON needs keys "n" and "rows"')
    n = obj["n"]
    rows = obj["rows"]
    if not isinstance(n, int) or n < 1:
        raise InputFormatError('"n" must be a positive integer')
    if not isinstance(rows, list) or len(rows) != n or any(not isinstance(r, list) or len(r) != n for r in rows):
        raise InputFormatError('"rows" must be an n x n array')
    parsed = tuple(tuple(json_to_number(x, numeric_mode) for x in row) for row in rows)
    labels = obj.get("labels")
    states = StateSpace(n, tuple(labels)) if labels else StateSpace(n)
    try:
        return RowStochasticMatrix(states, parsed, numeric_mode)
    except ValueError as exc:
        raise InputFormatError(str(exc)) from None


def dump_matrix_json(p):
    obj = {"n": p.n, "rows": [[number_to_json(x, p.numeric_mode) for x in row] for row in p.rows]}
    if p.states.labels is not None:
        obj["labels"] = list(p.states.labels)
    return obj


def matrix_lcm_denominator(p):
    """lcm of all entry denominators of an exact matrix."""
    return math.lcm(*(x.denominator for row in p.rows for x in row))
