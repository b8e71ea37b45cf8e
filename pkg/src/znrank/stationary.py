"""Stationary distributions, per-class stationary laws and absorption
probabilities."""

from dataclasses import dataclass
from fractions import Fraction

from znrank.errors import MaxIterExceeded, NotIrreducible, SingularSystem
from znrank.graph import classify_states, is_irreducible
from znrank.linalg import solve_exact, solve_float
from znrank.rational import EXACT, FLOAT


@dataclass(frozen=True)
class Distribution:
    values: tuple
    numeric_mode: str = EXACT

    def __post_init__(self):
        if self.numeric_mode == EXACT:
            vals = tuple(Fraction(x) for x in self.values)
            if any(x < 0 for x in vals):
                raise ValueError("negative probability")
            if sum(vals) != 1:
                raise ValueError(f"probabilities sum to {sum(vals)}, not 1")
        else:
            vals = tuple(0.0 if -1e-12 < float(x) < 0 else float(x) for x in self.values)
            if any(x < 0 for x in vals):
                raise ValueError("negative probability")
            if abs(sum(vals) - 1.0) > 1e-9:
                raise ValueError(f"probabilities sum to {sum(vals)!r}, not 1")
        object.__setattr__(self, "values", vals)

    @property
    def n(self):
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def to_float(self):
        if self.numeric_mode == FLOAT:
            return self
        return Distribution(tuple(float(x) for x in self.values), FLOAT)


def linf(xs, ys):
    return max(abs(x - y) for x, y in zip(xs, ys))


def stationary_direct(p):
    """Unique stationary law of an irreducible chain by linear elimination.

    The balance equations pi P = pi are dependent (they sum to zero), so the
    last one is replaced by normalization.
    """
    if not is_irreducible(p):
        raise NotIrreducible("stationary_direct needs an irreducible chain")
    n = p.n
    zero = Fraction(0) if p.numeric_mode == EXACT else 0.0
    one = Fraction(1) if p.numeric_mode == EXACT else 1.0
    a = [[p.entry(j, i) - (one if i == j else zero) for j in range(n)] for i in range(n - 1)]
    a.append([one] * n)
    rhs = [zero] * (n - 1) + [one]
    solve = solve_exact if p.numeric_mode == EXACT else solve_float
    try:
        x = solve(a, rhs)
    except SingularSystem:
        raise NotIrreducible("balance system singular despite irreducibility check") from None
    return Distribution(tuple(x), p.numeric_mode)


def stationary_power(p, tol=1e-12, max_iter=100000):
    """Stationary law by averaged power iteration, in floating point.

    Each iterate is averaged with its one-step image (x <- (x + xP)/2),
    which removes periodicity while keeping the stationary vector fixed, so
    periodic chains converge too. The residual is measured against P itself.
    Raises MaxIterExceeded carrying the last iterate and residual.
    """
    pf = p.to_float()
    n = pf.n
    rows = pf.rows
    x = [1.0 / n] * n

    def step(vec):
        out = [0.0] * n
        for i, xi in enumerate(vec):
            if xi != 0.0:
                row = rows[i]
                for j in range(n):
                    out[j] += xi * row[j]
        return out

    residual = None
    for _ in range(max_iter):
        px = step(x)
        residual = sum(abs(a - b) for a, b in zip(px, x))
        if residual <= tol:
            s = sum(x)
            return Distribution(tuple(v / s for v in x), FLOAT)
        x = [(a + b) / 2.0 for a, b in zip(x, px)]
        s = sum(x)
        x = [v / s for v in x]
    raise MaxIterExceeded(
        f"no convergence to {tol} within {max_iter} iterations (residual {residual})",
        last_iterate=tuple(x),
        residual=residual,
    )


def class_stationary(p, part):
    """Stationary law of P restricted to each closed class, embedded into
    the full state space with zeros elsewhere."""
    n = p.n
    zero = Fraction(0) if p.numeric_mode == EXACT else 0.0
    out = []
    for cls in part.closed_classes:
        sub = p.submatrix(list(cls))
        pi = stationary_direct(sub)
        full = [zero] * n
        for local, state in enumerate(cls):
            full[state] = pi[local]
        out.append(Distribution(tuple(full), p.numeric_mode))
    return tuple(out)


@dataclass(frozen=True)
class AbsorptionTable:
    transient: tuple
    rows: tuple  # rows[t][k] = probability transient state t is absorbed in class k
    numeric_mode: str = EXACT

    def row_for(self, state):
        return self.rows[self.transient.index(state)]


def absorption_probabilities(p, part):
    """Probability that each transient state is absorbed into each closed
    class: solve (I - P_TT) A = P_(T -> class)."""
    tr = list(part.transient)
    if not tr:
        return AbsorptionTable((), (), p.numeric_mode)
    exact = p.numeric_mode == EXACT
    one = Fraction(1) if exact else 1.0
    zero = Fraction(0) if exact else 0.0
    a = [[(one if i == j else zero) - p.entry(s, t) for j, t in enumerate(tr)] for i, s in enumerate(tr)]
    b = [[sum((p.entry(s, j) for j in cls), zero) for cls in part.closed_classes] for s in tr]
    solve = solve_exact if exact else solve_float
    try:
        x = solve(a, b)
    except SingularSystem:
        raise SingularSystem("some transient state cannot reach any closed class") from None
    return AbsorptionTable(tuple(tr), tuple(tuple(row) for row in x), p.numeric_mode)


__all__ = [
    "AbsorptionTable",
    "Distribution",
    "absorption_probabilities",
    "class_stationary",
    "classify_states",
    "linf",
    "stationary_direct",
    "stationary_power",
]
