"""Zero-noise limits: the reduced class chain and limit reports.

For (1-eps) P + eps Q with P reducible, the limit stationary law factors
into per-class stationary laws weighted by the stationary law of a reduced
chain over the closed classes. The plain reduction requires no transient
states; the extended reduction routes perturbation mass that lands on
transient states through their absorption probabilities and is validated
empirically (sweeps plus one exact fixture), not assumed.
"""

from dataclasses import dataclass
from fractions import Fraction

from znrank.errors import GammaReducible, TransientStatesPresent
from znrank.graph import RowStochasticMatrix, StateSpace, classify_states, is_irreducible
from znrank.rational import EXACT, FLOAT, number_to_json
from znrank.stationary import (
    Distribution,
    absorption_probabilities,
    class_stationary,
    stationary_direct,
)

GAMMA_MODES = ("plain", "extended", "personalized", "uniform")


def _common_mode(p, q):
    """Mixed exact/float inputs drop to floating point together."""
    if p.numeric_mode == q.numeric_mode:
        return p, q
    return p.to_float(), q.to_float()


@dataclass(frozen=True)
class GammaChain:
    """Reduced chain over the closed classes."""

    gamma: RowStochasticMatrix
    pi_gamma: Distribution
    mode: str

    @property
    def m(self):
        return self.gamma.n


@dataclass(frozen=True)
class LimitReport:
    partition: object
    per_class_stationary: tuple
    gamma_chain: object  # GammaChain or None for the uniform prediction
    class_masses: Distribution
    node_limit: Distribution
    mode: str  # "theorem3" | "theorem2" | "extended"
    labels: tuple


def _class_labels(part):
    return tuple(f"C{k + 1}" for k in range(part.m))


def _gamma_chain_from_rows(rows, part, mode, numeric_mode):
    states = StateSpace(part.m, _class_labels(part))
    try:
        gamma = RowStochasticMatrix(states, tuple(tuple(r) for r in rows), numeric_mode)
    except ValueError as exc:
        raise GammaReducible(f"reduced chain is not stochastic: {exc}") from None
    if not is_irreducible(gamma):
        raise GammaReducible("reduced class chain is not irreducible")
    return GammaChain(gamma, stationary_direct(gamma), mode)


def build_gamma(q, part, mode="plain"):
    """Reduced chain: Gamma(i, j) averages Q mass from class i into class j
    over the members of class i. Requires a transient-free partition."""
    if part.transient:
        raise TransientStatesPresent("the plain reduction needs a transient-free chain")
    if mode not in GAMMA_MODES:
        raise ValueError(f"unknown reduction mode {mode!r}")
    exact = q.numeric_mode == EXACT
    rows = []
    for ci in part.closed_classes:
        inv = Fraction(1, len(ci)) if exact else 1.0 / len(ci)
        row = []
        for cj in part.closed_classes:
            zero = Fraction(0) if exact else 0.0
            row.append(inv * sum((q.entry(x, y) for x in ci for y in cj), zero))
        rows.append(row)
    return _gamma_chain_from_rows(rows, part, mode, q.numeric_mode)


def personalization_gamma(nu, part):
    """Reduced chain for rank-one perturbations with every row equal to nu:
    all rows of Gamma equal the class masses of nu."""
    if part.transient:
        raise TransientStatesPresent("personalization reduction needs a transient-free chain")
    exact = nu.numeric_mode == EXACT
    zero = Fraction(0) if exact else 0.0
    masses = [sum((nu[x] for x in c), zero) for c in part.closed_classes]
    if any(m == 0 for m in masses):
        raise GammaReducible("some closed class carries no personalization mass")
    rows = [list(masses) for _ in range(part.m)]
    return _gamma_chain_from_rows(rows, part, "personalized", nu.numeric_mode)


def extended_gamma(p, q, part):
    """Reduced chain with transient states folded in: perturbation mass from
    class i that lands on a transient state t continues into class j with
    the absorption probability A(t, j)."""
    p, q = _common_mode(p, q)
    absorb = absorption_probabilities(p, part)
    exact = p.numeric_mode == EXACT and q.numeric_mode == EXACT
    zero = Fraction(0) if exact else 0.0
    rows = []
    for ci in part.closed_classes:
        inv = Fraction(1, len(ci)) if exact else 1.0 / len(ci)
        row = []
        for j, cj in enumerate(part.closed_classes):
            direct = sum((q.entry(x, y) for x in ci for y in cj), zero)
            routed = sum(
                (q.entry(x, t) * absorb.rows[ti][j] for x in ci for ti, t in enumerate(part.transient)),
                zero,
            )
            row.append(inv * (direct + routed))
        rows.append(row)
    return _gamma_chain_from_rows(rows, part, "extended", p.numeric_mode)


def _assemble(p, part, gamma_chain, class_masses, mode):
    per_class = class_stationary(p, part)
    exact = p.numeric_mode == EXACT
    zero = Fraction(0) if exact else 0.0
    node = [zero] * p.n
    for k, cls in enumerate(part.closed_classes):
        mass = class_masses[k]
        for v in cls:
            node[v] = per_class[k][v] * mass
    return LimitReport(
        partition=part,
        per_class_stationary=per_class,
        gamma_chain=gamma_chain,
        class_masses=class_masses,
        node_limit=Distribution(tuple(node), p.numeric_mode),
        mode=mode,
        labels=tuple(p.states.label_list()),
    )


def limit_rank_general(p, q, gamma_mode="plain"):
    """Limit of the stationary law of (1-eps) P + eps Q as eps vanishes:
    per-class stationary laws weighted by the reduced-chain stationary law.
    Requires a transient-free P."""
    p, q = _common_mode(p, q)
    part = classify_states(p)
    if part.transient:
        raise TransientStatesPresent(
            "P has transient states; use the extended reduction (limit_rank_extended)"
        )
    chain = build_gamma(q, part, mode=gamma_mode)
    return _assemble(p, part, chain, chain.pi_gamma, "theorem3")


def limit_rank_extended(p, q):
    """Limit report from the extended reduction; valid with transient
    states. Conjectural: validated by sweeps and the exact oracle."""
    p, q = _common_mode(p, q)
    part = classify_states(p)
    chain = extended_gamma(p, q, part)
    return _assemble(p, part, chain, chain.pi_gamma, "extended")


def limit_rank_personalized(p, nu):
    if p.numeric_mode != nu.numeric_mode:
        p = p.to_float()
        nu = nu.to_float()
    part = classify_states(p)
    chain = personalization_gamma(nu, part)
    return _assemble(p, part, chain, chain.pi_gamma, "theorem3")


def theorem2_prediction(p):
    """Uniform-perturbation prediction: every closed class gets mass 1/m.

    Exposed as a prediction, not a result: the exact oracle contradicts it
    whenever class sizes differ (see adjudicate). For irreducible P it
    degenerates to the plain stationary law.
    """
    part = classify_states(p)
    exact = p.numeric_mode == EXACT
    share = Fraction(1, part.m) if exact else 1.0 / part.m
    masses = Distribution(tuple(share for _ in range(part.m)), p.numeric_mode)
    return _assemble(p, part, None, masses, "theorem2")


def report_to_json(report):
    """Fixed-key JSON form of a LimitReport."""
    part = report.partition
    mode = report.node_limit.numeric_mode
    chain = report.gamma_chain
    return {
        "mode": report.mode,
        "classes": [list(c) for c in part.closed_classes],
        "transient": list(part.transient),
        "gamma": None if chain is None else [[number_to_json(x, mode) for x in row] for row in chain.gamma.rows],
        "pi_gamma": [number_to_json(x, mode) for x in report.class_masses.values],
        "per_class_stationary": [
            [number_to_json(x, mode) for x in d.values] for d in report.per_class_stationary
        ],
        "class_masses": [number_to_json(x, mode) for x in report.class_masses.values],
        "node_limit": [number_to_json(x, mode) for x in report.node_limit.values],
        "labels": list(report.labels),
    }


def adjudicate(p, q, budget=None, n_guard=None, eps_grid=None):
    """Compare the uniform prediction and the class-chain limit against an
    independent oracle: the exact polynomial route when guards allow, the
    sweep extrapolation otherwise. Returns a JSON-able report; methods that
    deviate from the oracle beyond tolerance are flagged discrepant."""
    from znrank.arborescence import SYMBOLIC_N_GUARD, exact_limit_from_polynomials
    from znrank.errors import GuardExceeded
    from znrank.sweep import DEFAULT_FLOAT_GRID, extrapolate_limit

    part = classify_states(p)
    methods = {"theorem2": theorem2_prediction(p)}
    if part.transient:
        methods["extended"] = limit_rank_extended(p, q)
    else:
        methods["theorem3"] = limit_rank_general(p, q)

    guard = SYMBOLIC_N_GUARD if n_guard is None else n_guard
    oracle_mode = "exact-polynomial"
    tol = Fraction(0)
    oracle_vals = None
    if p.numeric_mode == EXACT and q.numeric_mode == EXACT:
        try:
            oracle_vals = exact_limit_from_polynomials(p, q, budget=budget, n_guard=guard).values
        except GuardExceeded:
            oracle_vals = None
    if oracle_vals is None:
        grid = DEFAULT_FLOAT_GRID if eps_grid is None else eps_grid
        oracle_vals = extrapolate_limit(p, q, grid)
        oracle_mode = "sweep-extrapolation"
        tol = 10.0 * float(min(grid))

    report = {
        "oracle_mode": oracle_mode,
        "labels": p.states.label_list(),
        "oracle": [number_to_json(x, EXACT if oracle_mode == "exact-polynomial" else FLOAT) for x in oracle_vals],
        "methods": {},
    }
    for name in sorted(methods):
        vals = methods[name].node_limit.values
        if oracle_mode == "exact-polynomial" and methods[name].node_limit.numeric_mode == EXACT:
            dev = max(abs(a - b) for a, b in zip(vals, oracle_vals))
            verdict = "exact" if dev == 0 else "discrepant"
            dev_json = number_to_json(dev, EXACT)
        else:
            dev = max(abs(float(a) - float(b)) for a, b in zip(vals, oracle_vals))
            verdict = "pass" if dev <= float(tol) or dev == 0.0 else "discrepant"
            dev_json = dev
        report["methods"][name] = {
            "values": [number_to_json(x, methods[name].node_limit.numeric_mode) for x in vals],
            "max_deviation": dev_json,
            "verdict": verdict,
        }
    return report
