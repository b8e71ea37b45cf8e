"""Numerical sweeps over the mixing weight: per-eps stationary laws,
convergence-order fits and first-order estimates.

The sweep is the empirical check on the limit predictions. Exact mode (all
rational, including the grid) gives exact per-eps stationary laws; floating
mode is sized for grids down to 1e-6, below which direct solves degrade.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

from znrank.errors import EpsOutOfRange
from znrank.graph import RowStochasticMatrix, classify_states
from znrank.rational import EXACT, FLOAT
from znrank.stationary import Distribution, stationary_direct

DEFAULT_FLOAT_GRID = (1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6)
DEFAULT_EXACT_GRID = (Fraction(1, 10), Fraction(1, 100), Fraction(1, 1000))


def perturbed_matrix(p, q, eps):
    """(1 - eps) P + eps Q. eps must lie in (0, 1]. Exact when everything
    involved is rational, floating otherwise."""
    if not 0 < eps <= 1:
        raise EpsOutOfRange(f"eps = {eps} outside (0, 1]")
    if q.n != p.n:
        raise ValueError("P and Q must share a state space")
    exact = p.numeric_mode == EXACT and q.numeric_mode == EXACT and not isinstance(eps, float)
    if exact:
        e = Fraction(eps)
        rows = tuple(
            tuple((1 - e) * p.entry(i, j) + e * q.entry(i, j) for j in range(p.n)) for i in range(p.n)
        )
        return RowStochasticMatrix(p.states, rows, EXACT)
    e = float(eps)
    pf, qf = p.to_float(), q.to_float()
    rows = tuple(
        tuple((1.0 - e) * pf.entry(i, j) + e * qf.entry(i, j) for j in range(p.n)) for i in range(p.n)
    )
    return RowStochasticMatrix(p.states, rows, FLOAT)


@dataclass(frozen=True)
class SweepResult:
    eps_grid: tuple
    pi_table: tuple  # one Distribution per eps
    predicted_limit: Distribution
    errors: tuple  # L-inf distance to the prediction per eps
    fitted_slope: object  # float or None when too few positive errors
    first_order: tuple  # Richardson estimate from the two smallest eps


def _predicted_limit(p, q):
    from znrank.zero_noise import limit_rank_extended, limit_rank_general

    part = classify_states(p)
    if part.transient:
        return limit_rank_extended(p, q).node_limit
    return limit_rank_general(p, q).node_limit


def _fit_slope(eps, errors):
    pts = [(math.log(float(e)), math.log(float(r))) for e, r in zip(eps, errors) if float(r) > 1e-300]
    if len(pts) < 2:
        return None
    mx = sum(x for x, _ in pts) / len(pts)
    my = sum(y for _, y in pts) / len(pts)
    sxx = sum((x - mx) ** 2 for x, _ in pts)
    sxy = sum((x - mx) * (y - my) for x, y in pts)
    return sxy / sxx if sxx else None


def epsilon_sweep(p, q, grid=None, predicted=None):
    """Stationary laws along a strictly decreasing grid of mixing weights,
    with per-eps L-inf distance to the predicted limit."""
    exact = p.numeric_mode == EXACT and q.numeric_mode == EXACT
    if grid is None:
        grid = DEFAULT_EXACT_GRID if exact else DEFAULT_FLOAT_GRID
    grid = tuple(grid)
    if any(not 0 < e < 1 for e in grid):
        raise EpsOutOfRange("grid values must lie in (0, 1)")
    if any(b >= a for a, b in zip(grid, grid[1:])):
        raise ValueError("grid must be strictly decreasing")
    if predicted is None:
        predicted = _predicted_limit(p, q)
    table = []
    errors = []
    for e in grid:
        pi = stationary_direct(perturbed_matrix(p, q, e))
        table.append(pi)
        if pi.numeric_mode == EXACT and predicted.numeric_mode == EXACT:
            err = max(abs(a - b) for a, b in zip(pi.values, predicted.values))
        else:
            err = max(abs(float(a) - float(b)) for a, b in zip(pi.values, predicted.values))
        errors.append(err)
    e1, e2 = grid[-2], grid[-1]
    fo = tuple(
        (a - b) / (e1 - e2) for a, b in zip(table[-2].values, table[-1].values)
    ) if len(grid) >= 2 else None
    return SweepResult(
        eps_grid=grid,
        pi_table=tuple(table),
        predicted_limit=predicted,
        errors=tuple(errors),
        fitted_slope=_fit_slope(grid, errors),
        first_order=fo,
    )


def first_order_estimate(p, q, eps_pair):
    """Richardson-style first derivative of the stationary law at zero
    mixing: the difference quotient between two small weights. Exact when
    the matrices and both weights are rational."""
    e1, e2 = eps_pair
    if e1 == e2:
        raise ValueError("the two eps values must differ")
    pi1 = stationary_direct(perturbed_matrix(p, q, e1))
    pi2 = stationary_direct(perturbed_matrix(p, q, e2))
    if pi1.numeric_mode == EXACT and pi2.numeric_mode == EXACT:
        return tuple((a - b) / (Fraction(e1) - Fraction(e2)) for a, b in zip(pi1.values, pi2.values))
    d = float(e1) - float(e2)
    return tuple((float(a) - float(b)) / d for a, b in zip(pi1.values, pi2.values))


def exact_first_order(p, q, budget=None, n_guard=None):
    """Exact derivative at zero mixing of the stationary law, from the
    polynomial route: d/de of H_i(e) / S(e) at 0 after the common leading
    power is removed."""
    from znrank.arborescence import SYMBOLIC_N_GUARD, all_root_polynomials

    guard = SYMBOLIC_N_GUARD if n_guard is None else n_guard
    polys = all_root_polynomials(p, q, budget=budget, n_guard=guard)
    total = polys[0]
    for h in polys[1:]:
        total = total + h
    d = total.min_degree()
    s = total.shift_down(d)
    s0 = s.coefficient(0)
    s1 = s.coefficient(1)
    out = []
    for h in polys:
        # every root polynomial is nonnegative near 0, so its minimal
        # degree is at least that of the total
        hs = h.shift_down(d)
        h0 = hs.coefficient(0)
        h1 = hs.coefficient(1)
        out.append((h1 * s0 - h0 * s1) / (s0 * s0))
    return tuple(out)


def extrapolate_limit(p, q, grid=None):
    """Affine extrapolation to zero mixing from the two smallest grid
    points, in floating point."""
    pf, qf = p.to_float(), q.to_float()
    if grid is None:
        grid = DEFAULT_FLOAT_GRID
    grid = tuple(grid)
    e1, e2 = float(grid[-2]), float(grid[-1])
    pi1 = stationary_direct(perturbed_matrix(pf, qf, e1))
    pi2 = stationary_direct(perturbed_matrix(pf, qf, e2))
    # value at 0 of the line through (e1, pi1), (e2, pi2)
    return tuple(b - e2 * (a - b) / (e1 - e2) for a, b in zip(pi1.values, pi2.values))


def convergence_report(result):
    """Summary dict with a verdict: exact when all errors vanish, otherwise
    pass when errors stay below the fitted linear envelope and the fitted
    slope is at least 0.8."""
    errs = [float(e) for e in result.errors]
    eps = [float(e) for e in result.eps_grid]
    if all(e == 0.0 for e in errs):
        verdict = "exact for all tested eps"
        fitted_c = 0.0
    else:
        fitted_c = max(r / e for r, e in zip(errs, eps))
        envelope_ok = all(r <= fitted_c * e * (1 + 1e-12) for r, e in zip(errs, eps))
        slope_ok = result.fitted_slope is not None and result.fitted_slope >= 0.8
        verdict = "pass" if envelope_ok and slope_ok else "fail"
    return {
        "eps": eps,
        "errors": errs,
        "max_error": max(errs) if errs else 0.0,
        "fitted_C": fitted_c,
        "slope": result.fitted_slope,
        "verdict": verdict,
    }


def parse_eps_grid(text, exact=False):
    """Grid syntax: "a..b" for log-spaced decades from a down to b, or a
    comma list. Values parse as rationals in exact mode."""
    text = text.strip()
    if ".." in text:
        a_txt, b_txt = text.split("..", 1)
        a, b = float(a_txt), float(b_txt)
        if not (0 < b < a < 1):
            raise EpsOutOfRange(f"bad range {text!r}: need 0 < b < a < 1")
        out = []
        e = a
        # log spaced by decades, inclusive of both ends
        steps = round(math.log10(a / b))
        for k in range(steps + 1):
            out.append(a * (b / a) ** (k / steps) if steps else a)
        return tuple(out)
    vals = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        vals.append(Fraction(tok) if exact else float(tok))
    if not vals:
        raise ValueError("empty eps grid")
    return tuple(vals)
