import json
from fractions import Fraction

import pytest

from znrank.errors import GammaReducible, TransientStatesPresent
from znrank.graph import (
    RowStochasticMatrix,
    StateSpace,
    classify_states,
    ones_outer,
    uniform_matrix,
)
from znrank.stationary import Distribution
from znrank.zero_noise import (
    adjudicate,
    build_gamma,
    extended_gamma,
    limit_rank_extended,
    limit_rank_general,
    limit_rank_personalized,
    personalization_gamma,
    report_to_json,
    theorem2_prediction,
)
from helpers import (
    rand_block_q,
    rand_reducible_no_transient,
    rand_sizes,
    rng_for,
)

F = Fraction

REPORT_KEYS = [
    "mode",
    "classes",
    "transient",
    "gamma",
    "pi_gamma",
    "per_class_stationary",
    "class_masses",
    "node_limit",
    "labels",
]


def cycle_plus_absorber():
    return RowStochasticMatrix(StateSpace(3), ((0, 1, 0), (1, 0, 0), (0, 0, 1)))


def test_build_gamma_uniform_sizes():
    p = cycle_plus_absorber()
    chain = build_gamma(uniform_matrix(3), classify_states(p), mode="uniform")
    assert chain.gamma.rows == ((F(2, 3), F(1, 3)), (F(2, 3), F(1, 3)))
    assert chain.pi_gamma.values == (F(2, 3), F(1, 3))
    assert chain.mode == "uniform"


def test_build_gamma_block_fixture():
    # within-class uniform block perturbation with gamma = [[1/3,1/3],[1/2,0]]
    p = cycle_plus_absorber()
    q = RowStochasticMatrix(
        StateSpace(3),
        (
            (F(1, 3), F(1, 3), F(1, 3)),
            (F(1, 3), F(1, 3), F(1, 3)),
            (F(1, 2), F(1, 2), 0),
        ),
    )
    chain = build_gamma(q, classify_states(p))
    assert chain.gamma.rows == ((F(2, 3), F(1, 3)), (F(1), F(0)))
    assert chain.pi_gamma.values == (F(3, 4), F(1, 4))
    report = limit_rank_general(p, q)
    assert report.node_limit.values == (F(3, 8), F(3, 8), F(1, 4))


def test_build_gamma_rejects_transients_and_reducible():
    p = RowStochasticMatrix(
        StateSpace(3), ((1, 0, 0), (0, 1, 0), (F(1, 2), F(1, 4), F(1, 4)))
    )
    with pytest.raises(TransientStatesPresent):
        build_gamma(uniform_matrix(3), classify_states(p))
    # identity perturbation never moves mass between classes
    p2 = RowStochasticMatrix(StateSpace(2), ((1, 0), (0, 1)))
    q2 = RowStochasticMatrix(StateSpace(2), ((1, 0), (0, 1)))
    with pytest.raises(GammaReducible):
        build_gamma(q2, classify_states(p2))


def test_limit_rank_general_rejects_transients():
    p = RowStochasticMatrix(
        StateSpace(3), ((1, 0, 0), (0, 1, 0), (F(1, 2), F(1, 4), F(1, 4)))
    )
    with pytest.raises(TransientStatesPresent):
        limit_rank_general(p, uniform_matrix(3))


def test_personalization_gamma():
    p = cycle_plus_absorber()
    nu = Distribution((F(1, 5), F(3, 10), F(1, 2)))
    chain = personalization_gamma(nu, classify_states(p))
    assert chain.pi_gamma.values == (F(1, 2), F(1, 2))
    report = limit_rank_personalized(p, nu)
    assert report.node_limit.values == (F(1, 4), F(1, 4), F(1, 2))
    # the general route with Q = ones nu^T agrees
    via_q = limit_rank_general(p, ones_outer(nu.values, p.states))
    assert via_q.node_limit.values == report.node_limit.values


def test_personalization_gamma_rejects_zero_class():
    p = cycle_plus_absorber()
    nu = Distribution((F(1, 2), F(1, 2), F(0)))
    with pytest.raises(GammaReducible):
        personalization_gamma(nu, classify_states(p))


def test_extended_gamma_fixture():
    p = RowStochasticMatrix(
        StateSpace(3), ((1, 0, 0), (0, 1, 0), (F(1, 2), F(1, 4), F(1, 4)))
    )
    q = RowStochasticMatrix(
        StateSpace(3),
        ((0, F(1, 2), F(1, 2)), (F(1, 2), 0, F(1, 2)), (F(1, 2), F(1, 2), 0)),
    )
    report = limit_rank_extended(p, q)
    assert report.mode == "extended"
    assert report.class_masses.values == (F(5, 9), F(4, 9))
    assert report.node_limit.values == (F(5, 9), F(4, 9), F(0))
    # transient-free chains reduce to the plain construction
    p0 = cycle_plus_absorber()
    plain = build_gamma(uniform_matrix(3), classify_states(p0))
    ext = extended_gamma(p0, uniform_matrix(3), classify_states(p0))
    assert ext.gamma.rows == plain.gamma.rows


def test_theorem2_prediction_reports_uniform_masses():
    p = cycle_plus_absorber()
    pred = theorem2_prediction(p)
    assert pred.mode == "theorem2"
    assert pred.gamma_chain is None
    assert pred.class_masses.values == (F(1, 2), F(1, 2))
    assert pred.node_limit.values == (F(1, 4), F(1, 4), F(1, 2))


def test_report_to_json_schema_and_round_trip():
    p = cycle_plus_absorber()
    report = limit_rank_general(p, uniform_matrix(3))
    obj = report_to_json(report)
    assert list(obj.keys()) == REPORT_KEYS
    assert obj["gamma"] == [["2/3", "1/3"], ["2/3", "1/3"]]
    assert obj["node_limit"] == ["1/3", "1/3", "1/3"]
    json.dumps(obj)  # serializable
    obj2 = report_to_json(theorem2_prediction(p))
    assert obj2["gamma"] is None
    assert list(obj2.keys()) == REPORT_KEYS


def test_adjudicate_worked_fixture():
    p = cycle_plus_absorber()
    report = adjudicate(p, uniform_matrix(3))
    assert report["oracle_mode"] == "exact-polynomial"
    assert report["oracle"] == ["1/3", "1/3", "1/3"]
    assert report["methods"]["theorem3"]["verdict"] == "exact"
    assert report["methods"]["theorem2"]["verdict"] == "discrepant"
    assert report["methods"]["theorem2"]["max_deviation"] == "1/6"


def test_adjudicate_sweep_fallback_on_floats():
    p = cycle_plus_absorber().to_float()
    report = adjudicate(p, uniform_matrix(3).to_float())
    assert report["oracle_mode"] == "sweep-extrapolation"
    assert report["methods"]["theorem3"]["verdict"] == "pass"
    assert report["methods"]["theorem2"]["verdict"] == "discrepant"


def test_adjudicate_with_transients_uses_extended():
    p = RowStochasticMatrix(
        StateSpace(3), ((1, 0, 0), (0, 1, 0), (F(1, 2), F(1, 4), F(1, 4)))
    )
    q = RowStochasticMatrix(
        StateSpace(3),
        ((0, F(1, 2), F(1, 2)), (F(1, 2), 0, F(1, 2)), (F(1, 2), F(1, 2), 0)),
    )
    report = adjudicate(p, q)
    assert report["oracle_mode"] == "exact-polynomial"
    assert "extended" in report["methods"]
    assert report["methods"]["extended"]["verdict"] == "exact"


def test_general_route_matches_oracle_random():
    from znrank.arborescence import exact_limit_from_polynomials

    rng = rng_for("general-vs-oracle")
    for _ in range(10):
        sizes = rand_sizes(rng, rng.randint(2, 3), total_cap=5)
        p = rand_reducible_no_transient(rng, sizes)
        q, _ = rand_block_q(rng, sizes)
        report = limit_rank_general(p, q)
        oracle = exact_limit_from_polynomials(p, q)
        assert report.node_limit.values == oracle.values
