"""Smoke tests for the python bindings."""

import json
import math

import bellgame


def test_table_constants():
    assert math.isclose(bellgame.mu(), (2 - math.sqrt(2)) / 8, rel_tol=0, abs_tol=1e-15)
    assert math.isclose(bellgame.nu(), (2 + math.sqrt(2)) / 8, rel_tol=0, abs_tol=1e-15)
    assert math.isclose(bellgame.odds(1, -1, 1, 4), bellgame.mu(), abs_tol=1e-16)
    assert math.isclose(bellgame.marginal_odds(1, 1), 0.5, abs_tol=1e-15)
    assert math.isclose(
        bellgame.conditional_odds(-1, 1, 1, 4), 2 * bellgame.mu(), abs_tol=1e-15
    )
    assert math.isclose(bellgame.correlation(1, 3), -1 / math.sqrt(2), abs_tol=1e-12)
    assert math.isclose(bellgame.tsirelson(), -2 * math.sqrt(2), abs_tol=1e-12)


def test_kt_bet():
    assert bellgame.kt_bet([0, 0, 0, 0]) == [0.25, 0.25, 0.25, 0.25]
    bet = bellgame.kt_bet([3, 1])
    assert math.isclose(bet[0], 0.7, abs_tol=1e-15)
    assert math.isclose(bet[1], 0.3, abs_tol=1e-15)


def test_chsh_oracle():
    point = [0.0] * 16
    point[0] = 1.0  # the all-plus quadruple
    assert bellgame.chsh_value(point) == 2.0
    uniform = [1 / 16] * 16
    assert bellgame.chsh_value(uniform) == 0.0

    witness = bellgame.no_joint_witness()
    assert witness["witness"] is True
    assert witness["bound_violated"] is True
    assert witness["infeasible"] is True


def test_limiting_rates():
    quantum = bellgame.limiting_rates("quantum")
    assert quantum["kl"] > 0.1
    independent = bellgame.limiting_rates("independent")
    assert independent["kl"] == 0.0
    assert math.isclose(independent["k_rate"], math.log(2) / 2, abs_tol=1e-12)


def test_w_closed_form():
    counts = [[0] * 4 for _ in range(16)]
    counts[0][0] = 1
    counts[5][2] = 1
    assert math.isclose(bellgame.w_closed_form(counts), math.log(2), abs_tol=1e-12)
    assert math.isclose(bellgame.kl_independence(counts), math.log(2), abs_tol=1e-12)


CONFIG = """
protocol = closed
rounds = 400
seed = 11
snapshot_stride = 1
output = both

[nature]
kind = quantum
"""


def test_simulate_and_verify_round_trip():
    first = bellgame.simulate(CONFIG)
    second = bellgame.simulate(CONFIG)
    assert first["exit_code"] == 0
    assert first["csv"] == second["csv"]
    assert first["json"] == second["json"]

    summary = json.loads(first["json"])
    assert summary["schema_version"] == 1
    assert summary["final"]["n"] == 400
    assert summary["final"]["logW_AB"] > 0

    checked = bellgame.verify(first["csv"])
    assert checked["exit_code"] == 0, checked["detail"]


def test_violation_reported():
    config = """
protocol = locality
rounds = 50
seed = 3

[nature]
kind = fixed_lambda
lambda = ++++
"""
    result = bellgame.simulate(config)
    assert result["exit_code"] == 3
    assert result["violation_round"] >= 1


def test_oracle_report_is_json():
    report = json.loads(bellgame.oracle_report())
    assert math.isclose(report["mu"], (2 - math.sqrt(2)) / 8, abs_tol=1e-15)
    assert report["no_joint_witness"]["witness"] is True
