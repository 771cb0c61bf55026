"""Cross checks: matrix model, compression grid, fdim recomposition."""

import json
from fractions import Fraction

from freecore.oracle import (
    fdim_recomposition,
    grid_agreement,
    run_oracle_checks,
    simulate_pair_atoms,
    two_index_scenarios,
)

F = Fraction


def test_two_index_scenarios_enumeration():
    scenarios = two_index_scenarios(steps=2)
    assert len(scenarios) == 18
    for sc in scenarios:
        assert sc.indices == ("o", "2")
        assert sc.gamma["2"] <= min(sc.beta["o"], sc.beta["2"])


def test_grid_agreement_no_mismatches():
    report = grid_agreement(steps=4)
    assert report["checked"] > 0
    assert report["mismatches"] == 0
    assert report["details"] == []


def test_fdim_recomposition_exact():
    report = fdim_recomposition(samples=60, seed=11)
    assert report["failures"] == []
    assert report["accepted"] > 0
    assert report["accepted"] + report["rejected"] == report["samples"]


def test_simulation_recovers_atoms_exactly():
    report = simulate_pair_atoms(
        (F(1, 2), F(1, 2)), (F(9, 10), F(1, 20), F(1, 20)), min_dim=40, trials=2
    )
    assert report["dimension"] % 20 == 0
    assert report["expected"] == [0.4, 0.4]
    assert report["agrees"]


def test_simulation_sees_every_qualifying_pair():
    # the heavy-light pairing produces a second, smaller atom
    report = simulate_pair_atoms(
        (F(4, 5), F(1, 10), F(1, 10)), (F(7, 10), F(3, 10)), min_dim=50, trials=2
    )
    assert report["expected"] == [0.5, 0.1]
    assert report["agrees"]


def test_run_oracle_checks_bundle():
    report = run_oracle_checks(steps=3, samples=30, simulate=True)
    assert report["ok"]
    assert report["grid"]["mismatches"] == 0
    assert not report["fdim"]["failures"]
    assert report["atoms"]["agrees"]
    json.dumps(report)  # the bundle must serialize as is
