"""Tests for equilibrium search, dominance and the cooperation scan."""

from __future__ import annotations

import itertools
import json

import numpy as np
import pytest

from qrgames.equilibria import (
    cooperation_bound,
    cooperation_scan,
    pure_nash,
    spe_pair_product,
    strictly_dominated,
)
from qrgames.mw import MWGame, mw_bimatrix
from qrgames.qstate import OUTCOMES, PureState, random_state, tensor_all
from qrgames.repeated10 import RepGame, rep_bimatrix
from qrgames.stagegames import (
    Bimatrix,
    RepStrategy,
    StageGame,
    classical_twice_repeated,
    make_bos,
    make_pd,
)

PD = make_pd(5, 3, 1, 0)


def brute_force_nash(bm, tol):
    """Quadratic-time equilibrium sweep used as an oracle."""
    found = []
    for row in range(bm.rows):
        for col in range(bm.cols):
            u1, u2 = bm.cell(row, col)
            best1 = max(bm.cell(r, col)[0] for r in range(bm.rows))
            best2 = max(bm.cell(row, c)[1] for c in range(bm.cols))
            if u1 >= best1 - tol and u2 >= best2 - tol:
                strict = (
                    sum(bm.cell(r, col)[0] >= u1 for r in range(bm.rows)) == 1
                    and sum(bm.cell(row, c)[1] >= u2 for c in range(bm.cols)) == 1
                )
                found.append((row, col, strict))
    return found


def brute_force_dominated(bm, player):
    table = bm.payoffs1 if player == 1 else bm.payoffs2.T
    pairs = []
    for loser in range(table.shape[0]):
        for winner in range(table.shape[0]):
            if winner == loser:
                continue
            if np.all(table[winner] > table[loser]):
                pairs.append((loser, winner))
    return pairs


# ---------------------------------------------------------------------------
# pure Nash search


def test_dilemma_and_coordination_equilibria():
    report = pure_nash(PD.stage_bimatrix())
    assert report.kind == "nash"
    assert [(eq.row, eq.col, eq.strict) for eq in report.equilibria] == [(1, 1, True)]
    assert report.equilibria[0].payoffs == (1.0, 1.0)

    bos = pure_nash(make_bos(3, 2, 1).stage_bimatrix())
    assert [(eq.row, eq.col) for eq in bos.equilibria] == [(0, 0), (1, 1)]
    assert all(eq.strict for eq in bos.equilibria)


@pytest.mark.parametrize("seed", range(12))
def test_search_matches_brute_force_on_random_tables(seed):
    rng = np.random.default_rng(seed)
    rows = int(rng.integers(2, 6))
    cols = int(rng.integers(2, 6))
    # Small integer payoffs make ties common enough to matter.
    u1 = rng.integers(0, 4, (rows, cols)).astype(float)
    u2 = rng.integers(0, 4, (rows, cols)).astype(float)
    labels_r = tuple(f"r{i}" for i in range(rows))
    labels_c = tuple(f"c{j}" for j in range(cols))
    bm = Bimatrix(u1, u2, labels_r, labels_c)

    report = pure_nash(bm, tol=0.0)
    got = [(eq.row, eq.col, eq.strict) for eq in report.equilibria]
    assert got == brute_force_nash(bm, 0.0)

    for player in (1, 2):
        assert strictly_dominated(bm, player) == brute_force_dominated(bm, player)


def test_tolerance_admits_near_ties():
    u1 = np.array([[1.0, 0.0], [1.0 - 1e-10, 0.0]])
    u2 = np.array([[1.0, 0.0], [1.0, 0.0]])
    bm = Bimatrix(u1, u2, ("a", "b"), ("x", "y"))
    exact = pure_nash(bm, tol=0.0)
    loose = pure_nash(bm, tol=1e-9)
    assert [(eq.row, eq.col) for eq in exact.equilibria] == [(0, 0)]
    assert [(eq.row, eq.col) for eq in loose.equilibria] == [(0, 0), (1, 0)]
    # Strictness stays an exact-arithmetic property; the tolerance only
    # widens which cells count as equilibria at all.
    assert [eq.strict for eq in loose.equilibria] == [True, False]


def test_weak_equilibria_of_the_shared_value_table():
    # A fractional 2x2 with row and column ties: three equilibria, none
    # strict, and the off-diagonal pair must both appear.
    u1 = np.array([[5.0, 10.0], [5.0, 7.0]]) / 3.0
    u2 = np.array([[5.0, 5.0], [10.0, 7.0]]) / 3.0
    bm = Bimatrix(u1, u2, ("0", "1"), ("0", "1"))
    report = pure_nash(bm, tol=1e-9)
    assert [(eq.row, eq.col) for eq in report.equilibria] == [(0, 0), (0, 1), (1, 0)]
    assert not any(eq.strict for eq in report.equilibria)


def test_search_validation():
    with pytest.raises(ValueError, match="nonnegative"):
        pure_nash(PD.stage_bimatrix(), tol=-1.0)
    with pytest.raises(ValueError, match="player must be 1 or 2"):
        strictly_dominated(PD.stage_bimatrix(), 3)


def test_report_serialization():
    report = pure_nash(PD.stage_bimatrix())
    plain = json.loads(report.to_json())
    assert plain["kind"] == "nash"
    assert plain["tolerance"] == 1e-9
    assert plain["equilibria"] == [
        {"row": 1, "col": 1, "payoffs": [1.0, 1.0], "strict": True}
    ]
    labeled = json.loads(report.to_json(row_labels=("C", "D"), col_labels=("C", "D")))
    assert labeled["equilibria"][0]["row_label"] == "D"
    assert labeled["equilibria"][0]["col_label"] == "D"


def test_stage_dominance_in_the_dilemma():
    assert strictly_dominated(PD.stage_bimatrix(), 1) == [(0, 1)]
    assert strictly_dominated(PD.stage_bimatrix(), 2) == [(0, 1)]
    assert strictly_dominated(make_bos(3, 2, 1).stage_bimatrix(), 1) == []


def test_classical_repeated_equilibria_all_pay_double_defection():
    """Equilibrium payoffs are pinned even though off-path bits are free."""
    report = pure_nash(classical_twice_repeated(PD))
    assert len(report.equilibria) == 16
    for eq in report.equilibria:
        assert eq.payoffs == (2.0, 2.0)
        assert not eq.strict
        s1 = RepStrategy.from_index(eq.row)
        s2 = RepStrategy.from_index(eq.col)
        # Defection on the path, and punishment where a deviation lands.
        assert s1.stage1 == 1 and s2.stage1 == 1
        assert s1.after_11 == 1 and s2.after_11 == 1
        assert s1.after_10 == 1
        assert s2.after_01 == 1


# ---------------------------------------------------------------------------
# subgame perfection


def pair_state(weight_00: float) -> PureState:
    return PureState.from_terms(
        2, {"00": np.sqrt(weight_00), "11": np.sqrt(1.0 - weight_00)}
    )


def backward_induction_oracle(factors, stage, tol=1e-9):
    """Independent subgame-perfect search over pair-product factors."""
    stage1_bm = mw_bimatrix(MWGame(factors[0], stage))
    subgames = {
        o: mw_bimatrix(MWGame(factors[2 * o[0] + o[1] + 1], stage))
        for o in OUTCOMES
    }
    subgame_ne = {
        o: [(row, col) for row, col, _ in brute_force_nash(subgames[o], tol)]
        for o in OUTCOMES
    }
    amp0 = factors[0].probabilities

    results = []
    for selection in itertools.product(*(subgame_ne[o] for o in OUTCOMES)):
        chosen = dict(zip(OUTCOMES, selection))

        def induced(k1, k2):
            total = np.array(stage1_bm.cell(k1, k2))
            for o in OUTCOMES:
                prob = amp0[(2 * o[0] + o[1]) ^ (2 * k1 + k2)]
                total = total + prob * np.array(
                    subgames[o].cell(*chosen[o])
                )
            return total

        cells = Bimatrix.from_cells(
            [[tuple(induced(k1, k2)) for k2 in (0, 1)] for k1 in (0, 1)],
            ("0", "1"),
            ("0", "1"),
        )
        for row, col, _ in brute_force_nash(cells, tol):
            s1 = RepStrategy(row, *(chosen[o][0] for o in OUTCOMES))
            s2 = RepStrategy(col, *(chosen[o][1] for o in OUTCOMES))
            payoffs = tuple(float(v) for v in induced(row, col))
            results.append(((s1.index, s2.index), payoffs))
    return sorted(results)


def test_classical_start_has_one_subgame_perfect_profile():
    report = spe_pair_product(RepGame(PureState.basis(10, 0), PD))
    assert report.kind == "subgame-perfect"
    assert [(eq.row, eq.col, eq.strict) for eq in report.equilibria] == [
        (31, 31, True)
    ]
    assert report.equilibria[0].payoffs == pytest.approx((2.0, 2.0), abs=1e-12)


def test_entangled_after_00_pair_yields_two_profiles():
    pair = pair_state(0.6)
    zero = PureState.basis(2, 0)
    stage = make_pd(5, 4, 1, 0)
    game = RepGame(tensor_all([zero, pair, zero, zero, zero]), stage)
    report = spe_pair_product(game)
    got = [(eq.row, eq.col) for eq in report.equilibria]
    assert got == [(15, 15), (31, 31)]
    assert report.equilibria[0].payoffs == pytest.approx((6.2, 6.2), abs=1e-9)
    assert report.equilibria[1].payoffs == pytest.approx((2.0, 2.0), abs=1e-9)
    assert all(eq.strict for eq in report.equilibria)

    # Subgame perfection refines plain equilibrium search.
    nash_profiles = {
        (eq.row, eq.col) for eq in pure_nash(rep_bimatrix(game)).equilibria
    }
    assert set(got) <= nash_profiles


def test_low_weight_start_keeps_everyone_on_identity():
    game = RepGame(tensor_all([pair_state(0.2)] * 5), PD)
    report = spe_pair_product(game)
    assert [(eq.row, eq.col) for eq in report.equilibria] == [(0, 0)]
    assert report.equilibria[0].payoffs == pytest.approx((2.8, 2.8), abs=1e-9)


@pytest.mark.parametrize("seed", [61, 62, 63, 64])
def test_subgame_search_matches_backward_induction_oracle(seed):
    rng = np.random.default_rng(seed)
    factors = [random_state(2, rng) for _ in range(5)]
    game = RepGame(tensor_all(factors), PD)
    report = spe_pair_product(game)
    got = sorted(
        ((eq.row, eq.col), tuple(round(v, 9) for v in eq.payoffs))
        for eq in report.equilibria
    )
    want = [
        (profile, tuple(round(v, 9) for v in payoffs))
        for profile, payoffs in backward_induction_oracle(factors, PD)
    ]
    assert got == want


def test_subgame_search_needs_pair_factors():
    ghz = PureState.from_terms(
        10, {"0" * 10: np.sqrt(0.3), "1" * 10: np.sqrt(0.7)}
    )
    with pytest.raises(ValueError, match="factors across"):
        spe_pair_product(RepGame(ghz, PD))


def test_subgame_search_reports_an_unsolvable_outcome():
    pennies = StageGame(
        (((1.0, -1.0), (-1.0, 1.0)), ((-1.0, 1.0), (1.0, -1.0)))
    )
    with pytest.raises(ValueError, match="no pure second-stage equilibrium"):
        spe_pair_product(RepGame(PureState.basis(10, 0), pennies))


# ---------------------------------------------------------------------------
# cooperation threshold


def test_closed_form_bound_values():
    assert cooperation_bound(PD) == pytest.approx(1.0 / 3.0, abs=1e-15)
    assert cooperation_bound(make_pd(5, 4, 1, 0)) == pytest.approx(0.5, abs=1e-15)
    with pytest.raises(ValueError, match="dilemma payoffs"):
        cooperation_bound(make_pd(1, 2, 3, 4))


def test_scan_flags_exactly_the_region_below_the_bound():
    analysis = cooperation_scan(PD, 0.05)
    assert analysis.closed_form_bound == pytest.approx(1.0 / 3.0, abs=1e-15)
    assert analysis.empirical_bound == pytest.approx(0.30, abs=1e-12)
    assert abs(analysis.empirical_bound - analysis.closed_form_bound) <= 0.05
    assert len(analysis.samples) == 19
    for k, sample in enumerate(analysis.samples, start=1):
        assert sample.x == pytest.approx(0.05 * k, abs=1e-12)
        assert sample.unique_cooperative_ne == (sample.x < 1.0 / 3.0)
        want_q = sample.x * 3.0 + (1.0 - sample.x) * 1.0
        assert sample.stage_payoff == pytest.approx(want_q, abs=1e-12)


def test_scan_serialization():
    analysis = cooperation_scan(PD, 0.25)
    lines = analysis.to_csv().splitlines()
    assert lines[0] == "x,unique_ne_flag,Q"
    assert lines[1] == "0.25,1,1.5"
    assert lines[2] == "0.5,0,2"
    assert len(lines) == 4

    doc = json.loads(analysis.to_json())
    assert doc["payoffs"] == {"T": 5.0, "R": 3.0, "P": 1.0, "S": 0.0}
    assert doc["closed_form_bound"] == pytest.approx(1.0 / 3.0)
    assert doc["empirical_bound"] == 0.25
    assert doc["samples"][0] == {"x": 0.25, "unique_ne_flag": True, "Q": 1.5}


def test_scan_validation():
    with pytest.raises(ValueError, match="dilemma payoffs"):
        cooperation_scan(make_bos(3, 2, 1), 0.1)
    for bad_step in (0.0, -0.1, 0.5, 0.7):
        with pytest.raises(ValueError, match=r"grid step"):
            cooperation_scan(PD, bad_step)
