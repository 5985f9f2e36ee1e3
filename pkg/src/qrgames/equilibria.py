"""Equilibrium search over bimatrices and the twice-played protocol.

Pure Nash enumeration and strict-dominance checks work on any
:class:`~.stagegames.Bimatrix`.  Subgame-perfect search is provided for
the ten-qubit game whenever the initial state factors across the five
qubit pairs, because only then does each measurement outcome head a
self-contained one-stage subgame that backward induction can solve.
The cooperation analysis quantifies when an entangled first pair makes
mutual identity the unique stage equilibrium of a dilemma, which is
what lets the repeated game sustain cooperation on the path.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from .mw import MWGame, mw_bimatrix
from .qstate import OUTCOMES, FlipLayer, PureState, apply_flips
from .repeated10 import RepGame, factor_pairs
from .stagegames import Bimatrix, Payoffs, RepStrategy, StageGame


@dataclass(frozen=True)
class Equilibrium:
    """One equilibrium profile: table indices, payoffs, strictness."""

    row: int
    col: int
    payoffs: Payoffs
    strict: bool


@dataclass(frozen=True)
class EquilibriumReport:
    """Result of an equilibrium search, ordered by (row, col)."""

    kind: str
    tolerance: float
    equilibria: tuple[Equilibrium, ...]

    def to_json(
        self,
        row_labels: tuple[str, ...] | None = None,
        col_labels: tuple[str, ...] | None = None,
    ) -> str:
        entries = []
        for eq in self.equilibria:
            entry: dict = {
                "row": eq.row,
                "col": eq.col,
                "payoffs": [eq.payoffs[0], eq.payoffs[1]],
                "strict": eq.strict,
            }
            if row_labels is not None:
                entry["row_label"] = row_labels[eq.row]
            if col_labels is not None:
                entry["col_label"] = col_labels[eq.col]
            entries.append(entry)
        document = {
            "kind": self.kind,
            "tolerance": self.tolerance,
            "equilibria": entries,
        }
        return json.dumps(document, indent=2)


def pure_nash(bm: Bimatrix, tol: float = 1e-9) -> EquilibriumReport:
    """All pure Nash equilibria of a bimatrix.

    A profile is listed when neither player can gain more than ``tol``
    by a unilateral deviation.  The strict flag additionally demands
    that every deviation strictly loses, with no tolerance: profiles
    that tie an alternative best response are equilibria but not strict.
    """
    if tol < 0:
        raise ValueError("tolerance must be nonnegative")
    if bm.rows == 0 or bm.cols == 0:
        raise ValueError("cannot search an empty bimatrix")
    u1, u2 = bm.payoffs1, bm.payoffs2
    best1 = u1.max(axis=0)
    best2 = u2.max(axis=1)
    at_equilibrium = (u1 >= best1[None, :] - tol) & (u2 >= best2[:, None] - tol)
    lone_best1 = (u1 == best1[None, :]).sum(axis=0) == 1
    lone_best2 = (u2 == best2[:, None]).sum(axis=1) == 1
    strict = (
        (u1 == best1[None, :])
        & (u2 == best2[:, None])
        & lone_best1[None, :]
        & lone_best2[:, None]
    )
    found = tuple(
        Equilibrium(int(r), int(c), bm.cell(int(r), int(c)), bool(strict[r, c]))
        for r, c in np.argwhere(at_equilibrium)
    )
    return EquilibriumReport(kind="nash", tolerance=float(tol), equilibria=found)


def strictly_dominated(bm: Bimatrix, player: int) -> list[tuple[int, int]]:
    """Pairs (a, b): the player's strategy b beats a against everything.

    Returned in lexicographic order; an empty list means nothing is
    strictly dominated.
    """
    if player not in (1, 2):
        raise ValueError(f"player must be 1 or 2, got {player!r}")
    own_by_row = bm.payoffs1 if player == 1 else bm.payoffs2.T
    count = own_by_row.shape[0]
    return [
        (a, b)
        for a in range(count)
        for b in range(count)
        if a != b and bool(np.all(own_by_row[b] > own_by_row[a]))
    ]


def _stage1_distribution(
    first_factor: PureState, k1: int, k2: int
) -> dict[tuple[int, int], float]:
    flipped = apply_flips(first_factor, FlipLayer({1: k1, 2: k2}))
    weights = flipped.probabilities
    return {o: float(weights[2 * o[0] + o[1]]) for o in OUTCOMES}


def spe_pair_product(game: RepGame, tol: float = 1e-9) -> EquilibriumReport:
    """Subgame perfect equilibria of a pair-product twice-played game.

    Backward induction: solve the one-stage game of each outcome's qubit
    pair, then, for every way of selecting one second-stage equilibrium
    per outcome, fold the selected continuation values into a 2x2 game
    over the stage-1 flips and keep its equilibria.  Each hit is emitted
    as a full pair of five-bit strategies, indexed like
    :func:`~.repeated10.rep_bimatrix` rows and columns; payoffs are the
    two-stage totals.  An equilibrium is flagged strict when its stage-1
    equilibrium and all four selected continuations are strict.

    Raises ``ValueError`` if the initial state is not a pair product, or
    if some outcome's subgame has no pure equilibrium (reporting which).
    """
    factors = factor_pairs(game.initial)
    if factors is None:
        raise ValueError(
            "subgame search needs an initial state that factors across "
            "the five qubit pairs"
        )
    stage = game.stage
    stage1_bm = mw_bimatrix(MWGame(factors[0], stage))
    subgame_bm = {
        o: mw_bimatrix(MWGame(factors[2 * o[0] + o[1] + 1], stage)) for o in OUTCOMES
    }
    subgame_ne = {}
    for o in OUTCOMES:
        report = pure_nash(subgame_bm[o], tol=tol)
        if not report.equilibria:
            raise ValueError(
                f"no pure second-stage equilibrium after outcome {o[0]}{o[1]}"
            )
        subgame_ne[o] = report.equilibria
    distributions = {
        (k1, k2): _stage1_distribution(factors[0], k1, k2)
        for k1 in (0, 1)
        for k2 in (0, 1)
    }

    found = []
    for selection in product(*(subgame_ne[o] for o in OUTCOMES)):
        chosen = dict(zip(OUTCOMES, selection))
        cells = []
        for k1 in (0, 1):
            row = []
            for k2 in (0, 1):
                base = stage1_bm.cell(k1, k2)
                dist = distributions[(k1, k2)]
                extra1 = extra2 = 0.0
                for o in OUTCOMES:
                    value = subgame_bm[o].cell(chosen[o].row, chosen[o].col)
                    extra1 += dist[o] * value[0]
                    extra2 += dist[o] * value[1]
                row.append((base[0] + extra1, base[1] + extra2))
            cells.append(row)
        induced = Bimatrix.from_cells(cells, ("0", "1"), ("0", "1"))
        for eq in pure_nash(induced, tol=tol).equilibria:
            t1 = RepStrategy(
                stage1=eq.row,
                after_00=chosen[(0, 0)].row,
                after_01=chosen[(0, 1)].row,
                after_10=chosen[(1, 0)].row,
                after_11=chosen[(1, 1)].row,
            )
            t2 = RepStrategy(
                stage1=eq.col,
                after_00=chosen[(0, 0)].col,
                after_01=chosen[(0, 1)].col,
                after_10=chosen[(1, 0)].col,
                after_11=chosen[(1, 1)].col,
            )
            strict = eq.strict and all(c.strict for c in selection)
            found.append(Equilibrium(t1.index, t2.index, eq.payoffs, strict))
    found.sort(key=lambda eq: (eq.row, eq.col))
    return EquilibriumReport(
        kind="subgame-perfect", tolerance=float(tol), equilibria=tuple(found)
    )


def cooperation_bound(stage: StageGame) -> float:
    """Entanglement threshold below which mutual identity is the lone NE.

    For a dilemma with values T > R > P > S the bound on the weight
    x = |amplitude of 00|^2 of the shared pair state is
    min(T - R, P - S) / (T - R + P - S).
    """
    if not stage.is_pd:
        raise ValueError("cooperation threshold is defined for dilemma payoffs only")
    t, r, p, s = stage.pd_values
    return min(t - r, p - s) / ((t - r) + (p - s))


@dataclass(frozen=True)
class ScanSample:
    """One grid point of a cooperation scan.

    ``unique_cooperative_ne`` records whether the mutual-identity
    profile was the only pure equilibrium of the induced 2x2 game at
    this x; ``stage_payoff`` is its per-stage value x*R + (1-x)*P.
    """

    x: float
    unique_cooperative_ne: bool
    stage_payoff: float


@dataclass(frozen=True)
class CooperationAnalysis:
    """Closed-form threshold cross-checked against a grid scan."""

    payoffs: tuple[float, float, float, float]
    closed_form_bound: float
    empirical_bound: float
    grid_step: float
    samples: tuple[ScanSample, ...]

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["x", "unique_ne_flag", "Q"])
        for sample in self.samples:
            writer.writerow(
                [
                    format(sample.x, ".12g"),
                    int(sample.unique_cooperative_ne),
                    format(sample.stage_payoff, ".12g"),
                ]
            )
        return buffer.getvalue()

    def to_json(self) -> str:
        t, r, p, s = self.payoffs
        document = {
            "payoffs": {"T": t, "R": r, "P": p, "S": s},
            "closed_form_bound": self.closed_form_bound,
            "empirical_bound": self.empirical_bound,
            "grid_step": self.grid_step,
            "samples": [
                {
                    "x": sample.x,
                    "unique_ne_flag": sample.unique_cooperative_ne,
                    "Q": sample.stage_payoff,
                }
                for sample in self.samples
            ],
        }
        return json.dumps(document, indent=2)


def _pair_state(x: float) -> PureState:
    return PureState.from_terms(
        2, {"00": math.sqrt(x), "11": math.sqrt(1.0 - x)}
    )


def cooperation_scan(stage: StageGame, grid_step: float) -> CooperationAnalysis:
    """Sweep the pair-state weight x and test where cooperation locks in.

    For each grid point x in (0, 1) the shared pair state
    sqrt(x)|00> + sqrt(1-x)|11> induces a 2x2 game over the flip
    choices; the sample is flagged when (identity, identity) is its
    unique pure equilibrium.  The empirical bound is the largest flagged
    x (0.0 if none), and the closed form must agree within one grid
    step or the scan fails loudly.  Every flagged sample must also beat
    mutual defection: x*R + (1-x)*P > P.
    """
    if not stage.is_pd:
        raise ValueError("cooperation scan is defined for dilemma payoffs only")
    if not 0.0 < grid_step < 0.5:
        raise ValueError("grid step must lie in (0, 0.5)")
    t, r, p, s = stage.pd_values
    closed_form = cooperation_bound(stage)
    samples = []
    empirical = 0.0
    k = 1
    while k * grid_step < 1.0:
        x = k * grid_step
        k += 1
        report = pure_nash(mw_bimatrix(MWGame(_pair_state(x), stage)), tol=0.0)
        unique = len(report.equilibria) == 1 and (
            report.equilibria[0].row,
            report.equilibria[0].col,
        ) == (0, 0)
        q = x * r + (1.0 - x) * p
        if unique:
            empirical = x
            if not q > p:
                raise AssertionError(
                    f"stage payoff {q} fails to beat mutual defection at x={x}"
                )
        samples.append(ScanSample(x=x, unique_cooperative_ne=unique, stage_payoff=q))
    if abs(closed_form - empirical) > grid_step:
        raise AssertionError(
            f"scan bound {empirical} disagrees with closed form {closed_form}"
        )
    return CooperationAnalysis(
        payoffs=(t, r, p, s),
        closed_form_bound=closed_form,
        empirical_bound=empirical,
        grid_step=float(grid_step),
        samples=tuple(samples),
    )
