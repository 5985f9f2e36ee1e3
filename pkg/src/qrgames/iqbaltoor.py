"""Four-qubit protocol that writes both stages before measuring.

Player 1 controls qubits 1 and 3, player 2 qubits 2 and 4; qubits 1-2
carry the first stage and qubits 3-4 the second.  Strategies mix the
identity and the flip independently per qubit.  Because one pair of
qubits must hold the whole second stage, a player cannot condition the
second-stage move on the first-stage outcome, and this module's
analysis routines quantify what that costs: whenever the first-stage
payoff pattern is a genuine dilemma, flipping at stage 1 strictly
dominates and no pure equilibrium cooperates there.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .qstate import Ensemble, FlipLayer, PureState, apply_flips, expectation
from .stagegames import Bimatrix, ExpectedPayoffs, StageGame
from .mw import payoff_observable


@dataclass(frozen=True)
class ITStrategy:
    """Per-qubit flip probabilities for one player.

    ``stage1_flip_prob`` mixes the operator on the player's first-stage
    qubit, ``stage2_flip_prob`` on the second-stage qubit, and the two
    draws are independent.  A pure strategy has both probabilities in
    {0, 1}; each player has exactly four of those.
    """

    stage1_flip_prob: float
    stage2_flip_prob: float

    def __post_init__(self) -> None:
        for name in ("stage1_flip_prob", "stage2_flip_prob"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value!r}")

    @classmethod
    def pure(cls, stage1_bit: int, stage2_bit: int) -> "ITStrategy":
        return cls(float(stage1_bit), float(stage2_bit))

    @property
    def is_pure(self) -> bool:
        return self.stage1_flip_prob in (0.0, 1.0) and self.stage2_flip_prob in (
            0.0,
            1.0,
        )


IT_PURE_STRATEGIES: tuple[ITStrategy, ...] = tuple(
    ITStrategy.pure(k1, k2) for k1, k2 in ((0, 0), (0, 1), (1, 0), (1, 1))
)
IT_STRATEGY_LABELS: tuple[str, ...] = ("00", "01", "10", "11")


@dataclass(frozen=True)
class ITGame:
    """Four-qubit game: shared initial state plus the stage payoffs."""

    initial: PureState
    stage: StageGame

    def __post_init__(self) -> None:
        if self.initial.num_qubits != 4:
            raise ValueError("this protocol runs on exactly 4 qubits")


def _observables(stage: StageGame):
    """The four payoff observables, keyed (player, stage)."""
    return {
        (player, 1): payoff_observable(stage, player, 4, (1, 2))
        for player in (1, 2)
    } | {
        (player, 2): payoff_observable(stage, player, 4, (3, 4))
        for player in (1, 2)
    }


def _mix(flip_prob: float) -> list[tuple[float, int]]:
    options = [(1.0 - flip_prob, 0), (flip_prob, 1)]
    return [(p, bit) for p, bit in options if p > 0.0]


def it_expected(game: ITGame, s1: ITStrategy, s2: ITStrategy) -> ExpectedPayoffs:
    """Expected payoffs per player and stage under (possibly mixed) strategies.

    The final density operator is represented as the ensemble of the up
    to 16 flip-layer images of the initial state, weighted by the four
    independent per-qubit mixing probabilities; stage-1 mixing is applied
    first and stage-2 mixing on top of it.  Expectations of the diagonal
    payoff observables are exact on that ensemble.
    """
    stage1_members = [
        (p1 * p2, FlipLayer({1: k1, 2: k2}))
        for p1, k1 in _mix(s1.stage1_flip_prob)
        for p2, k2 in _mix(s2.stage1_flip_prob)
    ]
    members = []
    for weight, first_layer in stage1_members:
        mid = apply_flips(game.initial, first_layer)
        for p3, k3 in _mix(s1.stage2_flip_prob):
            for p4, k4 in _mix(s2.stage2_flip_prob):
                final = apply_flips(mid, FlipLayer({3: k3, 4: k4}))
                members.append((weight * p3 * p4, final))
    ensemble = Ensemble(tuple(members))
    obs = _observables(game.stage)
    return ExpectedPayoffs(
        p1_stage1=expectation(ensemble, obs[(1, 1)]),
        p1_stage2=expectation(ensemble, obs[(1, 2)]),
        p2_stage1=expectation(ensemble, obs[(2, 1)]),
        p2_stage2=expectation(ensemble, obs[(2, 2)]),
    )


def it_batch_expected(
    game: ITGame, k1: int, k2: int, k3: int, k4: int
) -> ExpectedPayoffs:
    """Pure-profile payoffs computed the short way: one combined flip layer.

    For pure strategies the sequential mixing above collapses to a
    single flip mask, so this must agree with :func:`it_expected`
    exactly; keeping both paths makes that equivalence testable.
    """
    final = apply_flips(game.initial, FlipLayer({1: k1, 2: k2, 3: k3, 4: k4}))
    obs = _observables(game.stage)
    return ExpectedPayoffs(
        p1_stage1=expectation(final, obs[(1, 1)]),
        p1_stage2=expectation(final, obs[(1, 2)]),
        p2_stage1=expectation(final, obs[(2, 1)]),
        p2_stage2=expectation(final, obs[(2, 2)]),
    )


def it_pure_bimatrix(game: ITGame) -> Bimatrix:
    """4x4 bimatrix of total payoffs over both players' pure strategies.

    Rows and columns are labeled ``stage1_bit stage2_bit``; the cell
    holds (E11 + E12, E21 + E22).
    """
    cells = []
    for s1 in IT_PURE_STRATEGIES:
        row = []
        for s2 in IT_PURE_STRATEGIES:
            payoffs = it_batch_expected(
                game,
                int(s1.stage1_flip_prob),
                int(s2.stage1_flip_prob),
                int(s1.stage2_flip_prob),
                int(s2.stage2_flip_prob),
            )
            row.append(payoffs.totals)
        cells.append(row)
    return Bimatrix.from_cells(cells, IT_STRATEGY_LABELS, IT_STRATEGY_LABELS)


@dataclass(frozen=True)
class Stage1Pattern:
    """First-stage payoff pattern induced by the initial state.

    ``r``, ``s``, ``t``, ``p`` are player 1's first-stage expectations
    at stage-1 choices (0,0), (0,1), (1,0), (1,1).  ``symmetric`` says
    player 2's first-stage expectations form the mirrored table
    (t at (0,1), s at (1,0), same diagonal), which makes the induced
    interaction a symmetric 2x2 game.  ``pd_consistent`` requires both
    the symmetry and the strict dilemma ordering t > r > p > s with
    2r > t + s; only then do the no-cooperation gap identities below
    apply to both players.
    """

    r: float
    s: float
    t: float
    p: float
    symmetric: bool
    pd_consistent: bool


def it_stage1_pattern(game: ITGame, tol: float = 1e-9) -> Stage1Pattern:
    """Classify the first-stage payoff pattern of an initial state.

    Stage-2 choices are irrelevant here because the stage-1 observables
    act as the identity on qubits 3 and 4.
    """
    obs = _observables(game.stage)
    e1 = {}
    e2 = {}
    for k1, k2 in product((0, 1), repeat=2):
        final = apply_flips(game.initial, FlipLayer({1: k1, 2: k2}))
        e1[(k1, k2)] = expectation(final, obs[(1, 1)])
        e2[(k1, k2)] = expectation(final, obs[(2, 1)])
    r, s, t, p = e1[(0, 0)], e1[(0, 1)], e1[(1, 0)], e1[(1, 1)]
    symmetric = (
        abs(e2[(0, 0)] - r) <= tol
        and abs(e2[(0, 1)] - t) <= tol
        and abs(e2[(1, 0)] - s) <= tol
        and abs(e2[(1, 1)] - p) <= tol
    )
    ordered = t > r > p > s and 2 * r > t + s
    return Stage1Pattern(
        r=r, s=s, t=t, p=p, symmetric=symmetric, pd_consistent=symmetric and ordered
    )


@dataclass(frozen=True)
class NoCooperationVerdict:
    """Outcome of the exhaustive cooperation check on the 4x4 game.

    ``player1_gaps``/``player2_gaps`` hold the strict-dominance margins
    gained by flipping at stage 1, keyed by the opponent's stage-1 bit;
    they equal (t - r, p - s) of the stage-1 pattern.  ``equilibria``
    lists the pure equilibria of the 4x4 bimatrix (as row/col indices
    into the pure-strategy order 00, 01, 10, 11), and
    ``cooperation_excluded`` says none of them keeps a stage-1 identity.
    """

    pattern: Stage1Pattern
    player1_gaps: tuple[float, float]
    player2_gaps: tuple[float, float]
    equilibria: tuple[tuple[int, int], ...]
    equilibrium_payoffs: tuple[tuple[float, float], ...]
    cooperation_excluded: bool


def it_no_cooperation_check(game: ITGame, tol: float = 1e-9) -> NoCooperationVerdict:
    """Verify that flipping at stage 1 strictly dominates staying put.

    Requires a dilemma-consistent first-stage pattern (see
    :func:`it_stage1_pattern`); raises ``ValueError`` otherwise, since
    the dominance argument has nothing to say in that case.

    Checks, by exhaustive comparison over the 4x4 pure bimatrix, that
    switching one's stage-1 operator from identity to flip strictly
    raises the total payoff against every opponent strategy, that the
    margin depends only on the opponent's stage-1 bit, and that no pure
    equilibrium of the bimatrix contains a stage-1 identity choice.
    """
    from .equilibria import pure_nash

    pattern = it_stage1_pattern(game, tol=tol)
    if not pattern.pd_consistent:
        raise ValueError(
            "first-stage pattern is not dilemma-consistent; "
            "the no-cooperation argument does not apply"
        )
    bm = it_pure_bimatrix(game)

    def gaps_for(player: int) -> tuple[float, float]:
        # Strategy index layout: stage1_bit * 2 + stage2_bit.
        table = bm.payoffs1 if player == 1 else bm.payoffs2
        margins: dict[int, list[float]] = {0: [], 1: []}
        for own_stage2 in (0, 1):
            keep = own_stage2            # stage1 = 0
            flip = 2 + own_stage2        # stage1 = 1
            for opponent in range(4):
                opponent_stage1 = opponent // 2
                if player == 1:
                    margin = table[flip, opponent] - table[keep, opponent]
                else:
                    margin = table[opponent, flip] - table[opponent, keep]
                if margin <= 0:
                    raise AssertionError(
                        f"stage-1 flip fails to dominate for player {player}"
                    )
                margins[opponent_stage1].append(float(margin))
        results = []
        for bit, expected in ((0, pattern.t - pattern.r), (1, pattern.p - pattern.s)):
            spread = max(margins[bit]) - min(margins[bit])
            if spread > tol or abs(margins[bit][0] - expected) > tol:
                raise AssertionError(
                    "dominance margin does not match the stage-1 pattern"
                )
            results.append(margins[bit][0])
        return (results[0], results[1])

    report = pure_nash(bm, tol=tol)
    profiles = tuple((eq.row, eq.col) for eq in report.equilibria)
    payoffs = tuple(eq.payoffs for eq in report.equilibria)
    no_stage1_identity = all(row >= 2 and col >= 2 for row, col in profiles)
    return NoCooperationVerdict(
        pattern=pattern,
        player1_gaps=gaps_for(1),
        player2_gaps=gaps_for(2),
        equilibria=profiles,
        equilibrium_payoffs=payoffs,
        cooperation_excluded=no_stage1_identity,
    )


def sample_dilemma_state(
    stage: StageGame, rng: np.random.Generator, max_tries: int = 200
) -> PureState:
    """Random 4-qubit initial state with a dilemma-consistent pattern.

    The first-stage pattern depends only on the marginal distribution of
    qubits 1-2, so the sampler draws that marginal directly: equal mass
    on the 01 and 10 blocks (the symmetry the pattern requires) and a
    strong bias toward 00 (which keeps the strict ordering t > r > p > s
    likely).  Each block gets an independent random two-qubit tail, so
    the returned states are generically entangled.  Draws that still
    miss the ordering are rejected and retried.
    """
    if not stage.is_pd:
        raise ValueError("dilemma-consistent sampling needs dilemma payoffs")
    for _ in range(max_tries):
        w00, anti, w11 = rng.dirichlet((8.0, 1.0, 1.0))
        weights = (w00, anti / 2.0, anti / 2.0, w11)
        amps = np.zeros(16, dtype=complex)
        for block, weight in enumerate(weights):
            tail = rng.standard_normal(4) + 1j * rng.standard_normal(4)
            tail *= np.sqrt(weight) / np.linalg.norm(tail)
            amps[4 * block : 4 * block + 4] = tail
        state = PureState(4, amps / np.linalg.norm(amps))
        if it_stage1_pattern(ITGame(state, stage)).pd_consistent:
            return state
    raise RuntimeError(
        f"no dilemma-consistent state found in {max_tries} draws"
    )
