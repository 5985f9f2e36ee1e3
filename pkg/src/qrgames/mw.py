"""Single-stage 2x2 quantum game in the bit-flip protocol.

Both players share a two-qubit state; player 1 may flip qubit 1 and
player 2 qubit 2.  Payoffs are expectations of the diagonal observables
carrying the stage game's payoff entries, so the whole game collapses
to a 2x2 bimatrix over the operator choices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qstate import DiagonalObservable, FlipLayer, PureState, apply_flips, expectation
from .stagegames import Bimatrix, StageGame


def payoff_observable(
    stage: StageGame, player: int, num_qubits: int, qubit_pair: tuple[int, int]
) -> DiagonalObservable:
    """Diagonal observable reading one player's stage payoff off two qubits.

    The weight at basis index x is the player's payoff at the actions
    spelled by the two qubits, and every other qubit is ignored (the
    operator is the identity elsewhere).
    """
    qubit_a, qubit_b = qubit_pair
    indices = np.arange(2 ** num_qubits)
    bits_a = (indices >> (num_qubits - qubit_a)) & 1
    bits_b = (indices >> (num_qubits - qubit_b)) & 1
    table = stage.payoff_table(player)
    return DiagonalObservable(num_qubits, table[bits_a, bits_b])


@dataclass(frozen=True)
class MWGame:
    """One stage game played through a shared two-qubit state."""

    initial: PureState
    stage: StageGame

    def __post_init__(self) -> None:
        if self.initial.num_qubits != 2:
            raise ValueError("the single-stage game runs on exactly 2 qubits")


def mw_bimatrix(game: MWGame) -> Bimatrix:
    """The 2x2 bimatrix the protocol induces over operator choices.

    Cell (k1, k2) holds both players' expected payoffs after applying
    flip bits k1 and k2 to qubits 1 and 2.  On a basis initial state
    this is a relabeling of the stage table; on a superposition each
    cell mixes outcome entries with the Born weights.
    """
    observables = tuple(
        payoff_observable(game.stage, player, 2, (1, 2)) for player in (1, 2)
    )
    cells = []
    for k1 in (0, 1):
        row = []
        for k2 in (0, 1):
            final = apply_flips(game.initial, FlipLayer({1: k1, 2: k2}))
            row.append(tuple(expectation(final, obs) for obs in observables))
        cells.append(row)
    return Bimatrix.from_cells(cells, row_labels=("0", "1"), col_labels=("0", "1"))
