"""Why the 4-qubit shortcut cannot sustain cooperation.

With one qubit pair per stage, a first-stage flip changes nothing the
second stage can see, so a player's two stage decisions decouple and
flipping at stage 1 pays a fixed premium no matter what the start state
looks like, as long as its first-stage pattern is still a dilemma.  The
exhaustive 4x4 search then never finds an equilibrium in which anyone
keeps the identity at stage 1.
"""

import numpy as np

from qrgames import (
    ITGame,
    PureState,
    it_no_cooperation_check,
    it_pure_bimatrix,
    make_pd,
    sample_dilemma_state,
)

# Pure strategies in table order: stage-1 flip bit, stage-2 flip bit.
LABELS = ["00", "01", "10", "11"]


def inspect(name: str, state: PureState) -> None:
    game = ITGame(state, make_pd(5, 3, 1, 0))
    verdict = it_no_cooperation_check(game)
    bm = it_pure_bimatrix(game)

    print(f"--- {name} ---")
    print("total payoffs over both stages (rows: player 1 flips k1 k3):")
    header = "      " + "  ".join(f"{c:>10}" for c in LABELS)
    print(header)
    for i, row_label in enumerate(LABELS):
        cells = "  ".join(
            f"({bm.payoffs1[i, j]:.2f},{bm.payoffs2[i, j]:.2f})".rjust(10)
            for j in range(4)
        )
        print(f"  {row_label}  {cells}")
    for who, gaps in ((1, verdict.player1_gaps), (2, verdict.player2_gaps)):
        print(f"stage-1 flip premium, player {who}: "
              f"({gaps[0]:.4f}, {gaps[1]:.4f})")
    eqs = ", ".join(
        f"({LABELS[r]}, {LABELS[c]})" for r, c in verdict.equilibria
    )
    print(f"pure equilibria: {eqs}")
    print(f"cooperation excluded: {verdict.cooperation_excluded}\n")


def main() -> None:
    inspect("product start |0000>", PureState.basis(4, 0))

    rng = np.random.default_rng(7)
    state = sample_dilemma_state(make_pd(5, 3, 1, 0), rng)
    inspect("random dilemma-consistent start", state)


if __name__ == "__main__":
    main()
