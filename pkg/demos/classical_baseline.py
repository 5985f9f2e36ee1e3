"""Sanity anchor: on the all-zero register the protocol is classical.

Ten qubits, five pairs, every flip choice lands on a definite basis
state, so the 32x32 payoff table must coincide cell for cell with the
ordinary twice-repeated game built from path sums.  This script checks
that and then walks one strategy profile move by move.
"""

import numpy as np

from qrgames import (
    PureState,
    RepGame,
    RepStrategy,
    classical_twice_repeated,
    make_pd,
    play_sequential,
    rep_bimatrix,
)


def main() -> None:
    stage = make_pd(5, 3, 1, 0)
    game = RepGame(PureState.basis(10, 0), stage)

    quantum = rep_bimatrix(game)
    classical = classical_twice_repeated(stage)
    gap = max(
        np.abs(quantum.payoffs1 - classical.payoffs1).max(),
        np.abs(quantum.payoffs2 - classical.payoffs2).max(),
    )
    print(f"largest |quantum - classical| cell gap: {gap:.3e}")

    # Grim-trigger-flavoured pair: start honest, defect forever after
    # any defection.  Encoded bits are stage1, then the reply to each
    # first-stage outcome 00, 01, 10, 11.
    s1 = RepStrategy(0, 0, 1, 1, 1)
    s2 = RepStrategy(0, 0, 1, 1, 1)
    transcript = play_sequential(game, s1, s2)
    print(f"\nprofile {s1.bits} vs {s2.bits}")
    print(f"first-stage choices: {transcript.stage1_choices}")
    for outcome, prob in transcript.outcome_distribution:
        print(f"  observed {outcome} with probability {prob:.3f}")
    e = transcript.expected
    print(f"totals: player 1 = {e.p1_stage1 + e.p1_stage2:.3f}, "
          f"player 2 = {e.p2_stage1 + e.p2_stage2:.3f}")

    # On the all-zero start only one branch is reachable, so the payoff
    # is just the honest path played twice.
    assert len(transcript.outcome_distribution) == 1


if __name__ == "__main__":
    main()
