"""Where cooperation starts paying: the pair-weight threshold.

Give every qubit pair the state sqrt(x)|00> + sqrt(1-x)|11> and run
backward induction.  Below the closed-form bound
min(T - R, P - S) / ((T - R) + (P - S)) the unique subgame perfect
profile is all-identity, worth more than all-defect; past it the
all-flip profile joins in (and, for other payoff choices, takes over).
"""

import numpy as np

from qrgames import (
    PureState,
    RepGame,
    cooperation_bound,
    cooperation_scan,
    make_pd,
    spe_pair_product,
    tensor_all,
)


def describe(stage, x: float) -> None:
    pair = PureState.from_terms(2, {"00": np.sqrt(x), "11": np.sqrt(1 - x)})
    report = spe_pair_product(RepGame(tensor_all([pair] * 5), stage))
    eqs = report.equilibria
    if len(eqs) == 1:
        eq = eqs[0]
        print(f"  x = {x:.2f}: unique, {eq.row:05b} vs {eq.col:05b} worth "
              f"({eq.payoffs[0]:.2f}, {eq.payoffs[1]:.2f})")
    else:
        # Past the threshold the per-pair games tie and the selections
        # multiply; show the envelope instead of the whole list.
        best = max(sum(eq.payoffs) for eq in eqs)
        worst = min(sum(eq.payoffs) for eq in eqs)
        print(f"  x = {x:.2f}: {len(eqs)} profiles, joint payoffs from "
              f"{worst:.2f} to {best:.2f}")


def main() -> None:
    stage = make_pd(5, 3, 1, 0)
    bound = cooperation_bound(stage)
    print(f"closed-form bound for (5, 3, 1, 0): {bound:.6f}")

    analysis = cooperation_scan(stage, 0.01)
    print(f"scan at grid 0.01 says the identity profile is the unique")
    print(f"equilibrium up to x = {analysis.empirical_bound:.2f}")

    print("\nsubgame perfect profiles as x grows:")
    for x in (0.10, 0.20, 0.30, 0.40, 0.60):
        describe(stage, x)

    # An asymmetric start: entangle only the pair consulted after the
    # mutual-identity outcome 00, with slightly different payoffs.
    # Backward induction then keeps two profiles, one strictly better
    # than all-defect.
    other = make_pd(5, 4, 1, 0)
    pair = PureState.from_terms(2, {"00": np.sqrt(0.6), "11": np.sqrt(0.4)})
    zero = PureState.basis(2, 0)
    game = RepGame(tensor_all([zero, pair, zero, zero, zero]), other)
    print("\nentangling a single outcome pair under (5, 4, 1, 0):")
    for eq in spe_pair_product(game).equilibria:
        print(f"  {eq.row:05b} vs {eq.col:05b} worth "
              f"({eq.payoffs[0]:.2f}, {eq.payoffs[1]:.2f})")


if __name__ == "__main__":
    main()
