"""A four-qubit start whose second stage refuses to be a dilemma.

Any state supported on 0000, 1100, 0011, 1111 that puts total weight
1/3 on the second pair's |00> component induces the same second-stage
2x2 table, with values 5/3, 10/3 and 7/3.  That table has three pure
equilibria, two of them asymmetric, so the second stage alone already
breaks the always-defect logic.
"""

from fractions import Fraction

import numpy as np

from qrgames import ITGame, PureState, it_batch_expected, make_pd, pure_nash
from qrgames.stagegames import Bimatrix


def second_stage_tables(state: PureState) -> tuple[np.ndarray, np.ndarray]:
    game = ITGame(state, make_pd(5, 3, 1, 0))
    t1 = np.empty((2, 2))
    t2 = np.empty((2, 2))
    for k3 in (0, 1):
        for k4 in (0, 1):
            payoffs = it_batch_expected(game, 0, 0, k3, k4)
            t1[k3, k4] = payoffs.p1_stage2
            t2[k3, k4] = payoffs.p2_stage2
    return t1, t2


def show(label: str, table: np.ndarray) -> None:
    rows = [
        " ".join(str(Fraction(v).limit_denominator(1000)).rjust(5) for v in row)
        for row in table
    ]
    print(f"{label}:  {rows[0]}")
    print(f"{'':{len(label)}}   {rows[1]}")


def main() -> None:
    splits = [(0.2, 0.3), (0.05, 0.5), (1 / 3, 0.1)]
    tables = []
    for w0000, w0011 in splits:
        state = PureState.from_terms(
            4,
            {
                "0000": np.sqrt(w0000),
                "1100": np.sqrt(1 / 3 - w0000),
                "0011": np.sqrt(w0011),
                "1111": np.sqrt(2 / 3 - w0011),
            },
        )
        tables.append(second_stage_tables(state))
        print(f"split w0000={w0000:.3f}, w0011={w0011:.3f}")

    t1, t2 = tables[0]
    for other1, other2 in tables[1:]:
        assert np.abs(t1 - other1).max() < 1e-12
        assert np.abs(t2 - other2).max() < 1e-12
    print("\nall splits induce the same second-stage table:\n")
    show("player 1", t1)
    show("player 2", t2)

    bm = Bimatrix(t1, t2, ("0", "1"), ("0", "1"))
    report = pure_nash(bm)
    print("\npure equilibria of that 2x2:")
    for eq in report.equilibria:
        print(f"  ({eq.row}, {eq.col})  payoffs "
              f"({eq.payoffs[0]:.4f}, {eq.payoffs[1]:.4f})  strict={eq.strict}")


if __name__ == "__main__":
    main()
