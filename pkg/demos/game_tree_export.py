"""Extensive form of a twice-played game, with a twist at the root.

A two-term start like sqrt(0.3)|0...0> + sqrt(0.7)|1...1> correlates
all five qubit pairs at once.  The game tree still has 119 nodes, but
half the chance branches get probability zero and the subtrees below
them, which would need a post-measurement state that does not exist,
are marked unreachable with undefined payoffs.

Usage: python3 game_tree_export.py [--out tree.json]
"""

import argparse
import collections

import numpy as np

from qrgames import PureState, RepGame, build_extensive, make_pd


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", help="write the JSON document here")
    args = parser.parse_args()

    state = PureState.from_terms(
        10, {"0" * 10: np.sqrt(0.3), "1" * 10: np.sqrt(0.7)}
    )
    tree = build_extensive(RepGame(state, make_pd(5, 3, 1, 0)))

    kinds = collections.Counter(node.kind for node in tree.nodes)
    print(f"nodes: {len(tree.nodes)} "
          f"({kinds['decision']} decision, {kinds['chance']} chance, "
          f"{kinds['terminal']} terminal)")

    info_sets = sorted({n.info_set for n in tree.nodes if n.info_set})
    print(f"information sets ({len(info_sets)}):")
    for name in info_sets:
        members = sum(1 for n in tree.nodes if n.info_set == name)
        print(f"  {name}  ({members} nodes)")

    unreachable = sum(1 for n in tree.nodes if not n.reachable)
    undefined = sum(
        1 for n in tree.nodes if n.kind == "terminal" and n.payoffs is None
    )
    print(f"unreachable nodes: {unreachable}")
    print(f"terminals with undefined payoffs: {undefined}")

    chance = next(n for n in tree.nodes if n.kind == "chance")
    weights = ", ".join(
        f"{a}:{p:.2f}" for a, p in zip(chance.actions, chance.probabilities)
    )
    print(f"chance weights after honest first-stage play: {weights}")

    if args.out:
        with open(args.out, "w") as fh:
            fh.write(tree.to_json())
        print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
