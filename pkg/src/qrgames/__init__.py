"""Simulation and equilibrium analysis of twice-played 2x2 quantum games.

The package models a 2x2 stage game (a dilemma or a coordination game)
played twice through bit-flip protocols on small qubit registers:

- ``mw``: the one-stage protocol on a shared two-qubit state, the
  building block everything else reduces to.
- ``repeated10``: the ten-qubit protocol for two stages, with
  batch and sequential (measure-in-the-middle) evaluation paths,
  32x32 strategy tables, and extensive-form trees.
- ``iqbaltoor``: the rival four-qubit protocol that writes both stages
  before measuring, plus the analysis showing it cannot sustain
  first-stage cooperation in a dilemma.
- ``equilibria``: pure Nash enumeration, strict dominance,
  backward-induction subgame perfection for pair-product states, and
  the cooperation threshold of the entangled stage game.
- ``qstate``/``stagegames``: dense state vectors, flips, projective
  pair measurements, ensembles, payoff tables, strategy encodings.
- ``cli``: the ``qrgames`` command.
"""

from .qstate import (
    OUTCOMES,
    DiagonalObservable,
    Ensemble,
    FlipLayer,
    PureState,
    apply_flips,
    basis_index,
    bits_of,
    expectation,
    measure_pair,
    random_state,
    tensor_all,
)
from .stagegames import (
    Bimatrix,
    ExpectedPayoffs,
    RepStrategy,
    StageGame,
    all_strategies,
    classical_twice_repeated,
    make_bos,
    make_pd,
    qubit_count,
)
from .mw import MWGame, mw_bimatrix, payoff_observable
from .iqbaltoor import (
    IT_PURE_STRATEGIES,
    IT_STRATEGY_LABELS,
    ITGame,
    ITStrategy,
    NoCooperationVerdict,
    Stage1Pattern,
    it_batch_expected,
    it_expected,
    it_no_cooperation_check,
    it_pure_bimatrix,
    it_stage1_pattern,
    sample_dilemma_state,
)
from .repeated10 import (
    ExtensiveTree,
    MixedRepStrategy,
    OutcomeBranch,
    PlayTranscript,
    RepGame,
    TreeNode,
    build_extensive,
    factor_pairs,
    mixed_payoffs,
    outcome_qubit_pair,
    play_batch,
    play_sequential,
    rep_bimatrix,
    rep_component_tables,
    strategy_qubit_map,
    two_term_amplitudes,
)
from .equilibria import (
    CooperationAnalysis,
    Equilibrium,
    EquilibriumReport,
    ScanSample,
    cooperation_bound,
    cooperation_scan,
    pure_nash,
    spe_pair_product,
    strictly_dominated,
)

__version__ = "0.1.0"

__all__ = [
    "OUTCOMES",
    "DiagonalObservable",
    "Ensemble",
    "FlipLayer",
    "PureState",
    "apply_flips",
    "basis_index",
    "bits_of",
    "expectation",
    "measure_pair",
    "random_state",
    "tensor_all",
    "Bimatrix",
    "ExpectedPayoffs",
    "RepStrategy",
    "StageGame",
    "all_strategies",
    "classical_twice_repeated",
    "make_bos",
    "make_pd",
    "qubit_count",
    "MWGame",
    "mw_bimatrix",
    "payoff_observable",
    "IT_PURE_STRATEGIES",
    "IT_STRATEGY_LABELS",
    "ITGame",
    "ITStrategy",
    "NoCooperationVerdict",
    "Stage1Pattern",
    "it_batch_expected",
    "it_expected",
    "it_no_cooperation_check",
    "it_pure_bimatrix",
    "it_stage1_pattern",
    "sample_dilemma_state",
    "ExtensiveTree",
    "MixedRepStrategy",
    "OutcomeBranch",
    "PlayTranscript",
    "RepGame",
    "TreeNode",
    "build_extensive",
    "factor_pairs",
    "mixed_payoffs",
    "outcome_qubit_pair",
    "play_batch",
    "play_sequential",
    "rep_bimatrix",
    "rep_component_tables",
    "strategy_qubit_map",
    "two_term_amplitudes",
    "CooperationAnalysis",
    "Equilibrium",
    "EquilibriumReport",
    "ScanSample",
    "cooperation_bound",
    "cooperation_scan",
    "pure_nash",
    "spe_pair_product",
    "strictly_dominated",
    "__version__",
]
