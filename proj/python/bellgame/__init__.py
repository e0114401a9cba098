"""Sequential betting games for CHSH tests.

Thin wrapper over the C++ core: the CHSH odds table, the add-half betting
strategy, the brute-force joint-distribution oracles, and the simulation
runner. See the project README for the configuration format.
"""

from bellgame._core import (
    CSV_HEADER,
    __version__,
    chsh_value,
    conditional_odds,
    correlation,
    kl_independence,
    kt_bet,
    limiting_rates,
    marginal_odds,
    mu,
    no_joint_witness,
    nu,
    odds,
    oracle_report,
    simulate,
    tsirelson,
    verify,
    w_closed_form,
)

__all__ = [
    "CSV_HEADER",
    "__version__",
    "chsh_value",
    "conditional_odds",
    "correlation",
    "kl_independence",
    "kt_bet",
    "limiting_rates",
    "marginal_odds",
    "mu",
    "no_joint_witness",
    "nu",
    "odds",
    "oracle_report",
    "simulate",
    "tsirelson",
    "verify",
    "w_closed_form",
]
