from src.ising.curie_weiss import (
    beta_grid,
    beta_sweep,
    counterexample_delta,
    counterexample_epsilon,
    counterexample_report,
    counterexample_set,
    cw_measure,
    ising_report,
    transport_verify,
)
