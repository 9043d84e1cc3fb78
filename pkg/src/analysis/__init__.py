from src.analysis.monotone import (
    check_gglrs,
    crosscheck_mincut,
    delta_exact,
    delta_sampled,
    epsilon,
    epsilon_bruteforce,
    epsilon_mincut,
    gglrs_sweep,
)
