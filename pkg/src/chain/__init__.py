from src.chain.dynamics import (
    ChainConfig,
    empirical_distribution,
    empirical_transitions,
    empirical_tv,
    rejection_sample,
    rejection_samples,
    run,
    run_replicas,
    step,
)
from src.chain.rng import ProposalStream, make_rng
