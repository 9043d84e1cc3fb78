from src.percolation.lattice import (
    HexLattice,
    crossing_probability,
    crossing_run,
    crossing_set,
    duality_mismatches,
    has_crossing,
    has_crossing_batch,
    has_dual_crossing,
    parse_config,
    percolation_report,
    render_config,
    sample_crossing,
    sampler_agreement,
    seed_crossing,
)
