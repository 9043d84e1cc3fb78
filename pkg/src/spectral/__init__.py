from src.spectral.bounds import (
    analyze,
    corollary_bound,
    example_slow_family,
    slow_family_set,
    theorem1_certificate,
)
from src.spectral.conductance import conductance_exact, cut_ratio
from src.spectral.kernel import (
    Kernel,
    build_kernel,
    hitting_time,
    mixing_time,
    mixing_time_rational,
    spectral_gap,
    tv_curve,
)
