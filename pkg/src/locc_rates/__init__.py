"""Asymptotic LOCC transformation rates between multipartite pure states."""

from .functionals import (
    Ensemble,
    Functional,
    binary_entropy,
    check_additivity,
    check_chain_rule,
    check_continuity_estimate,
    check_monotone_on_average,
    continuity_a,
    continuity_b,
    cut_entropies,
    evaluate,
)
from .monoid import (
    BipartitePureMonoid,
    ToyMonoid,
    achievable_rate_lower_bound,
    conversion_probability,
    majorization_geq,
    monoid_of_bipartite_pure,
)
from .protocols import (
    binomial_decomposition,
    concentration_simulate,
    concentration_yield,
    continuity_construction,
    continuity_protocol_check,
    expected_log_ghz,
    log_binomial_bounds,
)
from .rates import RateEstimate, RateKind, bipartite_pure_rate, ghz_rate_bounds, rate_upper_bound
from .spectra import SchmidtSpectrum, schmidt_spectrum, spectrum_power, truncate_spectrum
from .states import (
    Cut,
    MixedState,
    PureState,
    direct_sum,
    epr,
    fidelity,
    ghz,
    purified_distance,
    reduced_state,
    schmidt_state,
    tensor,
)

__version__ = "0.1.0"
