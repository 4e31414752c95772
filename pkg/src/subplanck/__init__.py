"""Quantify sub-Planck phase-space structure by distilling squeezing.

Works entirely on one-dimensional quadrature probability densities in units
where the ground-state variance is 1/2.  A density is distilled through
virtual interference layers and a transmissivity-optimized ground-state
filter; variance below 1/2 anywhere in that pipeline certifies nonclassical
structure of the input.
"""

from .density import (
    GridDensity,
    GridSpec,
    MaximumLocation,
    convolve_gaussian,
    curvature_at,
    global_maxima,
    make_grid_density,
    mean,
    pow_scale,
    read_density_csv,
    shift,
    variance,
    write_density_csv,
)
from .depth import (
    DepthResult,
    fano_depth,
    subplanck_depth,
    thermal_fock_number_distribution,
    thermal_fock_wigner_origin,
    wigner_negativity_depth,
)
from .distill import (
    GROUND_VARIANCE,
    DistillConfig,
    DistillReport,
    asymptotic_variance,
    binary_sequence_distill,
    displace_to_origin,
    efficiency,
    filter_with_ground_state,
    nonuniversal_layer,
    optimize_filter,
    quantify,
    universal_distill,
)
from .errors import ConfigError, PreconditionError, QuantifierError, SolverError
from .oracle import ProtocolRun, ks_distance, sample_density, simulate_protocol
from .phonon import (
    PhononDistribution,
    PopulationFit,
    RabiModel,
    fit_populations,
    phonon_stats,
    rabi_signal,
    read_rabi_csv,
)
from .states import (
    StateSpec,
    airy_ai,
    cat_momentum_density,
    cubic_momentum_density,
    default_grid,
    fock_density,
    fock_mixture_density,
    gkp_position_density,
    realize,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "GridDensity",
    "GridSpec",
    "MaximumLocation",
    "convolve_gaussian",
    "curvature_at",
    "global_maxima",
    "make_grid_density",
    "mean",
    "pow_scale",
    "read_density_csv",
    "shift",
    "variance",
    "write_density_csv",
    "StateSpec",
    "airy_ai",
    "cat_momentum_density",
    "cubic_momentum_density",
    "default_grid",
    "fock_density",
    "fock_mixture_density",
    "gkp_position_density",
    "realize",
    "GROUND_VARIANCE",
    "DistillConfig",
    "DistillReport",
    "asymptotic_variance",
    "binary_sequence_distill",
    "displace_to_origin",
    "efficiency",
    "filter_with_ground_state",
    "nonuniversal_layer",
    "optimize_filter",
    "quantify",
    "universal_distill",
    "DepthResult",
    "fano_depth",
    "subplanck_depth",
    "thermal_fock_number_distribution",
    "thermal_fock_wigner_origin",
    "wigner_negativity_depth",
    "PhononDistribution",
    "PopulationFit",
    "RabiModel",
    "fit_populations",
    "phonon_stats",
    "rabi_signal",
    "read_rabi_csv",
    "ProtocolRun",
    "ks_distance",
    "sample_density",
    "simulate_protocol",
    "QuantifierError",
    "ConfigError",
    "PreconditionError",
    "SolverError",
]
