"""Services package: profiles, norms, ground-truth oracles, reconstruction and distances."""
from services.profiles import (
    PiecewiseLinearFunction,
    CriticalProfile,
    Reparametrization,
    canonicalize,
    star_values,
    total_variation,
    variation_split,
    variation_profiles,
    l_of,
    separation_margin,
    add,
    negate,
    scale,
    apply_reparam,
    reverse_time,
    sample_profile,
)
from services.norms import (
    WeightSequence,
    DpExtremes,
    weights_of,
    profile_of,
    dp_extremes,
    standard_norm,
    named_weights,
    default_catalog,
    norm_spectrum,
    classic_norm,
)
from services.oracle import (
    ConcentrationPlan,
    brute_force_norm,
    functional_F,
    make_concentrating_reparam,
    integral_functional,
    integral_norm_estimate,
)
from services.reconstruct import (
    NormOracle,
    ProfileOracle,
    ReconstructionReport,
    sn_spectrum,
    detect_l,
    extract_values,
    rebuild,
    reconstruct,
    verify_reconstruction,
)
from services.pseudodist import DistanceSandwich, npd_lower, npd_upper, sandwich

__all__ = [
    # Profiles
    'PiecewiseLinearFunction',
    'CriticalProfile',
    'Reparametrization',
    'canonicalize',
    'star_values',
    'total_variation',
    'variation_split',
    'variation_profiles',
    'l_of',
    'separation_margin',
    'add',
    'negate',
    'scale',
    'apply_reparam',
    'reverse_time',
    'sample_profile',

    # Norms
    'WeightSequence',
    'DpExtremes',
    'weights_of',
    'profile_of',
    'dp_extremes',
    'standard_norm',
    'named_weights',
    'default_catalog',
    'norm_spectrum',
    'classic_norm',

    # Oracle
    'ConcentrationPlan',
    'brute_force_norm',
    'functional_F',
    'make_concentrating_reparam',
    'integral_functional',
    'integral_norm_estimate',

    # Reconstruction
    'NormOracle',
    'ProfileOracle',
    'ReconstructionReport',
    'sn_spectrum',
    'detect_l',
    'extract_values',
    'rebuild',
    'reconstruct',
    'verify_reconstruction',

    # Pseudo-distance
    'DistanceSandwich',
    'npd_lower',
    'npd_upper',
    'sandwich',
]
