"""Strict positive definiteness of isotropic kernels on circles, spheres
and their products, decided combinatorially from the coefficient support
and cross-checked numerically through Gram matrices."""

from .certify import (
    Certificate,
    GammaFailure,
    ParityDeficit,
    QuadrantDeficit,
    TraceEntry,
    Verdict,
    certify_circle,
    certify_circle_sphere,
    certify_circle_sphere_gamma_loop,
    certify_circle_tph,
    certify_sphere,
    certify_two_spheres,
    sufficient_product,
)
from .errors import NotApplicableError, NumericalError, SamplingError, SpecFileError
from .geometry import (
    CirclePoint,
    EnhancedSet,
    S2HarmonicBasis,
    SpherePoint,
    build_enhanced,
    s2_quadrature,
    sample_config,
    sph_basis_s2,
)
from .gram import (
    BlockCheck,
    WitnessReport,
    check_pd,
    enhanced_block_check,
    gram_matrix,
    per_degree_forms,
    witness_parity_sphere,
    witness_product,
    witness_progression_circle,
)
from .kernels import (
    CoefficientScheme,
    KernelSpec,
    SpaceDescriptor,
    circle_space,
    circle_sphere_space,
    circle_tph_space,
    constant_scheme,
    eval_kernel,
    eval_marginal,
    geometric_scheme,
    kernel_values,
    marginal_matrix,
    sphere_space,
    support_of,
    truncated_parity_sum,
)
from .orthopoly import (
    circle_poly,
    circle_table,
    gegenbauer,
    gegenbauer_norm,
    gegenbauer_table,
    jacobi,
    jacobi_norm_at_one,
    jacobi_table,
    ratio_at,
)
from .supportsets import (
    ProgressionWitness,
    SupportSet1D,
    SupportSet2D,
    Term1D,
    derived_parity_tail_set,
    has_infinitely_many,
    meets_every_progression,
    one,
    prog,
    stabilization_bound,
    witness_avoids_window,
)

__version__ = "0.1.0"

__all__ = [
    "BlockCheck",
    "Certificate",
    "CirclePoint",
    "CoefficientScheme",
    "EnhancedSet",
    "GammaFailure",
    "KernelSpec",
    "NotApplicableError",
    "NumericalError",
    "ParityDeficit",
    "ProgressionWitness",
    "QuadrantDeficit",
    "S2HarmonicBasis",
    "SamplingError",
    "SpaceDescriptor",
    "SpecFileError",
    "SpherePoint",
    "SupportSet1D",
    "SupportSet2D",
    "Term1D",
    "TraceEntry",
    "Verdict",
    "WitnessReport",
    "build_enhanced",
    "certify_circle",
    "certify_circle_sphere",
    "certify_circle_sphere_gamma_loop",
    "certify_circle_tph",
    "certify_sphere",
    "certify_two_spheres",
    "check_pd",
    "circle_poly",
    "circle_space",
    "circle_sphere_space",
    "circle_table",
    "circle_tph_space",
    "constant_scheme",
    "derived_parity_tail_set",
    "enhanced_block_check",
    "eval_kernel",
    "eval_marginal",
    "gegenbauer",
    "gegenbauer_norm",
    "gegenbauer_table",
    "geometric_scheme",
    "gram_matrix",
    "has_infinitely_many",
    "jacobi",
    "jacobi_norm_at_one",
    "jacobi_table",
    "kernel_values",
    "marginal_matrix",
    "meets_every_progression",
    "one",
    "per_degree_forms",
    "prog",
    "ratio_at",
    "s2_quadrature",
    "sample_config",
    "sph_basis_s2",
    "sphere_space",
    "stabilization_bound",
    "sufficient_product",
    "support_of",
    "truncated_parity_sum",
    "witness_avoids_window",
    "witness_parity_sphere",
    "witness_product",
    "witness_progression_circle",
]
