"""Numerical verification lab for subcritical Beurling-type uncertainty
inequalities on R^n: Hermite expansions, the Bargmann transform, decay
envelopes and the Heisenberg-group machinery behind entire vectors."""

from .hermite import (
    HermiteExpansion,
    QuadratureConvergenceError,
    QuadratureRule,
    fourier_diagonal,
    gauss_hermite_rule,
    grlex_key,
    hermite_eval,
    hermite_eval_flagged,
    hermite_table,
    mehler_kernel,
    mehler_partial_sum,
    multiindex_enumerate,
    project,
    synthesize,
)
from .functions import (
    DecayBound,
    FiniteHermite,
    PolyGaussian,
    PolyGaussianForm,
    Sampled,
    TestFunction,
    dilate,
    fourier,
    fourier_quadrature,
    hermite_to_poly_gaussian,
    l2_norm,
    make_ft_eigenfunction,
    poly_gaussian_to_hermite,
)
from .functional import (
    FunctionalResult,
    ScalingFit,
    e_monomial_bound,
    e_poly_quad,
    exp_moment,
    fit_scaling_samples,
    ka_eval,
    scaling_fit,
    weighted_bdj,
)
from .bargmann import (
    ExactBargmann,
    QuadratureBargmann,
    TaylorCoefficients,
    bargmann_eval,
    bargmann_handle,
    coeff_bridge,
    coeff_bridge_inverse,
    contour_taylor,
    default_contour_radii,
    duality_check,
    polydisc_grid,
    product_estimate_check,
    zeta_monomial,
)
from .envelopes import (
    DecayEnvelope,
    DecayEnvelopeReport,
    DecayRateFit,
    a_from_t,
    decay_rate_fit,
    envelope_check,
    envelope_eval,
    envelope_eval_point,
    envelope_log_eval,
    hardy_regime,
    pointwise_gaussian_bound,
    pointwise_gaussian_constant,
    t_from_a,
    verify_pointwise_gaussian_bound,
)
from .heisenberg import (
    GroupElement,
    KAverageReport,
    kaverage_identity_check,
    laguerre_eval,
    laguerre_growth_fit,
    log_laguerre_negative,
    phi_k,
    phi_k_imag,
    poisson_semigroup,
    schrodinger_apply,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
