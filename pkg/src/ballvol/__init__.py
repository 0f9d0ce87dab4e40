"""Norms and sublevel-set volumes of n-variate homogeneous forms.

The package represents a degree-d form by its coefficients in the
rescaled monomial basis, where the Bombieri inner product is the plain
dot product.  On top of that sit sphere norms, Monte-Carlo volume
estimators based on the Laplace identity and on polar coordinates,
sum-of-squares Gram machinery with Schatten norms and projections, and
projected-subgradient solvers plus randomized verifiers for the two
volume-minimization programs whose optimum is the ball form
b(x) = |x|^d.
"""

from .forms import (
    Form,
    MultiIndexTable,
    apply_orthogonal,
    ball_form,
    bombieri_norm,
    bombieri_norm_ball_exact,
    bombieri_product,
    check_orthogonal,
    compose_linear,
    differentiate,
    evaluate,
    gradient_forms,
    monomial_from_rescaled,
    multi_index_table,
    multinomial,
    nuclear_norm_ball,
    nuclear_upper_bound,
    power_form,
    random_orthogonal,
    rescaled_from_monomial,
    zero_form,
)
from .streams import DEFAULT_SEED, substream, unit_sphere
from .norms import (
    NormEstimate,
    SphereSampler,
    lp_norm_ball_exact,
    lp_sphere_norm,
    min_sphere,
    sphere_surface,
    sup_sphere_norm,
)
from .volume import (
    GaussianLikeLaw,
    VolumeEstimate,
    ball_volume,
    gaussian_like_moment,
    kappa,
    normalize_to_probability,
    volume_gradient,
    volume_laplace_mc,
    volume_quadratic_exact,
    volume_spherical_mc,
)
from .sos import (
    EigenDecomposition,
    GramMatrix,
    eigh,
    form_from_gram,
    gram_dimension,
    gram_from_form_map,
    gram_from_squares,
    induced_representation,
    project_psd_schatten_ball,
    schatten_norm,
    simplex_projection,
    sos_decompose,
    spectral_norm,
)
from .extremal import (
    NormSpec,
    SolverTrace,
    minimize_volume_form,
    minimize_volume_sos,
    theoretical_opt,
    verify_lower_bound,
    verify_pstar_equivalence,
)
from .serialize import (
    form_from_dict,
    form_to_dict,
    gram_from_dict,
    gram_to_dict,
    load_form,
    load_gram,
    save_form,
    save_gram,
)

__version__ = "0.1.0"
