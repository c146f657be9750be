"""weylalg: exact deformation quantization of constant graded Poisson structures.

Star products, Poisson brackets, weighted seminorm calculus, truncated
series diagnostics and an exact lattice Peierls-bracket construction, all
over a finite Z2-graded generator basis with an exact rational-complex
scalar backend.
"""

from ._backend import KERNEL_BACKEND
from .basis import GeneratorBasis
from .bilinear_forms import (
    BilinearForm,
    TensorPair,
    delta_g,
    is_poisson_map,
    lambda_parts,
    normal_form,
    p_lambda,
    p_lambda_power,
    sharp,
)
from .errors import (
    BackendMismatchError,
    BasisMismatchError,
    DomainError,
    ParityBlockError,
    RefusedPreconditionError,
    TruncationBudgetError,
    WeylalgError,
    WindowOverflowError,
)
from .graded_poly import (
    Element,
    Monomial,
    conjugate,
    evaluate,
    grade_component,
    ordered_coefficients,
    parity_split,
    sym_product,
)
from .peierls import (
    CauchyPair,
    LatticeSection,
    LatticeSpacetime,
    kernel_identification_report,
)
from .scalars import QC
from .seminorm_calculus import (
    EstimateReport,
    KotheMatrix,
    WeightedSeminorm,
    kothe_matrix,
    nuclearity_diagnostic,
    ommy_norm_upper,
    p_R,
    p_R_inf,
    pn_seminorm,
    verify_bracket_estimate,
    verify_product_estimate,
    wick_epsilon_norm,
)
from .series_engine import (
    TruncatedSeries,
    convergence_diagnosis,
    divergence_witness_standard_ordered,
    exp_element,
    f_epsilon_series,
    inner_translation_check,
    star_exp,
    truncated_star,
)
from .star_algebra import (
    apply_linear,
    check_star_involution,
    derivation_X,
    equivalence_transform,
    graded_commutator,
    poisson_bracket,
    star,
    star_hbar,
    translate,
)

__version__ = "0.1.0"
