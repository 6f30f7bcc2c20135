"""Matrix geometric means, PPT block matrices and operator classes.

Dense complex matrices only. The hot eigen kernel is numba-compiled unless
``PPT_MEANS_DISABLE_NUMBA=1`` is set, in which case numpy/LAPACK is used.
"""

from .blocks import (
    Block2x2,
    IsometryPair,
    PPTResult,
    TwoTerm,
    ando_contraction,
    assemble,
    is_ppt,
    isometry_decompose,
    mean_compress,
    partial_transpose,
    two_term_decompose,
)
from .classes import (
    ClassificationRecord,
    Compression,
    Congruence,
    SumOfCongruences,
    TraceMap,
    ab_normal_blocks,
    abs_parts,
    classify,
    is_ab_normal,
    positive_map_apply,
    semi_hypo_block_iff,
    tight_parameters,
)
from .errors import (
    InvalidInput,
    PPTMeansError,
    PreconditionViolated,
    SingularMatrix,
    SuiteSelfTestFailure,
    UnknownCheck,
)
from .linalg import (
    DEFAULT_TOL,
    EigenSystem,
    PolarParts,
    Tolerance,
    herm_eig,
    is_psd,
    loewner_leq,
    mat_pow,
    op_norm,
    polar,
    spectral_radius,
    svd,
)
from .means import amgm_margin, check_max_characterization, geometric_mean, geometric_mean_t

__version__ = "0.1.0"
