"""Point counts and motive identities for Hermitian forms over ``F[beta]/(beta^2 - b)``."""

from .errors import (
    CharTwo,
    DegenerateAlgebra,
    DegenerateForm,
    DegeneratePoint,
    DimensionMismatch,
    EnumerationBoundExceeded,
    InvalidInput,
    MotiveError,
    NegativeTwist,
    NonPrime,
    NotSplit,
    RankTooSmall,
    UnresolvedAtom,
)
from .fields import (
    SIGN,
    EtaleAlgebra,
    EtaleElement,
    ExtensionCtx,
    FiniteField,
    SignField,
    annihilator_nonzero,
    extend,
    is_split,
    make_field,
    sigma,
    split_idempotents,
)
from .forms import HermitianDiag, QuadraticForm, hermitian_eval, is_isotropic_form, quad_eval, trace_form
from .motives import (
    Identity,
    MotiveAtom,
    MotiveExpr,
    Tag,
    blowup_expand,
    bundle_expand,
    derive_main_identity,
    derive_proj_identity,
    dsum,
    expr_equal,
    twist,
)
from .points import (
    CountReport,
    IncidenceResult,
    LLinePoint,
    ModuleSpec,
    check_S_in_quadric,
    count_blowup_formula,
    count_hermitian_variety,
    count_proj_space,
    count_quadric,
    count_S,
    count_weil_proj,
    enum_incidence_blowup,
    enum_span_incidence,
    span_map,
)
from .realize import A0Result, RealizationCtx, VerifyReport, a0, audit_cell, realize, sweep, verify_identity

__version__ = "0.1.0"
