"""Exact class numbers, Cohen form coefficients and period-matrix certification."""

from .classnum import (
    BernoulliTable,
    FundDisc,
    approx_L,
    bernoulli,
    decompose,
    dirichlet_L_neg,
    gen_bernoulli,
    hurwitz_H,
    kronecker,
    warm_bernoulli,
)
from .cohen import (
    CoeffTable,
    DeltaResult,
    NormalizationUndefined,
    a_norm,
    c_coeff,
    delta,
    delta_exact,
    pkr,
)
from .enclosure import INCONCLUSIVE, PROVED, VIOLATED
from .independence import (
    CapacityResult,
    CheckpointMismatch,
    CriterionReport,
    PeriodMatrix,
    SweepReport,
    TupleResult,
    build_matrix,
    nonsingularity_criterion,
    det_exact,
    f_poly,
    logk_capacity,
    min_weight_general,
    pair_sweep,
    perm_max_check,
    sweep_weight,
    tuple_nonsingular,
    vandermonde_bound,
)

__version__ = "0.1.0"

__all__ = [
    "BernoulliTable",
    "CapacityResult",
    "CheckpointMismatch",
    "CoeffTable",
    "CriterionReport",
    "DeltaResult",
    "FundDisc",
    "INCONCLUSIVE",
    "NormalizationUndefined",
    "PROVED",
    "PeriodMatrix",
    "SweepReport",
    "TupleResult",
    "VIOLATED",
    "a_norm",
    "approx_L",
    "bernoulli",
    "build_matrix",
    "c_coeff",
    "nonsingularity_criterion",
    "decompose",
    "delta",
    "delta_exact",
    "det_exact",
    "dirichlet_L_neg",
    "f_poly",
    "gen_bernoulli",
    "hurwitz_H",
    "kronecker",
    "logk_capacity",
    "min_weight_general",
    "pair_sweep",
    "perm_max_check",
    "pkr",
    "sweep_weight",
    "tuple_nonsingular",
    "vandermonde_bound",
    "warm_bernoulli",
]
