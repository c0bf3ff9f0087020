"""Exact quantum query algorithms and low-degree Boolean function toolkit."""

from .boolfn import (
    BooleanFunction,
    ComplexityReport,
    InputAssignment,
    complement_symmetric,
    complexity_report,
    compose_function,
    deterministic_complexity,
    enumerate_complement_symmetric_full_d,
    evaluate,
    hamming_weight,
    named_function,
    sensitivity,
    sensitivity_at,
)
from .compose import (
    DecisionTree,
    GapReport,
    HybridAlgorithm,
    build_decision_tree,
    hybrid_evaluate,
    verify_gap,
)
from .lowdeg import (
    ConstructedFunction,
    ConstructionReport,
    GroupPartition,
    build_f3k,
    build_f9,
    build_f12,
    build_lemma3,
    certify,
    connection_pairs,
    connection_value,
    iterate_triple,
    lemma3_params,
    p4_base,
    p4_eval,
)
from .polynomial import (
    MultilinearPolynomial,
    RangePolynomial,
    degree_mod_p,
    degree_of,
    find_collapser,
    fit_range_polynomial,
    interpolate,
    qe_lower_bound,
    verify_represents,
)
from .qsim import (
    ExactScalar,
    FinalState,
    QueryAlgorithm,
    QueryLayer,
    UnitaryMatrix,
    a1,
    a2,
    check_unitary,
    classify_final,
    is_exact,
    relabel_outputs,
    simulate,
)

__version__ = "0.1.0"
