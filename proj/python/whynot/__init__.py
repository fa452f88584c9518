"""Why-not explanations for missing query answers."""

from ._core import (
    BudgetExceeded,
    Concept,
    ConstraintViolation,
    Error,
    Fragment,
    Generality,
    Instance,
    NoSolution,
    Ontology,
    ParseError,
    Schema,
    SchemaError,
    TuplePresent,
    UnsupportedConstraintClass,
    WhyNotInstance,
    all_explanations,
    card_maximal_explanation,
    check_mge,
    check_mge_instance,
    compare_generality,
    compute_mge_schema,
    degree_of_generality,
    evaluate,
    exhaustive_mge,
    incremental_mge,
    is_explanation,
    is_explanation_in,
    lub,
    minimize_explanation,
    shortest_mge,
    subsumed_by_instance,
    subsumed_by_schema,
    validate,
)

__all__ = [name for name in dir() if not name.startswith("_")]
