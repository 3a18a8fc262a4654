"""Decision procedures that choose from structured representations of
choice problems, with checkers for their procedural properties and tools
for deciding whether the induced choice behaviour is rationalizable."""

__version__ = "0.1.0"

from .adt import (
    AdtSchema,
    RepresentationError,
    SchemaError,
    SchemaFlags,
    Slot,
    T,
    Term,
    TermError,
    Universe,
    UniverseError,
    analyze_schema,
    canonical_representation,
    equivalent,
    extension,
    format_schema,
    format_term,
    parse_schema,
    rename_value,
    schema,
    substitute_subproblem,
    validate_term,
)
from .enumeration import BudgetError, EnumerationBudget, count_representations, enumerate_representations
from .guarantees import Guarantee
from .procedures import KINDS, Procedure, ProcedureError, ProcedureSpec, apply, instantiate_procedure, procedure
from .properties import PROPERTIES, NotApplicable, PropertyReport, Verdict, check, check_all
from .rationality import (
    ChoiceCorrespondence,
    ChoiceFunction,
    PreferenceRelation,
    RationalityVerdict,
    classify_procedure,
    induced_choice_function,
    induced_correspondence,
    rationalize_choice_function,
    rationalize_correspondence,
)
from .sexpr import parse_term

__all__ = [name for name in dir() if not name.startswith("_")]
