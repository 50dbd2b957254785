from .fitting import (
    GuessConfig,
    InsufficientTerms,
    compress_zeros,
    guess_algebraic,
    guess_ode,
    guess_polynomial,
    guess_recurrence,
    verification_details,
    verify_relation,
)
from .grammar import RelationSyntaxError, format_relation, parse_relation
from .relations import (
    AlgebraicRelation,
    DifferentialRelation,
    GuessReport,
    PolynomialFormula,
    Recurrence,
    TrivialRelation,
)
