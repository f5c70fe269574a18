"""Operator words, their rewriting, and exact truncation to windows."""

from .expr import (
    Environment,
    GenSymbol,
    OperatorExpr,
    ParseError,
    adjoint_word,
    default_environment,
    generators,
    integer_environment,
    tree_environment,
    word_operator,
    word_tex,
)
from .matrices import (
    RankProfile,
    WindowMatrix,
    annihilated_below,
    check_relation,
    independence_gram,
    rank,
    rank_profile,
    safe_core,
    truncate,
)
from .rewriting import (
    QuasiReducedForm,
    is_quasi_reduced,
    nat_reduce,
    quasi_reduce,
    quasi_reduced_words,
    word_type,
)

__all__ = [
    "Environment",
    "GenSymbol",
    "OperatorExpr",
    "ParseError",
    "QuasiReducedForm",
    "RankProfile",
    "WindowMatrix",
    "adjoint_word",
    "annihilated_below",
    "check_relation",
    "default_environment",
    "generators",
    "independence_gram",
    "integer_environment",
    "is_quasi_reduced",
    "nat_reduce",
    "quasi_reduce",
    "quasi_reduced_words",
    "rank",
    "rank_profile",
    "safe_core",
    "tree_environment",
    "truncate",
    "word_operator",
    "word_tex",
    "word_type",
]
