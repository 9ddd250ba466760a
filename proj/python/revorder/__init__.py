"""Reversed-digit arithmetic traces: generation, verification, difficulty
metrics, and dataset synthesis."""

from revorder._core import (
    DomainError,
    ParseError,
    SpecError,
    carry_chain,
    csid,
    decode,
    gen,
    record_at,
    rewrite_chain,
    token_cost,
    verify,
    worstcase,
)

__version__ = "0.1.0"

__all__ = [
    "DomainError",
    "ParseError",
    "SpecError",
    "carry_chain",
    "csid",
    "decode",
    "gen",
    "record_at",
    "rewrite_chain",
    "token_cost",
    "verify",
    "worstcase",
    "__version__",
]
