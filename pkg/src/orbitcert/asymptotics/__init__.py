"""Exp-log sums: exact collection, asymptotic signs, certified thresholds."""

from .collect import CollectResult, PowerLogSymbol, SymbolTable, collect
from .explog import ExpLogSum, ExpLogTerm, LogPoly
from .gaps import GapData, gap_data
from .signs import (
    asymptotic_sign,
    certified_dominance_threshold,
    positive_lower_bound,
    sign_threshold,
    tail_bound_data,
    verify_threshold,
)

__all__ = [
    "CollectResult",
    "ExpLogSum",
    "ExpLogTerm",
    "GapData",
    "LogPoly",
    "PowerLogSymbol",
    "SymbolTable",
    "asymptotic_sign",
    "certified_dominance_threshold",
    "collect",
    "gap_data",
    "positive_lower_bound",
    "sign_threshold",
    "tail_bound_data",
    "verify_threshold",
]
