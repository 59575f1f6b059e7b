"""Symbolic expression engine: parsing, exact arithmetic, derivatives,
rational normalization and randomized zero testing."""

from .calculus import differentiate, gradient
from .nodes import (
    FUNCTIONS,
    ONE,
    ZERO,
    Add,
    Expr,
    ExprError,
    Fn,
    Mul,
    Num,
    Pow,
    Sym,
    add,
    const,
    cos,
    exp,
    fn,
    log,
    mul,
    neg,
    power,
    rebuild,
    sin,
    sqrt,
    sym,
    tan,
)
from .numeric import (
    DomainError,
    ExhaustedSamplingError,
    ZeroKind,
    ZeroTestConfig,
    ZeroVerdict,
    eval_numeric,
    is_zero,
)
from .parse import Assumptions, ExprSyntaxError, SymbolTable, UnknownIdentifierError, parse, valid_identifier
from .printing import latex_symbol, to_latex, to_text
from .rational import is_zero_symbolic, normalize

__all__ = [name for name in dir() if not name.startswith("_")]
