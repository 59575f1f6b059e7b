"""Exact partial derivatives."""

from __future__ import annotations

from functools import lru_cache

from .nodes import ZERO, Add, Expr, ExprError, Fn, Mul, Num, Pow, Sym, add, cos, exp, mul, power, sin
from .rational import normalize


def differentiate(e: Expr, wrt: str, coordinates=None) -> Expr:
    """Partial derivative of ``e`` with respect to the symbol ``wrt``.

    Every other symbol is held constant.  When ``coordinates`` is given,
    ``wrt`` must be one of them.  The result is normalized.
    """
    if coordinates is not None and wrt not in coordinates:
        raise ExprError(f"cannot differentiate with respect to {wrt!r}: not a coordinate")
    return normalize(_diff(e, wrt))


@lru_cache(maxsize=65536)
def _diff(e: Expr, x: str) -> Expr:
    if x not in e.free_symbols():
        return ZERO
    if isinstance(e, Sym):
        return Num(1)
    if isinstance(e, Add):
        return add(*(_diff(t, x) for t in e.terms))
    if isinstance(e, Mul):
        terms = []
        for i, f in enumerate(e.factors):
            d = _diff(f, x)
            if d.is_zero_constant():
                continue
            terms.append(mul(*e.factors[:i], d, *e.factors[i + 1:]))
        return add(*terms)
    if isinstance(e, Pow):
        k = e.exp
        return mul(Num(k), power(e.base, k - 1), _diff(e.base, x))
    if isinstance(e, Fn):
        u = e.arg
        du = _diff(u, x)
        if e.name == "sin":
            outer = cos(u)
        elif e.name == "cos":
            outer = mul(Num(-1), sin(u))
        elif e.name == "tan":
            outer = power(cos(u), -2)
        elif e.name == "exp":
            outer = exp(u)
        elif e.name == "log":
            outer = power(u, -1)
        else:  # pragma: no cover
            raise ExprError(f"no derivative rule for {e.name}")
        return mul(outer, du)
    raise TypeError(type(e))  # pragma: no cover


def gradient(e: Expr, coordinates) -> tuple[Expr, ...]:
    return tuple(differentiate(e, x) for x in coordinates)

