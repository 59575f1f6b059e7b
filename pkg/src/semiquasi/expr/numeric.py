"""Floating-point evaluation and the two-tier zero test."""

from __future__ import annotations

import enum
import math
import random
from dataclasses import dataclass, field
from typing import Mapping

from .nodes import Add, Expr, ExprError, Fn, Mul, Num, Pow, Sym
from .rational import is_zero_symbolic


class DomainError(ExprError):
    """Evaluation left the domain of a function or divided by zero."""

    def __init__(self, message: str, subexpression: Expr):
        super().__init__(f"{message} in {subexpression}")
        self.subexpression = subexpression


class ExhaustedSamplingError(ExprError):
    pass


class ZeroKind(enum.Enum):
    PROVED_ZERO = "proved_zero"
    NUMERICALLY_ZERO = "numerically_zero"
    NONZERO = "nonzero"


@dataclass(frozen=True)
class ZeroVerdict:
    kind: ZeroKind
    witness: Mapping[str, float] | None = None
    value: float = 0.0
    # largest |e| seen over the sample, 0 for a symbolic proof
    max_residual: float = 0.0

    @property
    def is_zero(self) -> bool:
        return self.kind is not ZeroKind.NONZERO

    def __bool__(self):
        return self.is_zero


@dataclass(frozen=True)
class ZeroTestConfig:
    points: int = 16
    seed: int = 42
    tol: float = 1e-9
    ranges: Mapping[str, tuple[float, float]] = field(default_factory=dict)

    def __post_init__(self):
        if self.points < 1:
            raise ValueError("points must be at least 1")


def _fn_value(name, x, node):
    try:
        if name == "sin":
            return math.sin(x)
        if name == "cos":
            return math.cos(x)
        if name == "tan":
            c = math.cos(x)
            if c == 0:
                raise DomainError("tan at a pole", node)
            return math.sin(x) / c
        if name == "exp":
            return math.exp(x)
        if name == "log":
            if x <= 0:
                raise DomainError("log of a non-positive value", node)
            return math.log(x)
    except OverflowError:
        raise DomainError("overflow", node) from None
    raise DomainError(f"unknown function {name}", node)  # pragma: no cover


def _pow_value(base, exp, node):
    if base == 0 and exp < 0:
        raise DomainError("division by zero", node)
    try:
        if exp.denominator == 1:
            return base ** exp.numerator if exp > 0 else 1.0 / base ** (-exp.numerator)
        if base < 0:
            if exp.denominator % 2 == 0:
                raise DomainError("even root of a negative value", node)
            # real odd root, then the integer power
            root = -((-base) ** (1.0 / exp.denominator))
            return root ** exp.numerator
        return base ** float(exp)
    except (OverflowError, ZeroDivisionError):
        raise DomainError("overflow", node) from None


def _evaluate(e: Expr, env, memo, tracker):
    cached = memo.get(id(e))
    if cached is not None:
        return cached
    if isinstance(e, Num):
        v = float(e.value)
    elif isinstance(e, Sym):
        try:
            v = float(env[e.name])
        except KeyError:
            raise ExprError(f"no value bound for symbol {e.name!r}") from None
    elif isinstance(e, Add):
        v = math.fsum(_evaluate(t, env, memo, tracker) for t in e.terms)
    elif isinstance(e, Mul):
        v = 1.0
        for f in e.factors:
            v *= _evaluate(f, env, memo, tracker)
    elif isinstance(e, Pow):
        v = _pow_value(_evaluate(e.base, env, memo, tracker), e.exp, e)
    elif isinstance(e, Fn):
        v = _fn_value(e.name, _evaluate(e.arg, env, memo, tracker), e)
    else:  # pragma: no cover
        raise TypeError(type(e))
    if not math.isfinite(v):
        raise DomainError("non-finite value", e)
    if tracker is not None:
        a = abs(v)
        if a > tracker[0]:
            tracker[0] = a
    memo[id(e)] = v
    return v


def eval_numeric(e: Expr, bindings: Mapping[str, float]) -> float:
    """Evaluate ``e`` in double precision.

    Raises :class:`DomainError` naming the offending subexpression when a
    function leaves its domain or a denominator vanishes.
    """
    return _evaluate(e, bindings, {}, None)


def sample_points(symbols, ranges, rng: random.Random):
    """Yield an endless stream of uniform points over ``ranges``."""
    names = sorted(symbols)
    missing = [s for s in names if s not in ranges]
    if missing:
        raise ExprError(f"no sampling range for {', '.join(missing)}")
    while True:
        yield {s: rng.uniform(*ranges[s]) for s in names}


def is_zero(e: Expr, ranges=None, points=16, seed=42, tol=1e-9, config: ZeroTestConfig | None = None) -> ZeroVerdict:
    """Decide whether ``e`` vanishes.

    ProvedZero when the rational normal form is zero.  Otherwise ``e`` is
    evaluated at ``points`` seeded random points of ``ranges``; a point
    passes when ``|e| <= tol * (1 + M)`` with M the largest magnitude of any
    subterm there.  Draws that hit a domain error are discarded.
    """
    if config is not None:
        ranges, points, seed, tol = config.ranges, config.points, config.seed, config.tol
    if points < 1:
        raise ValueError("points must be at least 1")
    if is_zero_symbolic(e):
        return ZeroVerdict(ZeroKind.PROVED_ZERO)
    rng = random.Random(seed)
    stream = sample_points(e.free_symbols(), ranges or {}, rng)
    accepted = 0
    failures = 0
    worst = 0.0
    while accepted < points:
        point = next(stream)
        tracker = [0.0]
        try:
            v = _evaluate(e, point, {}, tracker)
        except DomainError:
            failures += 1
            if failures >= 100 * points:
                raise ExhaustedSamplingError(
                    f"{failures} consecutive sample points hit domain errors"
                ) from None
            continue
        failures = 0
        accepted += 1
        if abs(v) > tol * (1.0 + tracker[0]):
            return ZeroVerdict(ZeroKind.NONZERO, witness=point, value=v, max_residual=abs(v))
        worst = max(worst, abs(v))
    return ZeroVerdict(ZeroKind.NUMERICALLY_ZERO, max_residual=worst)
