"""Random expression trees and a finite-difference oracle for property tests."""

import random
from fractions import Fraction

from semiquasi.expr import DomainError, ExprError, Num, Sym, add, eval_numeric, fn, mul, power

SYMBOLS = ("x", "y", "z")
RANGES = {s: (0.3, 1.5) for s in SYMBOLS}
EXPONENTS = (2, 3, -1, -2, Fraction(1, 2), Fraction(-1, 2), Fraction(1, 3))
FUNCTIONS = ("sin", "cos", "tan", "exp", "log", "sqrt")


def random_expr(rng: random.Random, depth: int):
    """A random tree of depth at most ``depth``."""
    if depth == 0 or rng.random() < 0.25:
        if rng.random() < 0.5:
            return Num(Fraction(rng.randint(-4, 4), rng.randint(1, 3)))
        return Sym(rng.choice(SYMBOLS))
    k = rng.random()
    a = random_expr(rng, depth - 1)
    try:
        if k < 0.3:
            return add(a, random_expr(rng, depth - 1))
        if k < 0.55:
            return mul(a, random_expr(rng, depth - 1))
        if k < 0.65:
            return a / random_expr(rng, depth - 1)
        if k < 0.75:
            return power(a, rng.choice(EXPONENTS))
        return fn(rng.choice(FUNCTIONS), a)
    except ExprError:
        # e.g. division by a literal zero
        return a


def random_point(rng: random.Random):
    return {s: rng.uniform(*RANGES[s]) for s in SYMBOLS}


def _stencil(e, point, wrt, h):
    def f(dx):
        return eval_numeric(e, {**point, wrt: point[wrt] + dx})

    return (-f(2 * h) + 8 * f(h) - 8 * f(-h) + f(-2 * h)) / (12 * h)


def finite_difference(e, point, wrt="x"):
    """Five-point derivative estimate at the step where successive halvings agree best."""
    estimates = [_stencil(e, point, wrt, 1e-2 * 2.0**-k) for k in range(10)]
    gaps = [abs(b - a) for a, b in zip(estimates, estimates[1:])]
    best = min(range(len(gaps)), key=gaps.__getitem__)
    return estimates[best + 1]


def fd_agrees(e, d, rng, wrt="x", rel=1e-6, tries=20):
    """Compare ``d`` against finite differences of ``e`` at a point inside the domain.

    Returns None when no sampled point was inside the domain, otherwise
    ``(ok, point, analytic, numeric)``.
    """
    for _ in range(tries):
        point = random_point(rng)
        try:
            value = eval_numeric(e, point)
            analytic = eval_numeric(d, point)
            numeric = finite_difference(e, point, wrt)
        except DomainError:
            continue
        scale = max(1.0, abs(analytic), abs(value))
        return abs(numeric - analytic) <= rel * scale, point, analytic, numeric
    return None
