"""Rational-function normal form over transcendental atoms.

An expression is mapped to ``N / (F1^k1 ... Fm^km)`` where

* ``N`` is a Laurent polynomial with exact rational coefficients in the
  *atoms* of the expression: symbols, ``sin(u)``, ``cos(u)``, ``log(u)`` and
  radicals ``u^(1/q)``;
* every monomial may carry one ``exp(u)`` factor, products of exponentials
  being merged into a single ``exp`` of the summed (normalized) argument;
* each ``Fi`` is a genuine polynomial with no monomial content, primitive
  integer coefficients and a positive leading coefficient.

Two identities are applied to completion: ``cos(u)^2 -> 1 - sin(u)^2``
(so cosines only ever appear to the first power) and ``(u^(1/q))^q -> u``.
``cos`` never carries a negative exponent; a cosine in a denominator becomes
the factor polynomial ``cos(u)``.

With these rules the numerator of a zero expression is the zero polynomial
whenever the atoms are algebraically independent, which makes the zero test
on normal forms sound.  Factors of a denominator are not fully factored, so
the representation is canonical only up to that; zero testing does not
depend on it.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache, reduce

from .nodes import (
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
    fn,
    mul,
    power,
)

# A monomial is (powers, exparg): powers is a tuple of (atom, exponent)
# pairs sorted by atom key, exparg is the normalized argument of a merged
# exp() factor or None.
_UNIT = ((), None)


def _atom_key(item):
    return item[0]._key


def _mono_mul(a, b):
    pa, ea = a
    pb, eb = b
    if not pa:
        powers = pb
    elif not pb:
        powers = pa
    else:
        acc = dict(pa)
        for atom, k in pb:
            acc[atom] = acc.get(atom, 0) + k
        powers = tuple(sorted(((x, k) for x, k in acc.items() if k), key=_atom_key))
    if ea is None:
        exparg = eb
    elif eb is None:
        exparg = ea
    else:
        exparg = _exp_sum(ea, eb)
    return (powers, exparg)


def _mono_inv(m):
    powers, exparg = m
    return (tuple((x, -k) for x, k in powers), None if exparg is None else _exp_neg(exparg))


@lru_cache(maxsize=4096)
def _exp_sum(u: Expr, v: Expr):
    s = to_expr(rat(u).add(rat(v)))
    return None if s.is_zero_constant() else s


@lru_cache(maxsize=4096)
def _exp_neg(u: Expr):
    return to_expr(rat(u).neg())


@lru_cache(maxsize=None)
def _mono_key(m):
    powers, exparg = m
    deg = sum(k for _, k in powers)
    # Atoms are listed from the largest key down: for non-negative exponents
    # plain tuple comparison is then graded lex, a genuine monomial order,
    # which exact division relies on.  A monomial without exp() sorts above
    # its exp-carrying siblings, so a normalized factor keeps an exp-free
    # leading term.
    return (deg, tuple((x._key, k) for x, k in reversed(powers)), (1,) if exparg is None else (0, exparg._key))


def _is_cos(atom):
    return isinstance(atom, Fn) and atom.name == "cos"


# -- polynomials: dict[monomial, Fraction] ---------------------------------


def _padd(p, q, scale=1):
    out = dict(p)
    for m, c in q.items():
        v = out.get(m, 0) + scale * c
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def _pmul_raw(p, q):
    out = {}
    for ma, ca in p.items():
        for mb, cb in q.items():
            m = _mono_mul(ma, mb)
            v = out.get(m, 0) + ca * cb
            if v:
                out[m] = v
            else:
                del out[m]
    return out


def _pmul(p, q):
    if len(p) == 1 and _UNIT in p:
        c = p[_UNIT]
        return {m: c * v for m, v in q.items()}
    if len(q) == 1 and _UNIT in q:
        c = q[_UNIT]
        return {m: c * v for m, v in p.items()}
    return _reduce_cos(_pmul_raw(p, q))


def _reduce_cos(p):
    """Rewrite cos(u)^k, k >= 2, through cos^2 = 1 - sin^2."""
    if not any(_has_cos_square(m) for m in p):
        return p
    out = {}
    for m, c in p.items():
        for m2, c2 in _expand_cos(m):
            v = out.get(m2, 0) + c * c2
            if v:
                out[m2] = v
            else:
                out.pop(m2, None)
    return out


def _has_cos_square(m):
    return any(k >= 2 and _is_cos(x) for x, k in m[0])


def _expand_cos(m):
    powers, exparg = m
    terms = [((), 1)]
    rest = []
    for atom, k in powers:
        if k >= 2 and _is_cos(atom):
            s = _sin_atom(atom.arg)
            half, odd = divmod(k, 2)
            if odd:
                rest.append((atom, 1))
            # (1 - s^2)^half
            expansion = [(((s, 2 * j),) if j else (), (-1) ** j * math.comb(half, j)) for j in range(half + 1)]
            terms = [(a + b, ca * cb) for a, ca in terms for b, cb in expansion]
        else:
            rest.append((atom, k))
    out = []
    for extra, c in terms:
        acc = {}
        for atom, k in list(rest) + list(extra):
            acc[atom] = acc.get(atom, 0) + k
        pw = tuple(sorted(((x, k) for x, k in acc.items() if k), key=_atom_key))
        out.append(((pw, exparg), c))
    return out


def _ppow(p, k):
    result = {_UNIT: Fraction(1)}
    base = p
    while k:
        if k & 1:
            result = _pmul(result, base)
        k >>= 1
        if k:
            base = _pmul(base, base)
    return result


def _lead(p):
    return max(p, key=_mono_key)


# -- exact division of polynomials ------------------------------------------


_DIV_STEP_LIMIT = 5000


def _exact_div(num, factor):
    """Return ``num / factor`` if ``factor`` divides ``num`` exactly, else None.

    ``factor`` has no monomial content, so divisibility in the Laurent ring
    reduces to polynomial divisibility after clearing negative exponents.
    """
    if not num:
        return {}
    fatoms = {x for m in factor for x, _ in m[0]}
    # every atom of the factor must occur in num with at least its degree
    for atom in fatoms:
        fdeg = max(dict(m[0]).get(atom, 0) for m in factor)
        nvals = [dict(m[0]).get(atom, 0) for m in num]
        if max(nvals) - min(min(nvals), 0) < fdeg:
            return None
    shift = {}
    for m in num:
        for x, k in m[0]:
            if k < 0 and k < shift.get(x, 0):
                shift[x] = k
    if shift:
        sh = (tuple(sorted(((x, -k) for x, k in shift.items()), key=_atom_key)), None)
        num = {_mono_mul(m, sh): c for m, c in num.items()}
    flead = _lead(factor)
    fcoef = factor[flead]
    fpowers = dict(flead[0])
    rem = dict(num)
    quotient = {}
    limit = _DIV_STEP_LIMIT
    if any(m[1] is not None for m in factor):
        # exp() monomials form a Laurent group under which a failed division
        # can descend forever; a genuine quotient is found well within this
        limit = 64 + 8 * len(num) * len(factor)
    for _ in range(limit):
        if not rem:
            break
        rlead = _lead(rem)
        rpowers = dict(rlead[0])
        qpowers = {}
        for atom, k in rpowers.items():
            d = k - fpowers.get(atom, 0)
            if d < 0:
                return None
            if d:
                qpowers[atom] = d
        for atom in fpowers:
            if atom not in rpowers:
                return None
        qexp = rlead[1]  # normalized factors have an exp-free leading term
        qmono = (tuple(sorted(qpowers.items(), key=_atom_key)), qexp)
        qcoef = rem[rlead] / fcoef
        quotient[qmono] = quotient.get(qmono, 0) + qcoef
        step = _pmul({qmono: qcoef}, factor) if _has_cos_atom(factor) else {
            _mono_mul(qmono, m): qcoef * c for m, c in factor.items()
        }
        before = rem.get(rlead)
        rem = _padd(rem, step, -1)
        if rem.get(rlead) == before:
            return None
    else:
        return None
    if shift:
        unshift = (tuple(sorted(shift.items(), key=_atom_key)), None)
        quotient = {_mono_mul(m, unshift): c for m, c in quotient.items() if c}
    return {m: c for m, c in quotient.items() if c}


def _has_cos_atom(p):
    return any(_is_cos(x) for m in p for x, _ in m[0])


# -- denominator factors -----------------------------------------------------


def _factor_of(poly):
    """Split a polynomial into ``(coeff, monomial, factor)``.

    ``poly == coeff * monomial * factor`` where ``factor`` is a tuple of
    (monomial, coefficient) pairs with no monomial content, integer
    coefficients without common divisor and a positive leading coefficient,
    and whose leading monomial carries no exp() part.  ``factor`` is None
    when ``poly`` is itself a monomial.
    """
    atoms = {x for m in poly for x, _ in m[0]}
    content = {}
    for atom in atoms:
        low = min(dict(m[0]).get(atom, 0) for m in poly)
        if low:
            content[atom] = low
    if len(poly) == 1:
        (m, c), = poly.items()
        return c, m, None
    cpowers = tuple(sorted(content.items(), key=_atom_key))
    reduced = {_mono_mul(m, _mono_inv((cpowers, None))): c for m, c in poly.items()}
    lead = _lead(reduced)
    cmono = (cpowers, lead[1])
    if lead[1] is not None:
        shift = ((), _exp_neg(lead[1]))
        reduced = {_mono_mul(m, shift): c for m, c in reduced.items()}
        lead = _lead(reduced)
    den_lcm = reduce(lambda a, b: a * b // math.gcd(a, b), (c.denominator for c in reduced.values()), 1)
    num_gcd = reduce(math.gcd, (abs((c * den_lcm).numerator) for c in reduced.values()), 0)
    scale = Fraction(num_gcd, den_lcm)
    if reduced[lead] < 0:
        scale = -scale
    factor = tuple(sorted(((m, c / scale) for m, c in reduced.items()), key=lambda t: _mono_key(t[0]), reverse=True))
    return scale, cmono, factor


def _factor_poly(factor):
    return dict(factor)


def _factor_key(factor):
    return tuple((_mono_key(m), c) for m, c in factor)


# -- rational functions ------------------------------------------------------


class RatFunc:
    """``num / prod(factor^k)``; see the module docstring for invariants."""

    __slots__ = ("num", "den", "expr")

    def __init__(self, num, den=()):
        self.num = num
        self.den = den
        self.expr = None

    @classmethod
    def const(cls, value):
        value = Fraction(value)
        return cls({_UNIT: value} if value else {})

    @classmethod
    def atom(cls, atom, k=1):
        return cls({(((atom, k),), None): Fraction(1)})

    @classmethod
    def exponential(cls, arg):
        if arg.is_zero_constant():
            return cls.const(1)
        return cls({((), arg): Fraction(1)})

    def is_zero(self):
        return not self.num

    def is_const(self):
        return not self.den and (not self.num or (len(self.num) == 1 and _UNIT in self.num))

    def const_value(self):
        return self.num.get(_UNIT, Fraction(0)) if self.is_const() else None

    # arithmetic -----------------------------------------------------------
    def neg(self):
        return RatFunc({m: -c for m, c in self.num.items()}, self.den)

    def add(self, other):
        if not self.num:
            return other
        if not other.num:
            return self
        if self.den == other.den:
            return _cancel(_padd(self.num, other.num), self.den)
        lcm = dict(self.den)
        for f, k in other.den:
            lcm[f] = max(lcm.get(f, 0), k)
        num = _padd(_pmul(self.num, _cofactor(self.den, lcm)), _pmul(other.num, _cofactor(other.den, lcm)))
        return _cancel(num, _sorted_den(lcm.items()))

    def sub(self, other):
        return self.add(other.neg())

    def mul(self, other):
        if not self.num or not other.num:
            return RatFunc({})
        num = _pmul(self.num, other.num)
        if not self.den:
            den = other.den
        elif not other.den:
            den = self.den
        else:
            acc = dict(self.den)
            for f, k in other.den:
                acc[f] = acc.get(f, 0) + k
            den = _sorted_den(acc.items())
        return _fix_roots(_cancel(num, den))

    def inv(self):
        if not self.num:
            raise ExprError("division by zero")
        coeff, mono, factor = _factor_of(self.num)
        inv_mono = _mono_inv(mono)
        # cosines may not carry negative exponents: move them to factors
        den = []
        kept = []
        for atom, k in inv_mono[0]:
            if _is_cos(atom) and k < 0:
                mono = (((atom, 1),), None)
                den.append((((mono, Fraction(1)),), -k))
            else:
                kept.append((atom, k))
        num = {(tuple(kept), inv_mono[1]): 1 / coeff}
        for f, k in self.den:
            num = _pmul(num, _ppow(_factor_poly(f), k))
        if factor is not None:
            den.append((factor, 1))
        acc = {}
        for f, k in den:
            acc[f] = acc.get(f, 0) + k
        return _fix_roots(_cancel(num, _sorted_den(acc.items())))

    def pow(self, k: int):
        if k < 0:
            return self.inv().pow(-k)
        result = RatFunc.const(1)
        base = self
        while k:
            if k & 1:
                result = result.mul(base)
            k >>= 1
            if k:
                base = base.mul(base)
        return result

    def div(self, other):
        return self.mul(other.inv())

    def __eq__(self, other):
        return isinstance(other, RatFunc) and self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((frozenset(self.num.items()), self.den))


def _sorted_den(items):
    return tuple(sorted(((f, k) for f, k in items if k), key=lambda t: _factor_key(t[0])))


def _cofactor(den, lcm):
    out = {_UNIT: Fraction(1)}
    have = dict(den)
    for f, k in lcm.items():
        extra = k - have.get(f, 0)
        if extra:
            out = _pmul(out, _ppow(_factor_poly(f), extra))
    return out


def _cancel(num, den):
    if not num:
        return RatFunc({}, ())
    if not den:
        return RatFunc(num, ())
    remaining = []
    for f, k in den:
        fp = _factor_poly(f)
        while k:
            q = _exact_div(num, fp)
            if q is None:
                break
            num = q
            k -= 1
        if k:
            remaining.append((f, k))
    return RatFunc(num, tuple(remaining))


def _fix_roots(r: RatFunc) -> RatFunc:
    """Bring radical exponents back into ``0 <= k < q``."""
    if not any(_needs_root_fix(m) for m in r.num):
        return r
    total = RatFunc({}, ())
    for m, c in r.num.items():
        powers, exparg = m
        kept = []
        extra = RatFunc.const(c)
        for atom, k in powers:
            if isinstance(atom, Pow):
                q = atom.exp.denominator
                whole, k = divmod(k, q)
                if whole:
                    extra = extra.mul(rat(atom.base).pow(whole))
            if k:
                kept.append((atom, k))
        total = total.add(RatFunc({(tuple(kept), exparg): Fraction(1)}).mul(extra))
    if r.den:
        total = total.mul(RatFunc({_UNIT: Fraction(1)}, r.den))
    return total


def _needs_root_fix(m):
    return any(isinstance(x, Pow) and not 0 <= k < x.exp.denominator for x, k in m[0])


# -- Expr <-> RatFunc ---------------------------------------------------------


def _is_negative(r: RatFunc) -> bool:
    if not r.num:
        return False
    return r.num[_lead(r.num)] < 0


def _sin_atom(u: Expr) -> Expr:
    return Fn("sin", u)


def _trig(name: str, u: Expr) -> RatFunc:
    ru = rat(u)
    if ru.is_zero():
        return RatFunc.const(0 if name == "sin" else 1)
    if _is_negative(ru):
        flipped = to_expr(ru.neg())
        base = RatFunc.atom(Fn(name, flipped))
        return base.neg() if name == "sin" else base
    return RatFunc.atom(Fn(name, u))


def rat(e: Expr) -> RatFunc:
    """Rational normal form of ``e`` (cached on the node)."""
    r = e._rat
    if r is not None:
        return r
    if isinstance(e, Num):
        r = RatFunc.const(e.value)
    elif isinstance(e, Sym):
        r = RatFunc.atom(e)
    elif isinstance(e, Add):
        r = RatFunc({})
        for t in e.terms:
            r = r.add(rat(t))
    elif isinstance(e, Mul):
        r = RatFunc.const(1)
        for f in e.factors:
            r = r.mul(rat(f))
    elif isinstance(e, Pow):
        r = _rat_pow(e)
    elif isinstance(e, Fn):
        r = _rat_fn(e)
    else:  # pragma: no cover - closed hierarchy
        raise TypeError(type(e))
    e._rat = r
    return r


def _rat_pow(e: Pow) -> RatFunc:
    p, q = e.exp.numerator, e.exp.denominator
    if q == 1:
        return rat(e.base).pow(p)
    u = normalize(e.base)
    if u.is_zero_constant():
        if p < 0:
            raise ExprError("division by zero")
        return RatFunc.const(0)
    cu = rat(u).const_value()
    if cu is not None and cu == 1:
        return RatFunc.const(1)
    atom = Pow(u, Fraction(1, q))
    whole, rest = divmod(p, q)
    r = rat(u).pow(whole) if whole else RatFunc.const(1)
    if rest:
        r = r.mul(RatFunc.atom(atom, rest))
    return r


def _rat_fn(e: Fn) -> RatFunc:
    name = e.name
    if name in ("sin", "cos"):
        return _trig(name, normalize(e.arg))
    if name == "tan":
        u = normalize(e.arg)
        return _trig("sin", u).div(_trig("cos", u))
    if name == "exp":
        return RatFunc.exponential(normalize(e.arg))
    if name == "log":
        u = normalize(e.arg)
        cu = rat(u).const_value()
        if cu is not None and cu == 1:
            return RatFunc.const(0)
        return RatFunc.atom(Fn("log", u))
    raise ExprError(f"unknown function {name!r}")  # pragma: no cover


def _mono_expr(m, c) -> Expr:
    powers, exparg = m
    factors = [Num(c)]
    factors.extend(power(atom, k) for atom, k in powers)
    if exparg is not None:
        factors.append(fn("exp", exparg))
    return mul(*factors)


def _poly_expr(p) -> Expr:
    return add(*(_mono_expr(m, c) for m, c in sorted(p.items(), key=lambda t: _mono_key(t[0]))))


def to_expr(r: RatFunc) -> Expr:
    if not r.num:
        return ZERO
    num = r.num
    parts = []
    if len(num) > 1:
        # present a Laurent numerator over a common monomial denominator
        low = {}
        for m in num:
            for atom, k in m[0]:
                if k < low.get(atom, 0):
                    low[atom] = k
        if low:
            shift = (tuple(sorted(((x, -k) for x, k in low.items()), key=_atom_key)), None)
            num = {_mono_mul(m, shift): c for m, c in num.items()}
            parts.extend(power(x, k) for x, k in low.items())
    parts.insert(0, _poly_expr(num))
    parts.extend(power(_poly_expr(_factor_poly(f)), -k) for f, k in r.den)
    e = mul(*parts) if len(parts) > 1 else parts[0]
    if e._rat is None:
        e._rat = r
    return e


def normalize(e: Expr) -> Expr:
    """Canonical rational-function form of ``e``.

    Expands products over a common denominator, cancels exact polynomial
    factors and rewrites ``cos^2`` through ``sin^2 + cos^2 = 1``.
    """
    r = rat(e)
    if r.expr is None:
        r.expr = to_expr(r)
    return r.expr


def is_zero_symbolic(e: Expr) -> bool:
    return rat(e).is_zero()
