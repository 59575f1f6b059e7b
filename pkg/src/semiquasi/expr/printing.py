"""Render expressions as grammar text (round-trippable) or LaTeX."""

from __future__ import annotations

from fractions import Fraction

from .nodes import Add, Expr, Fn, Mul, Num, Pow, Sym, split_coeff

_GREEK = {
    "alpha", "beta", "gamma", "delta", "epsilon", "zeta", "eta", "theta", "iota", "kappa",
    "lambda", "mu", "nu", "xi", "pi", "rho", "sigma", "tau", "upsilon", "phi", "chi", "psi",
    "omega", "Gamma", "Delta", "Theta", "Lambda", "Xi", "Pi", "Sigma", "Upsilon", "Phi", "Psi",
    "Omega",
}


def _split_fraction(e: Expr):
    """Return (coeff, numerator factors, denominator factors with positive exponents)."""
    coeff, rest = split_coeff(e)
    factors = rest.factors if isinstance(rest, Mul) else (() if rest == Num(1) else (rest,))
    num, den = [], []
    for f in factors:
        if isinstance(f, Pow) and f.exp < 0:
            den.append(f.base if f.exp == -1 else Pow(f.base, -f.exp))
        else:
            num.append(f)
    return coeff, num, den


# -- grammar text ---------------------------------------------------------------


def to_text(e: Expr) -> str:
    """Text in the parser's grammar; ``parse(to_text(e)) == e`` structurally."""
    if isinstance(e, Add):
        # print the highest-order term first; prefer a positive leading term
        terms = list(reversed(e.terms))
        for i, t in enumerate(terms):
            if split_coeff(t)[0] > 0:
                terms.insert(0, terms.pop(i))
                break
        out = _text_signed(terms[0], first=True)
        for t in terms[1:]:
            out += _text_signed(t, first=False)
        return out
    return _text_signed(e, first=True)


def _text_signed(e: Expr, first: bool) -> str:
    coeff, _ = split_coeff(e)
    if coeff < 0:
        body = _text_product(-coeff, e)
        return ("-" if first else " - ") + body
    body = _text_product(coeff, e)
    return body if first else " + " + body


def _text_product(abs_coeff: Fraction, e: Expr) -> str:
    _, num, den = _split_fraction(e)
    parts = []
    if abs_coeff.numerator != 1 or not num:
        parts.append(str(abs_coeff.numerator))
    parts.extend(_text_factor(f) for f in num)
    out = "*".join(parts)
    den_parts = ([str(abs_coeff.denominator)] if abs_coeff.denominator != 1 else []) + [_text_factor(f) for f in den]
    if den_parts:
        if len(den_parts) == 1:
            out += "/" + den_parts[0]
        else:
            out += "/(" + "*".join(den_parts) + ")"
    return out


def _text_factor(e: Expr) -> str:
    if isinstance(e, Add):
        return "(" + to_text(e) + ")"
    return _text_atomic(e)


def _text_atomic(e: Expr) -> str:
    if isinstance(e, Num):
        v = e.value
        if v.denominator == 1 and v >= 0:
            return str(v.numerator)
        return "(" + _num_text(v) + ")"
    if isinstance(e, Sym):
        return e.name
    if isinstance(e, Fn):
        return f"{e.name}({to_text(e.arg)})"
    if isinstance(e, Pow):
        if e.exp == Fraction(1, 2):
            return f"sqrt({to_text(e.base)})"
        if e.exp < 0:
            return "(" + to_text(e) + ")"
        base = e.base
        if isinstance(base, (Sym, Fn)) or (isinstance(base, Pow) and base.exp == Fraction(1, 2)) or (
            isinstance(base, Num) and base.value.denominator == 1 and base.value >= 0
        ):
            btxt = _text_atomic(base)
        else:
            btxt = "(" + to_text(base) + ")"
        if e.exp.denominator == 1:
            return f"{btxt}^{e.exp.numerator}"
        return f"{btxt}^({e.exp.numerator}/{e.exp.denominator})"
    if isinstance(e, (Mul, Add)):
        return "(" + to_text(e) + ")"
    raise TypeError(type(e))  # pragma: no cover


def _num_text(v: Fraction) -> str:
    if v.denominator == 1:
        return str(v.numerator)
    return f"{v.numerator}/{v.denominator}"


# -- LaTeX ------------------------------------------------------------------------


def latex_symbol(name: str) -> str:
    if name in _GREEK:
        return "\\" + name
    stem = name.rstrip("0123456789")
    digits = name[len(stem):]
    if digits and stem:
        return f"{latex_symbol(stem)}^{{{digits}}}"
    return name


def to_latex(e: Expr) -> str:
    if isinstance(e, Add):
        terms = list(reversed(e.terms))
        for i, t in enumerate(terms):
            if split_coeff(t)[0] > 0:
                terms.insert(0, terms.pop(i))
                break
        out = ""
        for i, t in enumerate(terms):
            coeff, _ = split_coeff(t)
            body = _latex_product(abs(coeff), t)
            if coeff < 0:
                out += ("-" if i == 0 else " - ") + body
            else:
                out += body if i == 0 else " + " + body
        return out
    coeff, _ = split_coeff(e)
    body = _latex_product(abs(coeff), e)
    return "-" + body if coeff < 0 else body


def _latex_product(abs_coeff: Fraction, e: Expr) -> str:
    _, num, den = _split_fraction(e)
    num_parts = []
    if abs_coeff.numerator != 1 or not num:
        num_parts.append(str(abs_coeff.numerator))
    num_parts.extend(_latex_factor(f, len(num) > 1 or abs_coeff.numerator != 1) for f in num)
    den_parts = ([str(abs_coeff.denominator)] if abs_coeff.denominator != 1 else []) + [
        _latex_factor(f, len(den) > 1 or abs_coeff.denominator != 1) for f in den
    ]
    numerator = " \\, ".join(num_parts)
    if den_parts:
        return f"\\frac{{{numerator}}}{{{' '.join(den_parts)}}}"
    return numerator


def _latex_factor(e: Expr, paren_sums: bool) -> str:
    if isinstance(e, Add):
        inner = to_latex(e)
        return f"\\left({inner}\\right)" if paren_sums else inner
    if isinstance(e, Num):
        return _num_text(e.value) if e.value.denominator == 1 else f"\\frac{{{e.value.numerator}}}{{{e.value.denominator}}}"
    if isinstance(e, Sym):
        return latex_symbol(e.name)
    if isinstance(e, Fn):
        name = {"log": "\\log", "sin": "\\sin", "cos": "\\cos", "tan": "\\tan", "exp": "\\exp"}[e.name]
        if e.name == "exp":
            return f"e^{{{to_latex(e.arg)}}}"
        return f"{name}\\left({to_latex(e.arg)}\\right)"
    if isinstance(e, Pow):
        if e.exp == Fraction(1, 2):
            return f"\\sqrt{{{to_latex(e.base)}}}"
        base = e.base
        if isinstance(base, Sym):
            btxt = latex_symbol(base.name)
        elif isinstance(base, Fn) and base.name != "exp":
            btxt = _latex_factor(base, True)
            # sin(x)^2 in the usual style
            name = btxt.split("\\left(")[0]
            arg = btxt[len(name):]
            exp = _num_text(e.exp) if e.exp.denominator == 1 else f"{e.exp.numerator}/{e.exp.denominator}"
            return f"{name}{arg}^{{{exp}}}"
        else:
            btxt = f"\\left({to_latex(base)}\\right)"
        exp = _num_text(e.exp) if e.exp.denominator == 1 else f"{e.exp.numerator}/{e.exp.denominator}"
        return f"{btxt}^{{{exp}}}"
    return f"\\left({to_latex(e)}\\right)"
