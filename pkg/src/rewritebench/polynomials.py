"""Exact multivariate polynomial arithmetic and the normalization oracle.

A polynomial is a finite map from monomials to nonzero integer coefficients;
coefficients are Python ints, so arithmetic never overflows or rounds.  The
canonical printed form orders monomials by total degree descending, breaking
ties lexicographically by variable, e.g. ``2*x^2+5*x+y+3``.
"""

from __future__ import annotations

from typing import Mapping

from .terms import Constant, Term, Variable, is_numeral, subterms

# A monomial is a sorted tuple of (variable, exponent) pairs, exponents > 0.
# The empty tuple is the constant monomial.
Monomial = tuple[tuple[str, int], ...]

ONE: Monomial = ()


class PolynomialError(ValueError):
    """A term falls outside the polynomial fragment."""


class NonConstantExponentError(PolynomialError):
    pass


class NegativeExponentError(PolynomialError):
    pass


class UnboundVariableError(KeyError):
    pass


def _mul_monomials(a: Monomial, b: Monomial) -> Monomial:
    exps = dict(a)
    for var, e in b:
        exps[var] = exps.get(var, 0) + e
    return tuple(sorted(exps.items()))


def monomial_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


class Polynomial:
    """Immutable-by-convention sparse polynomial with int coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[Monomial, int] | None = None):
        self.coeffs: dict[Monomial, int] = {
            m: c for m, c in (coeffs or {}).items() if c != 0
        }

    @classmethod
    def constant(cls, value: int) -> "Polynomial":
        return cls({ONE: value})

    @classmethod
    def variable(cls, name: str) -> "Polynomial":
        return cls({((name, 1),): 1})

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Polynomial) and self.coeffs == other.coeffs

    def __repr__(self) -> str:
        return f"Polynomial({self.coeffs!r})"

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return all(m == ONE for m in self.coeffs)

    def constant_value(self) -> int:
        if not self.is_constant():
            raise PolynomialError("polynomial is not constant")
        return self.coeffs.get(ONE, 0)

    def __add__(self, other: "Polynomial") -> "Polynomial":
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            out[m] = out.get(m, 0) + c
        return Polynomial(out)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        out: dict[Monomial, int] = {}
        for ma, ca in self.coeffs.items():
            for mb, cb in other.coeffs.items():
                m = _mul_monomials(ma, mb)
                out[m] = out.get(m, 0) + ca * cb
        return Polynomial(out)

    def __pow__(self, exponent: int) -> "Polynomial":
        if exponent < 0:
            raise NegativeExponentError(f"negative exponent {exponent}")
        result = Polynomial.constant(1)
        base = self
        e = exponent
        while e:  # square-and-multiply
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result


def normalize(term: Term) -> Polynomial:
    """Expand a ``+``/``*``/``^`` term into its canonical polynomial.

    The right operand of ``^`` may be any subterm as long as it normalizes to
    a nonnegative constant (so ``x^(1+1)`` is fine, ``x^y`` is not).
    """
    if isinstance(term, Variable):
        return Polynomial.variable(term.name)
    if isinstance(term, Constant):
        if not is_numeral(term.name):
            raise PolynomialError(f"non-numeric constant {term.name!r}")
        return Polynomial.constant(int(term.name))
    if term.fun == "+":
        result = Polynomial()
        for arg in term.args:
            result = result + normalize(arg)
        return result
    if term.fun == "*":
        result = Polynomial.constant(1)
        for arg in term.args:
            result = result * normalize(arg)
        return result
    if term.fun == "^" and len(term.args) == 2:
        base, expt = term.args
        p_expt = normalize(expt)
        if not p_expt.is_constant():
            raise NonConstantExponentError("exponent does not normalize to a constant")
        e = p_expt.constant_value()
        if e < 0:
            raise NegativeExponentError(f"negative exponent {e}")
        return normalize(base) ** e
    raise PolynomialError(f"symbol {term.fun!r}/{len(term.args)} is not polynomial")


def _monomial_sort_key(m: Monomial):
    # Graded order: total degree descending, then variables alphabetically
    # with higher exponents first (x^2 before x*y before y^2).
    return (-monomial_degree(m), tuple((var, -e) for var, e in m))


def _format_monomial(m: Monomial, coeff: int) -> str:
    if m == ONE:
        return str(coeff)
    factors = [] if coeff == 1 else [str(coeff)]
    factors += [var if e == 1 else f"{var}^{e}" for var, e in m]
    return "*".join(factors)


def print_normal(p: Polynomial) -> str:
    """Unique canonical rendering; the zero polynomial prints as ``0``."""
    if p.is_zero():
        return "0"
    parts = [_format_monomial(m, p.coeffs[m]) for m in sorted(p.coeffs, key=_monomial_sort_key)]
    return "+".join(parts)


def eval_term(term: Term, assignment: Mapping[str, int]) -> int:
    """Evaluate a term directly, without normalizing.

    Kept independent of normalize() so the two can cross-check each other.
    Exponents must be variable-free and evaluate to nonnegative integers.
    """
    if isinstance(term, Variable):
        if term.name not in assignment:
            raise UnboundVariableError(term.name)
        return assignment[term.name]
    if isinstance(term, Constant):
        if not is_numeral(term.name):
            raise PolynomialError(f"non-numeric constant {term.name!r}")
        return int(term.name)
    if term.fun == "+":
        return sum(eval_term(a, assignment) for a in term.args)
    if term.fun == "*":
        result = 1
        for a in term.args:
            result *= eval_term(a, assignment)
        return result
    if term.fun == "^" and len(term.args) == 2:
        base, expt = term.args
        if any(isinstance(t, Variable) for t in subterms(expt)):
            raise NonConstantExponentError("exponent contains a variable")
        e = eval_term(expt, {})
        if e < 0:
            raise NegativeExponentError(f"negative exponent {e}")
        return eval_term(base, assignment) ** e
    raise PolynomialError(f"symbol {term.fun!r}/{len(term.args)} is not polynomial")


def eval_poly(p: Polynomial, assignment: Mapping[str, int]) -> int:
    """Evaluate a polynomial; agrees with eval_term after normalize."""
    total = 0
    for m, c in p.coeffs.items():
        value = c
        for var, e in m:
            if var not in assignment:
                raise UnboundVariableError(var)
            value *= assignment[var] ** e
        total += value
    return total
