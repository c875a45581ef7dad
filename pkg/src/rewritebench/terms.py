"""First-order terms: parsing, printing, tokenizing and variable canonicalization.

Two concrete syntaxes are supported:

* ``tptp`` -- function application syntax ``f(a, X)`` where identifiers
  starting with an uppercase letter are variables and everything else is a
  constant or function symbol.
* ``infix`` -- arithmetic expressions over ``+``, ``*``, ``^`` with
  parentheses; which identifiers count as variables is configured on the
  Syntax (everything else is a constant).

Terms are immutable values; all functions here are pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence, Union

TokenSeq = tuple[str, ...]


class TermSyntaxError(ValueError):
    """Raised on malformed input; carries the offending position."""

    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class CapacityError(ValueError):
    """More distinct variables than the canonical alphabet can name."""


@dataclass(frozen=True)
class Variable:
    name: str


@dataclass(frozen=True)
class Constant:
    name: str


@dataclass(frozen=True)
class Apply:
    fun: str
    args: tuple["Term", ...]

    def __post_init__(self):
        if not self.args:
            raise ValueError("Apply requires at least one argument")


Term = Union[Variable, Constant, Apply]

# Binary operators of the infix syntax, lowest precedence first.
INFIX_OPERATORS = ("+", "*", "^")

DEFAULT_INFIX_VARIABLES = ("x", "y", "z", "u", "w")


@dataclass(frozen=True)
class Syntax:
    """Concrete syntax descriptor.

    ``variables`` is only meaningful for the infix syntax, where it doubles
    as the canonical renaming alphabet (in order).  The tptp syntax marks
    variables by capitalization and renames to X0, X1, ...
    """

    kind: str  # "tptp" | "infix"
    variables: tuple[str, ...] = DEFAULT_INFIX_VARIABLES

    def __post_init__(self):
        if self.kind not in ("tptp", "infix"):
            raise ValueError(f"unknown syntax kind: {self.kind!r}")

    def is_variable_name(self, name: str) -> bool:
        if self.kind == "tptp":
            return name[0].isalpha() and name[0].isupper()
        return name in self.variables


TPTP = Syntax("tptp")
INFIX = Syntax("infix")


def is_numeral(token: str) -> bool:
    return token.isascii() and token.isdigit()


def _is_ident_start(ch: str) -> bool:
    return ch.isascii() and (ch.isalpha() or ch == "_")


def _is_ident_char(ch: str) -> bool:
    return ch.isascii() and (ch.isalnum() or ch == "_")


_PUNCT = {
    "tptp": set("(),"),
    "infix": set("()+*^"),
}


def tokenize(text: str, syntax: Syntax) -> TokenSeq:
    """Split text into tokens: identifiers, maximal digit runs, punctuation.

    Whitespace separates tokens and is otherwise ignored.
    """
    punct = _PUNCT[syntax.kind]
    tokens: list[str] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in punct:
            tokens.append(ch)
            i += 1
        elif ch.isdigit():
            j = i + 1
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(text[i:j])
            i = j
        elif _is_ident_start(ch):
            j = i + 1
            while j < n and _is_ident_char(text[j]):
                j += 1
            tokens.append(text[i:j])
            i = j
        else:
            raise TermSyntaxError(f"illegal character {ch!r}", i)
    return tuple(tokens)


class _Parser:
    """Recursive-descent parser over a token list."""

    def __init__(self, tokens: Sequence[str], syntax: Syntax):
        self.tokens = tokens
        self.syntax = syntax
        self.pos = 0

    def peek(self) -> str | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> str:
        tok = self.peek()
        if tok is None:
            raise TermSyntaxError("unexpected end of input", self.pos)
        self.pos += 1
        return tok

    def expect(self, token: str) -> None:
        tok = self.peek()
        if tok != token:
            raise TermSyntaxError(f"expected {token!r}, found {tok!r}", self.pos)
        self.pos += 1

    def done(self) -> None:
        if self.pos != len(self.tokens):
            raise TermSyntaxError(f"trailing input {self.peek()!r}", self.pos)

    # tptp: term := atom | fun '(' term (',' term)* ')'
    def tptp_term(self) -> Term:
        tok = self.take()
        if is_numeral(tok):
            return Constant(tok)
        if not _is_ident_start(tok[0]):
            raise TermSyntaxError(f"expected a term, found {tok!r}", self.pos - 1)
        if self.peek() == "(":
            if self.syntax.is_variable_name(tok):
                raise TermSyntaxError(f"variable {tok!r} cannot be applied", self.pos - 1)
            self.take()
            args = [self.tptp_term()]
            while self.peek() == ",":
                self.take()
                args.append(self.tptp_term())
            self.expect(")")
            return Apply(tok, tuple(args))
        if self.syntax.is_variable_name(tok):
            return Variable(tok)
        return Constant(tok)

    # infix: sum := product ('+' product)*, etc.; all operators left-associative
    def infix_sum(self) -> Term:
        t = self.infix_product()
        while self.peek() == "+":
            self.take()
            t = Apply("+", (t, self.infix_product()))
        return t

    def infix_product(self) -> Term:
        t = self.infix_power()
        while self.peek() == "*":
            self.take()
            t = Apply("*", (t, self.infix_power()))
        return t

    def infix_power(self) -> Term:
        t = self.infix_atom()
        while self.peek() == "^":
            self.take()
            t = Apply("^", (t, self.infix_atom()))
        return t

    def infix_atom(self) -> Term:
        tok = self.take()
        if tok == "(":
            t = self.infix_sum()
            self.expect(")")
            return t
        if is_numeral(tok):
            return Constant(tok)
        if _is_ident_start(tok[0]):
            if self.syntax.is_variable_name(tok):
                return Variable(tok)
            return Constant(tok)
        raise TermSyntaxError(f"expected a term, found {tok!r}", self.pos - 1)


def parse_term(text: str, syntax: Syntax) -> Term:
    """Parse text in the given syntax; raises TermSyntaxError on bad input."""
    tokens = tokenize(text, syntax)
    if not tokens:
        raise TermSyntaxError("empty input", 0)
    parser = _Parser(tokens, syntax)
    term = parser.tptp_term() if syntax.kind == "tptp" else parser.infix_sum()
    parser.done()
    return term


def print_term(term: Term, syntax: Syntax) -> str:
    """Render a term; parse_term(print_term(t)) is structurally t.

    Infix printing parenthesizes every compound argument, so the output is
    insensitive to operator precedence.
    """
    if syntax.kind == "tptp":
        return _print_tptp(term)
    return _print_infix(term)


def _print_tptp(term: Term) -> str:
    if isinstance(term, (Variable, Constant)):
        return term.name
    return f"{term.fun}({', '.join(_print_tptp(a) for a in term.args)})"


def _print_infix(term: Term) -> str:
    if isinstance(term, (Variable, Constant)):
        return term.name
    if term.fun not in INFIX_OPERATORS or len(term.args) != 2:
        raise ValueError(f"symbol {term.fun!r}/{len(term.args)} is not printable in infix syntax")
    left, right = (f"({_print_infix(a)})" if isinstance(a, Apply) else a.name for a in term.args)
    return f"{left}{term.fun}{right}"


def to_prefix(term: Term) -> TokenSeq:
    """Polish (operator-first) serialization, bracket-free."""
    out: list[str] = []

    def walk(t: Term) -> None:
        if isinstance(t, (Variable, Constant)):
            out.append(t.name)
        else:
            out.append(t.fun)
            for a in t.args:
                walk(a)

    walk(term)
    return tuple(out)


def from_prefix(tokens: Sequence[str], arities: Mapping[str, int], syntax: Syntax) -> Term:
    """Inverse of to_prefix given each function symbol's arity."""
    pos = 0

    def walk() -> Term:
        nonlocal pos
        if pos >= len(tokens):
            raise TermSyntaxError("unexpected end of prefix sequence", pos)
        tok = tokens[pos]
        pos += 1
        arity = arities.get(tok, 0)
        if arity > 0:
            return Apply(tok, tuple(walk() for _ in range(arity)))
        if is_numeral(tok) or not syntax.is_variable_name(tok):
            return Constant(tok)
        return Variable(tok)

    term = walk()
    if pos != len(tokens):
        raise TermSyntaxError("trailing tokens in prefix sequence", pos)
    return term


def subterms(term: Term) -> Iterator[Term]:
    """Preorder traversal of all subterms, the term itself first."""
    yield term
    if isinstance(term, Apply):
        for a in term.args:
            yield from subterms(a)


def term_variables(term: Term) -> list[str]:
    """Variable names in order of first occurrence (preorder)."""
    seen: dict[str, None] = {}
    for t in subterms(term):
        if isinstance(t, Variable):
            seen.setdefault(t.name, None)
    return list(seen)


def _canonical_alphabet(syntax: Syntax, n: int) -> list[str]:
    if syntax.kind == "tptp":
        return [f"X{i}" for i in range(n)]
    if n > len(syntax.variables):
        raise CapacityError(
            f"term has {n} distinct variables but the canonical alphabet has {len(syntax.variables)}"
        )
    return list(syntax.variables[:n])


def alpha_canonical(term: Term, syntax: Syntax) -> Term:
    """Rename variables to the canonical alphabet in first-occurrence order.

    Constants and function symbols are untouched, so two terms are equal
    modulo variable renaming iff their canonical forms are equal.
    """
    order = term_variables(term)
    alphabet = _canonical_alphabet(syntax, len(order))
    renaming = dict(zip(order, alphabet))

    def walk(t: Term) -> Term:
        if isinstance(t, Variable):
            return Variable(renaming[t.name])
        if isinstance(t, Constant):
            return t
        return Apply(t.fun, tuple(walk(a) for a in t.args))

    return walk(term)
