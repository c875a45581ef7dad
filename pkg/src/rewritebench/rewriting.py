"""Single-step rewriting: matching, substitution and example-pair synthesis.

A rule is an oriented equation ``lhs = rhs``; applying it at a position
replaces an instance of the left side by the correspondingly instantiated
right side.  Matching is one-sided: variables in the pattern bind, variables
in the subject behave like constants.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Mapping

from .datasets import ExamplePair
from .terms import (
    TPTP,
    Apply,
    Constant,
    Syntax,
    Term,
    Variable,
    parse_term,
    print_term,
    term_variables,
    tokenize,
)

Position = tuple[int, ...]
Substitution = Mapping[str, Term]

ROOT: Position = ()


class NoMatchError(ValueError):
    pass


class InvalidPositionError(IndexError):
    pass


@dataclass(frozen=True)
class RewriteRule:
    lhs: Term
    rhs: Term
    name: str

    def __post_init__(self):
        missing = set(term_variables(self.rhs)) - set(term_variables(self.lhs))
        if missing:
            raise ValueError(f"rule {self.name!r}: right side invents variables {sorted(missing)}")

    @property
    def is_ground(self) -> bool:
        return not term_variables(self.lhs) and not term_variables(self.rhs)


def match_at(pattern: Term, subject: Term) -> dict[str, Term] | None:
    """Find the unique substitution making the pattern equal the subject.

    Returns None when there is none.  A repeated pattern variable has to
    bind to structurally identical subterms.
    """
    binding: dict[str, Term] = {}

    def walk(p: Term, s: Term) -> bool:
        if isinstance(p, Variable):
            bound = binding.get(p.name)
            if bound is None:
                binding[p.name] = s
                return True
            return bound == s
        if isinstance(p, Constant):
            return p == s
        return (
            isinstance(s, Apply)
            and p.fun == s.fun
            and len(p.args) == len(s.args)
            and all(walk(pa, sa) for pa, sa in zip(p.args, s.args))
        )

    return binding if walk(pattern, subject) else None


def substitute(term: Term, subst: Substitution) -> Term:
    if isinstance(term, Variable):
        return subst.get(term.name, term)
    if isinstance(term, Constant):
        return term
    return Apply(term.fun, tuple(substitute(a, subst) for a in term.args))


def subterm_positions(term: Term) -> list[Position]:
    """All positions in preorder; the root is the empty tuple."""
    positions: list[Position] = []

    def walk(t: Term, pos: Position) -> None:
        positions.append(pos)
        if isinstance(t, Apply):
            for i, a in enumerate(t.args):
                walk(a, pos + (i,))

    walk(term, ROOT)
    return positions


def subterm_at(term: Term, pos: Position) -> Term:
    for i in pos:
        if not isinstance(term, Apply) or not 0 <= i < len(term.args):
            raise InvalidPositionError(f"no subterm at position {pos}")
        term = term.args[i]
    return term


def replace_at(term: Term, pos: Position, replacement: Term) -> Term:
    if not pos:
        return replacement
    i = pos[0]
    if not isinstance(term, Apply) or not 0 <= i < len(term.args):
        raise InvalidPositionError(f"no subterm at position {pos}")
    args = list(term.args)
    args[i] = replace_at(args[i], pos[1:], replacement)
    return Apply(term.fun, tuple(args))


def apply_rule_at(term: Term, rule: RewriteRule, pos: Position) -> Term:
    """Rewrite the subterm at pos with the rule; everything else is untouched."""
    theta = match_at(rule.lhs, subterm_at(term, pos))
    if theta is None:
        raise NoMatchError(f"rule {rule.name!r} does not match at position {pos}")
    return replace_at(term, pos, substitute(rule.rhs, theta))


def all_single_rewrites(term: Term, rule: RewriteRule) -> list[tuple[Position, Term]]:
    """Every result of one rule application, one entry per matching position."""
    results = []
    for pos in subterm_positions(term):
        theta = match_at(rule.lhs, subterm_at(term, pos))
        if theta is not None:
            results.append((pos, replace_at(term, pos, substitute(rule.rhs, theta))))
    return results


def parse_rule(text: str, name: str, syntax: Syntax = TPTP) -> RewriteRule:
    """Parse an oriented equation written as ``lhs = rhs``."""
    left, sep, right = text.partition("=")
    if not sep:
        raise ValueError(f"rule {name!r}: expected 'lhs = rhs', got {text!r}")
    return RewriteRule(parse_term(left, syntax), parse_term(right, syntax), name)


def load_rules(path: str | Path, syntax: Syntax = TPTP) -> list[RewriteRule]:
    """One rule per line; the file name provides the rule name.

    A file with several rules numbers them name_1, name_2, ...
    """
    path = Path(path)
    lines = [line.strip() for line in path.read_text(encoding="utf-8").splitlines()]
    lines = [line for line in lines if line and not line.startswith("#")]
    stem = path.stem
    if len(lines) == 1:
        return [parse_rule(lines[0], stem, syntax)]
    return [parse_rule(line, f"{stem}_{i}", syntax) for i, line in enumerate(lines, start=1)]


JOINT = "joint"
PER_RULE = "per-rule"


def synth_pairs(
    rules: Iterable[RewriteRule],
    terms: Iterable[Term],
    mode: str = JOINT,
    syntax: Syntax = TPTP,
) -> Iterator[tuple[str, ExamplePair]]:
    """Emit one (dataset name, before/after pair) per applicable (rule, position).

    In joint mode every pair lands in the single dataset ``joint``; in
    per-rule mode the dataset name is the rule name, giving one dataset per
    rule.  Terms with no applicable rule contribute nothing.
    """
    if mode not in (JOINT, PER_RULE):
        raise ValueError(f"unknown mode {mode!r}")
    rules = list(rules)
    for term in terms:
        before = tokenize(print_term(term, syntax), syntax)
        for rule in rules:
            for _, rewritten in all_single_rewrites(term, rule):
                after = tokenize(print_term(rewritten, syntax), syntax)
                name = rule.name if mode == PER_RULE else JOINT
                yield name, ExamplePair(before, after)


def group_pairs(stream: Iterable[tuple[str, ExamplePair]]) -> dict[str, list[ExamplePair]]:
    groups: dict[str, list[ExamplePair]] = {}
    for name, pair in stream:
        groups.setdefault(name, []).append(pair)
    return groups
