"""Random polynomial term generation and normalization dataset emission.

A term is grown recursively: draw one symbol from the weighted pool; a
constant or variable ends the branch, a function symbol recurses for each
argument.  Inputs longer than the token cap, inputs that fail to normalize,
and duplicate inputs are rejected and regenerated, so the emitted stream is
deterministic in (config, seed) and free of repeats.
"""

from __future__ import annotations

import json
import random
from bisect import bisect_right
from dataclasses import dataclass, field, replace
from itertools import accumulate
from typing import Iterator

from .datasets import ExamplePair
from .polynomials import PolynomialError, normalize, print_normal
from .terms import INFIX_OPERATORS, Apply, Constant, Syntax, Term, Variable, print_term, tokenize


class DepthExceededError(RuntimeError):
    pass


class ExhaustedError(RuntimeError):
    """Rejection sampling stopped making progress."""


# Share of the symbol-choice mass given to function symbols.  Tuned so the
# default configs produce inputs averaging about 25 tokens once the length
# filter is applied; exposed through per-symbol weights for ablations.
FUNCTION_MASS = 0.46


@dataclass(frozen=True)
class GenConfig:
    functions: tuple[str, ...]
    variables: tuple[str, ...]
    constants: tuple[int, ...]
    weights: dict[str, float] = field(default_factory=dict)
    max_input_tokens: int = 50
    max_output_tokens: int | None = None
    count: int = 300_000
    seed: int = 0
    exponent_from_constants: bool = True
    max_depth: int = 100
    max_stall: int = 100_000

    def __post_init__(self):
        for fun in self.functions:
            if fun not in INFIX_OPERATORS:
                raise ValueError(f"unknown function symbol {fun!r}")
        if not self.variables and not self.constants:
            raise ValueError("need at least one variable or constant")
        if "^" in self.functions and self.exponent_from_constants and not self.constants:
            raise ValueError("exponent policy requires constant symbols")
        if any(w <= 0 for w in self.weights.values()):
            raise ValueError("weights must be positive")

    def weight_of(self, symbol: str) -> float:
        return self.weights.get(symbol, 1.0)

    @property
    def syntax(self) -> Syntax:
        return Syntax("infix", variables=self.variables)

    def to_json(self) -> str:
        return json.dumps(
            {
                "functions": list(self.functions),
                "variables": list(self.variables),
                "constants": list(self.constants),
                "weights": self.weights,
                "max_input_tokens": self.max_input_tokens,
                "max_output_tokens": self.max_output_tokens,
                "count": self.count,
                "seed": self.seed,
                "exponent_from_constants": self.exponent_from_constants,
            },
            indent=2,
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str) -> "GenConfig":
        data = json.loads(text)
        return cls(
            functions=tuple(data["functions"]),
            variables=tuple(data["variables"]),
            constants=tuple(int(c) for c in data["constants"]),
            weights={str(k): float(v) for k, v in data.get("weights", {}).items()},
            max_input_tokens=int(data.get("max_input_tokens", 50)),
            max_output_tokens=data.get("max_output_tokens"),
            count=int(data.get("count", 300_000)),
            seed=int(data.get("seed", 0)),
            exponent_from_constants=bool(data.get("exponent_from_constants", True)),
        )


def _balanced_weights(
    functions: tuple[str, ...],
    variables: tuple[str, ...],
    constants: tuple[int, ...],
    function_mass: float = FUNCTION_MASS,
) -> dict[str, float]:
    """Per-symbol weights giving the function class a fixed total share."""
    atoms = list(variables) + [str(c) for c in constants]
    weights = {fun: function_mass / len(functions) for fun in functions}
    weights.update({atom: (1.0 - function_mass) / len(atoms) for atom in atoms})
    return weights


def _make_preset(functions: tuple[str, ...], constants: tuple[int, ...], n_vars: int) -> GenConfig:
    variables = ("x", "y", "z", "u", "w")[:n_vars]
    return GenConfig(
        functions=functions,
        variables=variables,
        constants=constants,
        weights=_balanced_weights(functions, variables, constants),
    )


PRESETS: dict[str, GenConfig] = {
    "poly1": _make_preset(("+", "*"), (0, 1), 1),
    "poly2": _make_preset(("+", "*"), (0, 1), 2),
    "poly3": _make_preset(("+", "*"), (0, 1), 3),
    "poly4": _make_preset(("+", "*"), (0, 1, 2, 3, 4, 5), 5),
    "poly5": _make_preset(("+", "*", "^"), (0, 1), 2),
    "poly6": _make_preset(("+", "*", "^"), (0, 1, 2), 3),
}


class _SymbolSampler:
    """Weighted draw over the config's symbol pool."""

    def __init__(self, config: GenConfig):
        self.pool: list[Term | str] = [fun for fun in config.functions]
        self.pool += [Variable(v) for v in config.variables]
        self.pool += [Constant(str(c)) for c in config.constants]
        names = list(config.functions) + list(config.variables) + [str(c) for c in config.constants]
        self.cum = list(accumulate(config.weight_of(n) for n in names))
        consts = [str(c) for c in config.constants]
        self.constants = [Constant(c) for c in consts]
        self.cum_const = list(accumulate(config.weight_of(c) for c in consts))

    def draw(self, rng: random.Random) -> Term | str:
        i = bisect_right(self.cum, rng.random() * self.cum[-1])
        return self.pool[min(i, len(self.pool) - 1)]

    def draw_constant(self, rng: random.Random) -> Term:
        i = bisect_right(self.cum_const, rng.random() * self.cum_const[-1])
        return self.constants[min(i, len(self.constants) - 1)]


def _grow(sampler: _SymbolSampler, config: GenConfig, rng: random.Random, depth: int) -> Term:
    if depth > config.max_depth:
        raise DepthExceededError(f"recursion past depth {config.max_depth}")
    chosen = sampler.draw(rng)
    if not isinstance(chosen, str):
        return chosen
    if chosen == "^" and config.exponent_from_constants:
        base = _grow(sampler, config, rng, depth + 1)
        return Apply("^", (base, sampler.draw_constant(rng)))
    left = _grow(sampler, config, rng, depth + 1)
    right = _grow(sampler, config, rng, depth + 1)
    return Apply(chosen, (left, right))


def gen_term(config: GenConfig, rng: random.Random) -> Term:
    """One random term; raises DepthExceededError past the safety depth."""
    return _grow(_SymbolSampler(config), config, rng, 0)


def gen_dataset(config: GenConfig, count: int | None = None) -> Iterator[ExamplePair]:
    """Stream (input tokens, canonical-form tokens) pairs.

    Stops after ``count`` pairs (config.count by default); raises
    ExhaustedError when max_stall consecutive attempts yield nothing new.
    """
    target = config.count if count is None else count
    syntax = config.syntax
    sampler = _SymbolSampler(config)
    rng = random.Random(config.seed)
    seen: set[str] = set()
    stall = 0
    emitted = 0
    while emitted < target:
        if stall >= config.max_stall:
            raise ExhaustedError(f"no new unique example in {stall} attempts")
        stall += 1
        try:
            term = _grow(sampler, config, rng, 0)
        except DepthExceededError:
            continue
        text = print_term(term, syntax)
        src = tokenize(text, syntax)
        if len(src) > config.max_input_tokens or text in seen:
            continue
        try:
            tgt = tokenize(print_normal(normalize(term)), syntax)
        except PolynomialError:
            continue
        if config.max_output_tokens is not None and len(tgt) > config.max_output_tokens:
            continue
        seen.add(text)
        stall = 0
        emitted += 1
        yield ExamplePair(src, tgt)


def with_overrides(config: GenConfig, **kwargs) -> GenConfig:
    return replace(config, **kwargs)
