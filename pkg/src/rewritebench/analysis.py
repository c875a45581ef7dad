"""Prediction scoring, masked-duplicate leakage analysis and edit distances.

Exact match is computed on whitespace-normalized token sequences.  Wrong
outputs are broken down further: do they still parse, do they differ from
the reference only in numeral tokens, are they the reference up to a
consistent renaming of variables.  Leakage analysis masks numerals (and
optionally minus signs) and counts test lines whose masked form never
occurs among the masked training lines.
"""

from __future__ import annotations

import random
import statistics
from dataclasses import dataclass
from typing import Iterable, Sequence

from .datasets import AlignmentError
from .terms import (
    CapacityError,
    Syntax,
    Term,
    TermSyntaxError,
    alpha_canonical,
    is_numeral,
    parse_term,
    print_term,
    tokenize,
)

CONST_TOKEN = "CONST"


def mask_constants(tokens: Sequence[str]) -> tuple[str, ...]:
    """Replace every numeral token by CONST; idempotent."""
    return tuple(CONST_TOKEN if is_numeral(tok) else tok for tok in tokens)


def mask_signs(tokens: Sequence[str]) -> tuple[str, ...]:
    """Replace every '-' token by '+'; idempotent."""
    return tuple("+" if tok == "-" else tok for tok in tokens)


@dataclass
class LeakageReport:
    n_test: int
    unique_mod_constant: int
    unique_mod_constant_fraction: float
    unique_mod_constant_and_sign: int | None = None
    unique_mod_constant_and_sign_fraction: float | None = None
    renamed_overlap_fraction: float | None = None
    levenshtein: "LevenshteinStats | None" = None

    def to_dict(self) -> dict:
        out = {
            "n_test": self.n_test,
            "unique_mod_constant": self.unique_mod_constant,
            "unique_mod_constant_fraction": self.unique_mod_constant_fraction,
        }
        if self.unique_mod_constant_and_sign is not None:
            out["unique_mod_constant_and_sign"] = self.unique_mod_constant_and_sign
            out["unique_mod_constant_and_sign_fraction"] = self.unique_mod_constant_and_sign_fraction
        if self.renamed_overlap_fraction is not None:
            out["renamed_overlap_fraction"] = self.renamed_overlap_fraction
        if self.levenshtein is not None:
            out["levenshtein"] = self.levenshtein.to_dict()
        return out


@dataclass
class EvalReport:
    n_examples: int
    n_correct: int
    exact_match_accuracy: float
    parse_rate_of_wrong: float
    wrong_only_constants_fraction: float
    correct_mod_renaming_fraction: float
    accuracy_excluding_renamed: float | None = None
    n_renamed_in_test: int | None = None
    n_unparseable: int = 0

    @property
    def n_wrong(self) -> int:
        return self.n_examples - self.n_correct

    def to_dict(self) -> dict:
        out = {
            "n_examples": self.n_examples,
            "n_correct": self.n_correct,
            "n_wrong": self.n_wrong,
            "exact_match_accuracy": self.exact_match_accuracy,
            "parse_rate_of_wrong": self.parse_rate_of_wrong,
            "wrong_only_constants_fraction": self.wrong_only_constants_fraction,
            "correct_mod_renaming_fraction": self.correct_mod_renaming_fraction,
            "n_unparseable": self.n_unparseable,
        }
        if self.accuracy_excluding_renamed is not None:
            out["accuracy_excluding_renamed"] = self.accuracy_excluding_renamed
            out["n_renamed_in_test"] = self.n_renamed_in_test
        return out


@dataclass
class LevenshteinStats:
    mean: float
    median: float
    minimum: int
    maximum: int
    sample_size: int

    def to_dict(self) -> dict:
        return {
            "mean": self.mean,
            "median": self.median,
            "min": self.minimum,
            "max": self.maximum,
            "sample_size": self.sample_size,
        }


def _masked_key(line: str, with_sign: bool) -> tuple[str, ...]:
    masked = mask_constants(line.split())
    return mask_signs(masked) if with_sign else masked


def leakage_report(
    train_src: Iterable[str],
    test_src: Sequence[str],
    with_sign: bool = False,
) -> LeakageReport:
    """Count test lines that stay unique after masking.

    A test line is unique when its masked form matches no masked training
    line.  With with_sign the sign-insensitive variant is reported as well;
    it can only merge more lines, so its unique count is never larger.
    """
    train_const = set()
    train_sign = set()
    for line in train_src:
        key = _masked_key(line, with_sign=False)
        train_const.add(key)
        if with_sign:
            train_sign.add(mask_signs(key))
    n_test = len(test_src)
    unique_const = sum(1 for line in test_src if _masked_key(line, False) not in train_const)
    report = LeakageReport(
        n_test=n_test,
        unique_mod_constant=unique_const,
        unique_mod_constant_fraction=unique_const / n_test if n_test else 0.0,
    )
    if with_sign:
        unique_sign = sum(1 for line in test_src if _masked_key(line, True) not in train_sign)
        report.unique_mod_constant_and_sign = unique_sign
        report.unique_mod_constant_and_sign_fraction = unique_sign / n_test if n_test else 0.0
    return report


def _canonical_line(line: str, syntax: Syntax, lineno: int) -> tuple[tuple[str, ...], str]:
    """(verbatim token key, canonical-form key) of one source line."""
    try:
        tokens = tokenize(line, syntax)
        term = parse_term(line, syntax)
    except TermSyntaxError as exc:
        raise TermSyntaxError(f"line {lineno}: {exc}") from exc
    return tokens, print_term(alpha_canonical(term, syntax), syntax)


def renamed_flags(
    train_src: Iterable[str],
    test_src: Sequence[str],
    syntax: Syntax,
) -> list[bool]:
    """Per test line: is it a renamed (but not verbatim) copy of a training line."""
    train_verbatim = set()
    train_canonical = set()
    for i, line in enumerate(train_src, start=1):
        tokens, canon = _canonical_line(line, syntax, i)
        train_verbatim.add(tokens)
        train_canonical.add(canon)
    flags = []
    for i, line in enumerate(test_src, start=1):
        tokens, canon = _canonical_line(line, syntax, i)
        flags.append(tokens not in train_verbatim and canon in train_canonical)
    return flags


def renamed_overlap(
    train_src: Iterable[str],
    test_src: Sequence[str],
    syntax: Syntax,
) -> float:
    """Fraction of test inputs that match a training input after renaming only."""
    flags = renamed_flags(train_src, test_src, syntax)
    return sum(flags) / len(flags) if flags else 0.0


def _try_parse(tokens: tuple[str, ...], syntax: Syntax) -> Term | None:
    try:
        return parse_term(" ".join(tokens), syntax)
    except TermSyntaxError:
        return None


def _canonical_or_none(term: Term, syntax: Syntax) -> str | None:
    try:
        return print_term(alpha_canonical(term, syntax), syntax)
    except CapacityError:
        return None


def score_predictions(
    pred: Sequence[str],
    ref: Sequence[str],
    src: Sequence[str],
    syntax: Syntax,
    train_src: Sequence[str] | None = None,
) -> EvalReport:
    """Exact-match scoring with the wrong-output breakdown.

    Unparseable predictions count as wrong and non-parsing but are excluded
    from the constants-only and renaming subcategories.  When train_src is
    given, accuracy is also recomputed with renamed test inputs dropped.
    """
    if not (len(pred) == len(ref) == len(src)):
        raise AlignmentError(
            f"line counts differ: pred={len(pred)} ref={len(ref)} src={len(src)}"
        )
    n = len(pred)
    correct_flags = []
    n_correct = 0
    n_parse = n_const_only = n_renamed_eq = n_unparseable = 0
    for pred_line, ref_line in zip(pred, ref):
        pred_tokens = tuple(pred_line.split())
        ref_tokens = tuple(ref_line.split())
        if pred_tokens == ref_tokens:
            n_correct += 1
            correct_flags.append(True)
            continue
        correct_flags.append(False)
        pred_term = _try_parse(pred_tokens, syntax)
        if pred_term is None:
            n_unparseable += 1
            continue
        n_parse += 1
        if mask_constants(pred_tokens) == mask_constants(ref_tokens):
            n_const_only += 1
        ref_term = _try_parse(ref_tokens, syntax)
        if ref_term is not None:
            pred_canon = _canonical_or_none(pred_term, syntax)
            ref_canon = _canonical_or_none(ref_term, syntax)
            if pred_canon is not None and pred_canon == ref_canon:
                n_renamed_eq += 1
    n_wrong = n - n_correct
    report = EvalReport(
        n_examples=n,
        n_correct=n_correct,
        exact_match_accuracy=n_correct / n if n else 0.0,
        parse_rate_of_wrong=n_parse / n_wrong if n_wrong else 0.0,
        wrong_only_constants_fraction=n_const_only / n_wrong if n_wrong else 0.0,
        correct_mod_renaming_fraction=n_renamed_eq / n_wrong if n_wrong else 0.0,
        n_unparseable=n_unparseable,
    )
    if train_src is not None:
        flags = renamed_flags(train_src, src, syntax)
        kept = [ok for ok, renamed in zip(correct_flags, flags) if not renamed]
        report.n_renamed_in_test = sum(flags)
        report.accuracy_excluding_renamed = sum(kept) / len(kept) if kept else 0.0
    return report


def _rows_to_table(rows: list[tuple[str, str]]) -> str:
    width = max(len(label) for label, _ in rows)
    return "\n".join(f"{label.ljust(width)}  {value}" for label, value in rows)


def format_eval_table(report: EvalReport) -> str:
    """Aligned two-column rendering of an evaluation report."""
    rows = [
        ("examples", str(report.n_examples)),
        ("correct", str(report.n_correct)),
        ("exact match accuracy", f"{report.exact_match_accuracy:.4f}"),
        ("wrong outputs", str(report.n_wrong)),
        ("  parse rate", f"{report.parse_rate_of_wrong:.4f}"),
        ("  wrong only in constants", f"{report.wrong_only_constants_fraction:.4f}"),
        ("  correct modulo renaming", f"{report.correct_mod_renaming_fraction:.4f}"),
        ("  unparseable", str(report.n_unparseable)),
    ]
    if report.accuracy_excluding_renamed is not None:
        rows.append(("renamed inputs in test", str(report.n_renamed_in_test)))
        rows.append(("accuracy excluding renamed", f"{report.accuracy_excluding_renamed:.4f}"))
    return _rows_to_table(rows)


def _count_with_pct(count: int, total: int) -> str:
    pct = round(100 * count / total) if total else 0
    return f"{count} ({pct}%)"


def format_leakage_table(named_reports: Sequence[tuple[str, LeakageReport]]) -> str:
    """One row per dataset: unique counts next to the test-set size."""
    header = ("dataset", "# unique mod. constant", "# unique mod. constant and sign", "# all test examples")
    body = []
    for name, r in named_reports:
        sign = (
            _count_with_pct(r.unique_mod_constant_and_sign, r.n_test)
            if r.unique_mod_constant_and_sign is not None
            else "--"
        )
        body.append((name, _count_with_pct(r.unique_mod_constant, r.n_test), sign, str(r.n_test)))
    widths = [max(len(row[i]) for row in [header] + body) for i in range(len(header))]
    lines = ["  ".join(col.ljust(w) for col, w in zip(row, widths)).rstrip() for row in [header] + body]
    return "\n".join(lines)


def levenshtein(a: Sequence[str], b: Sequence[str]) -> int:
    """Token-level edit distance with unit insert/delete/substitute costs."""
    if len(a) < len(b):
        a, b = b, a
    previous = list(range(len(b) + 1))
    for i, tok_a in enumerate(a, start=1):
        current = [i]
        for j, tok_b in enumerate(b, start=1):
            cost = 0 if tok_a == tok_b else 1
            current.append(min(previous[j] + 1, current[j - 1] + 1, previous[j - 1] + cost))
        previous = current
    return previous[-1]


def avg_min_levenshtein(
    test_src: Sequence[str],
    train_src: Sequence[str],
    sample_size: int,
    seed: int = 0,
) -> LevenshteinStats:
    """Distance from sampled test lines to their nearest training line."""
    if sample_size < 1:
        raise ValueError("sample_size must be at least 1")
    if not test_src:
        raise ValueError("empty test set")
    train_tokens = [tuple(line.split()) for line in train_src]
    if not train_tokens:
        raise ValueError("empty training set")
    rng = random.Random(seed)
    k = min(sample_size, len(test_src))
    sample_idx = sorted(rng.sample(range(len(test_src)), k))
    distances = []
    for i in sample_idx:
        tokens = tuple(test_src[i].split())
        distances.append(min(levenshtein(tokens, t) for t in train_tokens))
    return LevenshteinStats(
        mean=statistics.fmean(distances),
        median=float(statistics.median(distances)),
        minimum=min(distances),
        maximum=max(distances),
        sample_size=k,
    )
