"""Masking, leakage counting, renamed-duplicate detection and scoring."""

import random

import pytest
from hypothesis import given, settings, strategies as st

from rewritebench.analysis import (
    avg_min_levenshtein,
    leakage_report,
    levenshtein,
    mask_constants,
    mask_signs,
    renamed_overlap,
    score_predictions,
)
from rewritebench.datasets import AlignmentError
from rewritebench.terms import INFIX, TPTP, Syntax


# --- masking -------------------------------------------------------------------


def test_mask_constants_replaces_numerals():
    tokens = ("2", "*", "x", "^", "2", "+", "5", "*", "x", "+", "y", "+", "3")
    assert mask_constants(tokens) == (
        "CONST", "*", "x", "^", "CONST", "+", "CONST", "*", "x", "+", "y", "+", "CONST",
    )


def test_mask_constants_no_numerals():
    assert mask_constants(("x", "+", "y")) == ("x", "+", "y")


def test_mask_constants_idempotent():
    assert mask_constants(("CONST",)) == ("CONST",)


def test_mask_signs():
    assert mask_signs(("x", "-", "2")) == ("x", "+", "2")
    assert mask_signs(("x", "+", "2")) == ("x", "+", "2")
    assert mask_signs(("-", "x")) == ("+", "x")


_tokens = st.lists(st.sampled_from(["x", "y", "+", "-", "*", "3", "17", "CONST"]), max_size=12)


@settings(deadline=None)
@given(_tokens)
def test_masks_idempotent_and_commute(tokens):
    tokens = tuple(tokens)
    assert mask_constants(mask_constants(tokens)) == mask_constants(tokens)
    assert mask_signs(mask_signs(tokens)) == mask_signs(tokens)
    assert mask_signs(mask_constants(tokens)) == mask_constants(mask_signs(tokens))


# --- leakage -------------------------------------------------------------------


def test_leakage_fixture():
    report = leakage_report(["x + 1", "y + 2"], ["x + 3", "z * 5"])
    assert report.n_test == 2
    assert report.unique_mod_constant == 1
    assert report.unique_mod_constant_fraction == 0.5


def test_leakage_verbatim_subset():
    train = ["x + 1", "y * 2"]
    assert leakage_report(train, train).unique_mod_constant == 0


def test_leakage_disjoint_alphabets():
    report = leakage_report(["x + 1"], ["a + 1", "b * 2"])
    assert report.unique_mod_constant == 2


def test_leakage_sign_masking_merges_more():
    train = ["x + 1"]
    test = ["x - 2", "y - 3"]
    report = leakage_report(train, test, with_sign=True)
    assert report.unique_mod_constant == 2  # '-' lines match nothing
    assert report.unique_mod_constant_and_sign == 1  # x - 2 folds onto x + 1
    assert report.unique_mod_constant_and_sign <= report.unique_mod_constant


def test_leakage_monotone_on_random_fixtures():
    rng = random.Random(41)
    vocab = ["x", "y", "+", "-", "*", "1", "2", "3"]
    for _ in range(100):
        train = [" ".join(rng.choices(vocab, k=rng.randint(1, 6))) for _ in range(rng.randint(1, 15))]
        test = [" ".join(rng.choices(vocab, k=rng.randint(1, 6))) for _ in range(rng.randint(1, 15))]
        report = leakage_report(train, test, with_sign=True)
        assert report.unique_mod_constant_and_sign <= report.unique_mod_constant <= report.n_test


# --- renamed overlap --------------------------------------------------------------


def test_renamed_overlap_example():
    syntax = Syntax("infix", variables=("x", "y", "z"))
    assert renamed_overlap(["x*x+y"], ["y*y+z"], syntax) == 1.0


def test_renamed_overlap_verbatim_not_counted():
    assert renamed_overlap(["x+1"], ["x+1"], INFIX) == 0.0


def test_renamed_overlap_disjoint_shapes():
    assert renamed_overlap(["x+1"], ["x*x"], INFIX) == 0.0


def test_renamed_overlap_spaced_and_compact_lines_agree():
    # the same term with different spacing is still verbatim
    assert renamed_overlap(["x + 1"], ["x+1"], INFIX) == 0.0


def test_renamed_overlap_tptp():
    assert renamed_overlap(["f(X, Y)"], ["f(Y, Z)"], TPTP) == 1.0
    assert renamed_overlap(["f(X, X)"], ["f(X, Y)"], TPTP) == 0.0


def test_renamed_overlap_syntax_error_carries_line():
    with pytest.raises(Exception, match="line 1"):
        renamed_overlap(["x +"], ["x"], INFIX)


# --- scoring -------------------------------------------------------------------


def test_score_all_correct():
    lines = ["x ^ 2 + 1", "y + 2"]
    report = score_predictions(lines, lines, ["( x * x ) + 1", "y + 2"], INFIX)
    assert report.n_examples == 2
    assert report.exact_match_accuracy == 1.0
    assert report.n_wrong == 0
    assert report.parse_rate_of_wrong == 0.0
    assert report.wrong_only_constants_fraction == 0.0
    assert report.correct_mod_renaming_fraction == 0.0


def test_score_wrong_only_constants():
    report = score_predictions(
        ["2 * x ^ 2 + 4 * x + 3"],
        ["2 * x ^ 2 + 5 * x + 3"],
        ["x"],
        INFIX,
    )
    assert report.n_wrong == 1
    assert report.parse_rate_of_wrong == 1.0
    assert report.wrong_only_constants_fraction == 1.0
    assert report.correct_mod_renaming_fraction == 0.0


def test_score_swapped_constants_not_renaming():
    report = score_predictions(
        ["t ( v0 , o ( v2 , v1 ) )"],
        ["t ( v0 , o ( v1 , v2 ) )"],
        ["t ( v0 , o ( v1 , o ( v2 , e ) ) )"],
        TPTP,
    )
    assert report.n_wrong == 1
    assert report.parse_rate_of_wrong == 1.0
    assert report.wrong_only_constants_fraction == 0.0
    assert report.correct_mod_renaming_fraction == 0.0


def test_score_correct_mod_renaming():
    report = score_predictions(["f(Y, X)"], ["f(X, Y)"], ["g(e)"], TPTP)
    assert report.n_wrong == 1
    assert report.correct_mod_renaming_fraction == 1.0


def test_score_unparseable_counts_wrong_nonparsing():
    report = score_predictions(["x + + 1", "x"], ["x + 1", "x"], ["s", "s"], INFIX)
    assert report.n_wrong == 1
    assert report.n_unparseable == 1
    assert report.parse_rate_of_wrong == 0.0
    assert report.wrong_only_constants_fraction == 0.0


def test_score_alignment_error():
    with pytest.raises(AlignmentError):
        score_predictions(["x"], ["x", "y"], ["s", "s"], INFIX)


def test_score_partition_counts():
    pred = ["x + 1", "x + 2", "garbage (", "y * y"]
    ref = ["x + 1", "x + 3", "x", "z * z"]
    syntax = Syntax("infix", variables=("x", "y", "z"))
    report = score_predictions(pred, ref, ["a", "b", "c", "d"], syntax)
    assert report.n_correct + report.n_wrong == report.n_examples == 4
    assert report.n_correct == 1
    assert report.n_unparseable == 1
    assert report.parse_rate_of_wrong == pytest.approx(2 / 3)
    assert report.wrong_only_constants_fraction == pytest.approx(1 / 3)
    assert report.correct_mod_renaming_fraction == pytest.approx(1 / 3)


def test_score_excluding_renamed():
    syntax = Syntax("infix", variables=("x", "y", "z"))
    train = ["x + x"]
    src = ["y + y", "x * x"]  # first is a renamed copy of a training input
    pred = ["wrong (", "x ^ 2"]
    ref = ["2 * y", "x ^ 2"]
    report = score_predictions(pred, ref, src, syntax, train_src=train)
    assert report.exact_match_accuracy == 0.5
    assert report.n_renamed_in_test == 1
    assert report.accuracy_excluding_renamed == 1.0


# --- levenshtein ------------------------------------------------------------------


def test_levenshtein_examples():
    assert levenshtein(("a", "b"), ("a", "b")) == 0
    assert levenshtein((), ("a", "b", "c")) == 3
    assert levenshtein(tuple("kitten"), tuple("sitting")) == 3


def test_levenshtein_against_oracle():
    from oracles import oracle_levenshtein

    rng = random.Random(17)
    vocab = ["x", "y", "+", "*", "1", "22"]
    for _ in range(300):
        a = tuple(rng.choices(vocab, k=rng.randint(0, 12)))
        b = tuple(rng.choices(vocab, k=rng.randint(0, 12)))
        assert levenshtein(a, b) == oracle_levenshtein(a, b)


@settings(deadline=None)
@given(_tokens, _tokens, _tokens)
def test_levenshtein_is_a_metric(a, b, c):
    a, b, c = tuple(a), tuple(b), tuple(c)
    assert levenshtein(a, b) == levenshtein(b, a)
    assert (levenshtein(a, b) == 0) == (a == b)
    assert levenshtein(a, c) <= levenshtein(a, b) + levenshtein(b, c)


def test_avg_min_levenshtein_trivial_cases():
    train = ["x + 1", "y * 2"]
    stats = avg_min_levenshtein(train, train, sample_size=2, seed=0)
    assert stats.mean == 0.0 and stats.maximum == 0
    stats = avg_min_levenshtein(["x + 1"], ["x * 1"], sample_size=1, seed=0)
    assert stats.mean == 1.0


def test_avg_min_levenshtein_matches_bruteforce():
    from oracles import oracle_levenshtein

    rng = random.Random(3)
    vocab = ["x", "y", "+", "*", "1"]
    train = [" ".join(rng.choices(vocab, k=rng.randint(1, 5))) for _ in range(5)]
    test = [" ".join(rng.choices(vocab, k=rng.randint(1, 5))) for _ in range(5)]
    stats = avg_min_levenshtein(test, train, sample_size=5, seed=0)
    expected = [
        min(oracle_levenshtein(t.split(), s.split()) for s in train) for t in test
    ]
    assert stats.mean == pytest.approx(sum(expected) / len(expected))
    assert stats.minimum == min(expected) and stats.maximum == max(expected)


def test_avg_min_levenshtein_validates_sample_size():
    with pytest.raises(ValueError):
        avg_min_levenshtein(["x"], ["x"], sample_size=0)
