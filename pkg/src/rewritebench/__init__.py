"""Benchmark toolkit for single-step term rewriting and polynomial normalization.

Subpackages cover the full pipeline: term syntax (terms), rule application
(rewriting), the exact normalization oracle (polynomials), random dataset
generation (generation), split/serialize (datasets) and prediction scoring
plus leakage analysis (analysis).
"""

__version__ = "0.1.0"

from .terms import (  # noqa: F401
    INFIX,
    TPTP,
    Apply,
    CapacityError,
    Constant,
    Syntax,
    Term,
    TermSyntaxError,
    Variable,
    alpha_canonical,
    parse_term,
    print_term,
    to_prefix,
    tokenize,
)
from .rewriting import (  # noqa: F401
    RewriteRule,
    all_single_rewrites,
    apply_rule_at,
    match_at,
    parse_rule,
    subterm_positions,
    synth_pairs,
)
from .polynomials import (  # noqa: F401
    Polynomial,
    eval_poly,
    eval_term,
    normalize,
    print_normal,
)
from .generation import PRESETS, GenConfig, gen_dataset, gen_term  # noqa: F401
from .datasets import DatasetSplit, ExamplePair, read_dataset, split, union_datasets, write_dataset  # noqa: F401
from .analysis import (  # noqa: F401
    EvalReport,
    LeakageReport,
    avg_min_levenshtein,
    leakage_report,
    levenshtein,
    mask_constants,
    mask_signs,
    renamed_overlap,
    score_predictions,
)
