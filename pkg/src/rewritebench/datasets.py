"""Dataset splitting and the line-aligned source/target file format.

A dataset directory holds ``train.src``/``train.tgt`` (and valid/test)
where line i of the .src file pairs with line i of the .tgt file; tokens
are separated by single spaces.  ``manifest.json`` records counts, ratios,
seed and source so runs are reproducible.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

PARTS = ("train", "valid", "test")

DEFAULT_RATIOS = (0.6, 0.1, 0.3)


class EmptyInputError(ValueError):
    pass


class AlignmentError(ValueError):
    """src/tgt files of one part disagree on line count."""


@dataclass(frozen=True)
class ExamplePair:
    src: tuple[str, ...]
    tgt: tuple[str, ...]

    def __post_init__(self):
        if not self.src or not self.tgt:
            raise ValueError("example sides must be nonempty")

    @property
    def src_line(self) -> str:
        return " ".join(self.src)

    @property
    def tgt_line(self) -> str:
        return " ".join(self.tgt)


def pair_from_lines(src_line: str, tgt_line: str) -> ExamplePair:
    return ExamplePair(tuple(src_line.split()), tuple(tgt_line.split()))


@dataclass
class DatasetSplit:
    train: list[ExamplePair]
    valid: list[ExamplePair]
    test: list[ExamplePair]
    manifest: dict = field(default_factory=dict)

    def part(self, name: str) -> list[ExamplePair]:
        return getattr(self, name)

    def __len__(self) -> int:
        return len(self.train) + len(self.valid) + len(self.test)


def _part_sizes(n: int, ratios: Sequence[float]) -> list[int]:
    # Exact fractions: 300000 * float(0.3) floors to 89999, not 90000.
    exact = [Fraction(r).limit_denominator(10**9) for r in ratios]
    sizes = [int(n * f) for f in exact]
    leftover = n - sum(sizes)
    assert 0 <= leftover <= len(sizes)
    for i in range(leftover):  # remainders go train-first
        sizes[i] += 1
    return sizes


def split(
    pairs: Iterable[ExamplePair],
    ratios: Sequence[float] = DEFAULT_RATIOS,
    seed: int = 0,
    source: str | None = None,
) -> DatasetSplit:
    """Shuffle deterministically under seed, then partition by ratios.

    Part sizes are floor-based with remainders assigned train-first, so the
    three parts are disjoint and their union is exactly the input.
    """
    if len(ratios) != len(PARTS):
        raise ValueError(f"expected {len(PARTS)} ratios, got {len(ratios)}")
    if any(r <= 0 for r in ratios) or abs(sum(ratios) - 1.0) > 1e-9:
        raise ValueError(f"ratios must be positive and sum to 1, got {tuple(ratios)}")
    pool = list(pairs)
    if not pool:
        raise EmptyInputError("no examples to split")
    random.Random(seed).shuffle(pool)
    n_train, n_valid, n_test = _part_sizes(len(pool), ratios)
    manifest = {
        "counts": {"train": n_train, "valid": n_valid, "test": n_test},
        "ratios": list(ratios),
        "seed": seed,
        "source": source,
        "created": None,
    }
    return DatasetSplit(
        train=pool[:n_train],
        valid=pool[n_train : n_train + n_valid],
        test=pool[n_train + n_valid :],
        manifest=manifest,
    )


def _write_lines(path: Path, lines: Iterable[str]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for line in lines:
            fh.write(line)
            fh.write("\n")


def _read_lines(path: Path) -> list[str]:
    with open(path, encoding="utf-8") as fh:
        return [line.rstrip("\n") for line in fh]


def write_dataset(dataset: DatasetSplit, directory: str | Path) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for part in PARTS:
        examples = dataset.part(part)
        _write_lines(directory / f"{part}.src", (p.src_line for p in examples))
        _write_lines(directory / f"{part}.tgt", (p.tgt_line for p in examples))
    manifest = dict(dataset.manifest)
    manifest.setdefault("counts", {part: len(dataset.part(part)) for part in PARTS})
    with open(directory / "manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_dataset(directory: str | Path) -> DatasetSplit:
    directory = Path(directory)
    parts: dict[str, list[ExamplePair]] = {}
    for part in PARTS:
        src = _read_lines(directory / f"{part}.src")
        tgt = _read_lines(directory / f"{part}.tgt")
        if len(src) != len(tgt):
            raise AlignmentError(
                f"{part}: {len(src)} source lines but {len(tgt)} target lines"
            )
        parts[part] = [pair_from_lines(s, t) for s, t in zip(src, tgt)]
    manifest_path = directory / "manifest.json"
    manifest = {}
    if manifest_path.exists():
        with open(manifest_path, encoding="utf-8") as fh:
            manifest = json.load(fh)
    return DatasetSplit(parts["train"], parts["valid"], parts["test"], manifest)


def union_datasets(named: Sequence[tuple[str, DatasetSplit]]) -> DatasetSplit:
    """Concatenate splits part-by-part.

    Each example keeps its original part, so nothing from any input test set
    can end up in the joint training set.
    """
    joint = DatasetSplit([], [], [], {})
    for _, dataset in named:
        for part in PARTS:
            joint.part(part).extend(dataset.part(part))
    joint.manifest = {
        "counts": {part: len(joint.part(part)) for part in PARTS},
        "source": {"union": [name for name, _ in named]},
        "created": None,
    }
    return joint


def write_pairs(pairs: Iterable[ExamplePair], directory: str | Path, manifest: dict | None = None) -> int:
    """Write an unsplit pair file set (pairs.src / pairs.tgt / manifest.json)."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    count = 0
    with open(directory / "pairs.src", "w", encoding="utf-8") as src_fh, open(
        directory / "pairs.tgt", "w", encoding="utf-8"
    ) as tgt_fh:
        for pair in pairs:
            src_fh.write(pair.src_line + "\n")
            tgt_fh.write(pair.tgt_line + "\n")
            count += 1
    meta = dict(manifest or {})
    meta["count"] = count
    meta.setdefault("created", None)
    with open(directory / "manifest.json", "w", encoding="utf-8") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return count


def read_pairs(directory: str | Path) -> list[ExamplePair]:
    directory = Path(directory)
    src = _read_lines(directory / "pairs.src")
    tgt = _read_lines(directory / "pairs.tgt")
    if len(src) != len(tgt):
        raise AlignmentError(f"{len(src)} source lines but {len(tgt)} target lines")
    return [pair_from_lines(s, t) for s, t in zip(src, tgt)]
