"""Training and prediction over line-aligned dataset directories.

The trainer reads a directory of train/valid/test .src/.tgt files (one
space-separated token sequence per line), trains the attention LSTM and
writes a model artifact directory containing the weights, the vocabularies,
the config and a train_log.jsonl of step/loss pairs.  Prediction emits one
output line per test source line, in order.
"""

from __future__ import annotations

import json
import random
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Sequence

import torch
from torch import nn

from .model import BOS, EOS, PAD, UNK, Seq2Seq

SPECIALS = ["<pad>", "<s>", "</s>", "<unk>"]


class DatasetError(ValueError):
    """Missing or misaligned dataset files; raised before any training."""


@dataclass
class TrainerConfig:
    data_dir: str
    out_dir: str
    layers: int = 2
    hidden: int = 128
    dropout: float = 0.2
    steps: int = 10_000
    batch_size: int = 32
    learning_rate: float = 1e-3
    seed: int = 0
    log_every: int = 100
    max_decode_len: int = 256
    # optional early exit on validation exact match (1.0 disables it)
    stop_at_valid_exact: float = 1.0
    eval_every: int = 500

    def __post_init__(self):
        for name in ("layers", "hidden", "steps", "batch_size", "log_every", "max_decode_len"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if not 0.0 <= self.dropout < 1.0:
            raise ValueError("dropout must be in [0, 1)")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")


class Vocab:
    def __init__(self, tokens: Sequence[str]):
        self.itos = SPECIALS + sorted(set(tokens) - set(SPECIALS))
        self.stoi = {tok: i for i, tok in enumerate(self.itos)}

    def __len__(self):
        return len(self.itos)

    def encode(self, tokens: Sequence[str]) -> list[int]:
        return [self.stoi.get(tok, UNK) for tok in tokens]

    def decode(self, ids: Sequence[int]) -> list[str]:
        out = []
        for i in ids:
            if i == EOS:
                break
            if i not in (PAD, BOS):
                out.append(self.itos[i] if 0 <= i < len(self.itos) else "<unk>")
        return out

    def to_dict(self):
        return {"itos": self.itos}

    @classmethod
    def from_dict(cls, data) -> "Vocab":
        vocab = cls([])
        vocab.itos = list(data["itos"])
        vocab.stoi = {tok: i for i, tok in enumerate(vocab.itos)}
        return vocab


def _read_lines(path: Path) -> list[str]:
    with open(path, encoding="utf-8") as fh:
        return [line.rstrip("\n") for line in fh]


def load_dataset(data_dir: str | Path) -> dict[str, list[tuple[list[str], list[str]]]]:
    """Validate layout and alignment, then load all three parts."""
    data_dir = Path(data_dir)
    parts = {}
    for part in ("train", "valid", "test"):
        src_path = data_dir / f"{part}.src"
        tgt_path = data_dir / f"{part}.tgt"
        if not src_path.exists() or not tgt_path.exists():
            raise DatasetError(f"missing {part}.src/{part}.tgt in {data_dir}")
        src = _read_lines(src_path)
        tgt = _read_lines(tgt_path)
        if len(src) != len(tgt):
            raise DatasetError(f"{part}: {len(src)} source vs {len(tgt)} target lines")
        parts[part] = [(s.split(), t.split()) for s, t in zip(src, tgt)]
    if not parts["train"]:
        raise DatasetError("training part is empty")
    return parts


def _batchify(examples, vocab_src, vocab_tgt, device):
    src_ids = [vocab_src.encode(s) for s, _ in examples]
    tgt_ids = [vocab_tgt.encode(t) for _, t in examples]
    max_src = max(len(s) for s in src_ids)
    max_tgt = max(len(t) for t in tgt_ids) + 1  # room for BOS/EOS shift
    src = torch.full((len(examples), max_src), PAD, dtype=torch.long)
    tgt_in = torch.full((len(examples), max_tgt), PAD, dtype=torch.long)
    tgt_out = torch.full((len(examples), max_tgt), PAD, dtype=torch.long)
    lengths = torch.zeros(len(examples), dtype=torch.long)
    for i, (s, t) in enumerate(zip(src_ids, tgt_ids)):
        src[i, : len(s)] = torch.tensor(s)
        lengths[i] = len(s)
        tgt_in[i, : len(t) + 1] = torch.tensor([BOS] + t)
        tgt_out[i, : len(t) + 1] = torch.tensor(t + [EOS])
    return src.to(device), lengths, tgt_in.to(device), tgt_out.to(device)


def _exact_match(model, examples, vocab_src, vocab_tgt, config, device) -> float:
    if not examples:
        return 0.0
    correct = 0
    for start in range(0, len(examples), config.batch_size):
        chunk = examples[start : start + config.batch_size]
        src, lengths, _, _ = _batchify(chunk, vocab_src, vocab_tgt, device)
        decoded = model.greedy_decode(src, lengths, config.max_decode_len)
        for row, (_, reference) in zip(decoded.tolist(), chunk):
            if vocab_tgt.decode(row) == reference:
                correct += 1
    return correct / len(examples)


def train(config: TrainerConfig) -> Path:
    """Train on the dataset directory; returns the artifact directory."""
    parts = load_dataset(config.data_dir)
    torch.manual_seed(config.seed)
    rng = random.Random(config.seed)
    device = torch.device("cpu")

    train_part = parts["train"]
    vocab_src = Vocab([tok for s, _ in train_part for tok in s])
    vocab_tgt = Vocab([tok for _, t in train_part for tok in t])
    model = Seq2Seq(
        len(vocab_src), len(vocab_tgt),
        hidden=config.hidden, layers=config.layers, dropout=config.dropout,
    ).to(device)
    optimizer = torch.optim.Adam(model.parameters(), lr=config.learning_rate)
    loss_fn = nn.CrossEntropyLoss(ignore_index=PAD)

    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    log_path = out_dir / "train_log.jsonl"
    with open(log_path, "w", encoding="utf-8") as log:
        log.write(json.dumps({
            "config": asdict(config),
            "optimizer": "adam",
            "src_vocab": len(vocab_src),
            "tgt_vocab": len(vocab_tgt),
            "n_train": len(train_part),
        }) + "\n")
        model.train()
        for step in range(1, config.steps + 1):
            batch = [train_part[rng.randrange(len(train_part))] for _ in range(config.batch_size)]
            src, lengths, tgt_in, tgt_out = _batchify(batch, vocab_src, vocab_tgt, device)
            logits = model(src, lengths, tgt_in)
            loss = loss_fn(logits.reshape(-1, logits.size(-1)), tgt_out.reshape(-1))
            optimizer.zero_grad()
            loss.backward()
            optimizer.step()
            if step % config.log_every == 0 or step == 1 or step == config.steps:
                value = float(loss.item())
                assert value == value and value != float("inf"), "loss diverged"
                log.write(json.dumps({"step": step, "loss": value}) + "\n")
            if (
                config.stop_at_valid_exact < 1.0
                and parts["valid"]
                and step % config.eval_every == 0
            ):
                exact = _exact_match(model, parts["valid"], vocab_src, vocab_tgt, config, device)
                log.write(json.dumps({"step": step, "valid_exact_match": exact}) + "\n")
                model.train()
                if exact >= config.stop_at_valid_exact:
                    break

    torch.save(model.state_dict(), out_dir / "model.pt")
    (out_dir / "vocab.json").write_text(
        json.dumps({"src": vocab_src.to_dict(), "tgt": vocab_tgt.to_dict()}), encoding="utf-8"
    )
    (out_dir / "config.json").write_text(json.dumps(asdict(config), indent=2), encoding="utf-8")
    return out_dir


def load_model(artifact_dir: str | Path) -> tuple[Seq2Seq, Vocab, Vocab, TrainerConfig]:
    artifact_dir = Path(artifact_dir)
    config = TrainerConfig(**json.loads((artifact_dir / "config.json").read_text(encoding="utf-8")))
    vocabs = json.loads((artifact_dir / "vocab.json").read_text(encoding="utf-8"))
    vocab_src = Vocab.from_dict(vocabs["src"])
    vocab_tgt = Vocab.from_dict(vocabs["tgt"])
    model = Seq2Seq(
        len(vocab_src), len(vocab_tgt),
        hidden=config.hidden, layers=config.layers, dropout=config.dropout,
    )
    model.load_state_dict(torch.load(artifact_dir / "model.pt", weights_only=True))
    model.eval()
    return model, vocab_src, vocab_tgt, config


def predict(artifact_dir: str | Path, test_src: str | Path, out_path: str | Path | None = None) -> list[str]:
    """Greedy predictions, one line per source line; optionally written to a file."""
    model, vocab_src, vocab_tgt, config = load_model(artifact_dir)
    lines = _read_lines(Path(test_src))
    predictions: list[str] = []
    device = torch.device("cpu")
    for start in range(0, len(lines), config.batch_size):
        chunk = [line.split() for line in lines[start : start + config.batch_size]]
        examples = [(tokens if tokens else ["<unk>"], []) for tokens in chunk]
        src, lengths, _, _ = _batchify(examples, vocab_src, vocab_tgt, device)
        decoded = model.greedy_decode(src, lengths, config.max_decode_len)
        predictions.extend(" ".join(vocab_tgt.decode(row)) for row in decoded.tolist())
    if out_path is not None:
        with open(out_path, "w", encoding="utf-8") as fh:
            for line in predictions:
                fh.write(line + "\n")
    return predictions
