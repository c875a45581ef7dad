"""Reference seq2seq trainer for line-aligned token rewriting datasets."""

__version__ = "0.1.0"

from .trainer import DatasetError, TrainerConfig, load_dataset, predict, train  # noqa: F401
