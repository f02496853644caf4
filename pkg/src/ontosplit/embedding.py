"""Joint embeddings of index key words and entity ids.

Keys are bags of words embedded as the mean of their word vectors; entities
get their own vectors. Training pushes each key towards the entities of its
own index entry and away from sampled negatives with a margin ranking loss,
using plain sequential SGD so a fixed seed reproduces the exact matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .lexindex import Key, LexicalIndex


@dataclass(frozen=True)
class HyperParams:
    dim: int = 64
    epochs: int = 25
    learning_rate: float = 0.01
    negatives_per_positive: int = 5
    margin: float = 0.05
    seed: int = 0
    # where negatives are drawn from: entity ids of both ontologies, or only
    # the side the positive belongs to
    negative_pool: str = "both"

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be at least 1")
        if self.epochs < 0:
            raise ValueError("epochs must be non-negative")
        if self.learning_rate <= 0.0:
            raise ValueError("learning_rate must be positive")
        if self.negatives_per_positive < 1:
            raise ValueError("negatives_per_positive must be at least 1")
        if self.margin < 0.0:
            raise ValueError("margin must be non-negative")
        if self.negative_pool not in ("both", "same-side"):
            raise ValueError("negative_pool must be 'both' or 'same-side'")


@dataclass(eq=False)
class EmbeddingModel:
    word_vocab: dict[str, int]
    entity_vocab: dict[int, int]
    word_matrix: np.ndarray
    entity_matrix: np.ndarray
    dim: int
    epoch_losses: list[float]


def pair_loss(sim_pos: float, sim_negs: Sequence[float], margin: float) -> float:
    """Margin ranking loss of one positive against its negatives:
    sum over negatives of max(0, margin - sim_pos + sim_neg)."""
    return float(sum(max(0.0, margin - sim_pos + s) for s in sim_negs))


def train_embeddings(index: LexicalIndex, hp: HyperParams) -> EmbeddingModel:
    """Train word and entity vectors over the entries of a lexical index.

    Matrices start uniform in [-1/dim, 1/dim] from the seeded generator. Each
    epoch walks the entries in a fresh shuffled order; every entity id of an
    entry is one positive for the entry's key, paired with uniformly sampled
    negatives outside the entry. With zero epochs the seeded initialization is
    returned unchanged.
    """
    if len(index.entries) == 0:
        raise ValueError("cannot train embeddings over an empty index")

    words = sorted({w for entry in index.entries for w in entry.key})
    source_ids = sorted({i for entry in index.entries for i in entry.source_ids})
    target_ids = sorted({i for entry in index.entries for i in entry.target_ids})
    entity_ids = sorted(set(source_ids) | set(target_ids))
    word_vocab = {w: row for row, w in enumerate(words)}
    entity_vocab = {i: row for row, i in enumerate(entity_ids)}
    source_rows = np.array([entity_vocab[i] for i in source_ids], dtype=np.int64)
    target_rows = np.array([entity_vocab[i] for i in target_ids], dtype=np.int64)
    source_id_set = set(source_ids)

    rng = np.random.default_rng(hp.seed)
    bound = 1.0 / hp.dim
    word_matrix = rng.uniform(-bound, bound, size=(len(word_vocab), hp.dim))
    entity_matrix = rng.uniform(-bound, bound, size=(len(entity_vocab), hp.dim))

    entry_word_rows = [
        np.array([word_vocab[w] for w in entry.key], dtype=np.int64)
        for entry in index.entries
    ]
    entry_positives = [
        [entity_vocab[i] for i in sorted(entry.source_ids | entry.target_ids)]
        for entry in index.entries
    ]
    entry_banned = [
        frozenset(entity_vocab[i] for i in entry.source_ids | entry.target_ids)
        for entry in index.entries
    ]

    lr = hp.learning_rate
    epoch_losses: list[float] = []
    for _ in range(hp.epochs):
        order = rng.permutation(len(index.entries))
        total = 0.0
        count = 0
        for entry_idx in order:
            word_rows = entry_word_rows[entry_idx]
            banned = entry_banned[entry_idx]
            for pos_row in entry_positives[entry_idx]:
                if hp.negative_pool == "both":
                    pool_rows = None
                elif entity_ids[pos_row] in source_id_set:
                    pool_rows = source_rows
                else:
                    pool_rows = target_rows
                neg_rows = _sample_negatives(
                    rng, pool_rows, len(entity_ids), banned, hp.negatives_per_positive
                )
                if neg_rows is None:
                    continue
                key_vec = word_matrix[word_rows].mean(axis=0)
                sim_pos = float(key_vec @ entity_matrix[pos_row])
                sim_negs = entity_matrix[neg_rows] @ key_vec
                total += pair_loss(sim_pos, sim_negs, hp.margin)
                count += 1
                active = hp.margin - sim_pos + sim_negs > 0.0
                n_active = int(active.sum())
                if n_active == 0:
                    continue
                active_rows = neg_rows[active]
                grad_key = entity_matrix[active_rows].sum(axis=0) - n_active * entity_matrix[pos_row]
                word_matrix[word_rows] -= lr * grad_key / len(word_rows)
                entity_matrix[pos_row] += lr * n_active * key_vec
                # subtract.at accumulates when the same negative was drawn twice
                np.subtract.at(entity_matrix, active_rows, lr * key_vec)
        epoch_losses.append(total / count if count else 0.0)

    return EmbeddingModel(
        word_vocab=word_vocab,
        entity_vocab=entity_vocab,
        word_matrix=word_matrix,
        entity_matrix=entity_matrix,
        dim=hp.dim,
        epoch_losses=epoch_losses,
    )


def _sample_negatives(rng, pool_rows, n_total_rows, banned, count):
    """Uniform rejection sampling of entity rows outside the banned set.

    ``pool_rows`` restricts sampling to one ontology side; None means the
    whole entity matrix. Returns None when the pool has nothing to offer.
    """
    pool_size = n_total_rows if pool_rows is None else len(pool_rows)
    free = pool_size - (
        len(banned) if pool_rows is None else sum(1 for r in pool_rows if r in banned)
    )
    if free <= 0:
        return None
    candidates = []
    while len(candidates) < count:
        draw = int(rng.integers(0, pool_size))
        row = draw if pool_rows is None else int(pool_rows[draw])
        if row in banned:
            continue
        candidates.append(row)
    return np.array(candidates, dtype=np.int64)


def key_vector(model: EmbeddingModel, key: Key) -> np.ndarray:
    """Mean of the word vectors of a key; unknown words are rejected."""
    rows = []
    for word in key:
        row = model.word_vocab.get(word)
        if row is None:
            raise KeyError(f"word not in embedding vocabulary: {word!r}")
        rows.append(row)
    return model.word_matrix[rows].mean(axis=0)


def save_model(model: EmbeddingModel, path) -> None:
    """Text dump: a header with dimensions, then one feature per line."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{model.dim} {len(model.word_vocab)} {len(model.entity_vocab)}\n")
        for word, row in sorted(model.word_vocab.items()):
            values = " ".join(repr(v) for v in model.word_matrix[row])
            fh.write(f"w:{word} {values}\n")
        for entity_id, row in sorted(model.entity_vocab.items()):
            values = " ".join(repr(v) for v in model.entity_matrix[row])
            fh.write(f"e:{entity_id} {values}\n")
