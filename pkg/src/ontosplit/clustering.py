"""Splitting index entries into clusters: random equal-size split, or
k-means over the entries' key vectors."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .embedding import EmbeddingModel, key_vector
from .lexindex import IndexEntry, LexicalIndex

STRATEGIES = ("naive", "embedding")


@dataclass(frozen=True)
class ClusterAssignment:
    """entry index -> cluster id, for ``n`` clusters."""

    assignment: tuple[int, ...]
    n: int

    def __post_init__(self):
        if any(not (0 <= c < self.n) for c in self.assignment):
            raise ValueError("cluster id out of range")

    def groups(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.n)]
        for index, cluster in enumerate(self.assignment):
            out[cluster].append(index)
        return out


def naive_split(entry_count: int, n: int, seed: int) -> ClusterAssignment:
    """Seeded random split into n contiguous chunks of near-equal size.

    After a Fisher-Yates shuffle of the indices, the first
    (entry_count mod n) clusters take the ceiling share.
    """
    if n < 1:
        raise ValueError("cluster count must be at least 1")
    if n > entry_count:
        raise ValueError(f"cannot split {entry_count} entries into {n} clusters")
    rng = np.random.default_rng(seed)
    perm = rng.permutation(entry_count)
    base, extra = divmod(entry_count, n)
    assignment = [0] * entry_count
    pos = 0
    for cluster in range(n):
        size = base + (1 if cluster < extra else 0)
        for index in perm[pos : pos + size]:
            assignment[index] = cluster
        pos += size
    return ClusterAssignment(tuple(assignment), n)


def nearest_centroid(points: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    """Index of the closest centroid per point; ties go to the lowest id."""
    distances = np.linalg.norm(points[:, None, :] - centroids[None, :, :], axis=2)
    return np.argmin(distances, axis=1)


def kmeans(
    points: np.ndarray,
    n: int,
    seed: int,
    max_iter: int = 100,
    tol: float = 1e-4,
) -> tuple[np.ndarray, np.ndarray]:
    """Lloyd's algorithm with seeded k-means++ initialization.

    Stops when the largest centroid shift falls below ``tol`` (and no empty
    cluster had to be repaired) or after ``max_iter`` rounds. An empty
    cluster steals the point currently farthest from its own centroid.
    Returns (centroids, labels).
    """
    points = np.asarray(points, dtype=np.float64)
    if points.ndim != 2:
        raise ValueError("points must be a 2-D array")
    if n < 1:
        raise ValueError("cluster count must be at least 1")
    if n > len(points):
        raise ValueError(f"cannot form {n} clusters from {len(points)} points")

    rng = np.random.default_rng(seed)
    centroids = _kmeans_pp_init(points, n, rng)
    labels = np.zeros(len(points), dtype=np.int64)
    for _ in range(max_iter):
        labels, repaired = _assign_with_repair(points, centroids)
        new_centroids = centroids.copy()
        for cluster in range(n):
            members = points[labels == cluster]
            if len(members):
                new_centroids[cluster] = members.mean(axis=0)
        shift = float(np.linalg.norm(new_centroids - centroids, axis=1).max())
        centroids = new_centroids
        if shift < tol and not repaired:
            break
    labels, _ = _assign_with_repair(points, centroids)
    return centroids, labels


def _kmeans_pp_init(points: np.ndarray, n: int, rng) -> np.ndarray:
    first = int(rng.integers(0, len(points)))
    chosen = [first]
    dist_sq = ((points - points[first]) ** 2).sum(axis=1)
    for _ in range(1, n):
        total = float(dist_sq.sum())
        if total <= 0.0:
            # all remaining mass on already-chosen coordinates: take the
            # lowest-index point not yet selected
            index = next(i for i in range(len(points)) if i not in chosen)
        else:
            index = int(rng.choice(len(points), p=dist_sq / total))
        chosen.append(index)
        dist_sq = np.minimum(dist_sq, ((points - points[index]) ** 2).sum(axis=1))
    return points[chosen].copy()


def _assign_with_repair(points: np.ndarray, centroids: np.ndarray):
    labels = nearest_centroid(points, centroids)
    n = len(centroids)
    repaired = False
    counts = np.bincount(labels, minlength=n)
    if counts.min() == 0:
        distances = np.linalg.norm(points - centroids[labels], axis=1)
        for cluster in range(n):
            if counts[cluster] > 0:
                continue
            # steal the farthest point from any cluster that can spare one
            order = np.argsort(-distances, kind="stable")
            for candidate in order:
                if counts[labels[candidate]] > 1:
                    counts[labels[candidate]] -= 1
                    labels[candidate] = cluster
                    counts[cluster] = 1
                    distances[candidate] = -1.0
                    repaired = True
                    break
    return labels, repaired


def cluster_entries(
    index: LexicalIndex,
    n: int,
    strategy: str,
    model: Optional[EmbeddingModel] = None,
    seed: int = 0,
    max_iter: int = 100,
    tol: float = 1e-4,
) -> list[list[IndexEntry]]:
    """Partition the index entries into n groups, preserving key order
    inside each group."""
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    if strategy == "naive":
        assignment = naive_split(len(index.entries), n, seed)
        member_lists = assignment.groups()
    else:
        if model is None:
            raise ValueError("the embedding strategy needs a trained model")
        if n > len(index.entries):
            raise ValueError(
                f"cannot form {n} clusters from {len(index.entries)} entries"
            )
        vectors = np.stack([key_vector(model, e.key) for e in index.entries])
        _, labels = kmeans(vectors, n, seed, max_iter=max_iter, tol=tol)
        member_lists = ClusterAssignment(tuple(int(c) for c in labels), n).groups()
    return [[index.entries[i] for i in members] for members in member_lists]
