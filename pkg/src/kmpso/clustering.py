"""K-means over particle pbest vectors.

Deterministic variant used to carve the swarm into subpopulations every
iteration: ties in the assignment step go to the lowest centroid index, an
empty cluster steals the point farthest from its own centroid (so every
cluster keeps at least one member), and the loop stops on exact label
equality.  Warm starts with the previous iteration's centroids keep cluster
identities continuous as the swarm drifts.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ClusterAssignment:
    centroids: np.ndarray  # (k, d)
    labels: np.ndarray     # (n,) centroid index per point
    within_sse: float      # sum over points of squared distance to own centroid

    @property
    def n_clusters(self) -> int:
        return len(self.centroids)

    def members(self, cluster: int) -> np.ndarray:
        return np.flatnonzero(self.labels == cluster)


def assign(points: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    """Label each point with its nearest centroid (squared Euclidean, ties to
    the lowest centroid index)."""
    points = np.asarray(points, dtype=float)
    centroids = np.asarray(centroids, dtype=float)
    if centroids.ndim != 2 or len(centroids) == 0:
        raise ValueError("at least one centroid is required")
    if points.shape[1] != centroids.shape[1]:
        raise ValueError(
            f"dimension mismatch: points are {points.shape[1]}-d, centroids {centroids.shape[1]}-d")
    d2 = ((points[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
    return d2.argmin(axis=1)  # argmin returns the first (lowest) index on ties


def recompute_centroids(points: np.ndarray, labels: np.ndarray, k: int):
    """Per-cluster means, with empty-cluster repair.

    An empty cluster's centroid is relocated to the point farthest from its
    own centroid, and that point moves to the repaired cluster.  Donor
    clusters must keep at least one member, so only points from clusters of
    size >= 2 can be taken.  Returns (centroids, labels) since repair
    relabels the donated point.
    """
    points = np.asarray(points, dtype=float)
    labels = np.asarray(labels, dtype=int).copy()
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if k > len(points):
        raise ValueError(f"cannot form {k} clusters from {len(points)} points")
    if labels.min() < 0 or labels.max() >= k:
        raise ValueError("labels reference nonexistent clusters")

    centroids = np.zeros((k, points.shape[1]))
    counts = np.bincount(labels, minlength=k)
    for c in range(k):
        if counts[c] > 0:
            centroids[c] = points[labels == c].mean(axis=0)

    for c in np.flatnonzero(counts == 0):
        own_d2 = ((points - centroids[labels]) ** 2).sum(axis=1)
        donatable = counts[labels] > 1
        far = int(np.argmax(np.where(donatable, own_d2, -1.0)))
        centroids[c] = points[far]
        counts[labels[far]] -= 1
        labels[far] = c
        counts[c] = 1
    return centroids, labels


def kmeans(points: np.ndarray, k: int, seed_centroids: np.ndarray | None = None,
           max_iters: int = 100, rng: np.random.Generator | None = None) -> ClusterAssignment:
    """Lloyd's algorithm with exact-label convergence.

    seed_centroids warm-start the run; otherwise k distinct points are chosen
    uniformly at random (rng required).  within_sse is non-increasing across
    iterations, including repair steps.
    """
    points = np.asarray(points, dtype=float)
    n = len(points)
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= {n} points, got k={k}")
    if seed_centroids is not None:
        centroids = np.array(seed_centroids, dtype=float)
        if centroids.shape != (k, points.shape[1]):
            raise ValueError(
                f"seed centroids must be ({k}, {points.shape[1]}), got {centroids.shape}")
    else:
        if rng is None:
            raise ValueError("rng is required when no seed centroids are given")
        centroids = points[rng.choice(n, size=k, replace=False)].copy()

    labels = assign(points, centroids)
    centroids, labels = recompute_centroids(points, labels, k)
    for _ in range(max_iters):
        new_labels = assign(points, centroids)
        if np.array_equal(new_labels, labels):
            break
        centroids, labels = recompute_centroids(points, new_labels, k)
    within_sse = float(((points - centroids[labels]) ** 2).sum())
    return ClusterAssignment(centroids=centroids, labels=labels, within_sse=within_sse)
