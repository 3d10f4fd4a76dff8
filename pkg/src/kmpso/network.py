"""Three-layer feedforward networks stored as flat parameter vectors.

A network with n inputs, q hidden nodes and m outputs lives in a single float
vector laid out as: input-to-hidden weights (row-major by hidden node), hidden
biases, hidden-to-output weights (row-major by output node), output biases.
The swarm optimizes these vectors directly; everything here is a pure function
of its arguments.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import Dataset

_ARG_LIMIT = 500.0  # sigmoid argument clamp; exp(500) stays finite in float64
_OUT_FLOOR = np.finfo(float).tiny
_OUT_CEIL = 1.0 - np.finfo(float).eps


@dataclass(frozen=True)
class Topology:
    """Layer sizes (inputs, hidden, outputs) of a three-layer network."""

    n_inputs: int
    n_hidden: int
    n_outputs: int

    def __post_init__(self):
        for name in ("n_inputs", "n_hidden", "n_outputs"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1, got {getattr(self, name)}")

    @property
    def dimension(self) -> int:
        n, q, m = self.n_inputs, self.n_hidden, self.n_outputs
        return n * q + q + q * m + m


def dimension(topology: Topology) -> int:
    """Length of the flat parameter vector: n*q + q + q*m + m."""
    return topology.dimension


def sigmoid(x):
    """Logistic function 1/(1+exp(-x)), saturating instead of overflowing.

    Outputs are kept strictly inside (0, 1): for arguments beyond ~37 the exact
    quotient rounds to 1.0 in float64, which the clip undoes.
    """
    z = np.clip(x, -_ARG_LIMIT, _ARG_LIMIT)
    return np.clip(1.0 / (1.0 + np.exp(-z)), _OUT_FLOOR, _OUT_CEIL)


def decode(position: np.ndarray, topology: Topology):
    """Split a flat vector into (hidden weights, hidden biases, output weights,
    output biases) with shapes (q, n), (q,), (m, q), (m,)."""
    n, q, m = topology.n_inputs, topology.n_hidden, topology.n_outputs
    pos = np.asarray(position, dtype=float)
    if pos.shape != (topology.dimension,):
        raise ValueError(
            f"position has {pos.size} components, topology needs {topology.dimension}")
    w_hidden = pos[: n * q].reshape(q, n)
    b_hidden = pos[n * q: n * q + q]
    w_out = pos[n * q + q: n * q + q + q * m].reshape(m, q)
    b_out = pos[n * q + q + q * m:]
    return w_hidden, b_hidden, w_out, b_out


def forward(position: np.ndarray, topology: Topology, inputs) -> np.ndarray:
    """Evaluate one network on one input vector; returns the m outputs."""
    x = np.asarray(inputs, dtype=float)
    if x.shape != (topology.n_inputs,):
        raise ValueError(f"expected {topology.n_inputs} inputs, got {x.shape}")
    w_hidden, b_hidden, w_out, b_out = decode(position, topology)
    hidden = sigmoid(w_hidden @ x + b_hidden)
    return sigmoid(w_out @ hidden + b_out)


def forward_batch(position: np.ndarray, topology: Topology, inputs: np.ndarray) -> np.ndarray:
    """Evaluate one network on a (p, n) input matrix; returns (p, m) outputs."""
    X = np.asarray(inputs, dtype=float)
    w_hidden, b_hidden, w_out, b_out = decode(position, topology)
    hidden = sigmoid(X @ w_hidden.T + b_hidden)
    return sigmoid(hidden @ w_out.T + b_out)


def forward_many(positions: np.ndarray, topology: Topology, inputs: np.ndarray) -> np.ndarray:
    """Evaluate a (B, dim) batch of networks on a (p, n) input matrix at once.

    Returns (B, p, m).  This is the swarm's hot path: both layers run as
    batched matmuls across all B parameter vectors.
    """
    n, q, m = topology.n_inputs, topology.n_hidden, topology.n_outputs
    pos = np.asarray(positions, dtype=float)
    if pos.ndim != 2 or pos.shape[1] != topology.dimension:
        raise ValueError(f"positions must be (B, {topology.dimension}), got {pos.shape}")
    X = np.asarray(inputs, dtype=float)
    B = pos.shape[0]
    w_hidden = pos[:, : n * q].reshape(B, q, n)
    b_hidden = pos[:, n * q: n * q + q]
    w_out = pos[:, n * q + q: n * q + q + q * m].reshape(B, m, q)
    b_out = pos[:, n * q + q + q * m:]
    hidden = sigmoid(np.matmul(X, w_hidden.transpose(0, 2, 1)) + b_hidden[:, None, :])
    return sigmoid(np.matmul(hidden, w_out.transpose(0, 2, 1)) + b_out[:, None, :])


def mse_fitness(position: np.ndarray, topology: Topology, data: Dataset) -> float:
    """Mean squared error over all outputs and examples: (1/(m*p)) sum of
    squared output-target differences.  Lower is better; 0 iff outputs match
    targets everywhere."""
    return float(mse_fitness_batch(np.asarray(position, dtype=float)[None, :], topology, data)[0])


def mse_fitness_batch(positions: np.ndarray, topology: Topology, data: Dataset) -> np.ndarray:
    """MSE fitness of a (B, dim) batch of parameter vectors; returns (B,)."""
    features, targets = data.features, data.targets
    if len(features) == 0:
        raise ValueError("cannot evaluate fitness on an empty dataset")
    if targets.shape != (len(features), topology.n_outputs):
        raise ValueError(
            f"targets must be ({len(features)}, {topology.n_outputs}), got {targets.shape}")
    diff = forward_many(positions, topology, features) - targets
    return np.mean(diff * diff, axis=(1, 2))
