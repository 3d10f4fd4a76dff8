"""Network ensembles built from per-cluster champions.

The ensemble output is the weighted average of its component networks
(weights are uniform, 1/k).  Besides prediction and classification this
module computes the ambiguity decomposition of the ensemble error: with
component errors E_i, ambiguities D_i and weights w_i summing to 1, the
ensemble error satisfies E = sum(w_i E_i) - sum(w_i D_i) exactly, so higher
ambiguity (diversity) lowers ensemble error at fixed component error.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .clustering import ClusterAssignment
from .data import Dataset
from .network import Topology, forward, forward_many
from .swarm import Swarm, cluster_champions


@dataclass(frozen=True)
class Ensemble:
    """k component networks (flat parameter vectors) plus combination weights."""

    topology: Topology
    components: np.ndarray  # (k, dim)
    weights: np.ndarray     # (k,) nonnegative, sums to 1

    def __post_init__(self):
        if self.components.ndim != 2 or self.components.shape[1] != self.topology.dimension:
            raise ValueError("components must be (k, dim) for the given topology")
        if self.weights.shape != (len(self.components),):
            raise ValueError("one weight per component is required")
        if (self.weights < 0).any() or (self.weights > 1).any():
            raise ValueError("weights must lie in [0, 1]")
        if abs(float(self.weights.sum()) - 1.0) > 1e-12:
            raise ValueError("weights must sum to 1")

    @property
    def n_components(self) -> int:
        return len(self.components)


@dataclass(frozen=True)
class Decomposition:
    """Ambiguity decomposition of the ensemble error on a dataset.

    ensemble_error = mean_component_error - mean_ambiguity holds exactly
    (up to float accumulation); mean_ambiguity >= 0 measures diversity.
    """

    ensemble_error: float            # E
    mean_component_error: float      # E_bar, weighted mean of component errors
    mean_ambiguity: float            # D_bar, weighted mean deviation from the ensemble
    component_errors: np.ndarray     # (k,) E_i
    component_ambiguities: np.ndarray  # (k,) D_i


def build_ensemble(swarm: Swarm, clusters: ClusterAssignment) -> Ensemble:
    """One component per cluster: the pbest of the cluster's lowest-fitness
    particle (ties to the lowest particle index); uniform weights."""
    k = clusters.n_clusters
    champions = cluster_champions(swarm.pbest_fitness, clusters.labels, k)
    return Ensemble(topology=swarm.topology,
                    components=swarm.pbest_positions[champions].copy(),
                    weights=np.full(k, 1.0 / k))


def predict(ensemble: Ensemble, inputs) -> np.ndarray:
    """Weighted average of the component outputs for one input vector."""
    outputs = np.stack([forward(c, ensemble.topology, inputs) for c in ensemble.components])
    return ensemble.weights @ outputs


def predict_batch(ensemble: Ensemble, inputs: np.ndarray) -> np.ndarray:
    """Weighted average of component outputs for a (p, n) input matrix; (p, m)."""
    outputs = forward_many(ensemble.components, ensemble.topology, inputs)  # (k, p, m)
    return np.tensordot(ensemble.weights, outputs, axes=1)


def classify(ensemble: Ensemble, inputs) -> int:
    """Class index with the largest averaged output (ties: lowest index)."""
    return int(np.argmax(predict(ensemble, inputs)))


def classify_batch(ensemble: Ensemble, inputs: np.ndarray) -> np.ndarray:
    return predict_batch(ensemble, inputs).argmax(axis=1)


def error_rate(ensemble: Ensemble, data: Dataset) -> float:
    """Fraction of examples whose predicted class differs from the label."""
    if data.n_examples == 0:
        raise ValueError("cannot compute an error rate on an empty dataset")
    predicted = classify_batch(ensemble, data.features)
    return float(np.mean(predicted != data.labels))


def decomposition(ensemble: Ensemble, data: Dataset) -> Decomposition:
    """Empirical ambiguity decomposition on a dataset.

    Per example, squared differences are summed over the m output coordinates;
    the expectation over inputs becomes the mean over examples.  The ensemble
    error is computed directly from the averaged outputs, independently of the
    per-component terms, so E vs (E_bar - D_bar) cross-checks the identity.
    """
    if data.n_examples == 0:
        raise ValueError("cannot decompose on an empty dataset")
    outputs = forward_many(ensemble.components, ensemble.topology, data.features)  # (k, p, m)
    averaged = np.tensordot(ensemble.weights, outputs, axes=1)                     # (p, m)

    component_errors = ((outputs - data.targets) ** 2).sum(axis=2).mean(axis=1)
    component_ambiguities = ((outputs - averaged) ** 2).sum(axis=2).mean(axis=1)
    ensemble_error = float(((averaged - data.targets) ** 2).sum(axis=1).mean())

    return Decomposition(
        ensemble_error=ensemble_error,
        mean_component_error=float(ensemble.weights @ component_errors),
        mean_ambiguity=float(ensemble.weights @ component_ambiguities),
        component_errors=component_errors,
        component_ambiguities=component_ambiguities,
    )
