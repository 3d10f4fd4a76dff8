"""K-means multi-subpopulation particle swarm optimizer (KMPSO).

Every iteration the particles' pbest vectors are clustered with k-means
(warm-started from the previous centroids) and each particle is pulled toward
the best pbest of its own cluster instead of a single swarm-wide gbest.  After
the configured iterations one final clustering defines the subpopulations
whose champions become ensemble components.  mode="global_best" swaps the
cluster best for the swarm gbest, giving the canonical single-population
update as a baseline.

Random-number contract (bit-reproducible runs from a seed):

* initialize_swarm first spawns one child generator dedicated to clustering,
  then draws positions and velocities as (M, dim) uniform blocks (row per
  particle, column per dimension).
* each step draws, for particles in index order, one (dim, 2) uniform block:
  per dimension r1 then r2.
* k-means consumes only the dedicated clustering stream (and only for
  cold-start centroid choices), so the optimizer's stream is identical whether
  or not in-loop clustering runs.  With k=1 the cluster best degenerates to
  gbest and mode="kmpso" reproduces mode="global_best" trajectories exactly.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .clustering import ClusterAssignment, kmeans
from .data import Dataset
from .network import Topology, mse_fitness_batch

Objective = Callable[[np.ndarray], np.ndarray]

MODES = ("kmpso", "global_best")


@dataclass
class SwarmConfig:
    """Optimizer controls; defaults follow the benchmark settings."""

    population: int = 250
    iterations: int = 150
    c1: float = 2.0
    c2: float = 2.0
    w_start: float = 0.9
    w_end: float = 0.2
    n_clusters: int = 10
    pos_min: float = -5.0
    pos_max: float = 5.0
    v_max: float = 5.0
    mode: str = "kmpso"

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not self.population >= self.n_clusters >= 1:
            raise ValueError(
                f"need population >= n_clusters >= 1, got {self.population} and {self.n_clusters}")
        if self.iterations < 1:
            raise ValueError(f"iterations must be >= 1, got {self.iterations}")
        if not self.pos_min < self.pos_max:
            raise ValueError("pos_min must be < pos_max")
        if not self.v_max > 0:
            raise ValueError("v_max must be > 0")


@dataclass
class Particle:
    """View of one particle's state inside a Swarm."""

    position: np.ndarray
    velocity: np.ndarray
    pbest_position: np.ndarray
    pbest_fitness: float
    cluster_label: int | None


@dataclass
class Swarm:
    """Whole-population state, stored as one array per field."""

    positions: np.ndarray        # (M, dim)
    velocities: np.ndarray       # (M, dim)
    pbest_positions: np.ndarray  # (M, dim)
    pbest_fitness: np.ndarray    # (M,)
    iteration: int
    config: SwarmConfig
    topology: Topology
    cluster_rng: np.random.Generator
    current_clusters: ClusterAssignment | None = None

    @property
    def population(self) -> int:
        return len(self.positions)

    def particle(self, i: int) -> Particle:
        label = None if self.current_clusters is None else int(self.current_clusters.labels[i])
        return Particle(position=self.positions[i], velocity=self.velocities[i],
                        pbest_position=self.pbest_positions[i],
                        pbest_fitness=float(self.pbest_fitness[i]), cluster_label=label)

    def best_index(self) -> int:
        """Index of the swarm-wide best pbest (ties: lowest index)."""
        return int(np.argmin(self.pbest_fitness))


def mse_objective(topology: Topology, data: Dataset) -> Objective:
    """Batch fitness function: (B, dim) parameter vectors -> (B,) MSE values."""
    def objective(positions: np.ndarray) -> np.ndarray:
        return mse_fitness_batch(positions, topology, data)
    return objective


def _resolve_objective(topology: Topology, data: Dataset | None, objective: Objective | None) -> Objective:
    if objective is not None:
        return objective
    if data is None:
        raise ValueError("either data or an objective is required")
    if data.n_examples == 0:
        raise ValueError("cannot optimize against an empty dataset")
    return mse_objective(topology, data)


def initialize_swarm(config: SwarmConfig, topology: Topology, data: Dataset | None = None,
                     rng: np.random.Generator | None = None,
                     objective: Objective | None = None) -> Swarm:
    """Uniform random positions and velocities; pbest starts at the position."""
    if rng is None:
        raise ValueError("rng is required")
    obj = _resolve_objective(topology, data, objective)
    cluster_rng = rng.spawn(1)[0]  # spawn before any draw so the order is fixed
    dim = topology.dimension
    positions = rng.uniform(config.pos_min, config.pos_max, size=(config.population, dim))
    velocities = rng.uniform(-config.v_max, config.v_max, size=(config.population, dim))
    fitness = np.asarray(obj(positions), dtype=float)
    return Swarm(positions=positions, velocities=velocities,
                 pbest_positions=positions.copy(), pbest_fitness=fitness.copy(),
                 iteration=0, config=config, topology=topology, cluster_rng=cluster_rng)


def inertia(t: int, iterations: int, w_start: float, w_end: float) -> float:
    """Linear anneal from w_start at t=0 to w_end at t=iterations-1."""
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    if not 0 <= t <= iterations - 1:
        raise ValueError(f"t must lie in [0, {iterations - 1}], got {t}")
    if iterations == 1:
        return w_start
    return w_start - (w_start - w_end) * t / (iterations - 1)


def update_velocity(particle: Particle, cluster_best: np.ndarray, w: float, c1: float,
                    c2: float, v_max: float, rng: np.random.Generator) -> np.ndarray:
    """New clamped velocity for one particle.

    r1 and r2 are fresh uniform draws per dimension, consumed as one (dim, 2)
    block: for each dimension r1 then r2.
    """
    cluster_best = np.asarray(cluster_best, dtype=float)
    if cluster_best.shape != particle.position.shape:
        raise ValueError("cluster best and position dimensions disagree")
    r = rng.random((particle.position.size, 2))
    velocity = (w * particle.velocity
                + c1 * r[:, 0] * (particle.pbest_position - particle.position)
                + c2 * r[:, 1] * (cluster_best - particle.position))
    return np.clip(velocity, -v_max, v_max)


def update_position(particle: Particle, pos_min: float, pos_max: float) -> np.ndarray:
    """x + v, hard-clamped to the position bounds (velocity left untouched)."""
    return np.clip(particle.position + particle.velocity, pos_min, pos_max)


def cluster_champions(pbest_fitness: np.ndarray, labels: np.ndarray, k: int) -> np.ndarray:
    """Per cluster, the particle index with the lowest pbest fitness (ties:
    lowest particle index)."""
    champions = np.empty(k, dtype=int)
    for c in range(k):
        members = np.flatnonzero(labels == c)
        if members.size == 0:
            raise ValueError(f"cluster {c} is empty")
        champions[c] = members[np.argmin(pbest_fitness[members])]
    return champions


def step(swarm: Swarm, data: Dataset | None = None, rng: np.random.Generator | None = None,
         objective: Objective | None = None) -> Swarm:
    """Advance the swarm one iteration in place.

    Order: cluster pbests (kmpso mode), pick each particle's guide, update
    velocities then positions, re-evaluate fitness, improve pbests (strict),
    increment the iteration counter.
    """
    config = swarm.config
    if swarm.iteration >= config.iterations:
        raise ValueError(f"swarm already ran its configured {config.iterations} iterations")
    if rng is None:
        raise ValueError("rng is required")
    obj = _resolve_objective(swarm.topology, data, objective)

    if config.mode == "kmpso":
        seeds = None if swarm.current_clusters is None else swarm.current_clusters.centroids
        clusters = kmeans(swarm.pbest_positions, config.n_clusters,
                          seed_centroids=seeds, rng=swarm.cluster_rng)
        swarm.current_clusters = clusters
        champions = cluster_champions(swarm.pbest_fitness, clusters.labels, config.n_clusters)
        guides = swarm.pbest_positions[champions[clusters.labels]]
    else:
        guides = np.broadcast_to(swarm.pbest_positions[swarm.best_index()],
                                 swarm.positions.shape)

    w = inertia(swarm.iteration, config.iterations, config.w_start, config.w_end)
    for i in range(swarm.population):
        particle = swarm.particle(i)
        swarm.velocities[i] = update_velocity(particle, guides[i], w, config.c1,
                                              config.c2, config.v_max, rng)
        swarm.positions[i] = update_position(particle, config.pos_min, config.pos_max)

    fitness = np.asarray(obj(swarm.positions), dtype=float)
    improved = fitness < swarm.pbest_fitness
    swarm.pbest_positions[improved] = swarm.positions[improved]
    swarm.pbest_fitness[improved] = fitness[improved]
    swarm.iteration += 1
    return swarm


def run(config: SwarmConfig, topology: Topology, data: Dataset | None = None,
        rng: np.random.Generator | None = None,
        objective: Objective | None = None) -> tuple[Swarm, ClusterAssignment]:
    """Initialize, run all configured iterations, then cluster the final pbests
    once more; returns the swarm and that final assignment."""
    obj = _resolve_objective(topology, data, objective)
    swarm = initialize_swarm(config, topology, rng=rng, objective=obj)
    for _ in range(config.iterations):
        step(swarm, rng=rng, objective=obj)
    seeds = None if swarm.current_clusters is None else swarm.current_clusters.centroids
    final = kmeans(swarm.pbest_positions, config.n_clusters,
                   seed_centroids=seeds, rng=swarm.cluster_rng)
    swarm.current_clusters = final
    return swarm, final
