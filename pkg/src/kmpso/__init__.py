"""KMPSO: k-means multi-subpopulation particle swarm training of
feedforward neural-network ensembles."""

from .clustering import ClusterAssignment, assign, kmeans, recompute_centroids
from .data import (CsvSchema, DataError, Dataset, FoldPlan, ParseError, RawTable,
                   encode_labels, impute_missing, kfold_split, load_csv, make_dataset,
                   normalize)
from .ensemble import (Decomposition, Ensemble, build_ensemble, classify, classify_batch,
                       decomposition, error_rate, predict, predict_batch)
from .experiment import (ExperimentConfig, FoldResult, ResultsSummary, Stats, report,
                         run_cv_experiment)
from .network import (Topology, dimension, forward, forward_batch, forward_many,
                      mse_fitness, mse_fitness_batch, sigmoid)
from .swarm import (Particle, Swarm, SwarmConfig, cluster_champions, inertia,
                    initialize_swarm, mse_objective, run, step, update_position,
                    update_velocity)

__version__ = "0.1.0"
