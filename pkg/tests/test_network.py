import math

import numpy as np
import pytest

from kmpso.data import make_dataset
from kmpso.network import (Topology, dimension, forward, forward_batch, forward_many,
                           mse_fitness, mse_fitness_batch, sigmoid)

from conftest import random_dataset


# --- independent oracles: direct transcriptions of the layer equations, ---
# --- written against the documented flat layout, no shared library code ---

def oracle_forward(pos, n, q, m, x):
    pos = [float(v) for v in pos]
    hidden = []
    for j in range(q):
        s = pos[n * q + j]
        for i in range(n):
            s += pos[j * n + i] * x[i]
        hidden.append(1.0 / (1.0 + math.exp(-s)))
    out = []
    base = n * q + q
    for k in range(m):
        s = pos[base + q * m + k]
        for j in range(q):
            s += pos[base + k * q + j] * hidden[j]
        out.append(1.0 / (1.0 + math.exp(-s)))
    return out


def oracle_mse(pos, n, q, m, X, T):
    total = 0.0
    for l in range(len(X)):
        f = oracle_forward(pos, n, q, m, X[l])
        for k in range(m):
            total += (f[k] - T[l][k]) ** 2
    return total / (m * len(X))


class TestTopology:
    def test_dimension_australian_shape(self):
        assert dimension(Topology(14, 7, 2)) == 121

    def test_dimension_minimal(self):
        assert dimension(Topology(1, 1, 1)) == 4

    def test_dimension_diabetes_shape(self):
        assert dimension(Topology(8, 7, 2)) == 79

    def test_rejects_nonpositive_sizes(self):
        with pytest.raises(ValueError):
            Topology(0, 7, 2)
        with pytest.raises(ValueError):
            Topology(3, 3, 0)


class TestSigmoid:
    def test_zero(self):
        assert sigmoid(0.0) == 0.5

    def test_log3(self):
        assert sigmoid(math.log(3)) == pytest.approx(0.75, abs=1e-15)

    def test_symmetry(self):
        assert sigmoid(-math.log(3)) == pytest.approx(0.25, abs=1e-15)

    def test_strictly_increasing_on_grid(self):
        xs = np.linspace(-30, 30, 301)
        ys = sigmoid(xs)
        assert (np.diff(ys) > 0).all()

    def test_saturates_inside_open_interval(self):
        assert 0.0 < sigmoid(-1e6) < sigmoid(-40.0)
        assert sigmoid(40.0) < sigmoid(1e6) < 1.0


class TestForward:
    def test_zero_position_gives_half_everywhere(self, rng):
        topo = Topology(4, 3, 2)
        out = forward(np.zeros(topo.dimension), topo, rng.random(4))
        assert np.array_equal(out, [0.5, 0.5])

    def test_constructed_cancellation(self):
        # w11 = 0, b1 = 0 -> hidden 0.5; wk = 2*ln3, bk = -ln3 -> S(0) = 0.5
        topo = Topology(1, 1, 1)
        pos = np.array([0.0, 0.0, 2 * math.log(3), -math.log(3)])
        assert forward(pos, topo, [0.7])[0] == pytest.approx(0.5, abs=1e-15)

    def test_matches_oracle_frozen_value(self):
        # expected values computed with oracle_forward on these exact draws
        rng = np.random.default_rng(42)
        topo = Topology(2, 3, 2)
        pos = rng.uniform(-5.0, 5.0, topo.dimension)
        x = rng.uniform(0.0, 1.0, 2)
        out = forward(pos, topo, x)
        assert out == pytest.approx([0.08558622480542663, 0.9916172411415989], abs=1e-12)
        assert out == pytest.approx(oracle_forward(pos, 2, 3, 2, x), abs=1e-12)

    def test_matches_oracle_many_random_positions(self, rng):
        topo = Topology(2, 3, 2)
        for _ in range(20):
            pos = rng.uniform(-5.0, 5.0, topo.dimension)
            x = rng.random(2)
            assert forward(pos, topo, x) == pytest.approx(
                oracle_forward(pos, 2, 3, 2, x), abs=1e-12)

    def test_batch_consistent_with_single(self, rng):
        topo = Topology(3, 4, 2)
        pos = rng.uniform(-5.0, 5.0, topo.dimension)
        X = rng.random((6, 3))
        batch = forward_batch(pos, topo, X)
        for l in range(6):
            assert batch[l] == pytest.approx(forward(pos, topo, X[l]), abs=1e-12)

    def test_many_consistent_with_single(self, rng):
        topo = Topology(3, 4, 2)
        positions = rng.uniform(-5.0, 5.0, (5, topo.dimension))
        X = rng.random((6, 3))
        many = forward_many(positions, topo, X)
        for b in range(5):
            for l in range(6):
                assert many[b, l] == pytest.approx(forward(positions[b], topo, X[l]), abs=1e-12)

    def test_length_mismatch_raises(self, rng):
        topo = Topology(3, 4, 2)
        with pytest.raises(ValueError):
            forward(np.zeros(topo.dimension + 1), topo, rng.random(3))
        with pytest.raises(ValueError):
            forward(np.zeros(topo.dimension), topo, rng.random(4))

    def test_outputs_strictly_inside_unit_interval(self, rng):
        # extreme in-range weights can push the exact sigmoid to round to 1.0
        topo = Topology(14, 7, 2)
        pos = np.full(topo.dimension, 5.0)
        out = forward(pos, topo, np.ones(14))
        assert (out > 0.0).all() and (out < 1.0).all()
        for _ in range(20):
            out = forward(rng.uniform(-5, 5, topo.dimension), topo, rng.random(14))
            assert (out > 0.0).all() and (out < 1.0).all()

    def test_output_bias_perturbation_is_local(self, rng):
        # nudging b_k must change output k only
        topo = Topology(3, 4, 2)
        n, q, m = 3, 4, 2
        pos = rng.uniform(-1.0, 1.0, topo.dimension)
        x = rng.random(3)
        base = forward(pos, topo, x)
        for k in range(m):
            bumped = pos.copy()
            bumped[n * q + q + q * m + k] += 0.25
            out = forward(bumped, topo, x)
            assert out[k] != base[k]
            other = [j for j in range(m) if j != k]
            assert np.array_equal(out[other], base[other])

    def test_hidden_unit_permutation_symmetry(self, rng):
        topo = Topology(3, 4, 2)
        n, q, m = 3, 4, 2
        pos = rng.uniform(-2.0, 2.0, topo.dimension)
        perm = rng.permutation(q)
        w_h = pos[: n * q].reshape(q, n)[perm]
        b_h = pos[n * q: n * q + q][perm]
        w_o = pos[n * q + q: n * q + q + q * m].reshape(m, q)[:, perm]
        permuted = np.concatenate([w_h.ravel(), b_h, w_o.ravel(), pos[n * q + q + q * m:]])
        x = rng.random(3)
        assert forward(permuted, topo, x) == pytest.approx(forward(pos, topo, x), abs=1e-12)


class TestMseFitness:
    def test_zero_iff_outputs_equal_targets(self, rng):
        # sigmoid outputs never hit 0 or 1, so the zero case needs targets set
        # to the outputs themselves (mse_fitness only reads features/targets)
        topo = Topology(2, 3, 2)
        pos = rng.uniform(-2.0, 2.0, topo.dimension)
        X = rng.random((4, 2))

        class Exact:
            features = X
            targets = forward_many(pos[None, :], topo, X)[0]

        assert mse_fitness(pos, topo, Exact()) == 0.0

        class Off:
            features = X
            targets = forward_many(pos[None, :], topo, X)[0] + 1e-6

        assert mse_fitness(pos, topo, Off()) > 0.0

    def test_half_outputs_quarter_error(self):
        topo = Topology(2, 3, 1)
        pos = np.zeros(topo.dimension)
        features = np.array([[0.1, 0.2], [0.3, 0.4], [0.5, 0.6], [0.7, 0.8]])
        data = make_dataset(features, np.zeros(4, dtype=int), 1)  # targets all [1]
        assert mse_fitness(pos, topo, data) == pytest.approx(0.25, abs=1e-15)

    def test_matches_oracle_frozen_value(self):
        rng = np.random.default_rng(7)
        topo = Topology(2, 3, 2)
        pos = rng.uniform(-5.0, 5.0, topo.dimension)
        X = rng.uniform(0.0, 1.0, (5, 2))
        labels = rng.integers(0, 2, 5)
        data = make_dataset(X, labels, 2)
        assert mse_fitness(pos, topo, data) == pytest.approx(0.19224776627774962, abs=1e-12)
        assert mse_fitness(pos, topo, data) == pytest.approx(
            oracle_mse(pos, 2, 3, 2, X, data.targets), abs=1e-12)

    def test_matches_oracle_random(self, rng):
        topo = Topology(2, 3, 2)
        for _ in range(10):
            pos = rng.uniform(-5.0, 5.0, topo.dimension)
            data = random_dataset(rng, 5, 2, 2)
            assert mse_fitness(pos, topo, data) == pytest.approx(
                oracle_mse(pos, 2, 3, 2, data.features, data.targets), abs=1e-12)

    def test_nonnegative_and_permutation_invariant(self, rng):
        topo = Topology(3, 4, 2)
        pos = rng.uniform(-5.0, 5.0, topo.dimension)
        data = random_dataset(rng, 12, 3, 2)
        value = mse_fitness(pos, topo, data)
        assert value >= 0.0
        perm = rng.permutation(12)
        shuffled = make_dataset(data.features[perm], data.labels[perm], 2)
        assert mse_fitness(pos, topo, shuffled) == pytest.approx(value, abs=1e-12)

    def test_batch_matches_scalar(self, rng):
        topo = Topology(3, 4, 2)
        positions = rng.uniform(-5.0, 5.0, (6, topo.dimension))
        data = random_dataset(rng, 9, 3, 2)
        batch = mse_fitness_batch(positions, topo, data)
        for b in range(6):
            assert batch[b] == pytest.approx(mse_fitness(positions[b], topo, data), abs=1e-12)

    def test_empty_dataset_rejected(self, rng):
        topo = Topology(2, 2, 2)

        class Hollow:
            features = np.zeros((0, 2))
            targets = np.zeros((0, 2))

        with pytest.raises(ValueError):
            mse_fitness(np.zeros(topo.dimension), topo, Hollow())
