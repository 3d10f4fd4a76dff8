import numpy as np
import pytest

from kmpso.data import make_dataset


def random_dataset(rng, n_examples, n_features, n_classes):
    """Random normalized features with random class labels."""
    features = rng.random((n_examples, n_features))
    labels = rng.integers(0, n_classes, n_examples)
    # ensure every class appears so n_classes is honest
    labels[:n_classes] = np.arange(n_classes)
    return make_dataset(features, labels, n_classes)


def blob_dataset(rng, per_class=10, n_features=2, spread=0.02):
    """Two tight, far-apart Gaussian blobs: any reasonable model separates them."""
    centers = np.array([[0.2] * n_features, [0.8] * n_features])
    features = np.vstack([
        centers[0] + spread * rng.standard_normal((per_class, n_features)),
        centers[1] + spread * rng.standard_normal((per_class, n_features)),
    ])
    features = np.clip(features, 0.0, 1.0)
    labels = np.repeat([0, 1], per_class)
    return features, labels


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
