import numpy as np
import pytest

import pvfdi


@pytest.fixture(scope="session")
def norm_split():
    """Normalized (train, test) from a small synthetic dataset."""
    raw = pvfdi.synth_generate(400, seed=7)
    train_raw, test_raw = pvfdi.split(raw, pvfdi.SplitConfig(0.8, 7))
    train, (test,) = pvfdi.normalize(train_raw, [test_raw])
    return train, test


@pytest.fixture()
def rng():
    return np.random.default_rng(1234)


def leaf_of(arrays, x):
    """Node index that row x lands in; test-side re-walk of a flat tree."""
    feature, threshold, left, right, _ = arrays
    node = 0
    while feature[node] >= 0:
        node = left[node] if x[feature[node]] <= threshold[node] else right[node]
    return node
