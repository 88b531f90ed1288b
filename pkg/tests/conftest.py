"""Shared fixtures: canonical instances and random-instance factories."""

import numpy as np
import pytest

from linmtl import (
    OptimalPredictors,
    TaskDataset,
    compute_optimal_predictors,
    equiangular_frame,
    make_three_task_dataset,
)


def random_predictors(k: int, seed: int) -> OptimalPredictors:
    """Generic instance: Gaussian predictors in ambient dimension k + 2."""
    rng = np.random.default_rng(seed)
    return OptimalPredictors.from_yhat(rng.standard_normal((k + 2, k)))


def random_dataset(n: int, p: int, k: int, seed: int) -> TaskDataset:
    rng = np.random.default_rng(seed)
    return TaskDataset(X=rng.standard_normal((n, p)), Y=rng.standard_normal((n, k)))


@pytest.fixture(scope="session")
def equiangular_preds() -> OptimalPredictors:
    return OptimalPredictors.from_yhat(equiangular_frame())


@pytest.fixture(scope="session")
def fixture_data() -> TaskDataset:
    return make_three_task_dataset()


@pytest.fixture(scope="session")
def fixture_preds(fixture_data) -> OptimalPredictors:
    return compute_optimal_predictors(fixture_data)
