"""Experiment drivers: weight sweeps, randomized mixtures, diagnostics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateWeightError, EmptyListError
from .predictors import OptimalPredictors, WeightVector, scalarization_optimum


@dataclass(frozen=True)
class SweepResult:
    """Weights, per-task MSE vectors and objective vectors of a sweep."""

    weights: list[WeightVector]
    losses: np.ndarray  # count x k
    objectives: np.ndarray  # count x k
    skipped: int = 0


def sample_simplex_weights(k: int, count: int, seed: int) -> list[WeightVector]:
    """Uniform samples on the probability simplex.

    k=3 uses the two-uniforms construction lambda = (min, max - min,
    1 - max); other k use k-1 sorted uniform spacings, which is the same
    law.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = np.random.default_rng(seed)
    if k == 3:
        m = rng.uniform(size=(count, 2))
        lo = m.min(axis=1)
        hi = m.max(axis=1)
        lam = np.column_stack([lo, hi - lo, 1.0 - hi])
    else:
        cuts = np.sort(rng.uniform(size=(count, k - 1)), axis=1)
        padded = np.hstack([np.zeros((count, 1)), cuts, np.ones((count, 1))])
        lam = np.diff(padded, axis=1)
    # Guard against rounding drift before the simplex validation.
    lam = lam / lam.sum(axis=1, keepdims=True)
    return [WeightVector(row) for row in lam]


def run_sweep(
    preds: OptimalPredictors,
    offsets: np.ndarray,
    q: int,
    count: int,
    seed: int,
) -> SweepResult:
    """Closed-form optimum for `count` uniformly sampled weight vectors.

    Degenerate weights (zero weighted predictor matrix) are skipped and
    counted rather than raised.
    """
    weights = sample_simplex_weights(preds.k, count, seed)
    kept, losses, objectives = [], [], []
    skipped = 0
    for w in weights:
        try:
            sol = scalarization_optimum(preds, offsets, w, q)
        except DegenerateWeightError:
            skipped += 1
            continue
        kept.append(w)
        losses.append(sol.mse)
        objectives.append(sol.objective)
    return SweepResult(
        weights=kept,
        losses=np.asarray(losses),
        objectives=np.asarray(objectives),
        skipped=skipped,
    )


def randomized_combination(loss1: np.ndarray, loss2: np.ndarray, t: float) -> np.ndarray:
    """Expected loss of the coin-flip mixture of two networks."""
    loss1 = np.asarray(loss1, dtype=float)
    loss2 = np.asarray(loss2, dtype=float)
    if loss1.shape != loss2.shape:
        raise ValueError("loss vectors must have equal dimension")
    if not 0.0 <= t <= 1.0:
        raise ValueError("t must lie in [0, 1]")
    return t * loss1 + (1.0 - t) * loss2


def run_randomized_sweep(
    preds: OptimalPredictors,
    offsets: np.ndarray,
    q: int,
    count: int,
    seed: int,
) -> SweepResult:
    """Sweep over random weight pairs mixed with a uniform t.

    Per sample: two weight vectors and t ~ U(0,1); the recorded loss and
    objective are the t-combinations of the two closed-form optima. The
    stored weight is the first of the pair.
    """
    w1 = sample_simplex_weights(preds.k, count, seed)
    w2 = sample_simplex_weights(preds.k, count, seed + 1)
    rng = np.random.default_rng([seed, count])
    ts = rng.uniform(size=count)
    kept, losses, objectives = [], [], []
    skipped = 0
    for wa, wb, t in zip(w1, w2, ts):
        try:
            sa = scalarization_optimum(preds, offsets, wa, q)
            sb = scalarization_optimum(preds, offsets, wb, q)
        except DegenerateWeightError:
            skipped += 1
            continue
        kept.append(wa)
        losses.append(randomized_combination(sa.mse, sb.mse, t))
        objectives.append(randomized_combination(sa.objective, sb.objective, t))
    return SweepResult(
        weights=kept,
        losses=np.asarray(losses),
        objectives=np.asarray(objectives),
        skipped=skipped,
    )


def distance_to_point(
    points: list[np.ndarray] | np.ndarray, target: np.ndarray
) -> tuple[float, int]:
    """Euclidean min distance from a point cloud to a target, with argmin."""
    pts = np.asarray(points, dtype=float)
    if pts.size == 0:
        raise EmptyListError("points must be non-empty")
    dists = np.linalg.norm(pts - np.asarray(target, dtype=float)[np.newaxis, :], axis=1)
    idx = int(np.argmin(dists))
    return float(dists[idx]), idx
