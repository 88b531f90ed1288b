"""Synthetic instances with mutually negative task correlations.

Two constructions live here. `equiangular_frame` is the classic
three-vector rotated frame with pairwise inner products -0.44, useful as
a worst-case instance where the balanced trade-off sits in a deep
valley. `make_three_task_dataset` is the package's shipped fixture: a
milder three-task problem (pairwise correlations -0.12, six features)
whose no-sign-flip obstruction still breaks full Pareto-front
exploration by scalarization, but whose valley is shallow enough that
gradient-balancing optimizers reach its interior. Ships as a CSV
fixture because the robot-arm dataset used for the original experiments
cannot be redistributed.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .data import TaskDataset

# Frame directions: planar radius rho and common height h, rho^2 + h^2 = 1.
FRAME_RHO = np.sqrt(0.96)
FRAME_H = 0.2

# Defaults of the shipped fixture.
FIXTURE_CORRELATION = 0.12
FIXTURE_NOISE = 0.05
FIXTURE_SEED = 7


def equiangular_frame() -> np.ndarray:
    """3 x 3 matrix whose columns are the rotated-frame directions.

    Unit columns with exact pairwise inner products -0.44; no sign flip
    can make the Gram matrix entrywise non-negative.
    """
    angles = np.array([0.0, 2.0 * np.pi / 3.0, 4.0 * np.pi / 3.0])
    return np.vstack(
        [FRAME_RHO * np.cos(angles), FRAME_RHO * np.sin(angles), np.full(3, FRAME_H)]
    )


def make_three_task_dataset(
    n: int = 80,
    p: int = 6,
    correlation: float = FIXTURE_CORRELATION,
    noise: float = FIXTURE_NOISE,
    seed: int = FIXTURE_SEED,
) -> TaskDataset:
    """Three tasks with equal negative pairwise correlation.

    The optimal predictions have unit norm and exact pairwise inner
    products -correlation, so the sign-flip condition on the Gram matrix
    fails (odd negative cycle) and the scalarization sweep leaves a hole
    around the balanced trade-off. The targets live in a 3-dimensional
    slice of the p-dimensional feature span; each task also carries a
    residual of squared norm `noise` orthogonal to the span (the
    irreducible part of its loss). Features are a well-conditioned mix
    of an orthonormal basis, each basis column orthogonal to the ones
    vector so column standardization preserves the geometry.
    """
    g = correlation
    gram = np.array([[1.0, -g, -g], [-g, 1.0, -g], [-g, -g, 1.0]])
    frame = np.linalg.cholesky(gram).T  # frame' frame = gram
    rng = np.random.default_rng(seed)
    raw = rng.standard_normal((n, p))
    raw -= raw.mean(axis=0, keepdims=True)  # orthogonal to the ones vector
    U, _ = np.linalg.qr(raw)
    Y = U[:, :3] @ frame
    if noise > 0:
        # One residual direction per task, outside span(U) and mean-free.
        resid = rng.standard_normal((n, 3))
        resid -= U @ (U.T @ resid)
        resid -= np.outer(np.ones(n) / n, resid.sum(axis=0))
        resid /= np.linalg.norm(resid, axis=0, keepdims=True)
        Y = Y + np.sqrt(noise) * resid
    mix = rng.standard_normal((p, p)) + 2.0 * np.eye(p)
    return TaskDataset(X=U @ mix, Y=Y)


def write_fixture_csv(path: str | Path, **kwargs) -> None:
    """Write the fixture as x1..xp,y1..y3 CSV with full precision."""
    data = make_three_task_dataset(**kwargs)
    table = np.hstack([data.X, data.Y])
    header = ",".join(
        [f"x{i + 1}" for i in range(data.p)] + [f"y{i + 1}" for i in range(data.k)]
    )
    np.savetxt(path, table, delimiter=",", header=header, comments="", fmt="%.17g")
