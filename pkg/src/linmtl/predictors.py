"""Least-squares geometry of linear MTL and closed-form scalarization optima.

Each task's loss splits into an irreducible part (distance of the targets
from the feature span) and a capacity part governed by how well a rank-q
projection can retain the optimal predictions. The capacity part has a
closed-form optimum via the truncated SVD.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .data import TaskDataset
from .errors import DegenerateWeightError, DivergedError, RankDeficientError

# Singular values below CUTOFF * sigma_max are treated as zero when
# forming pseudo-inverses and orthonormal range bases.
PINV_CUTOFF = 1e-12

# Smallest/largest singular value ratio of Yhat below which the
# linear-independence assumption is considered violated.
RANK_TOL = 1e-10


@dataclass(frozen=True)
class WeightVector:
    """A point on the probability simplex (convex task coefficients)."""

    lam: np.ndarray

    def __post_init__(self):
        lam = np.asarray(self.lam, dtype=float)
        if lam.ndim != 1:
            raise ValueError("weights must be a 1-D vector")
        if (lam < 0).any():
            raise ValueError("weights must be non-negative")
        if abs(lam.sum() - 1.0) > 1e-12:
            raise ValueError(f"weights must sum to 1, got {lam.sum()!r}")
        object.__setattr__(self, "lam", lam)

    @property
    def k(self) -> int:
        return self.lam.shape[0]

    @staticmethod
    def uniform(k: int) -> "WeightVector":
        return WeightVector(np.full(k, 1.0 / k))


@dataclass(frozen=True)
class OptimalPredictors:
    """Optimal per-task predictions and their Gram geometry.

    Yhat: n x k matrix of projected targets (columns are the per-task
    optimal predictions); G = Yhat' Yhat; Q = inv(G); t = diag(G).
    span_basis is an orthonormal n x k basis of span of the columns with
    Yhat = span_basis @ span_coords (used to push SVDs down to k x k).
    """

    Yhat: np.ndarray
    G: np.ndarray
    Q: np.ndarray
    t: np.ndarray
    span_basis: np.ndarray = field(repr=False)
    span_coords: np.ndarray = field(repr=False)

    @property
    def k(self) -> int:
        return self.Yhat.shape[1]

    @property
    def n(self) -> int:
        return self.Yhat.shape[0]

    @staticmethod
    def from_yhat(Yhat: np.ndarray) -> "OptimalPredictors":
        """Build the Gram geometry from given optimal predictions."""
        Yhat = np.asarray(Yhat, dtype=float)
        sv = np.linalg.svd(Yhat, compute_uv=False)
        if sv[-1] < RANK_TOL * sv[0]:
            raise RankDeficientError(
                "optimal predictions are numerically linearly dependent "
                f"(singular value ratio {sv[-1] / sv[0]:.2e})"
            )
        basis, coords = np.linalg.qr(Yhat)
        G = Yhat.T @ Yhat
        G = 0.5 * (G + G.T)
        Q = np.linalg.inv(G)
        Q = 0.5 * (Q + Q.T)
        return OptimalPredictors(
            Yhat=Yhat, G=G, Q=Q, t=np.diag(G).copy(),
            span_basis=basis, span_coords=coords,
        )


def orthonormal_range_basis(X: np.ndarray) -> np.ndarray:
    """Orthonormal basis of range(X) via SVD with a relative cutoff."""
    U, sv, _ = np.linalg.svd(X, full_matrices=False)
    if sv.size == 0 or sv[0] == 0.0:
        return U[:, :0]
    rank = int(np.sum(sv > PINV_CUTOFF * sv[0]))
    return U[:, :rank]


def compute_optimal_predictors(data: TaskDataset) -> OptimalPredictors:
    """Project the targets onto range(X) and assemble their Gram geometry.

    Raises RankDeficientError when the projected targets are linearly
    dependent, i.e. the independence assumption underlying the surface
    analysis fails.
    """
    U = orthonormal_range_basis(data.X)
    Yhat = U @ (U.T @ data.Y)
    return OptimalPredictors.from_yhat(Yhat)


def irreducible_losses(data: TaskDataset, preds: OptimalPredictors) -> np.ndarray:
    """Per-task squared residual ||yhat_i - y_i||^2 (the loss floor)."""
    return np.sum((preds.Yhat - data.Y) ** 2, axis=0)


@dataclass(frozen=True)
class ScalarizationSolution:
    """Closed-form optimum of one scalarized objective.

    objective[i] is the retained energy ||P yhat_i||^2 of task i under the
    optimal rank-q projection P; mse[i] is the full training MSE including
    the irreducible part. basis spans range(P).
    """

    weight: WeightVector
    q: int
    objective: np.ndarray
    mse: np.ndarray
    basis: np.ndarray

    @property
    def weighted_loss(self) -> float:
        return float(self.weight.lam @ self.mse)


def _canonical_svd(M: np.ndarray):
    """SVD with a deterministic sign convention.

    The first nonzero entry of each right singular vector is made
    positive, so equal inputs give bit-identical factors regardless of
    LAPACK's sign choices.
    """
    U, sv, Vt = np.linalg.svd(M, full_matrices=False)
    for i in range(Vt.shape[0]):
        row = Vt[i]
        nz = np.flatnonzero(row)
        if nz.size and row[nz[0]] < 0:
            Vt[i] = -row
            U[:, i] = -U[:, i]
    return U, sv, Vt


def scalarization_optimum(
    preds: OptimalPredictors,
    offsets: np.ndarray,
    w: WeightVector,
    q: int,
) -> ScalarizationSolution:
    """Best rank-q projection for the weighted objective, in closed form.

    The optimum keeps the top-q left singular directions of Yhat @ Lambda
    with Lambda = diag(sqrt(lambda)). Weights are renormalized by their
    exact sum so that scaling all of them by a power of two leaves the
    result bit-identical.
    """
    offsets = np.asarray(offsets, dtype=float)
    if q < 1:
        raise ValueError("q must be >= 1")
    if (offsets < 0).any():
        raise ValueError("offsets must be non-negative")
    if w.k != preds.k or offsets.shape != (preds.k,):
        raise ValueError("dimension mismatch between weights, offsets and predictors")

    k = preds.k
    lam = w.lam / w.lam.sum()
    if q >= k:
        objective = preds.t.copy()
        basis = preds.span_basis.copy()
    else:
        sqrt_lam = np.sqrt(lam)
        # Yhat @ Lambda = span_basis @ (span_coords @ Lambda); the SVD of
        # the small k x k factor carries all the spectral information.
        small = preds.span_coords * sqrt_lam[np.newaxis, :]
        if not np.any(small):
            raise DegenerateWeightError(
                "Yhat @ Lambda is zero; no informative optimum for these weights"
            )
        U_small, _, _ = _canonical_svd(small)
        basis = preds.span_basis @ U_small[:, :q]
        objective = np.sum((basis.T @ preds.Yhat) ** 2, axis=0)
    mse = (preds.t - objective) + offsets
    return ScalarizationSolution(weight=w, q=q, objective=objective, mse=mse, basis=basis)


@dataclass(frozen=True)
class GradientDescentResult:
    final_loss: float
    mse: np.ndarray
    loss_history: np.ndarray
    W: np.ndarray
    A: np.ndarray


def train_scalarized_gd(
    data: TaskDataset,
    w: WeightVector,
    q: int,
    lr: float,
    epochs: int,
    seed: int,
) -> GradientDescentResult:
    """Full-batch gradient descent on the scalarized two-layer objective.

    Minimizes ||(X W A - Y) Lambda||_F^2 over W (p x q) and A (q x k),
    starting from i.i.d. uniform [-0.1, 0.1] entries. Used to validate the
    closed form; raises DivergedError if the loss leaves the finite range.
    """
    if lr <= 0:
        raise ValueError("lr must be positive")
    if epochs < 1:
        raise ValueError("epochs must be >= 1")
    rng = np.random.default_rng(seed)
    p, k = data.p, data.k
    W = rng.uniform(-0.1, 0.1, size=(p, q))
    A = rng.uniform(-0.1, 0.1, size=(q, k))
    lam = w.lam / w.lam.sum()

    X, Y = data.X, data.Y
    history = np.empty(epochs)
    for epoch in range(epochs):
        Z = X @ W
        resid = Z @ A - Y
        loss = float(np.sum(resid**2 @ lam))
        if not np.isfinite(loss):
            raise DivergedError(f"loss became non-finite at epoch {epoch}")
        history[epoch] = loss
        weighted = resid * lam[np.newaxis, :]
        grad_A = 2.0 * Z.T @ weighted
        grad_W = 2.0 * X.T @ weighted @ A.T
        W = W - lr * grad_W
        A = A - lr * grad_A

    resid = X @ W @ A - Y
    mse = np.sum(resid**2, axis=0)
    final = float(mse @ lam)
    if not np.isfinite(final):
        raise DivergedError("loss became non-finite after the last update")
    return GradientDescentResult(final_loss=final, mse=mse, loss_history=history, W=W, A=A)
