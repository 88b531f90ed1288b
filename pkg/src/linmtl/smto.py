"""Specialized multi-task optimizers on the two-layer linear network.

Implements the min-norm-point subproblem (Frank-Wolfe on the simplex)
and the two gradient-balancing training loops: one using gradients with
respect to the shared weights, one using gradients with respect to the
shared representation and chaining the combined direction back through
the (linear) feature map.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .data import TaskDataset
from .errors import DivergedError, EmptyGradientsError

DEFAULT_LR = 0.5
DEFAULT_EPOCHS = 100
DEFAULT_STOP_TOL = 1e-3


@dataclass(frozen=True)
class LinearMTLNet:
    """Shared layer W (p x q) and task heads A (q x k)."""

    W: np.ndarray
    A: np.ndarray

    def __post_init__(self):
        if not (np.isfinite(self.W).all() and np.isfinite(self.A).all()):
            raise ValueError("network parameters must be finite")

    def predict(self, X: np.ndarray) -> np.ndarray:
        return X @ self.W @ self.A

    def task_mse(self, data: TaskDataset) -> np.ndarray:
        return np.sum((self.predict(data.X) - data.Y) ** 2, axis=0)


@dataclass(frozen=True)
class MinNormResult:
    """Shortest vector in the convex hull of the task gradients."""

    alpha: np.ndarray
    combined: np.ndarray
    norm: float
    iterations: int


class Variant(str, Enum):
    FULL = "full"  # gradients w.r.t. the shared weights W
    UB = "ub"  # gradients w.r.t. the shared representation Z = XW


@dataclass(frozen=True)
class SMTOTrace:
    """Per-epoch history of a balancing run."""

    iterate_losses: np.ndarray  # epochs_run x k per-task MSE
    min_norms: np.ndarray
    final_net: LinearMTLNet
    converged: bool
    epochs_run: int


def min_norm_element(
    gradients: list[np.ndarray] | np.ndarray,
    max_iter: int = 1000,
    tol: float = 1e-12,
) -> MinNormResult:
    """Frank-Wolfe with away steps for min_{alpha in simplex} ||sum alpha_i g_i||^2.

    Each iteration compares the classic step toward the vertex with the
    smallest inner product against an away step off the worst support
    vertex and takes whichever promises the larger decrease, with exact
    line search. Away steps restore linear convergence, which the plain
    method lacks; stops once the Frank-Wolfe duality gap falls below tol.
    """
    grads = np.asarray(gradients, dtype=float)
    if grads.ndim != 2 or grads.shape[0] == 0:
        raise EmptyGradientsError("need at least one gradient")
    k = grads.shape[0]
    gram = grads @ grads.T
    alpha = np.full(k, 1.0 / k)
    iterations = 0
    for _ in range(max_iter):
        iterations += 1
        scores = gram @ alpha  # <u, g_i> for the current point u
        value = float(alpha @ scores)
        j = int(np.argmin(scores))
        gap = value - float(scores[j])
        if gap <= tol:
            break
        support = np.flatnonzero(alpha > 0.0)
        a = int(support[np.argmax(scores[support])])
        away_gain = float(scores[a]) - value
        if gap >= away_gain:
            d = -alpha.copy()
            d[j] += 1.0  # toward e_j
            step_max = 1.0
        else:
            d = alpha.copy()
            d[a] -= 1.0  # away from e_a
            denom_mass = 1.0 - alpha[a]
            if denom_mass <= 0.0:
                break  # already a vertex; nothing to move away from
            step_max = alpha[a] / denom_mass
        curvature = float(d @ gram @ d)
        if curvature <= 0.0:
            break
        step = float(np.clip(-(d @ scores) / curvature, 0.0, step_max))
        if step == 0.0:
            break
        alpha = alpha + step * d
        np.clip(alpha, 0.0, None, out=alpha)
        alpha /= alpha.sum()
    combined = alpha @ grads
    return MinNormResult(
        alpha=alpha,
        combined=combined,
        norm=float(np.linalg.norm(combined)),
        iterations=iterations,
    )


def task_gradients_full(net: LinearMTLNet, data: TaskDataset) -> list[np.ndarray]:
    """Gradient of each task loss w.r.t. the flattened shared weights W.

    d||X W a_i - y_i||^2 / dW = 2 X'(X W a_i - y_i) a_i'.
    """
    Z = data.X @ net.W
    resid = Z @ net.A - data.Y  # n x k
    lifted = data.X.T @ resid  # p x k
    return [2.0 * np.outer(lifted[:, i], net.A[:, i]).ravel() for i in range(data.k)]


def task_gradients_rep(net: LinearMTLNet, data: TaskDataset) -> list[np.ndarray]:
    """Gradient of each task loss w.r.t. the flattened representation Z = XW."""
    Z = data.X @ net.W
    resid = Z @ net.A - data.Y
    return [2.0 * np.outer(resid[:, i], net.A[:, i]).ravel() for i in range(data.k)]


def _solve_heads(Z: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Exact least-squares heads a_i = pinv(Z'Z) Z' y_i."""
    return np.linalg.lstsq(Z, Y, rcond=None)[0]


def run_mgda(
    data: TaskDataset,
    q: int,
    variant: Variant | str = Variant.FULL,
    lr: float = DEFAULT_LR,
    epochs: int = DEFAULT_EPOCHS,
    stop_tol: float = DEFAULT_STOP_TOL,
    seed: int = 0,
) -> SMTOTrace:
    """Gradient-balancing training of the two-layer linear network.

    Per epoch: compute per-task gradients (w.r.t. W for 'full', w.r.t.
    the representation for 'ub'), solve the min-norm subproblem, step W
    against the combined direction, then re-solve the heads exactly.
    Stops early once the min-norm drops below stop_tol.
    """
    variant = Variant(variant)
    if q < 1:
        raise ValueError("q must be >= 1")
    if lr <= 0:
        raise ValueError("lr must be positive")
    rng = np.random.default_rng(seed)
    W = rng.uniform(-0.1, 0.1, size=(data.p, q))
    A = rng.uniform(-0.1, 0.1, size=(q, data.k))

    losses = []
    min_norms = []
    converged = False
    for _ in range(epochs):
        net = LinearMTLNet(W=W, A=A)
        if variant is Variant.FULL:
            grads = task_gradients_full(net, data)
        else:
            grads = task_gradients_rep(net, data)
        result = min_norm_element(grads)
        min_norms.append(result.norm)

        if result.norm >= stop_tol:
            if variant is Variant.FULL:
                W = W - lr * result.combined.reshape(W.shape)
            else:
                direction = result.combined.reshape(data.n, q)
                W = W - lr * data.X.T @ direction
        if not np.isfinite(W).all():
            raise DivergedError("shared weights became non-finite")
        A = _solve_heads(data.X @ W, data.Y)
        if not np.isfinite(A).all():
            raise DivergedError("task heads became non-finite")
        net = LinearMTLNet(W=W, A=A)
        losses.append(net.task_mse(data))
        if result.norm < stop_tol:
            converged = True
            break

    return SMTOTrace(
        iterate_losses=np.asarray(losses),
        min_norms=np.asarray(min_norms),
        final_net=LinearMTLNet(W=W, A=A),
        converged=converged,
        epochs_run=len(min_norms),
    )
