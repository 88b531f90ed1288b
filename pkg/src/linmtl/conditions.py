"""Deciding the full-exploration conditions C1 and C2.

C1 asks whether some sign-flipping of the optimal predictors makes their
Gram matrix entrywise non-negative; C2 asks the same for the inverse
Gram. Both reduce to 2-coloring the nonzero-correlation graph, decided
here by sign propagation, with a 2^(k-1) brute force as oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import SingularGramError, TooManyTasksError
from .predictors import OptimalPredictors
from .surfaces import MAX_ENUM_TASKS, SignPattern, canonical_patterns

# Entries within ZERO_TOL_FACTOR * max|entry| of zero are treated as
# "uncorrelated" and impose no sign constraint.
ZERO_TOL_FACTOR = 1e-10


@dataclass(frozen=True)
class ConditionReport:
    """Outcome of a C1/C2 check.

    When the condition holds, `certificate` is a canonical sign pattern
    whose flip makes the tested matrix entrywise non-negative. When it
    fails, `witness` is a closed cycle of task indices whose chained sign
    constraints multiply to -1 (consecutive indices, wrapping around, are
    the conflicting correlation edges).
    """

    holds: bool
    certificate: SignPattern | None = None
    witness: tuple[int, ...] | None = None


def sign_matrix(M: np.ndarray) -> np.ndarray:
    """Thresholded entrywise sign of a symmetric matrix.

    |entry| <= 1e-10 * max|entry| maps to 0; exact sgn is unusable in
    floating point.
    """
    M = np.asarray(M, dtype=float)
    scale = np.abs(M).max()
    if scale == 0.0:
        return np.zeros_like(M)
    thresh = ZERO_TOL_FACTOR * scale
    return np.sign(np.where(np.abs(M) <= thresh, 0.0, M))


def _cycle_through(parent: list[int | None], i: int, j: int) -> tuple[int, ...]:
    """Closed cycle formed by the tree paths of i and j plus the edge (j, i)."""
    anc_i = [i]
    node = i
    while parent[node] is not None:
        node = parent[node]
        anc_i.append(node)
    pos = {node: idx for idx, node in enumerate(anc_i)}
    path_j = [j]
    node = j
    while node not in pos:
        node = parent[node]
        path_j.append(node)
    lca = node
    return tuple(anc_i[: pos[lca] + 1] + path_j[-2::-1])


def _propagate_signs(S: np.ndarray) -> ConditionReport:
    """Assign flipping signs over the nonzero-correlation graph.

    Each connected component is rooted at its lowest index with sign +1
    and signs spread along edges; the first inconsistent edge yields the
    failure witness. Isolated or trailing tasks default to +1.
    """
    k = S.shape[0]
    signs: list[int | None] = [None] * k
    parent: list[int | None] = [None] * k
    for root in range(k):
        if signs[root] is not None:
            continue
        signs[root] = 1
        queue = [root]
        while queue:
            i = queue.pop(0)
            for j in range(k):
                if j == i or S[i, j] == 0:
                    continue
                implied = int(signs[i] * S[i, j])
                if signs[j] is None:
                    signs[j] = implied
                    parent[j] = i
                    queue.append(j)
                elif signs[j] != implied:
                    return ConditionReport(holds=False, witness=_cycle_through(parent, i, j))
    # Canonical form: the component containing task 0 is rooted at +1.
    cert = SignPattern(tuple(int(s) for s in signs))
    return ConditionReport(holds=True, certificate=cert)


def check_c1(preds: OptimalPredictors) -> ConditionReport:
    """Decide C1 by sign propagation over the correlations sgn(G_ij)."""
    return _propagate_signs(sign_matrix(preds.G))


def check_c2(preds: OptimalPredictors) -> ConditionReport:
    """Decide C2: the propagation runs on Q = inv(G) via a Cholesky solve.

    Raises SingularGramError when a Cholesky pivot falls below
    1e-12 * trace / k.
    """
    G = preds.G
    k = G.shape[0]
    try:
        L = np.linalg.cholesky(G)
    except np.linalg.LinAlgError as exc:
        raise SingularGramError(f"Gram matrix is not positive definite: {exc}") from exc
    pivot_floor = 1e-12 * np.trace(G) / k
    if (np.diag(L) ** 2 < pivot_floor).any():
        raise SingularGramError("Cholesky pivot below 1e-12 * trace/k")
    half = np.linalg.solve(L, np.eye(k))
    Q = half.T @ half
    return _propagate_signs(sign_matrix(Q))


@lru_cache(maxsize=None)
def _canonical_sign_table(k: int) -> np.ndarray:
    """2^(k-1) x k matrix of +-1 rows, first column all +1, lexicographic."""
    return np.array([pat.signs for pat in canonical_patterns(k)], dtype=float)


def brute_force_condition(M: np.ndarray, mode: str = "entrywise") -> ConditionReport:
    """Enumerate all 2^(k-1) canonical flips of M; the reference oracle.

    Holds iff some D M D has no negative entry, where entries within the
    sgn threshold of zero count as non-negative (same semantics as the
    propagation checkers). The certificate is the first passing pattern
    in lexicographic order; no witness is produced on failure.
    """
    if mode != "entrywise":
        raise ValueError(f"unsupported mode {mode!r}")
    M = np.asarray(M, dtype=float)
    k = M.shape[0]
    if k > MAX_ENUM_TASKS:
        raise TooManyTasksError(f"refusing 2^(k-1) enumeration for k={k} > {MAX_ENUM_TASKS}")
    S = sign_matrix(M)
    # All canonical flip vectors at once: row m of D is the m-th pattern
    # in the same lexicographic order as canonical_patterns(k).
    D = _canonical_sign_table(k)
    flipped = S[np.newaxis, :, :] * D[:, :, np.newaxis] * D[:, np.newaxis, :]
    passing = np.flatnonzero((flipped >= 0).all(axis=(1, 2)))
    if passing.size:
        first = int(passing[0])
        return ConditionReport(
            holds=True, certificate=SignPattern(tuple(int(s) for s in D[first]))
        )
    return ConditionReport(holds=False)


def estimate_c1_probability(k: int, trials: int, seed: int) -> float:
    """Monte-Carlo probability that C1 holds for Gaussian predictors.

    Predictors are drawn with i.i.d. standard-normal entries in ambient
    dimension n = k + 2 (generic linear independence). Each trial uses an
    independent generator keyed by (seed, trial), so the estimate is
    deterministic per seed and order-independent.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    hits = 0
    for trial in range(trials):
        rng = np.random.default_rng([seed, trial])
        Yhat = rng.standard_normal((k + 2, k))
        if _propagate_signs(sign_matrix(Yhat.T @ Yhat)).holds:
            hits += 1
    return hits / trials
