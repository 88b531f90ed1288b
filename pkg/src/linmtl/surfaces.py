"""Geometry of the feasible region for rank-1 and rank-(k-1) projections.

The attainable per-task objective vectors form a union of 2^(k-1)
quadratic surfaces, one per canonical sign-flipping of the inverse Gram
matrix. The rank-(k-1) region is the elementwise reflection t - v of the
rank-1 region.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import product

import numpy as np

from .errors import OutOfOrthantError, PatternMismatchError, TooManyTasksError
from .predictors import OptimalPredictors

# 2^(k-1) surface enumeration is refused beyond this many tasks.
MAX_ENUM_TASKS = 20

ORTHANT_SLACK = 1e-12


class SurfaceKind(str, Enum):
    """E: rank-1 surfaces in v; I: rank-(k-1) surfaces in t - v."""

    E = "E"
    I = "I"


@dataclass(frozen=True)
class SignPattern:
    """A +-1 flipping vector; canonical form has signs[0] = +1."""

    signs: tuple[int, ...]

    def __post_init__(self):
        if not all(s in (1, -1) for s in self.signs):
            raise ValueError("signs must be +-1")
        if self.signs and self.signs[0] != 1:
            raise ValueError("canonical pattern must start with +1")

    @property
    def flipped(self) -> tuple[int, ...]:
        return tuple(i for i, s in enumerate(self.signs) if s == -1)

    def label(self) -> str:
        flips = self.flipped
        return "".join(str(i + 1) for i in flips) if flips else "0"

    def apply(self, M: np.ndarray) -> np.ndarray:
        d = np.asarray(self.signs, dtype=float)
        return M * np.outer(d, d)


@dataclass(frozen=True)
class SurfaceId:
    kind: SurfaceKind
    pattern: SignPattern

    def label(self) -> str:
        return f"{self.kind.value}{self.pattern.label()}"


@dataclass(frozen=True)
class FeasiblePoint:
    """A per-task objective vector, with the unit direction that made it."""

    v: np.ndarray
    source: np.ndarray | None = None


def canonical_patterns(k: int) -> list[SignPattern]:
    """All 2^(k-1) sign patterns with the first entry fixed to +1.

    The quotient is exact: a pattern and its negation define the same
    surface. Order is lexicographic with +1 before -1.
    """
    if k > MAX_ENUM_TASKS:
        raise TooManyTasksError(f"refusing 2^(k-1) enumeration for k={k} > {MAX_ENUM_TASKS}")
    if k < 1:
        raise ValueError("k must be >= 1")
    return [SignPattern((1, *rest)) for rest in product((1, -1), repeat=k - 1)]


def enumerate_surfaces(
    preds: OptimalPredictors, kind: SurfaceKind
) -> list[tuple[SurfaceId, np.ndarray]]:
    """The 2^(k-1) surface forms D Q D for the canonical sign patterns."""
    return [
        (SurfaceId(kind=kind, pattern=pat), pat.apply(preds.Q))
        for pat in canonical_patterns(preds.k)
    ]


def _checked_sqrt(u: np.ndarray) -> np.ndarray:
    if (u < -ORTHANT_SLACK).any():
        raise OutOfOrthantError(f"coordinate below 0 beyond slack: min={u.min()!r}")
    return np.sqrt(np.clip(u, 0.0, None))


def surface_residual(
    surface_form: np.ndarray,
    kind: SurfaceKind,
    t: np.ndarray,
    v: np.ndarray,
) -> float:
    """sqrt(u)' Q_pattern sqrt(u) - 1 with u = v (kind E) or u = t - v (kind I).

    Zero iff v lies on the surface. Raises OutOfOrthantError when a
    coordinate violates its orthant precondition beyond -1e-12.
    """
    v = np.asarray(v, dtype=float)
    u = v if kind is SurfaceKind.E else np.asarray(t, dtype=float) - v
    if kind is SurfaceKind.I:
        _checked_sqrt(v)  # v >= 0 required for I as well
    root = _checked_sqrt(u)
    return float(root @ surface_form @ root - 1.0)


def sample_feasible_region(
    preds: OptimalPredictors,
    q: int,
    count: int,
    seed: int,
) -> list[FeasiblePoint]:
    """Draw feasible objective vectors from uniformly random directions.

    The direction s is uniform on the unit sphere of span of the optimal
    predictions (Gaussian in the orthonormal span coordinates, then
    normalized). q must be 1 or k-1; rank-(k-1) points are obtained from
    rank-1 points by the reflection t - v.
    """
    k = preds.k
    if q not in (1, k - 1) and not (k == 1 and q == 1):
        raise ValueError(f"q must be 1 or k-1={k - 1}, got {q}")
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = np.random.default_rng(seed)
    coords = rng.standard_normal((count, k))
    coords /= np.linalg.norm(coords, axis=1, keepdims=True)
    dirs = coords @ preds.span_basis.T  # unit vectors in span{yhat_i}
    v = (dirs @ preds.Yhat) ** 2
    if q != 1:
        v = preds.t[np.newaxis, :] - v
    return [FeasiblePoint(v=v[i], source=dirs[i]) for i in range(count)]


def classify_point(
    preds: OptimalPredictors,
    kind: SurfaceKind,
    v: np.ndarray,
    tol: float = 1e-8,
) -> set[SurfaceId]:
    """All canonical surfaces whose residual at v is within tol.

    An empty set means v is not on the boundary of the feasible region.
    """
    out = set()
    for sid, form in enumerate_surfaces(preds, kind):
        if abs(surface_residual(form, kind, preds.t, v)) <= tol:
            out.add(sid)
    return out


def triple_intersection_k3(Q: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Intersection of the three single-flip surfaces for k = 3.

    Writing c_ij for the off-diagonal entries of Q, the closed form is
        v = (c23^2, c13^2, c12^2) / r,
        r = q11 c23^2 + q22 c13^2 + q33 c12^2 - 2 c12 c13 c23,
    which covers both the all-negative and the all-positive off-diagonal
    configurations. Raises PatternMismatchError when an off-diagonal is
    zero, r <= 0, or the candidate fails the three surface equations.
    """
    Q = np.asarray(Q, dtype=float)
    if Q.shape != (3, 3):
        raise ValueError("Q must be 3x3")
    c12, c13, c23 = Q[0, 1], Q[0, 2], Q[1, 2]
    if c12 == 0.0 or c13 == 0.0 or c23 == 0.0:
        raise PatternMismatchError("off-diagonal entries of Q must be nonzero")
    r = Q[0, 0] * c23**2 + Q[1, 1] * c13**2 + Q[2, 2] * c12**2 - 2.0 * c12 * c13 * c23
    if r <= 0.0:
        raise PatternMismatchError(f"denominator is non-positive (r={r!r})")
    v = np.array([c23**2, c13**2, c12**2]) / r
    root = np.sqrt(v)
    for i in range(3):
        d = np.ones(3)
        d[i] = -1.0
        form = Q * np.outer(d, d)
        if abs(root @ form @ root - 1.0) > tol:
            raise PatternMismatchError(
                "candidate point does not satisfy the three surface equations"
            )
    return v


def pareto_filter(points: list[np.ndarray] | np.ndarray, sense: str = "minimize") -> list[int]:
    """Indices of non-dominated points.

    A point dominated only by exact duplicates is kept once, at its first
    occurrence.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2:
        raise ValueError("points must be a list of equal-length vectors")
    if sense == "maximize":
        pts = -pts
    elif sense != "minimize":
        raise ValueError("sense must be 'minimize' or 'maximize'")
    n = pts.shape[0]
    keep = []
    for i in range(n):
        leq = (pts <= pts[i]).all(axis=1)
        strict = leq & (pts < pts[i]).any(axis=1)
        if strict.any():
            continue
        equal = np.flatnonzero(leq & ~(pts < pts[i]).any(axis=1) & (pts == pts[i]).all(axis=1))
        if equal[0] < i:
            continue  # duplicate; first occurrence already kept
        keep.append(i)
    return keep
