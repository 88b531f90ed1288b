import numpy as np
import pytest

from linmtl import (
    OptimalPredictors,
    TaskDataset,
    WeightVector,
    compute_optimal_predictors,
    irreducible_losses,
    scalarization_optimum,
    train_scalarized_gd,
)
from linmtl.errors import DegenerateWeightError, RankDeficientError
from linmtl.predictors import _canonical_svd

from conftest import random_dataset, random_predictors


# --- WeightVector -----------------------------------------------------------


def test_weight_vector_accepts_simplex_points():
    w = WeightVector(np.array([0.2, 0.3, 0.5]))
    assert w.k == 3
    np.testing.assert_array_equal(WeightVector.uniform(4).lam, 0.25)


@pytest.mark.parametrize("lam", [[0.5, 0.6], [-0.1, 1.1], [[0.5, 0.5]]])
def test_weight_vector_rejects_non_simplex(lam):
    with pytest.raises(ValueError):
        WeightVector(np.array(lam, dtype=float))


# --- optimal predictors -----------------------------------------------------


def test_projection_matches_normal_equations():
    data = random_dataset(n=12, p=5, k=3, seed=0)
    preds = compute_optimal_predictors(data)
    # Independent oracle: per-task least squares through the normal equations.
    XtX = data.X.T @ data.X
    coef = np.linalg.solve(XtX, data.X.T @ data.Y)
    np.testing.assert_allclose(preds.Yhat, data.X @ coef, atol=1e-10)


def test_gram_geometry_is_consistent():
    preds = random_predictors(4, seed=1)
    np.testing.assert_allclose(preds.G, preds.Yhat.T @ preds.Yhat, atol=1e-12)
    np.testing.assert_allclose(preds.Q @ preds.G, np.eye(4), atol=1e-10)
    np.testing.assert_allclose(preds.t, np.diag(preds.G))
    np.testing.assert_allclose(
        preds.span_basis @ preds.span_coords, preds.Yhat, atol=1e-12
    )
    np.testing.assert_allclose(
        preds.span_basis.T @ preds.span_basis, np.eye(4), atol=1e-12
    )


def test_dependent_predictions_are_rejected():
    y = np.arange(1.0, 6.0)
    with pytest.raises(RankDeficientError):
        OptimalPredictors.from_yhat(np.column_stack([y, 2.0 * y]))


def test_irreducible_losses_complete_pythagoras():
    data = random_dataset(n=15, p=4, k=3, seed=2)
    preds = compute_optimal_predictors(data)
    offsets = irreducible_losses(data, preds)
    # ||y_i||^2 = ||yhat_i||^2 + offset_i since the residual is orthogonal.
    np.testing.assert_allclose(
        np.sum(data.Y**2, axis=0), preds.t + offsets, atol=1e-9
    )
    assert (offsets >= 0).all()


# --- scalarization closed form ---------------------------------------------


def test_full_rank_solution_attains_the_loss_floor():
    data = random_dataset(n=10, p=6, k=3, seed=3)
    preds = compute_optimal_predictors(data)
    offsets = irreducible_losses(data, preds)
    sol = scalarization_optimum(preds, offsets, WeightVector.uniform(3), q=3)
    np.testing.assert_allclose(sol.objective, preds.t, atol=1e-12)
    np.testing.assert_allclose(sol.mse, offsets, atol=1e-9)


def test_rank_one_weighted_objective_equals_top_singular_value():
    preds = random_predictors(3, seed=4)
    w = WeightVector(np.array([0.5, 0.3, 0.2]))
    sol = scalarization_optimum(preds, np.zeros(3), w, q=1)
    sv = np.linalg.svd(preds.Yhat * np.sqrt(w.lam), compute_uv=False)
    np.testing.assert_allclose(float(w.lam @ sol.objective), sv[0] ** 2, atol=1e-10)
    assert (sol.objective <= preds.t + 1e-12).all()


def test_objective_vector_is_feasible_projection_energy():
    preds = random_predictors(4, seed=5)
    sol = scalarization_optimum(preds, np.zeros(4), WeightVector.uniform(4), q=2)
    proj = sol.basis @ sol.basis.T
    np.testing.assert_allclose(
        sol.objective,
        np.sum((proj @ preds.Yhat) * preds.Yhat, axis=0),
        atol=1e-10,
    )


def test_scalarization_validates_inputs():
    preds = random_predictors(3, seed=6)
    w = WeightVector.uniform(3)
    with pytest.raises(ValueError, match="q must be"):
        scalarization_optimum(preds, np.zeros(3), w, q=0)
    with pytest.raises(ValueError, match="non-negative"):
        scalarization_optimum(preds, np.array([-1.0, 0.0, 0.0]), w, q=1)
    with pytest.raises(ValueError, match="dimension mismatch"):
        scalarization_optimum(preds, np.zeros(4), w, q=1)


def test_degenerate_weight_raises():
    preds = random_predictors(3, seed=7)
    crippled = OptimalPredictors(
        Yhat=preds.Yhat,
        G=preds.G,
        Q=preds.Q,
        t=preds.t,
        span_basis=preds.span_basis,
        span_coords=np.zeros_like(preds.span_coords),
    )
    with pytest.raises(DegenerateWeightError):
        scalarization_optimum(crippled, np.zeros(3), WeightVector.uniform(3), q=1)


def test_canonical_svd_fixes_signs_and_reconstructs():
    rng = np.random.default_rng(8)
    M = rng.standard_normal((5, 3))
    U, sv, Vt = _canonical_svd(M.copy())
    np.testing.assert_allclose(U * sv @ Vt, M, atol=1e-12)
    for row in Vt:
        nz = np.flatnonzero(row)
        assert row[nz[0]] > 0
    U2, sv2, Vt2 = _canonical_svd(M.copy())
    np.testing.assert_array_equal(U, U2)
    np.testing.assert_array_equal(Vt, Vt2)


# --- gradient-descent cross-check ------------------------------------------


def test_gd_matches_closed_form_at_full_rank():
    data = random_dataset(n=9, p=4, k=2, seed=9)
    preds = compute_optimal_predictors(data)
    offsets = irreducible_losses(data, preds)
    w = WeightVector.uniform(2)
    sol = scalarization_optimum(preds, offsets, w, q=2)
    result = train_scalarized_gd(data, w, q=2, lr=0.01, epochs=4000, seed=0)
    assert result.final_loss <= sol.weighted_loss + 1e-4


def test_gd_never_beats_closed_form_below_rank():
    data = random_dataset(n=9, p=4, k=3, seed=10)
    preds = compute_optimal_predictors(data)
    offsets = irreducible_losses(data, preds)
    w = WeightVector(np.array([0.6, 0.2, 0.2]))
    sol = scalarization_optimum(preds, offsets, w, q=1)
    result = train_scalarized_gd(data, w, q=1, lr=0.01, epochs=4000, seed=1)
    assert result.final_loss >= sol.weighted_loss - 1e-9


def test_gd_validates_hyperparameters():
    data = random_dataset(n=6, p=3, k=2, seed=11)
    w = WeightVector.uniform(2)
    with pytest.raises(ValueError):
        train_scalarized_gd(data, w, q=1, lr=0.0, epochs=10, seed=0)
    with pytest.raises(ValueError):
        train_scalarized_gd(data, w, q=1, lr=0.1, epochs=0, seed=0)
