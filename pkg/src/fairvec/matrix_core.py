"""Dense numerical kernels: ridge solve, similarity, correlations, k-means,
clustering purity, and a small linear hinge-loss classifier.

Everything here is a pure function of its arguments and deterministic for a
given seed, so callers may invoke these concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import InputError, NumericalError, UndefinedCorrelationError

# Vectors with norm below this are treated as zero for cosine purposes.
ZERO_NORM_EPS = 1e-12


@dataclass(frozen=True)
class RidgeSolution:
    """Weight matrix and regularization constant of one ridge solve."""

    weights: np.ndarray  # (m, n)
    alpha: float


def _as_matrix(x, name: str) -> np.ndarray:
    m = np.asarray(x, dtype=np.float64)
    if m.ndim != 2:
        raise InputError(f"{name} must be a 2-D matrix, got ndim={m.ndim}")
    if not np.all(np.isfinite(m)):
        raise InputError(f"{name} contains non-finite entries")
    return m


def solve_ridge(a, b, alpha: float) -> RidgeSolution:
    """Solve min_W ||B - AW||_F^2 + alpha ||W||_F^2 in closed form.

    Forms the normal equations (A^T A + alpha I) W = A^T B and solves the
    m x m system with a Cholesky factorization; alpha > 0 guarantees the
    matrix is positive definite.
    """
    a = _as_matrix(a, "A")
    b = _as_matrix(b, "B")
    if a.shape[0] != b.shape[0]:
        raise InputError(
            f"A and B must have equal row counts, got {a.shape[0]} and {b.shape[0]}"
        )
    alpha = float(alpha)
    if not np.isfinite(alpha) or alpha < 0:
        raise InputError(f"alpha must be a nonnegative real, got {alpha}")

    gram = a.T @ a
    if alpha > 0:
        gram = gram + alpha * np.eye(a.shape[1])
    rhs = a.T @ b
    try:
        factor = scipy.linalg.cho_factor(gram, lower=True, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(
            "normal-equation matrix A^T A + alpha I is not positive definite "
            f"(singular A^T A with alpha={alpha}): {exc}"
        ) from exc
    weights = scipy.linalg.cho_solve(factor, rhs, check_finite=False)
    return RidgeSolution(weights=weights, alpha=alpha)


def cosine_similarity(u, v) -> float:
    """Cosine of the angle between u and v; 0.0 if either is (near) zero."""
    u = np.asarray(u, dtype=np.float64).ravel()
    v = np.asarray(v, dtype=np.float64).ravel()
    if u.shape != v.shape:
        raise InputError(f"vector dimensions differ: {u.shape[0]} vs {v.shape[0]}")
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu < ZERO_NORM_EPS or nv < ZERO_NORM_EPS:
        return 0.0
    return float(np.clip(np.dot(u, v) / (nu * nv), -1.0, 1.0))


def _as_sequence_pair(x, y):
    x = np.asarray(x, dtype=np.float64).ravel()
    y = np.asarray(y, dtype=np.float64).ravel()
    if x.shape != y.shape:
        raise InputError(f"sequence lengths differ: {x.shape[0]} vs {y.shape[0]}")
    if x.shape[0] < 2:
        raise InputError("correlation needs at least 2 observations")
    return x, y


def pearson(x, y) -> float:
    """Sample Pearson correlation coefficient."""
    x, y = _as_sequence_pair(x, y)
    xc = x - x.mean()
    yc = y - y.mean()
    sx = np.linalg.norm(xc)
    sy = np.linalg.norm(yc)
    if sx == 0.0 or sy == 0.0:
        raise UndefinedCorrelationError("correlation undefined for a constant sequence")
    return float(np.clip(np.dot(xc, yc) / (sx * sy), -1.0, 1.0))


def average_ranks(x) -> np.ndarray:
    """1-based ranks; tied values share the average of their rank positions."""
    x = np.asarray(x, dtype=np.float64).ravel()
    order = np.argsort(x, kind="stable")
    ranks = np.empty(x.shape[0], dtype=np.float64)
    i = 0
    n = x.shape[0]
    while i < n:
        j = i
        while j + 1 < n and x[order[j + 1]] == x[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def spearman(x, y) -> float:
    """Spearman rank correlation: Pearson on average-tie ranks."""
    x, y = _as_sequence_pair(x, y)
    return pearson(average_ranks(x), average_ranks(y))


def _squared_distances(points: np.ndarray, centers: np.ndarray) -> np.ndarray:
    # (n, k) matrix of squared Euclidean distances.
    d2 = (
        np.sum(points**2, axis=1)[:, None]
        - 2.0 * points @ centers.T
        + np.sum(centers**2, axis=1)[None, :]
    )
    np.maximum(d2, 0.0, out=d2)
    return d2


def _kmeanspp_init(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """k-means++ seeding: first center uniform, then D^2-weighted draws."""
    n = points.shape[0]
    centers = np.empty((k, points.shape[1]), dtype=np.float64)
    idx = int(rng.integers(n))
    centers[0] = points[idx]
    if k == 1:
        return centers
    d2 = np.sum((points - centers[0]) ** 2, axis=1)
    for c in range(1, k):
        total = d2.sum()
        if total <= 0.0:
            # All remaining points coincide with a chosen center.
            idx = int(rng.integers(n))
        else:
            idx = int(rng.choice(n, p=d2 / total))
        centers[c] = points[idx]
        d2 = np.minimum(d2, np.sum((points - centers[c]) ** 2, axis=1))
    return centers


def _lloyd(
    points: np.ndarray,
    centers: np.ndarray,
    max_iter: int = 300,
    tol: float = 1e-6,
) -> tuple[np.ndarray, np.ndarray, float, list[float]]:
    """Lloyd iterations from given centers.

    Returns (assignments, centers, sse, sse_history); history records the
    within-cluster sum of squares after each center update and is
    non-increasing.
    """
    k = centers.shape[0]
    centers = centers.copy()
    history: list[float] = []
    assignments = np.zeros(points.shape[0], dtype=np.int64)
    for _ in range(max_iter):
        d2 = _squared_distances(points, centers)
        assignments = np.argmin(d2, axis=1)

        # A cluster left without members keeps its stale center: degenerate
        # inputs (e.g. all points identical) then settle in one cluster.
        new_centers = centers.copy()
        for c in range(k):
            members = assignments == c
            if np.any(members):
                new_centers[c] = points[members].mean(axis=0)
        movement = float(np.max(np.linalg.norm(new_centers - centers, axis=1)))
        centers = new_centers
        d2 = _squared_distances(points, centers)
        sse = float(d2[np.arange(points.shape[0]), assignments].sum())
        history.append(sse)
        if movement <= tol:
            break
    return assignments, centers, history[-1], history


def kmeans(
    points,
    k: int,
    seed: int,
    n_restarts: int = 10,
    max_iter: int = 300,
    tol: float = 1e-6,
) -> np.ndarray:
    """Cluster points into k groups; returns one cluster index per point.

    Runs Lloyd's algorithm from k-means++ seedings, 10 restarts by default,
    and keeps the restart with the lowest within-cluster sum of squares.
    Deterministic for a given seed.
    """
    points = _as_matrix(points, "points")
    n = points.shape[0]
    if k < 1 or k > n:
        raise InputError(f"need 1 <= k <= n, got k={k} with n={n} points")
    rng = np.random.default_rng(seed)
    best_assignments: np.ndarray | None = None
    best_sse = np.inf
    for _ in range(n_restarts):
        centers = _kmeanspp_init(points, k, rng)
        assignments, _, sse, _ = _lloyd(points, centers, max_iter=max_iter, tol=tol)
        if sse < best_sse:
            best_sse = sse
            best_assignments = assignments
    assert best_assignments is not None
    return best_assignments


def purity(assignments, labels) -> float:
    """Fraction of points whose cluster's majority label matches their own."""
    assignments = np.asarray(assignments, dtype=np.int64).ravel()
    labels = np.asarray(labels, dtype=np.int64).ravel()
    if assignments.shape != labels.shape:
        raise InputError(
            f"assignments and labels lengths differ: {assignments.shape[0]} vs {labels.shape[0]}"
        )
    n = assignments.shape[0]
    if n == 0:
        raise InputError("purity needs at least one point")
    majority_total = 0
    for c in np.unique(assignments):
        cluster_labels = labels[assignments == c]
        majority_total += int(np.bincount(cluster_labels).max())
    return majority_total / n


@dataclass(frozen=True)
class LinearClassifier:
    """Linear decision rule: predict 1 when w.x + b > 0, else 0."""

    weights: np.ndarray
    bias: float

    def decision_function(self, points) -> np.ndarray:
        points = np.asarray(points, dtype=np.float64)
        return points @ self.weights + self.bias

    def predict(self, points) -> np.ndarray:
        return (self.decision_function(points) > 0.0).astype(np.int64)


def train_linear_classifier(
    train_points,
    train_labels,
    seed: int,
    l2: float = 1e-4,
    epochs: int = 200,
) -> LinearClassifier:
    """Train a binary hinge-loss classifier by per-sample subgradient descent.

    Objective: mean hinge loss + (l2/2)||w||^2 with an unregularized bias.
    Step size decays as 1/(1 + l2 * t); sample order is reshuffled each epoch
    from the seed, so training is deterministic.
    """
    x = _as_matrix(train_points, "train_points")
    y = np.asarray(train_labels).ravel()
    if x.shape[0] != y.shape[0]:
        raise InputError(
            f"points and labels lengths differ: {x.shape[0]} vs {y.shape[0]}"
        )
    classes = np.unique(y)
    if not np.all(np.isin(classes, (0, 1))):
        raise InputError("labels must be binary (0/1)")
    if classes.shape[0] < 2:
        raise InputError("training set must contain both classes")

    signs = np.where(y == 1, 1.0, -1.0)
    rng = np.random.default_rng(seed)
    w = np.zeros(x.shape[1], dtype=np.float64)
    b = 0.0
    t = 0
    for _ in range(epochs):
        for i in rng.permutation(x.shape[0]):
            t += 1
            eta = 1.0 / (1.0 + l2 * t)
            margin = signs[i] * (np.dot(w, x[i]) + b)
            w *= 1.0 - eta * l2
            if margin < 1.0:
                w += eta * signs[i] * x[i]
                b += eta * signs[i]
    return LinearClassifier(weights=w, bias=float(b))
