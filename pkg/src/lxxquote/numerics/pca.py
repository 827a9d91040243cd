"""PCA through a cyclic Jacobi eigensolver on the covariance matrix."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError, DegenerateDataError


def jacobi_eigh(a, tol: float = 1e-12, max_sweeps: int = 100) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.

    Sweeps until the off-diagonal Frobenius norm is below ``tol`` times the
    matrix norm. Returns eigenvalues in descending order and the matching
    unit eigenvectors as columns.
    """
    a = np.array(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ConfigError(f"expected a square matrix, got shape {a.shape}")
    if not np.allclose(a, a.T, rtol=0, atol=1e-12 * max(1.0, np.abs(a).max(initial=0.0))):
        raise ConfigError("matrix is not symmetric")
    a = (a + a.T) / 2
    n = len(a)
    v = np.eye(n)
    scale = np.linalg.norm(a)
    target = tol * scale if scale > 0 else 0.0

    upper = np.triu(np.ones((n, n), dtype=bool), k=1)

    def off(m: np.ndarray) -> float:
        return math.sqrt(2.0) * float(np.linalg.norm(m[upper]))

    for _ in range(max_sweeps):
        if off(a) <= target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                h = a[q, q] - a[p, p]
                if abs(h) + 100.0 * abs(apq) == abs(h):
                    # pivot negligible next to the diagonal gap; avoids overflow in theta
                    t = apq / h
                else:
                    theta = h / (2.0 * apq)
                    t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.hypot(t, 1.0)
                s = t * c
                ap, aq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                ap, aq = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * ap - s * aq
                a[q, :] = s * ap + c * aq
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    else:
        if off(a) > target:
            raise ArithmeticError(f"Jacobi did not converge in {max_sweeps} sweeps")
    values = np.diag(a).copy()
    order = np.argsort(-values, kind="stable")
    return values[order], v[:, order]


def orient(vectors: np.ndarray) -> np.ndarray:
    """Flip each column so its largest-magnitude entry is positive."""
    vectors = np.array(vectors, dtype=float)
    for j in range(vectors.shape[1]):
        i = int(np.argmax(np.abs(vectors[:, j])))
        if vectors[i, j] < 0:
            vectors[:, j] = -vectors[:, j]
    return vectors


@dataclass(frozen=True)
class PcaProjection:
    coords: np.ndarray            # (points, dims)
    components: np.ndarray        # (features, dims), unit columns
    eigenvalues: np.ndarray       # all covariance eigenvalues, descending
    mean: np.ndarray
    explained_variance_fraction: float

    @property
    def explained_ratios(self) -> np.ndarray:
        return self.eigenvalues / self.eigenvalues.sum()


def pca_project(points, dims: int = 2) -> PcaProjection:
    x = np.asarray(points, dtype=float)
    if x.ndim != 2 or len(x) < dims + 1:
        raise ConfigError(f"PCA to {dims} dims needs at least {dims + 1} points")
    if dims > x.shape[1]:
        raise ConfigError(f"cannot keep {dims} components of {x.shape[1]}-D data")
    mean = x.mean(axis=0)
    centered = x - mean
    cov = centered.T @ centered / (len(x) - 1)
    values, vectors = jacobi_eigh(cov)
    # roundoff can leave PSD eigenvalues a hair below zero
    floor = 1e-12 * max(float(values.max(initial=0.0)), 0.0)
    values = np.where(np.abs(values) <= floor, 0.0, values)
    if (values < 0).any():
        raise ArithmeticError(f"covariance has negative eigenvalue {values.min()}")
    total = values.sum()
    if total <= 0:
        raise DegenerateDataError("all points coincide; PCA is undefined")
    vectors = orient(vectors)
    components = vectors[:, :dims]
    return PcaProjection(
        coords=centered @ components,
        components=components,
        eigenvalues=values,
        mean=mean,
        explained_variance_fraction=float(values[:dims].sum() / total),
    )


def loading_projection(table, dims: int = 2) -> PcaProjection:
    """PCA over the rows of ``table`` that places each *column* on the plane.

    Column j lands at its loadings ``component[j] * sqrt(eigenvalue)`` on the
    leading axes. The explained fraction is that of the row-wise fit.
    """
    p = pca_project(table, dims)
    coords = p.components * np.sqrt(p.eigenvalues[:dims])
    return PcaProjection(coords, p.components, p.eigenvalues, p.mean, p.explained_variance_fraction)
