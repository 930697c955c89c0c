"""Shared numerical estimators: least squares, BIC, LASSO, principal
components, and dummy-observation Bayesian regression.

Least squares goes through a QR decomposition rather than normal equations;
rank deficiency raises instead of silently pseudo-inverting, since callers
control their regressor counts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DegenerateFit, NonConvergence, RankDeficient, SampleTooShort

LASSO_TOL = 1e-8
LASSO_MAX_SWEEPS = 10_000


@dataclass(frozen=True)
class DesignMatrix:
    """Regressor matrix with column labels; no missing entries allowed."""

    data: np.ndarray
    labels: tuple[str, ...]

    def __post_init__(self) -> None:
        arr = np.asarray(self.data, dtype=float)
        if arr.ndim != 2:
            raise ValueError("design matrix must be two-dimensional")
        if not np.all(np.isfinite(arr)):
            raise ValueError("design matrix contains non-finite entries")
        if len(self.labels) != arr.shape[1]:
            raise ValueError(f"{len(self.labels)} labels for {arr.shape[1]} columns")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("design matrix labels must be unique")
        object.__setattr__(self, "data", arr)

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def k(self) -> int:
        return self.data.shape[1]


@dataclass(frozen=True)
class LsFit:
    coefficients: np.ndarray
    residuals: np.ndarray
    rss: float
    r_squared: float
    sigma2: float


def _as_matrix(X: DesignMatrix | np.ndarray) -> np.ndarray:
    if isinstance(X, DesignMatrix):
        return X.data
    arr = np.asarray(X, dtype=float)
    if arr.ndim != 2:
        raise ValueError("design matrix must be two-dimensional")
    return arr


def qr_solve(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Least-squares solve via reduced QR; raises RankDeficient when a
    diagonal of R collapses relative to the largest one.
    """
    Q, R = np.linalg.qr(X)
    diag = np.abs(np.diag(R))
    if diag.size and diag.min() <= diag.max() * max(X.shape) * np.finfo(float).eps:
        raise RankDeficient(f"design matrix of shape {X.shape} is rank deficient")
    return scipy.linalg.solve_triangular(R, Q.T @ Y, lower=False)


def ols_fit(X: DesignMatrix | np.ndarray, y: np.ndarray) -> LsFit:
    """Minimize ||y - X b||^2. R-squared is the centered one, meaningful when
    a constant column is present.
    """
    A = _as_matrix(X)
    yv = np.asarray(y, dtype=float)
    n, k = A.shape
    if n < k:
        raise SampleTooShort(f"need at least {k} observations for {k} regressors, got {n}")
    if not np.all(np.isfinite(A)) or not np.all(np.isfinite(yv)):
        raise ValueError("non-finite values in regression inputs")
    beta = qr_solve(A, yv)
    resid = yv - A @ beta
    rss = float(resid @ resid)
    tss = float(np.sum((yv - yv.mean()) ** 2))
    if tss > 0.0:
        r2 = 1.0 - rss / tss
    else:
        r2 = 1.0 if rss <= 1e-28 else 0.0
    sigma2 = rss / (n - k) if n > k else float("nan")
    return LsFit(beta, resid, rss, r2, sigma2)


def bic(rss: float, n: int, k: int) -> float:
    """Constant-free Schwarz criterion n*ln(rss/n) + k*ln(n); only
    differences matter for model comparison.
    """
    if n <= 0 or k < 0:
        raise ValueError(f"need n > 0 and k >= 0, got n={n}, k={k}")
    if rss <= 0.0:
        raise DegenerateFit(f"rss must be positive for BIC, got {rss}")
    return n * np.log(rss / n) + k * np.log(n)


def _soft_threshold(z: float, gamma: float) -> float:
    if z > gamma:
        return z - gamma
    if z < -gamma:
        return z + gamma
    return 0.0


def lasso_fit(X: DesignMatrix | np.ndarray, y: np.ndarray, lam: float) -> np.ndarray:
    """L1-penalized regression by cyclic coordinate descent.

    Minimizes (1/2n)||y - b0 - X b||^2 + lam * sum|b_j| with the intercept
    unpenalized. Columns are standardized internally; the returned vector is
    on the original scale with the intercept first. Convergence requires the
    max coefficient change per sweep to fall below 1e-8 within 10,000 sweeps.
    """
    if lam < 0:
        raise ValueError(f"penalty must be non-negative, got {lam}")
    A = _as_matrix(X)
    yv = np.asarray(y, dtype=float)
    n, p = A.shape
    if n < 2:
        raise SampleTooShort("lasso needs at least two observations")
    mean_x = A.mean(axis=0)
    scale = np.sqrt(np.mean((A - mean_x) ** 2, axis=0))
    if np.any(scale == 0.0):
        j = int(np.flatnonzero(scale == 0.0)[0])
        raise RankDeficient(f"constant column {j} among penalized regressors")
    Z = (A - mean_x) / scale
    yc = yv - yv.mean()

    b = np.zeros(p)
    r = yc.copy()
    for sweep in range(1, LASSO_MAX_SWEEPS + 1):
        max_delta = 0.0
        for j in range(p):
            zj = Z[:, j]
            rho = (zj @ r) / n + b[j]  # partial residual correlation; Z'Z/n = 1
            new = _soft_threshold(rho, lam)
            delta = new - b[j]
            if delta != 0.0:
                r -= delta * zj
                b[j] = new
                max_delta = max(max_delta, abs(delta))
        if max_delta < LASSO_TOL:
            break
    else:
        raise NonConvergence(f"lasso did not converge within {LASSO_MAX_SWEEPS} sweeps")

    beta = b / scale
    intercept = yv.mean() - mean_x @ beta
    return np.concatenate([[intercept], beta])


def lasso_kkt_violation(X: DesignMatrix | np.ndarray, y: np.ndarray,
                        coefficients: np.ndarray, lam: float) -> float:
    """Largest KKT violation of a lasso solution, on the standardized scale.

    Zero coefficients must satisfy |z_j' r / n| <= lam; active ones must hit
    the bound exactly. Useful as an independent optimality check.
    """
    A = _as_matrix(X)
    yv = np.asarray(y, dtype=float)
    n = A.shape[0]
    mean_x = A.mean(axis=0)
    scale = np.sqrt(np.mean((A - mean_x) ** 2, axis=0))
    Z = (A - mean_x) / scale
    b_std = coefficients[1:] * scale
    r = (yv - yv.mean()) - Z @ b_std
    grad = np.abs(Z.T @ r) / n
    worst = 0.0
    for j in range(A.shape[1]):
        if b_std[j] == 0.0:
            worst = max(worst, grad[j] - lam)
        else:
            worst = max(worst, abs(grad[j] - lam))
    return worst


def pca(X: DesignMatrix | np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """First k principal components of the column-standardized data.

    Returns (factors n x k, loadings p x k, explained_variance length k),
    components ordered by descending eigenvalue of the correlation matrix.
    Each loading vector is signed so its largest-magnitude entry is positive.
    """
    A = _as_matrix(X)
    n, p = A.shape
    if not 1 <= k <= min(n, p):
        raise ValueError(f"k must be in 1..{min(n, p)}, got {k}")
    mean = A.mean(axis=0)
    scale = np.sqrt(np.mean((A - mean) ** 2, axis=0))
    if np.any(scale == 0.0):
        j = int(np.flatnonzero(scale == 0.0)[0])
        raise ValueError(f"zero-variance column {j}")
    Z = (A - mean) / scale
    _, svals, vt = np.linalg.svd(Z, full_matrices=False)
    explained = svals**2 / n
    loadings = vt[:k].T.copy()
    for j in range(k):
        lead = int(np.argmax(np.abs(loadings[:, j])))
        if loadings[lead, j] < 0:
            loadings[:, j] = -loadings[:, j]
    factors = Z @ loadings
    return factors, loadings, explained[:k]


def dummy_obs_bayes_fit(Y: np.ndarray, X: DesignMatrix | np.ndarray,
                        dummies_Y: np.ndarray, dummies_X: np.ndarray) -> np.ndarray:
    """Least squares on the system augmented with synthetic observations:
    the posterior mean under the conjugate prior those dummies encode.
    Returns a (k x m) coefficient matrix, one column per equation.
    """
    A = _as_matrix(X)
    Ym = np.asarray(Y, dtype=float)
    if Ym.ndim == 1:
        Ym = Ym[:, None]
    Yd = np.asarray(dummies_Y, dtype=float)
    Xd = np.asarray(dummies_X, dtype=float)
    if Yd.ndim == 1:
        Yd = Yd[:, None]
    if Yd.shape[0] != Xd.shape[0]:
        raise ValueError(f"dummy row mismatch: {Yd.shape[0]} responses vs {Xd.shape[0]} designs")
    if Xd.shape[0] and Xd.shape[1] != A.shape[1]:
        raise ValueError(f"dummy design has {Xd.shape[1]} columns, expected {A.shape[1]}")
    X_aug = np.vstack([A, Xd]) if Xd.shape[0] else A
    Y_aug = np.vstack([Ym, Yd]) if Yd.shape[0] else Ym
    if X_aug.shape[0] < X_aug.shape[1]:
        raise SampleTooShort("stacked system has fewer rows than coefficients")
    return qr_solve(X_aug, Y_aug)
