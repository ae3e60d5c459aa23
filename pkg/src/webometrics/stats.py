"""Descriptive statistics, Spearman correlation matrices, and
correlation-based PCA with varimax rotation."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
from scipy import stats as sps

DEFAULT_ALPHAS = (0.01, 0.05)


@dataclass(frozen=True)
class Descriptives:
    n: int
    mean: float
    median: float
    std_dev: float
    skewness: float | None
    kurtosis: float | None
    minimum: float
    maximum: float


def describe(values: Sequence[float]) -> Descriptives:
    """Mean, median, sample standard deviation and bias-corrected skewness
    and excess kurtosis.

    Skewness needs n >= 3 and kurtosis n >= 4; both are ``None`` for a
    constant vector. A single value has standard deviation 0.
    """
    x = np.asarray(values, dtype=float)
    n = x.size
    if n == 0:
        raise ValueError("describe() needs at least one value")
    mean = float(x.mean())
    sd = float(x.std(ddof=1)) if n > 1 else 0.0
    skew = kurt = None
    if sd > 0:
        z = (x - mean) / sd
        if n >= 3:
            skew = float(n / ((n - 1) * (n - 2)) * np.sum(z**3))
        if n >= 4:
            kurt = float(
                n * (n + 1) / ((n - 1) * (n - 2) * (n - 3)) * np.sum(z**4)
                - 3 * (n - 1) ** 2 / ((n - 2) * (n - 3))
            )
    return Descriptives(n, mean, float(np.median(x)), sd, skew, kurt, float(x.min()), float(x.max()))


def log_transform(values: Sequence[float]) -> np.ndarray:
    """``log10(1 + x)``; zero counts map to zero."""
    x = np.asarray(values, dtype=float)
    if np.any(x < 0) or np.any(np.isnan(x)):
        raise ValueError("log_transform needs non-negative values")
    return np.log10(1 + x)


def average_ranks(values: Sequence[float]) -> np.ndarray:
    """1-based ranks with ties sharing the mean of their positions."""
    x = np.asarray(values, dtype=float)
    order = np.argsort(x, kind="mergesort")
    sorted_x = x[order]
    ranks = np.empty(x.size)
    start = 0
    while start < x.size:
        stop = start + 1
        while stop < x.size and sorted_x[stop] == sorted_x[start]:
            stop += 1
        ranks[order[start:stop]] = (start + stop + 1) / 2.0
        start = stop
    return ranks


def _pearson(a: np.ndarray, b: np.ndarray) -> float:
    da = a - a.mean()
    db = b - b.mean()
    den = math.sqrt(float(np.dot(da, da)) * float(np.dot(db, db)))
    if den == 0:
        raise ValueError("undefined correlation: constant vector")
    return float(np.dot(da, db)) / den


def correlation_p_value(rho: float, n: int) -> float:
    """Two-tailed p for a correlation via t = rho*sqrt((n-2)/(1-rho^2))."""
    if n < 3:
        raise ValueError("need n >= 3")
    if abs(rho) >= 1.0:
        return 0.0
    t = rho * math.sqrt((n - 2) / (1 - rho * rho))
    return float(2 * sps.t.sf(abs(t), n - 2))


def spearman(x: Sequence[float], y: Sequence[float]) -> tuple[float, float]:
    """(rho, two-tailed p) using average ranks for ties."""
    if len(x) != len(y):
        raise ValueError("x and y differ in length")
    n = len(x)
    if n < 3:
        raise ValueError("spearman needs at least 3 pairs")
    rho = _pearson(average_ranks(x), average_ranks(y))
    rho = max(-1.0, min(1.0, rho))
    return rho, correlation_p_value(rho, n)


@dataclass(frozen=True)
class CorrelationMatrix:
    variables: tuple[str, ...]
    rho: np.ndarray
    p_values: np.ndarray
    n_pairs: np.ndarray
    significant_01: np.ndarray
    significant_05: np.ndarray

    def significant(self, alpha: float) -> np.ndarray:
        out = self.p_values < alpha
        np.fill_diagonal(out, False)
        return out


def _column(table: Mapping[str, Sequence], name: str) -> np.ndarray:
    if name not in table:
        raise ValueError(f"variable {name!r} is missing")
    col = np.array([np.nan if v is None else float(v) for v in table[name]], dtype=float)
    if col.size == 0 or np.all(np.isnan(col)):
        raise ValueError(f"variable {name!r} is missing")
    return col


def correlation_matrix(
    table: Mapping[str, Sequence],
    variables: Sequence[str],
    alpha_levels: Sequence[float] = DEFAULT_ALPHAS,
) -> CorrelationMatrix:
    """Pairwise-complete Spearman matrix with two-tailed significance flags.

    *table* maps variable name to a column; ``None``/NaN entries are
    missing and drop only the pairs they take part in.
    """
    cols = [_column(table, v) for v in variables]
    k = len(cols)
    rho = np.eye(k)
    p = np.zeros((k, k))
    n_pairs = np.zeros((k, k), dtype=int)
    for i in range(k):
        n_pairs[i, i] = int(np.sum(~np.isnan(cols[i])))
        for j in range(i + 1, k):
            if cols[i].size != cols[j].size:
                raise ValueError(f"{variables[i]!r} and {variables[j]!r} differ in length")
            ok = ~np.isnan(cols[i]) & ~np.isnan(cols[j])
            m = int(ok.sum())
            if m < 3:
                raise ValueError(f"only {m} complete pairs for {variables[i]!r} x {variables[j]!r}")
            try:
                r, pv = spearman(cols[i][ok], cols[j][ok])
            except ValueError as exc:
                raise ValueError(f"{variables[i]!r} x {variables[j]!r}: {exc}") from None
            rho[i, j] = rho[j, i] = r
            p[i, j] = p[j, i] = pv
            n_pairs[i, j] = n_pairs[j, i] = m
    flags = {}
    for alpha in set(alpha_levels) | set(DEFAULT_ALPHAS):
        f = p < alpha
        np.fill_diagonal(f, False)
        flags[alpha] = f
    return CorrelationMatrix(tuple(variables), rho, p, n_pairs, flags[0.01], flags[0.05])


def varimax_criterion(loadings: np.ndarray, normalize: bool = True) -> float:
    """Sum over components of the variance of squared loadings.

    With ``normalize`` the rows are first scaled to unit length (Kaiser).
    """
    L = np.asarray(loadings, dtype=float)
    if normalize:
        h = np.sqrt(np.sum(L**2, axis=1))
        h[h == 0] = 1.0
        L = L / h[:, None]
    sq = L**2
    return float(np.sum(np.mean(sq**2, axis=0) - np.mean(sq, axis=0) ** 2))


def varimax(loadings: np.ndarray, normalize: bool = True, tol: float = 1e-10, max_sweeps: int = 100) -> tuple[np.ndarray, np.ndarray]:
    """Varimax rotation by sweeps of pairwise planar rotations.

    Each planar step uses the closed-form optimal angle for its pair of
    columns, so the criterion never decreases. Stops when a full sweep
    gains less than *tol* or after *max_sweeps*. Returns the rotated
    loadings and the rotation matrix ``T`` with ``rotated = loadings @ T``.
    """
    A = np.array(loadings, dtype=float)
    p, k = A.shape
    T = np.eye(k)
    if k < 2:
        return A.copy(), T
    if normalize:
        h = np.sqrt(np.sum(A**2, axis=1))
        h[h == 0] = 1.0
    else:
        h = np.ones(p)
    B = A / h[:, None]
    crit = varimax_criterion(B, normalize=False)
    for _ in range(max_sweeps):
        for i in range(k - 1):
            for j in range(i + 1, k):
                x, y = B[:, i], B[:, j]
                u = x * x - y * y
                v = 2 * x * y
                num = 2 * (p * np.dot(u, v) - u.sum() * v.sum())
                den = p * (np.dot(u, u) - np.dot(v, v)) - (u.sum() ** 2 - v.sum() ** 2)
                phi = math.atan2(num, den) / 4
                if phi == 0.0:
                    continue
                c, s = math.cos(phi), math.sin(phi)
                rot = np.array([[c, -s], [s, c]])
                B[:, [i, j]] = B[:, [i, j]] @ rot
                T[:, [i, j]] = T[:, [i, j]] @ rot
        new = varimax_criterion(B, normalize=False)
        gain = new - crit
        crit = new
        if gain < tol:
            break
    return B * h[:, None], T


@dataclass(frozen=True)
class PcaResult:
    """Correlation-based PCA.

    ``loadings`` are eigenvectors scaled by sqrt(eigenvalue); ``scores`` are
    projections of the standardized data onto the eigenvectors and
    ``rotated_scores`` the same projections after the varimax rotation.
    """

    variables: tuple[str, ...]
    eigenvalues: np.ndarray
    loadings: np.ndarray
    rotated_loadings: np.ndarray
    rotation: np.ndarray
    explained_variance: np.ndarray
    explained_ratio: np.ndarray
    rotated_variance: np.ndarray
    scores: np.ndarray
    rotated_scores: np.ndarray

    @property
    def communalities(self) -> np.ndarray:
        return np.sum(self.loadings**2, axis=1)


def standardize(X: np.ndarray) -> np.ndarray:
    """Center and scale columns by the population (n) standard deviation."""
    X = np.asarray(X, dtype=float)
    sd = X.std(axis=0, ddof=0)
    if np.any(sd == 0):
        bad = [int(i) for i in np.flatnonzero(sd == 0)]
        raise ValueError(f"degenerate variables: zero variance in columns {bad}")
    return (X - X.mean(axis=0)) / sd


def pca(table: Mapping[str, Sequence] | np.ndarray, variables: Sequence[str] | None = None, n_components: int = 2, rotate: bool = True) -> PcaResult:
    """PCA on the Pearson correlation matrix of *variables*.

    Rows with a missing value in any variable are dropped. Components are
    ordered by eigenvalue; each eigenvector's sign is fixed so its largest
    absolute entry is positive.
    """
    if isinstance(table, np.ndarray):
        X = np.asarray(table, dtype=float)
        variables = tuple(variables or (f"v{i}" for i in range(X.shape[1])))
    else:
        X = np.column_stack([_column(table, v) for v in variables])
        variables = tuple(variables)
    X = X[~np.isnan(X).any(axis=1)]
    n, p = X.shape
    if n <= p:
        raise ValueError(f"pca needs more observations ({n}) than variables ({p})")
    if not 1 <= n_components <= p:
        raise ValueError(f"n_components must lie in [1, {p}]")
    Z = standardize(X)
    R = Z.T @ Z / n
    evals, evecs = np.linalg.eigh(R)
    order = np.argsort(evals)[::-1]
    evals = np.clip(evals[order], 0.0, None)
    evecs = evecs[:, order]
    for c in range(p):
        col = evecs[:, c]
        if col[np.argmax(np.abs(col))] < 0:
            evecs[:, c] = -col
    V = evecs[:, :n_components]
    ev = evals[:n_components]
    L = V * np.sqrt(ev)
    if rotate and n_components > 1:
        L_rot, T = varimax(L)
    else:
        L_rot, T = L.copy(), np.eye(n_components)
    scores = Z @ V
    return PcaResult(
        variables=variables,
        eigenvalues=evals,
        loadings=L,
        rotated_loadings=L_rot,
        rotation=T,
        explained_variance=ev,
        explained_ratio=ev / p,
        rotated_variance=np.sum(L_rot**2, axis=0),
        scores=scores,
        rotated_scores=scores @ T,
    )


def critical_rho(n: int, alpha: float) -> float:
    """Smallest |rho| that is significant (two-tailed) at *alpha* with n pairs."""
    lo, hi = 0.0, 1.0
    for _ in range(200):
        mid = (lo + hi) / 2
        if correlation_p_value(mid, n) < alpha:
            hi = mid
        else:
            lo = mid
    return hi
