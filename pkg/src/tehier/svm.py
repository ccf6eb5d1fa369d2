"""Binary soft-margin SVM trained with SMO, plus Platt score calibration.

The dual problem  min 1/2 a'Qa - 1'a  s.t.  y'a = 0, 0 <= a <= C  (with
Q_ij = y_i y_j K_ij and an RBF kernel) is solved by sequential minimal
optimization with maximal-violating-pair working-set selection. Training
stops when the KKT gap m(a) - M(a) drops below the configured tolerance,
which guarantees every sample then satisfies the KKT conditions within that
tolerance once the bias is set to the midpoint of the gap.

Decision values are mapped to probabilities with Platt's sigmoid
P(y=1|f) = 1 / (1 + exp(A f + B)), fitted by smoothed-target maximum
likelihood with a Newton iteration.
"""

from __future__ import annotations

from collections import OrderedDict
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDataError, DimensionError

_FULL_GRAM_LIMIT = 4000
_ROW_CACHE_SIZE = 512
_SNAP = 1e-12


@dataclass(frozen=True)
class SvmConfig:
    """Soft-margin cost, RBF width, and SMO stopping controls.

    ``max_passes`` bounds the optimizer at ``max_passes * n_samples`` pair
    updates; the seed is carried for interface uniformity (the solver itself
    is deterministic).
    """

    C: float = 1.0
    gamma: float = 1.0
    kkt_tolerance: float = 1e-3
    max_passes: int = 200
    seed: int = 0

    def __post_init__(self):
        if self.C <= 0:
            raise ValueError(f"C must be positive, got {self.C}")
        if self.gamma <= 0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")
        if self.kkt_tolerance <= 0:
            raise ValueError("kkt_tolerance must be positive")
        if self.max_passes < 1:
            raise ValueError("max_passes must be >= 1")


def rbf_kernel(x: np.ndarray, y: np.ndarray, gamma: float) -> float:
    """exp(-gamma * ||x - y||^2) for a single pair of equal-length vectors."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise DimensionError(f"kernel arguments have shapes {x.shape} and {y.shape}")
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    diff = x - y
    return float(np.exp(-gamma * np.dot(diff, diff)))


def rbf_kernel_matrix(X: np.ndarray, Y: np.ndarray, gamma: float) -> np.ndarray:
    """Pairwise RBF kernel, rows of X against rows of Y."""
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    Y = np.atleast_2d(np.asarray(Y, dtype=np.float64))
    if X.shape[1] != Y.shape[1]:
        raise DimensionError(f"kernel matrices disagree: {X.shape[1]} vs {Y.shape[1]} features")
    sq = (X * X).sum(axis=1)[:, None] + (Y * Y).sum(axis=1)[None, :] - 2.0 * (X @ Y.T)
    np.maximum(sq, 0.0, out=sq)
    return np.exp(-gamma * sq)


class _KernelColumns:
    """Column provider for the training Gram matrix.

    Full matrix when the problem is small, otherwise an LRU cache of
    individual columns.
    """

    def __init__(self, X: np.ndarray, gamma: float):
        self._X = X
        self._gamma = gamma
        n = X.shape[0]
        if n <= _FULL_GRAM_LIMIT:
            self._full = rbf_kernel_matrix(X, X, gamma)
            self._cache = None
        else:
            self._full = None
            self._cache: OrderedDict[int, np.ndarray] = OrderedDict()

    def column(self, i: int) -> np.ndarray:
        if self._full is not None:
            return self._full[i]  # symmetric, and rows are contiguous
        cached = self._cache.get(i)
        if cached is not None:
            self._cache.move_to_end(i)
            return cached
        col = rbf_kernel_matrix(self._X, self._X[i : i + 1], self._gamma)[:, 0]
        self._cache[i] = col
        if len(self._cache) > _ROW_CACHE_SIZE:
            self._cache.popitem(last=False)
        return col


@dataclass
class BinarySvmModel:
    """Support vectors (alpha > 0 only), dual coefficients alpha*y, bias,
    kernel width, and the Platt sigmoid (A, B)."""

    support_vectors: np.ndarray
    dual_coef: np.ndarray
    bias: float
    gamma: float
    platt_a: float
    platt_b: float
    converged: bool = True

    def decision_function(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if X.shape[1] != self.support_vectors.shape[1]:
            raise DimensionError(
                f"input has {X.shape[1]} features, model expects "
                f"{self.support_vectors.shape[1]}"
            )
        if self.support_vectors.shape[0] == 0:
            return np.full(X.shape[0], self.bias)
        K = rbf_kernel_matrix(X, self.support_vectors, self.gamma)
        return K @ self.dual_coef + self.bias

    def predict_proba_positive(self, X: np.ndarray) -> np.ndarray:
        return platt_probability(self.decision_function(X), self.platt_a, self.platt_b)


def smo_solve(K_columns, y: np.ndarray, C: float, tol: float, max_iter: int):
    """Core SMO loop over a kernel-column provider.

    Returns (alpha, bias, converged). ``K_columns`` is either a callable
    i -> column or a _KernelColumns instance.
    """
    column = K_columns.column if hasattr(K_columns, "column") else K_columns
    n = y.shape[0]
    alpha = np.zeros(n)
    grad = -np.ones(n)  # gradient of the dual objective at alpha = 0
    converged = False
    bias = 0.0

    def select_pair():
        # v = -y * grad; the optimal bias lies between max over I_up and min over I_low
        v = -y * grad
        up = ((y > 0) & (alpha < C)) | ((y < 0) & (alpha > 0))
        low = ((y > 0) & (alpha > 0)) | ((y < 0) & (alpha < C))
        if not up.any() or not low.any():
            return None
        v_up = np.where(up, v, -np.inf)
        v_low = np.where(low, v, np.inf)
        i = int(np.argmax(v_up))
        j = int(np.argmin(v_low))
        return i, j, v_up[i], v_low[j]

    for _ in range(max_iter):
        selected = select_pair()
        if selected is None:
            converged = True
            break
        i, j, v_hi, v_lo = selected
        gap = v_hi - v_lo
        bias = 0.5 * (v_hi + v_lo)
        if gap <= tol:
            converged = True
            break

        col_i = column(i)
        col_j = column(j)
        quad = col_i[i] + col_j[j] - 2.0 * col_i[j]
        if quad <= 1e-12:
            quad = 1e-12
        step = gap / quad

        # feasible step length preserving the box constraints
        limit_i = (C - alpha[i]) if y[i] > 0 else alpha[i]
        limit_j = alpha[j] if y[j] > 0 else (C - alpha[j])
        step = min(step, limit_i, limit_j)

        new_i = alpha[i] + y[i] * step
        new_j = alpha[j] - y[j] * step
        if new_i < _SNAP * C:
            new_i = 0.0
        elif new_i > C * (1.0 - _SNAP):
            new_i = C
        if new_j < _SNAP * C:
            new_j = 0.0
        elif new_j > C * (1.0 - _SNAP):
            new_j = C

        delta_i = new_i - alpha[i]
        delta_j = new_j - alpha[j]
        alpha[i] = new_i
        alpha[j] = new_j
        grad += y * (y[i] * delta_i * col_i + y[j] * delta_j * col_j)
    else:
        # iteration budget exhausted: refresh the bias for the final alphas
        selected = select_pair()
        if selected is not None:
            bias = 0.5 * (selected[2] + selected[3])

    return alpha, float(bias), converged


def train_binary_svm(
    X: np.ndarray, y: np.ndarray, config: SvmConfig, decision_values_out: list | None = None
) -> BinarySvmModel:
    """Train a soft-margin RBF SVM with SMO and fit Platt calibration.

    ``y`` holds +1/-1 labels; both classes must be present. When
    ``decision_values_out`` is given, the training-set decision values are
    appended to it (used by callers that calibrate externally).
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] != y.shape[0]:
        raise DimensionError(f"X has shape {X.shape} but y has {y.shape[0]} labels")
    if X.shape[0] < 2 or (y > 0).all() or (y < 0).all():
        raise DegenerateDataError("binary SVM training needs both classes present")

    columns = _KernelColumns(X, config.gamma)
    alpha, bias, converged = smo_solve(
        columns, y, config.C, config.kkt_tolerance, config.max_passes * X.shape[0]
    )

    keep = alpha > 0.0
    model = BinarySvmModel(
        support_vectors=X[keep].copy(),
        dual_coef=(alpha[keep] * y[keep]),
        bias=bias,
        gamma=config.gamma,
        platt_a=0.0,
        platt_b=0.0,
        converged=converged,
    )
    decisions = model.decision_function(X)
    if decision_values_out is not None:
        decision_values_out.append(decisions)
    a, b = platt_calibrate(decisions, y)
    model.platt_a = a
    model.platt_b = b
    return model


def dual_objective(K: np.ndarray, y: np.ndarray, alpha: np.ndarray) -> float:
    """Dual objective W(a) = 1'a - 1/2 a'Qa (the quantity SMO maximizes)."""
    ay = alpha * y
    return float(alpha.sum() - 0.5 * ay @ K @ ay)


def kkt_violations(K: np.ndarray, y: np.ndarray, alpha: np.ndarray, bias: float, C: float) -> np.ndarray:
    """Per-sample KKT violation magnitudes for an audit.

    For margins m_i = y_i f(x_i): alpha=0 wants m_i >= 1, alpha=C wants
    m_i <= 1, free alphas want m_i = 1; the returned value is how far each
    sample is on the wrong side (0 when satisfied).
    """
    f = K @ (alpha * y) + bias
    margins = y * f
    viol = np.zeros_like(margins)
    at_zero = alpha <= 0.0
    at_c = alpha >= C
    free = ~(at_zero | at_c)
    viol[at_zero] = np.maximum(0.0, 1.0 - margins[at_zero])
    viol[at_c] = np.maximum(0.0, margins[at_c] - 1.0)
    viol[free] = np.abs(margins[free] - 1.0)
    return viol


def platt_calibrate(decision_values, labels) -> tuple[float, float]:
    """Fit sigmoid parameters (A, B) by smoothed-target maximum likelihood.

    Targets are (N+ + 1)/(N+ + 2) for positives and 1/(N- + 2) for negatives;
    the Newton iteration on the cross-entropy objective uses a small ridge
    term and backtracking line search, so it is robust to perfectly
    separated inputs.
    """
    f = np.asarray(decision_values, dtype=np.float64)
    y = np.asarray(labels, dtype=np.float64)
    if f.shape != y.shape or f.ndim != 1:
        raise DimensionError("decision_values and labels must be equal-length vectors")
    n_pos = int((y > 0).sum())
    n_neg = int((y <= 0).sum())
    if n_pos == 0 or n_neg == 0:
        raise DegenerateDataError("Platt calibration needs both classes present")

    hi = (n_pos + 1.0) / (n_pos + 2.0)
    lo = 1.0 / (n_neg + 2.0)
    t = np.where(y > 0, hi, lo)

    def objective(a, b):
        z = a * f + b
        # log(1 + exp(z)) evaluated stably on both tails
        softplus = np.where(z >= 0, z + np.log1p(np.exp(-z)), np.log1p(np.exp(z)))
        return float(np.sum(t * z + softplus - z))
        # note: -t*log(p) - (1-t)*log(1-p) == t*z + log(1+exp(-z)) == t*z + softplus(z) - z

    sigma = 1e-12
    a, b = 0.0, np.log((n_neg + 1.0) / (n_pos + 1.0))
    fval = objective(a, b)
    for _ in range(100):
        z = a * f + b
        p = np.where(z >= 0, np.exp(-z) / (1.0 + np.exp(-z)), 1.0 / (1.0 + np.exp(z)))
        d1 = t - p
        d2 = p * (1.0 - p)
        g1 = float(np.dot(f, d1))
        g2 = float(np.sum(d1))
        if abs(g1) < 1e-5 and abs(g2) < 1e-5:
            break
        h11 = float(np.dot(f * f, d2)) + sigma
        h22 = float(np.sum(d2)) + sigma
        h21 = float(np.dot(f, d2))
        det = h11 * h22 - h21 * h21
        da = -(h22 * g1 - h21 * g2) / det
        db = -(-h21 * g1 + h11 * g2) / det
        gd = g1 * da + g2 * db

        stepsize = 1.0
        while stepsize >= 1e-10:
            new_a = a + stepsize * da
            new_b = b + stepsize * db
            new_f = objective(new_a, new_b)
            if new_f < fval + 1e-4 * stepsize * gd:
                a, b, fval = new_a, new_b, new_f
                break
            stepsize /= 2.0
        else:
            break
    return float(a), float(b)


def platt_probability(decision_values, a: float, b: float) -> np.ndarray:
    """P(y=1 | f) = 1 / (1 + exp(a*f + b)), numerically stable."""
    z = a * np.asarray(decision_values, dtype=np.float64) + b
    return np.where(z >= 0, np.exp(-z) / (1.0 + np.exp(-z)), 1.0 / (1.0 + np.exp(z)))
