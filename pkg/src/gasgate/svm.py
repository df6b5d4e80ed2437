"""Soft-margin kernel SVM with independent per-class penalties.

The dual problem

    max  sum(alpha) - 1/2 sum_ij alpha_i alpha_j y_i y_j K(x_i, x_j)
    s.t. 0 <= alpha_i <= C_i,   sum_i alpha_i y_i = 0

is solved by sequential minimal optimization (Platt 1998) with
maximal-violating-pair working-set selection (Keerthi et al. 2001).  The
box cap C_i depends on the sample's class: violations by explosion-labeled
samples cost ``penalties.positive``, the rest ``penalties.negative``, which
is how the asymmetric slack costs of cost-sensitive training enter the dual.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import NormalizationParams
from .errors import GasgateError, SingleClassError
from .kernels import KernelSpec, kernel_matrix


@dataclass(frozen=True)
class PenaltyConfig:
    """Slack penalties per class; ``positive`` applies to explosion samples."""

    positive: float = 10.0
    negative: float = 10.0

    def __post_init__(self):
        if not (self.positive > 0 and self.negative > 0):
            raise ValueError(
                f"penalties must be positive, got {self.positive}, {self.negative}"
            )

    @property
    def ratio(self) -> float:
        """positive / negative, the knob swept to trade missed explosions
        against false alarms."""
        return self.positive / self.negative


@dataclass(frozen=True)
class SvmModel:
    """Fitted classifier: support vectors with dual coefficients and a bias.

    ``dual_coef[k]`` is alpha_k * y_k, so its sign encodes the support
    vector's class.  ``support_indices`` point back into the training set;
    they and ``objective_trace`` are diagnostics, not part of the
    serialized form.
    """

    support_vectors: np.ndarray
    dual_coef: np.ndarray
    bias: float
    kernel: KernelSpec
    penalties: PenaltyConfig
    normalization: NormalizationParams | None = None
    converged: bool = True
    support_indices: np.ndarray | None = None
    objective_trace: np.ndarray | None = None

    def __post_init__(self):
        sv = np.atleast_2d(np.asarray(self.support_vectors, dtype=float))
        dc = np.asarray(self.dual_coef, dtype=float)
        object.__setattr__(self, "support_vectors", sv)
        object.__setattr__(self, "dual_coef", dc)
        if sv.shape[0] == 0:
            raise ValueError("a model needs at least one support vector")
        if sv.shape[0] != dc.shape[0]:
            raise ValueError("support vector and coefficient counts differ")
        alpha = np.abs(dc)
        caps = np.where(dc > 0, self.penalties.positive, self.penalties.negative)
        if (alpha <= 0).any() or (alpha > caps * (1 + 1e-9)).any():
            raise ValueError("dual coefficients violate the box constraints")

    @property
    def n_features(self) -> int:
        return self.support_vectors.shape[1]

    def decision_values(self, X) -> np.ndarray:
        """sum_k dual_coef[k] * K(sv_k, x) + bias for each row of X."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        K = kernel_matrix(self.kernel, X, self.support_vectors)
        return K @ self.dual_coef + self.bias

    def decision_value(self, x) -> float:
        x = np.asarray(x, dtype=float)
        if x.ndim != 1:
            raise ValueError("decision_value expects a single feature vector")
        return float(self.decision_values(x[None, :])[0])

    def predict(self, X) -> np.ndarray:
        """Class labels in {+1, -1}; a decision value of exactly 0 counts as
        +1 (predicting explosion is the safe side of the tie)."""
        return np.where(self.decision_values(X) >= 0, 1, -1)

    def dual_objective(self) -> float:
        """Dual objective at the fitted multipliers."""
        K = kernel_matrix(self.kernel, self.support_vectors)
        return float(
            np.abs(self.dual_coef).sum()
            - 0.5 * self.dual_coef @ K @ self.dual_coef
        )


def fit_svm(
    features: np.ndarray,
    labels: np.ndarray,
    kernel: KernelSpec = KernelSpec(),
    penalties: PenaltyConfig = PenaltyConfig(),
    tol: float = 1e-3,
    max_passes: int = 1000,
    seed: int = 0,
    normalization: NormalizationParams | None = None,
) -> SvmModel:
    """Train on (features, +/-1 labels) by SMO.

    Runs until the largest KKT violation drops to ``tol`` or the update
    budget of ``max_passes`` nominal sweeps (n pair updates each) runs out,
    in which case the best iterate so far is returned flagged
    ``converged=False``.  The working pair is the maximal violating pair;
    exact ties are broken by a jitter drawn from ``seed``, so refits are
    reproducible.
    """
    X = np.ascontiguousarray(np.atleast_2d(features), dtype=float)
    y = np.asarray(labels, dtype=float)
    if X.shape[0] != y.shape[0]:
        raise ValueError("features and labels disagree on sample count")
    if not set(np.unique(y)) <= {-1.0, 1.0}:
        raise ValueError("labels must be encoded as +1 / -1")
    if (y > 0).all() or (y < 0).all():
        raise SingleClassError("training data contains a single class")
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    if max_passes < 1:
        raise ValueError(f"max_passes must be >= 1, got {max_passes}")

    n = X.shape[0]
    spec = kernel.resolved(X.shape[1])
    K = kernel_matrix(spec, X)
    caps = np.where(y > 0, penalties.positive, penalties.negative)
    # Deterministic tie-breaking: a tiny per-sample jitter perturbs the
    # selection order among exactly-tied violators, nothing else.
    jitter = np.random.default_rng(seed).uniform(0.0, 1e-12, size=n)

    alpha = np.zeros(n)
    u = np.zeros(n)  # decision values without bias
    trace = [0.0]

    def objective() -> float:
        return float(alpha.sum() - 0.5 * (alpha * y * u).sum())

    def take_step(i: int, j: int) -> bool:
        """Jointly optimize (alpha_i, alpha_j); returns False on no progress."""
        nonlocal u
        if i == j:
            return False
        yi, yj = y[i], y[j]
        ai, aj = alpha[i], alpha[j]
        if yi != yj:
            lo, hi = max(0.0, aj - ai), min(caps[j], caps[i] + aj - ai)
        else:
            lo, hi = max(0.0, ai + aj - caps[i]), min(caps[j], ai + aj)
        if hi - lo < 1e-14:
            return False
        eta = K[i, i] + K[j, j] - 2.0 * K[i, j]
        Fi, Fj = u[i] - yi, u[j] - yj
        if eta > 1e-12:
            aj_new = np.clip(aj + yj * (Fi - Fj) / eta, lo, hi)
        else:
            # Non-positive curvature (possible for indefinite kernels):
            # the restricted objective is linear or concave-up along the
            # constraint line, so the best point is an endpoint.
            gain_lo = _pair_gain(lo - aj, i, j, y, u, K, alpha)
            gain_hi = _pair_gain(hi - aj, i, j, y, u, K, alpha)
            if max(gain_lo, gain_hi) <= 1e-15:
                return False
            aj_new = lo if gain_lo >= gain_hi else hi
        if abs(aj_new - aj) < 1e-13 * (aj_new + aj + 1e-13):
            return False
        ai_new = ai + yi * yj * (aj - aj_new)
        alpha[i], alpha[j] = ai_new, aj_new
        u += (ai_new - ai) * yi * K[i] + (aj_new - aj) * yj * K[j]
        return True

    converged = False
    max_updates = max_passes * n
    updates = 0
    while updates < max_updates:
        F = u - y
        up = ((y > 0) & (alpha < caps - 1e-12)) | ((y < 0) & (alpha > 1e-12))
        low = ((y > 0) & (alpha > 1e-12)) | ((y < 0) & (alpha < caps - 1e-12))
        if not up.any() or not low.any():
            converged = True
            break
        i = int(np.argmax(np.where(low, F + jitter, -np.inf)))
        j = int(np.argmin(np.where(up, F + jitter, np.inf)))
        if F[i] - F[j] <= tol:
            converged = True
            break
        if not take_step(i, j):
            # Stalled primary pair: walk the next-most-violating candidates.
            low_order = np.argsort(-(F + jitter))
            up_order = np.argsort(F + jitter)
            moved = False
            for i2 in (k for k in low_order[:16] if low[k]):
                for j2 in (k for k in up_order[:16] if up[k]):
                    if F[i2] - F[j2] <= tol:
                        break
                    if take_step(int(i2), int(j2)):
                        moved = True
                        break
                if moved:
                    break
            if not moved:
                break
        updates += 1
        trace.append(objective())

    # One exact recomputation guards against drift in the incremental u.
    u = (alpha * y) @ K
    F = u - y
    bias = _fit_bias(alpha, y, caps, F)

    keep = alpha > 1e-12
    if not keep.any():
        raise GasgateError(
            "optimizer made no progress; no support vectors found"
        )
    return SvmModel(
        support_vectors=X[keep],
        dual_coef=(alpha * y)[keep],
        bias=bias,
        kernel=spec,
        penalties=penalties,
        normalization=normalization,
        converged=converged,
        support_indices=np.flatnonzero(keep),
        objective_trace=np.array(trace),
    )


def _pair_gain(dj, i, j, y, u, K, alpha):
    """Dual-objective change when alpha_j moves by dj along the constraint."""
    di = -y[i] * y[j] * dj
    linear = di + dj - di * y[i] * u[i] - dj * y[j] * u[j]
    quad = 0.5 * (
        di * di * K[i, i] + dj * dj * K[j, j] + 2 * di * dj * y[i] * y[j] * K[i, j]
    )
    return linear - quad


def _fit_bias(alpha, y, caps, F) -> float:
    """Average -F over free vectors; else the midpoint of the feasible band."""
    free = (alpha > 1e-9 * caps) & (alpha < caps * (1 - 1e-9))
    if free.any():
        return float(-F[free].mean())
    up = ((y > 0) & (alpha < caps - 1e-12)) | ((y < 0) & (alpha > 1e-12))
    low = ((y > 0) & (alpha > 1e-12)) | ((y < 0) & (alpha < caps - 1e-12))
    if up.any() and low.any():
        return float(-(F[up].min() + F[low].max()) / 2.0)
    if up.any():
        return float(-F[up].min())
    if low.any():
        return float(-F[low].max())
    return 0.0
