"""Fractional-logit regression with robust (sandwich) inference.

The outcome is a proportion in [0, 1], modelled with a logit link and
binomial variance function and estimated by quasi-maximum likelihood via
iteratively reweighted least squares.  Exact 0s and 1s in the response
are legal: the link is never applied to raw data, and the quasi-binomial
deviance stays finite.

Standard errors come from the sandwich estimator
``B @ M @ B`` with bread ``B = (X' diag(mu(1-mu)) X)^-1`` and meat
``M = sum_i (y_i - mu_i)^2 x_i x_i'``, optionally scaled by n/(n-k)
(HC1, the default).  Wald p-values use the standard normal reference.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from citescope.corpus.model import Gender, RegionGroup
from citescope.errors import RankDeficiencyError
from citescope.metrics import AnalysisRecord

MAX_CONDITION = 1e12

_MU_FLOOR = 1e-10


class ModelVariant(enum.Enum):
    MODEL1 = "Model1"
    MODEL2 = "Model2"


MODEL1_COLUMNS = [
    "intercept",
    "h_index",
    "h_index_sq_100",
    "uk",
    "other_europe",
    "australia_nz",
    "other_region",
    "male",
]
MODEL2_COLUMNS = MODEL1_COLUMNS + ["mean_authors"]

_DUMMY_REGIONS = [
    RegionGroup.UK,
    RegionGroup.OTHER_EUROPE,
    RegionGroup.AUSTRALIA_NZ,
    RegionGroup.OTHER,
]


@dataclass(frozen=True)
class ModelSpec:
    """Which regressor set to fit.

    The intercept is always first; region dummies omit North America and
    the gender dummy omits Female (unknown gender falls into the omitted
    baseline unless rows are dropped via ``strict_gender``).
    """

    variant: ModelVariant

    @property
    def column_names(self) -> list[str]:
        if self.variant is ModelVariant.MODEL1:
            return list(MODEL1_COLUMNS)
        return list(MODEL2_COLUMNS)


@dataclass(frozen=True)
class DesignData:
    X: np.ndarray
    y: np.ndarray
    column_names: list[str]

    def __post_init__(self):
        n, k = self.X.shape
        if n <= k:
            raise ValueError(f"need more observations than regressors (n={n}, k={k})")
        if k != len(self.column_names):
            raise ValueError("column_names must match the design matrix width")
        if not np.all(np.isfinite(self.X)) or not np.all(np.isfinite(self.y)):
            raise ValueError("design data must be finite")
        if np.any(self.y < 0) or np.any(self.y > 1):
            raise ValueError("response values must lie in [0, 1]")


@dataclass(frozen=True)
class FitResult:
    beta: np.ndarray
    robust_cov: np.ndarray
    iterations: int
    converged: bool
    deviance: float
    fitted: np.ndarray
    column_names: list[str]
    deviance_path: list[float] = field(default_factory=list)
    hc: str = "hc1"

    def se(self) -> np.ndarray:
        return np.sqrt(np.diag(self.robust_cov))


@dataclass(frozen=True)
class WaldRow:
    term: str
    estimate: float
    se: float
    z: float | None
    p: float | None
    stars: str


def logit(p: float) -> float:
    """Log-odds of a proportion strictly inside (0, 1)."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"logit requires 0 < p < 1, got {p}")
    return math.log(p / (1.0 - p))


def inv_logit(e: float) -> float:
    """Inverse of ``logit``; numerically stable for large |e|."""
    if e >= 0:
        return 1.0 / (1.0 + math.exp(-e))
    x = math.exp(e)
    return x / (1.0 + x)


def _inv_logit_vec(eta: np.ndarray) -> np.ndarray:
    out = np.empty_like(eta)
    pos = eta >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-eta[pos]))
    expe = np.exp(eta[~pos])
    out[~pos] = expe / (1.0 + expe)
    return np.clip(out, _MU_FLOOR, 1.0 - _MU_FLOOR)


def build_design_matrix(
    records: Sequence[AnalysisRecord],
    spec: ModelSpec,
    *,
    strict_gender: bool = False,
) -> DesignData:
    """Assemble the regression design from analysis records.

    The quadratic term is h^2/100 exactly (the scaling keeps its
    coefficient on a readable scale).  With ``strict_gender`` set,
    unknown-gender researchers are dropped from the sample instead of
    being pooled into the non-male baseline.
    """
    if not records:
        raise ValueError("records must be non-empty")
    rows = [r for r in records if not (strict_gender and r.gender is Gender.UNKNOWN)]
    names = spec.column_names
    X = np.empty((len(rows), len(names)))
    y = np.empty(len(rows))
    for i, r in enumerate(rows):
        h = float(r.h_index)
        X[i, 0] = 1.0
        X[i, 1] = h
        X[i, 2] = h * h / 100.0
        for j, region in enumerate(_DUMMY_REGIONS):
            X[i, 3 + j] = 1.0 if r.region is region else 0.0
        X[i, 7] = 1.0 if r.gender is Gender.MALE else 0.0
        if spec.variant is ModelVariant.MODEL2:
            X[i, 8] = r.mean_authors
        y[i] = r.self_prop
    return DesignData(X=X, y=y, column_names=names)


def _deviance(y: np.ndarray, mu: np.ndarray) -> float:
    # Quasi-binomial deviance; the y*log(y/mu) terms vanish at y == 0
    # and the mirrored terms at y == 1.
    terms = np.zeros_like(y)
    lo = y > 0
    hi = y < 1
    terms[lo] += y[lo] * np.log(y[lo] / mu[lo])
    terms[hi] += (1.0 - y[hi]) * np.log((1.0 - y[hi]) / (1.0 - mu[hi]))
    return float(2.0 * terms.sum())


def _collinear_columns(X: np.ndarray, names: Sequence[str]) -> list[str]:
    """Columns that add no rank beyond the columns to their left."""
    offending = []
    rank = 0
    for j in range(X.shape[1]):
        new_rank = np.linalg.matrix_rank(X[:, : j + 1])
        if new_rank == rank:
            offending.append(names[j])
        rank = new_rank
    return offending


def _check_conditioning(xtwx: np.ndarray, X: np.ndarray, names: Sequence[str]) -> None:
    cond = np.linalg.cond(xtwx)
    if not np.isfinite(cond) or cond > MAX_CONDITION:
        offending = _collinear_columns(X, names)
        raise RankDeficiencyError(
            f"weighted design matrix is rank deficient or ill-conditioned "
            f"(condition number {cond:.3g}); offending columns: "
            f"{', '.join(offending) if offending else 'none identified'}",
            columns=offending,
        )


def fit_fractional_logit(
    data: DesignData,
    *,
    tol: float = 1e-8,
    max_iter: int = 100,
    hc: str = "hc1",
) -> FitResult:
    """Fit the fractional logit model by IRLS.

    Parameters
    ----------
    data : DesignData
        Design matrix, response and column names.
    tol : float
        Convergence threshold on the absolute-plus-relative deviance
        change between accepted iterations.
    max_iter : int
        Iteration cap; hitting it leaves ``converged`` False (reported,
        never raised).
    hc : str
        Sandwich small-sample correction, "hc1" (n/(n-k)) or "hc0".

    Notes
    -----
    Weights are mu(1-mu) and the working response is
    eta + (y - mu)/(mu(1-mu)).  Iterations start from slopes of zero
    with the intercept at logit of the clamped response mean, so the
    first step is well-defined even when the data contain exact 0s or
    1s.  Steps that increase the deviance are halved until they do not.
    """
    X, y, names = data.X, data.y, data.column_names
    n, k = X.shape

    beta = np.zeros(k)
    if np.all(X[:, 0] == 1.0):
        beta[0] = logit(min(max(float(y.mean()), 1e-6), 1.0 - 1e-6))
    eta = X @ beta
    mu = _inv_logit_vec(eta)
    dev = _deviance(y, mu)
    dev_path = [dev]

    converged = False
    iterations = 0
    for _ in range(max_iter):
        iterations += 1
        w = mu * (1.0 - mu)
        z = eta + (y - mu) / w
        xw = X * w[:, None]
        xtwx = xw.T @ X
        _check_conditioning(xtwx, X, names)
        beta_new = np.linalg.solve(xtwx, xw.T @ z)

        # Step-halving: back off towards the current iterate until the
        # deviance stops increasing.
        step = beta_new - beta
        alpha = 1.0
        for _ in range(30):
            beta_try = beta + alpha * step
            mu_try = _inv_logit_vec(X @ beta_try)
            dev_try = _deviance(y, mu_try)
            if dev_try <= dev or math.isclose(dev_try, dev, rel_tol=1e-15):
                break
            alpha *= 0.5
        else:
            # No acceptable step: we are at a numerical optimum.
            converged = True
            break

        beta = beta + alpha * step
        eta = X @ beta
        mu = _inv_logit_vec(eta)
        dev_prev, dev = dev, dev_try
        dev_path.append(dev)
        if abs(dev - dev_prev) < tol * (1.0 + abs(dev_prev)):
            converged = True
            break

    robust = robust_covariance(data, beta, hc=hc)
    return FitResult(
        beta=beta,
        robust_cov=robust,
        iterations=iterations,
        converged=converged,
        deviance=dev,
        fitted=mu,
        column_names=list(names),
        deviance_path=dev_path,
        hc=hc,
    )


def score_vector(data: DesignData, beta: np.ndarray) -> np.ndarray:
    """Quasi-likelihood score X'(y - mu); ~0 at the fitted optimum."""
    mu = _inv_logit_vec(data.X @ beta)
    return data.X.T @ (data.y - mu)


def robust_covariance(data: DesignData, beta: np.ndarray, *, hc: str = "hc1") -> np.ndarray:
    """Sandwich covariance of the coefficient estimates.

    Bread is the inverse expected information under binomial variance;
    meat is the outer product of per-observation score contributions.
    ``hc`` selects the finite-sample scaling ("hc1": n/(n-k); "hc0":
    none).  The result is symmetrized to remove round-off asymmetry.
    """
    if hc not in ("hc0", "hc1"):
        raise ValueError(f"unknown robust variant {hc!r}")
    X, y, names = data.X, data.y, data.column_names
    n, k = X.shape
    mu = _inv_logit_vec(X @ beta)
    w = mu * (1.0 - mu)
    xtwx = X.T @ (X * w[:, None])
    _check_conditioning(xtwx, X, names)
    bread = np.linalg.inv(xtwx)
    resid2 = (y - mu) ** 2
    meat = X.T @ (X * resid2[:, None])
    cov = bread @ meat @ bread
    if hc == "hc1":
        cov *= n / (n - k)
    return (cov + cov.T) / 2.0


def wald_inference(fit: FitResult) -> list[WaldRow]:
    """Per-coefficient z statistics, two-sided normal p-values and stars.

    Star thresholds are strict: p < 0.01 "***", p < 0.05 "**",
    p < 0.1 "*".  A zero standard error yields the undefined-z marker
    (z and p of None).
    """
    rows = []
    ses = fit.se()
    for term, b, se in zip(fit.column_names, fit.beta, ses):
        if se == 0.0:
            rows.append(WaldRow(term, float(b), 0.0, None, None, ""))
            continue
        z = float(b) / float(se)
        p = math.erfc(abs(z) / math.sqrt(2.0))
        rows.append(WaldRow(term, float(b), float(se), z, p, significance_stars(p)))
    return rows


def significance_stars(p: float) -> str:
    if p < 0.01:
        return "***"
    if p < 0.05:
        return "**"
    if p < 0.1:
        return "*"
    return ""


def average_marginal_effects(
    fit: FitResult,
    data: DesignData,
    *,
    method: str = "derivative",
) -> np.ndarray:
    """Average marginal effect of each regressor on the response scale.

    The derivative form ``beta_j * mean(mu(1-mu))`` is applied uniformly
    to continuous and dummy regressors.  ``method="discrete"`` switches
    dummy columns to the averaged discrete difference between the
    column's on and off states.
    """
    if method not in ("derivative", "discrete"):
        raise ValueError(f"unknown marginal-effect method {method!r}")
    weight = float(np.mean(fit.fitted * (1.0 - fit.fitted)))
    ames = fit.beta * weight
    if method == "discrete":
        X = data.X
        for j in range(X.shape[1]):
            col = X[:, j]
            if np.all(col == 1.0) or not np.all((col == 0.0) | (col == 1.0)):
                continue
            on = X.copy()
            on[:, j] = 1.0
            off = X.copy()
            off[:, j] = 0.0
            ames[j] = float(
                np.mean(_inv_logit_vec(on @ fit.beta) - _inv_logit_vec(off @ fit.beta))
            )
    return ames
