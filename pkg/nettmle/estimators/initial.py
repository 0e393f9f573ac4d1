"""Initial estimators (rho_hat0, g_hat0): ridge regression on the basis, profiled over rho."""

import logging
from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve
from scipy.optimize import minimize_scalar

from ..errors import NumericalError, ParameterError
from ..graph import DEFAULT_DELTA_RHO, check_rho, row_normalize
from ..sem import Dataset
from .basis import BasisSpec, basis_features, design_matrix

logger = logging.getLogger(__name__)

_CONDITION_LIMIT = 1e12
_FLAT_PROFILE = 1e-12


@dataclass(frozen=True, eq=False)
class InitialEstimate:
    """Fitted ``(rho_hat0, g_hat0)`` with ``g_hat0(v, c) = phi(v, c) @ beta``."""

    rho_hat0: float
    beta: np.ndarray
    basis: BasisSpec
    lam: float
    objective: str = "likelihood"

    def evaluate(self, v: np.ndarray, c: np.ndarray) -> np.ndarray:
        return basis_features(v, c, self.basis) @ self.beta


class RidgeProblem:
    """Ridge regression on a fixed design with an unpenalised intercept in column 0.

    Non-intercept columns are standardised internally (mean 0, sd 1) when ``standardize``
    is set, so the penalty acts on standardised coefficients; returned coefficients are
    on the original scale. Zero-variance columns are pinned to 0.
    """

    def __init__(self, phi: np.ndarray, lam: float, standardize: bool = True):
        phi = np.asarray(phi, dtype=float)
        if phi.ndim != 2:
            raise ParameterError(f"Design must be a matrix, got shape {phi.shape}")
        if lam < 0:
            raise ParameterError(f"Ridge penalty must be non-negative, got {lam}")
        self.n, self.q = phi.shape
        self.lam = float(lam)
        self.standardize = standardize

        if standardize:
            features = phi[:, 1:]
            self.means = features.mean(axis=0)
            scales = features.std(axis=0)
            self.active = scales > 1e-12 * np.maximum(1.0, np.abs(self.means))
            self.scales = np.where(self.active, scales, 1.0)
            self.design = (features[:, self.active] - self.means[self.active]) / self.scales[self.active]
            gram = self.design.T @ self.design + self.lam * np.eye(self.design.shape[1])
        else:
            self.design = phi
            penalty = np.eye(self.q)
            penalty[0, 0] = 0.0
            gram = phi.T @ phi + self.lam * penalty

        if gram.size and np.linalg.cond(gram) > _CONDITION_LIMIT:
            raise NumericalError(
                f"Ridge system is singular (lambda={self.lam:g}, {self.n} rows, {self.q} columns); "
                "increase lambda or drop collinear features"
            )
        try:
            self._factor = cho_factor(gram) if gram.size else None
        except LinAlgError as e:
            raise NumericalError(f"Ridge system is not positive definite: {e}") from e

    def fit(self, target: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Coefficients for one or several targets.

        Returns:
            ``(beta, penalized)``: original-scale coefficients ``(q,)`` or ``(q, k)``, and the
            penalised coefficients (standardised scale, intercept excluded)
        """
        target = np.asarray(target, dtype=float)
        if self.standardize:
            centre = target.mean(axis=0)
            if self._factor is None:
                coef = np.zeros((0,) + target.shape[1:])
            else:
                coef = cho_solve(self._factor, self.design.T @ (target - centre))
            beta = np.zeros((self.q,) + target.shape[1:])
            scaled = coef / (self.scales[self.active] if coef.ndim == 1 else self.scales[self.active][:, None])
            beta[1:][self.active] = scaled
            means = self.means[self.active]
            beta[0] = centre - means @ scaled
            return beta, coef

        beta = cho_solve(self._factor, self.design.T @ target)
        return beta, beta[1:]


def ridge_fit(phi: np.ndarray, target: np.ndarray, lam: float, standardize: bool = True) -> np.ndarray:
    """Minimise ``||r - phi beta||^2 + lam ||beta_{-intercept}||^2``; column 0 is the intercept.

    Raises:
        NumericalError: singular system (e.g. ``lam = 0`` with collinear columns)
    """
    beta, _ = RidgeProblem(phi, lam, standardize).fit(target)
    return beta


class RhoProfile:
    """Penalised RSS and concentrated quasi-likelihood of ``(I - rho W) y`` on the basis.

    The ridge fit is linear in its target, so with ``e0, e1`` (and ``s0, s1``) the residuals
    (and penalised coefficients) of ``y`` and ``Wy``, the profile is
    ``RSS(rho) = ||e0 - rho e1||^2 + lam ||s0 - rho s1||^2``.
    """

    def __init__(self, dataset: Dataset, basis: BasisSpec, lam: float, standardize: bool = True):
        self.phi = design_matrix(dataset, basis)
        self.W = row_normalize(dataset.graph)
        self.problem = RidgeProblem(self.phi, lam, standardize)
        self.n = dataset.n_nodes
        self.y = dataset.y
        self.wy = self.W.matrix @ dataset.y

        beta, penalized = self.problem.fit(np.column_stack([self.y, self.wy]))
        self.beta0, self.beta1 = beta[:, 0], beta[:, 1]
        residual = np.column_stack([self.y, self.wy]) - self.phi @ beta
        self.e0, self.e1 = residual[:, 0], residual[:, 1]
        self.s0, self.s1 = penalized[:, 0], penalized[:, 1]
        self.lam = lam

    def rss(self, rho: float) -> float:
        e = self.e0 - rho * self.e1
        s = self.s0 - rho * self.s1
        return float(e @ e + self.lam * s @ s)

    def negative_loglik(self, rho: float) -> float:
        """Concentrated Gaussian quasi-likelihood, sign flipped, constants dropped."""
        sigma2 = max(self.rss(rho) / self.n, 1e-300)
        jacobian = np.log1p(-rho * self.W.eigenvalues).sum()
        return 0.5 * self.n * np.log(sigma2) - float(jacobian)

    def coefficients(self, rho: float) -> np.ndarray:
        return self.beta0 - rho * self.beta1


def profile_rho(
    dataset: Dataset,
    basis: BasisSpec,
    lam: float,
    delta_rho: float = DEFAULT_DELTA_RHO,
    objective: str = "likelihood",
    standardize: bool = True,
    xatol: float = 1e-7,
) -> InitialEstimate:
    """Profile the ridge fit of ``(I - rho W) y`` on phi over ``rho in [-1+delta, 1-delta]``.

    Args:
        dataset: Observed data
        basis: Feature groups of g_hat0
        lam: Ridge penalty
        delta_rho: Stationarity margin
        objective: ``"rss"`` (penalised residual sum of squares) or ``"likelihood"``
            (concentrated quasi-likelihood with the ``log det(I - rho W)`` Jacobian)
        standardize: Standardise non-intercept columns before penalising
        xatol: Bounded scalar search tolerance

    Returns:
        InitialEstimate at the profile minimiser
    """
    q = basis.n_columns(dataset.x_dim)
    if dataset.n_nodes <= q:
        raise ParameterError(f"profile_rho needs more nodes ({dataset.n_nodes}) than basis columns ({q})")
    if objective not in ("rss", "likelihood"):
        raise ParameterError(f"Unknown profile objective '{objective}'")

    profile = RhoProfile(dataset, basis, lam, standardize)
    bound = 1.0 - delta_rho
    lo, hi = -bound, bound

    rss_values = [profile.rss(r) for r in (lo, 0.0, hi)]
    if max(rss_values) - min(rss_values) < _FLAT_PROFILE:
        logger.warning("Flat rho profile: RSS varies by less than 1e-12 over the interval; returning rho=0")
        rho_hat = 0.0
    else:
        criterion = profile.rss if objective == "rss" else profile.negative_loglik
        result = minimize_scalar(criterion, bounds=(lo, hi), method="bounded", options={"xatol": xatol})
        candidates = [float(result.x), lo, hi]
        rho_hat = min(candidates, key=criterion)

    rho_hat = check_rho(float(np.clip(rho_hat, lo, hi)), delta_rho)
    return InitialEstimate(
        rho_hat0=rho_hat,
        beta=profile.coefficients(rho_hat),
        basis=basis,
        lam=lam,
        objective=objective,
    )


def fit_fixed_rho(
    dataset: Dataset,
    basis: BasisSpec,
    lam: float,
    rho: float = 0.0,
    delta_rho: float = DEFAULT_DELTA_RHO,
    standardize: bool = True,
) -> InitialEstimate:
    """Ridge fit of ``(I - rho W) y`` on phi with rho held fixed (``rho = 0`` drops the lag).

    Uses the same decomposition as :func:`profile_rho`, so a profile that lands on ``rho``
    yields identical coefficients.
    """
    check_rho(rho, delta_rho)
    profile = RhoProfile(dataset, basis, lam, standardize)
    return InitialEstimate(
        rho_hat0=float(rho), beta=profile.coefficients(rho), basis=basis, lam=lam, objective="fixed"
    )
