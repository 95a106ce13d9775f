"""Bridge between proximal gradient descent and the splitting analysis.

One proximal gradient step on ``F = phi + h`` with stepsize gamma,

    x+ = prox of h at x - gamma * grad phi(x),

produces the same point as one difference-of-convex iteration on
``f1 = h + |.|^2/(2 gamma)``, ``f2 = |.|^2/(2 gamma) - phi``; the curvatures
map as ``mu1 = 1/gamma + mu_h``, ``L1 = 1/gamma + L_h``,
``mu2 = 1/gamma - L_phi``, ``L2 = 1/gamma - mu_phi``.  Stepsizes above the
inverse Lipschitz constant make f2 weakly convex, and the subgradient
residual norms of the two views agree pointwise, so all regime rates
transfer to the proximal gradient setting.
"""

import enum
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .curvature import INF, Splitting, inv, validate_splitting
from .engine import DcaTrajectory
from .rates import InvalidNError
from .regimes import Regime, classify

__all__ = (
    'PgdSetting', 'SigmaPlusBranch', 'PgdSigmaPlus', 'pgd_to_dca',
    'pgd_sigma_plus', 'pgd_rate', 'run_pgd', 'stepsize_sweep', 'SweepRow',
    'ProxFailureError',
)


class ProxFailureError(RuntimeError):
    """The proximal oracle returned a non-finite point."""


class SigmaPlusBranch(enum.Enum):
    """Which closed-form branch of the one-step coefficient applies."""

    SMALL_OR_BELOW_THRESHOLD = 'small_or_below_threshold'
    ABOVE_THRESHOLD = 'above_threshold'


@dataclass(frozen=True)
class PgdSetting:
    """Composite objective phi + h with a stepsize.

    phi is smooth with curvatures ``mu_phi < L_phi``; h is proper closed
    convex with ``0 <= mu_h <= L_h`` (defaults: nonsmooth convex h).  The
    stepsize must satisfy ``gamma * L_phi < 2`` for the decrease guarantee.
    """

    L_phi: float
    mu_phi: float
    gamma: float
    mu_h: float = 0.0
    L_h: float = INF

    def __post_init__(self):
        if not self.L_phi > 0:
            raise ValueError(f'L_phi = {self.L_phi} must be positive')
        if not self.mu_phi < self.L_phi:
            raise ValueError(f'mu_phi = {self.mu_phi} >= L_phi = {self.L_phi}')
        if not 0 <= self.mu_h <= self.L_h:
            raise ValueError(f'need 0 <= mu_h <= L_h, got {self.mu_h}, {self.L_h}')
        if not 0 < self.gamma < 2.0 / self.L_phi:
            raise ValueError(
                f'gamma = {self.gamma} outside (0, 2/L_phi) = '
                f'(0, {2.0 / self.L_phi})')


@dataclass(frozen=True)
class PgdSigmaPlus:
    """One-step decrease coefficient of a proximal gradient step.

    ``covered_by_theory`` is False for strongly convex phi, where the printed
    two-branch formula assumes ``mu_phi <= 0``; the value then comes from the
    generic regime classifier (which the branches still reproduce).
    """

    sigma_plus: float
    branch: SigmaPlusBranch
    B: float
    regime: Regime
    covered_by_theory: bool


def pgd_to_dca(p: PgdSetting) -> Splitting:
    """Curvature map from a proximal gradient setting to its splitting."""
    g = p.gamma
    L1 = INF if p.L_h == INF else 1.0 / g + p.L_h
    return validate_splitting(1.0 / g + p.mu_h, L1, 1.0 / g - p.L_phi,
                              1.0 / g - p.mu_phi)


def pgd_sigma_plus(L_phi: float, mu_phi: float, gamma: float) -> PgdSigmaPlus:
    """Decrease coefficient sigma_plus for one step with nonsmooth convex h.

    The two closed-form branches are

        gamma (2 - gamma mu_phi) / (1 - gamma mu_phi)^2   (small stepsizes,
            or large stepsizes below the threshold B <= 0, for mu_phi <= 0)
        gamma (2 - gamma L_phi) / (1 - gamma L_phi)^2     (large stepsizes
            above the threshold B > 0)

    with ``B = 1 + 1/(1 - gamma L_phi) + 1/(1 - gamma mu_phi)``.  The value
    always equals the generic classifier's sigma_plus for the mapped
    splitting; the branches are continuous at B = 0.
    """
    setting = PgdSetting(L_phi, mu_phi, gamma)
    report = classify(pgd_to_dca(setting))
    B = 1.0 + inv(1.0 - gamma * L_phi) + inv(1.0 - gamma * mu_phi)
    if mu_phi <= 0:
        covered = True
        if gamma <= 1.0 / L_phi or B <= 0:
            branch = SigmaPlusBranch.SMALL_OR_BELOW_THRESHOLD
        else:
            branch = SigmaPlusBranch.ABOVE_THRESHOLD
    else:
        covered = False
        branch = (SigmaPlusBranch.ABOVE_THRESHOLD
                  if report.regime is Regime.P4
                  else SigmaPlusBranch.SMALL_OR_BELOW_THRESHOLD)
    return PgdSigmaPlus(report.sigma_plus, branch, B, report.regime, covered)


def sigma_plus_branch_value(L_phi: float, mu_phi: float, gamma: float,
                            branch: SigmaPlusBranch) -> float:
    """Evaluate one closed-form branch directly (for cross-checks)."""
    c = mu_phi if branch is SigmaPlusBranch.SMALL_OR_BELOW_THRESHOLD else L_phi
    return gamma * (2.0 - gamma * c) / (1.0 - gamma * c) ** 2


def pgd_rate(p: PgdSetting, N: int, F_gap: float) -> float:
    """Sublinear bound ``F_gap / (sigma_plus N)`` on the best squared residual."""
    if N < 1:
        raise InvalidNError(f'N = {N} < 1')
    if F_gap < 0:
        raise ValueError(f'F_gap = {F_gap} < 0')
    sigma_plus = classify(pgd_to_dca(p)).sigma_plus
    return F_gap / (sigma_plus * N)


def _vec(x) -> np.ndarray:
    return np.atleast_1d(np.asarray(x, dtype=float))


def run_pgd(phi_grad: Callable, prox_h: Callable, x0, gamma: float, N: int,
            h_subgrad: Callable | None = None, eval_phi: Callable | None = None,
            eval_h: Callable | None = None,
            stop_tol: float | None = None) -> DcaTrajectory:
    """Run proximal gradient descent, recording the splitting-view residuals.

    Parameters
    ----------
    phi_grad : callable
        Gradient of the smooth part.
    prox_h : callable
        ``prox_h(v, gamma)`` returns the proximal point of h at v, i.e. the
        minimiser of ``h(w) + |w - v|^2 / (2 gamma)``.
    x0 : array_like
    gamma : float
        Stepsize.
    N : int
        Maximum number of iterations.
    h_subgrad : callable, optional
        A subgradient selection of h, used only for the residual at x0 (later
        residuals use the prox optimality condition
        ``g_h = (x - gamma phi_grad(x) - x+) / gamma``, an exact subgradient
        at x+).  Without it the initial residual is recorded as nan.
    eval_phi, eval_h : callable, optional
        Objective parts; without both, objective values are recorded as nan.
    stop_tol : float, optional
        Early stop once the squared residual drops to this value.

    Returns
    -------
    DcaTrajectory
        The recorded residuals equal, elementwise, those of the equivalent
        difference-of-convex run.
    """
    if N < 0:
        raise ValueError(f'N = {N} < 0')
    x = _vec(x0).copy()

    def objective(pt):
        if eval_phi is None or eval_h is None:
            return float('nan')
        return float(eval_phi(pt)) + float(eval_h(pt))

    traj = DcaTrajectory(points=[x], objective=[objective(x)])
    grad = _vec(phi_grad(x))
    if h_subgrad is None:
        res = float('nan')
    else:
        total = grad + _vec(h_subgrad(x))
        res = float(np.dot(total, total))
    traj.residual_sq.append(res)
    traj.min_residual_sq.append(res)

    for _ in range(N):
        if stop_tol is not None and traj.residual_sq[-1] <= stop_tol:
            break
        forward = x - gamma * grad
        x_next = _vec(prox_h(forward, gamma))
        if not np.all(np.isfinite(x_next)):
            raise ProxFailureError('proximal step returned non-finite point')
        g_h = (forward - x_next) / gamma
        grad_next = _vec(phi_grad(x_next))
        total = grad_next + g_h
        res = float(np.dot(total, total))
        step = x_next - x
        traj.step_norms_sq.append(float(np.dot(step, step)))
        traj.points.append(x_next)
        traj.objective.append(objective(x_next))
        traj.residual_sq.append(res)
        prev = traj.min_residual_sq[-1]
        traj.min_residual_sq.append(res if np.isnan(prev) else min(res, prev))
        x, grad = x_next, grad_next
    return traj


@dataclass(frozen=True)
class SweepRow:
    """One stepsize of a sweep: mapped curvatures, regime and coefficient."""

    gamma: float
    mu2: float
    L2: float
    regime: str
    sigma_plus: float


def stepsize_sweep(L_phi: float, mu_phi: float, gammas, mu_h: float = 0.0,
                   L_h: float = INF) -> list[SweepRow]:
    """Map a range of stepsizes to splittings and classify each."""
    rows = []
    for gamma in gammas:
        setting = PgdSetting(L_phi, mu_phi, float(gamma), mu_h, L_h)
        s = pgd_to_dca(setting)
        report = classify(s)
        rows.append(SweepRow(float(gamma), s.mu2, s.L2, report.regime.value,
                             report.sigma_plus))
    return rows
