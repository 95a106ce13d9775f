"""Difference-of-convex iteration engine over caller-supplied oracles.

One iteration picks a subgradient ``g2`` of f2 at the current point and moves
to a minimiser of ``f1(w) - <g2, w>``; by optimality the new point carries a
subgradient of f1 equal to ``g2``.  The engine records iterates, objective
values and squared subgradient residuals, and never differentiates
numerically: all derivative information comes from the oracles.

The module also hosts the runtime checkers used to audit runs against the
one-step decrease bound, the two-sided step bounds, and the pairwise
interpolation inequality characterising curvature classes.
"""

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .curvature import INF, Splitting
from .regimes import classify

__all__ = (
    'DcOracles', 'DcaTrajectory', 'Triplet', 'run_dca', 'check_one_step',
    'check_prop2_bounds', 'interpolation_check', 'OneStepCheck',
    'InterpolationResult', 'OracleFailureError', 'DivergenceDetectedError',
    'default_check_tol',
)


class OracleFailureError(RuntimeError):
    """An oracle returned a non-finite point."""


class DivergenceDetectedError(RuntimeError):
    """Objective increased although the splitting guarantees decrease.

    Signals an oracle inconsistent with its declared curvature classes.
    """


def default_check_tol(f_value: float = 0.0) -> float:
    """Default tolerance of the runtime bound checks."""
    return 1e-9 + 1e-12 * abs(f_value)


@dataclass(frozen=True)
class DcOracles:
    """Exact oracles describing one splitting F = f1 - f2.

    ``conj_step_f1(g)`` must return a minimiser of ``f1(w) - <g, w>`` (an
    element of the conjugate subdifferential of f1 at g); iterate selection
    among multiple minimisers is the oracle's choice.  ``subgrad_f1`` is only
    queried at the initial point; afterwards the identity ``g1^{k+1} = g2^k``
    supplies subgradients of f1 exactly.
    """

    eval_f1: Callable
    eval_f2: Callable
    subgrad_f1: Callable
    subgrad_f2: Callable
    conj_step_f1: Callable


@dataclass
class DcaTrajectory:
    """Recorded run: iterates, residuals, objective values.

    ``residual_sq[k]`` is the squared norm of ``g1^k - g2^k`` where ``g2^k``
    is exactly the subgradient later consumed by step k+1, so the identity
    ``g1^{k+1} = g2^k`` holds by construction.  ``min_residual_sq`` is the
    running minimum of ``residual_sq``.
    """

    points: list = field(default_factory=list)
    residual_sq: list = field(default_factory=list)
    objective: list = field(default_factory=list)
    step_norms_sq: list = field(default_factory=list)
    min_residual_sq: list = field(default_factory=list)

    @property
    def n_steps(self) -> int:
        return len(self.points) - 1

    @property
    def best_residual_sq(self) -> float:
        return self.min_residual_sq[-1]


@dataclass(frozen=True)
class Triplet:
    """A (point, subgradient, value) sample of one function."""

    x: np.ndarray
    g: np.ndarray
    f: float


@dataclass(frozen=True)
class OneStepCheck:
    slack: float
    holds: bool


@dataclass(frozen=True)
class InterpolationResult:
    ok: bool
    worst_pair: tuple | None
    worst_violation: float


def _vec(x) -> np.ndarray:
    return np.atleast_1d(np.asarray(x, dtype=float))


def run_dca(oracles: DcOracles, x0, N: int, stop_tol: float | None = None,
            splitting: Splitting | None = None) -> DcaTrajectory:
    """Run at most N iterations from x0, recording the full trajectory.

    Parameters
    ----------
    oracles : DcOracles
    x0 : array_like
        Starting point (scalar or vector).
    N : int
        Maximum number of iterations; the trajectory holds up to N+1 points.
    stop_tol : float, optional
        Early stop once the squared residual drops to this value.
    splitting : Splitting, optional
        When given and ``mu1 + mu2 >= 0``, every step is audited for
        objective decrease and an increase beyond ``1e-9 * (1 + |F|)`` raises
        `DivergenceDetectedError`.

    Returns
    -------
    DcaTrajectory
    """
    if N < 0:
        raise ValueError(f'N = {N} < 0')
    x = _vec(x0).copy()
    g1 = _vec(oracles.subgrad_f1(x))
    f_val = float(oracles.eval_f1(x)) - float(oracles.eval_f2(x))
    traj = DcaTrajectory(points=[x], objective=[f_val])
    monotone = (splitting is not None
                and splitting.mu1 + splitting.mu2 >= 0)

    for k in range(N + 1):
        g2 = _vec(oracles.subgrad_f2(x))
        diff = g1 - g2
        res = float(np.dot(diff, diff))
        traj.residual_sq.append(res)
        traj.min_residual_sq.append(
            res if k == 0 else min(res, traj.min_residual_sq[-1]))
        if k == N or (stop_tol is not None and res <= stop_tol):
            break
        x_next = _vec(oracles.conj_step_f1(g2))
        if not np.all(np.isfinite(x_next)):
            raise OracleFailureError(
                f'conjugate step returned non-finite point at iteration {k}')
        f_next = float(oracles.eval_f1(x_next)) - float(oracles.eval_f2(x_next))
        if monotone and f_next > f_val + 1e-9 * (1.0 + abs(f_val)):
            raise DivergenceDetectedError(
                f'objective rose from {f_val} to {f_next} at iteration {k}')
        step = x_next - x
        traj.step_norms_sq.append(float(np.dot(step, step)))
        traj.points.append(x_next)
        traj.objective.append(f_next)
        g1, x, f_val = g2, x_next, f_next
    return traj


def check_one_step(s: Splitting, F_x: float, F_xplus: float, G_sq: float,
                   Gplus_sq: float, tol: float | None = None) -> OneStepCheck:
    """Audit one step against the regime decrease bound.

    slack = (F(x) - F(x+)) - sigma/2 G_sq - sigma_plus/2 Gplus_sq, where the
    squared residuals at the two iterates are supplied by the caller; the
    bound holds when slack >= -tol.
    """
    if tol is None:
        tol = default_check_tol(F_x)
    report = classify(s)
    slack = ((F_x - F_xplus) - 0.5 * report.sigma * G_sq
             - 0.5 * report.sigma_plus * Gplus_sq)
    return OneStepCheck(slack, slack >= -tol)


def check_prop2_bounds(s: Splitting, traj: DcaTrajectory,
                       tol: float | None = None) -> bool:
    """Audit every recorded step against the two-sided decrease bounds.

    Each step must satisfy
    ``(mu1+mu2)/2 |dx|^2 - tol <= F(x) - F(x+) <= (L1+L2)/2 |dx|^2 + tol``;
    the upper bound is skipped when either upper curvature is infinite.
    Requires ``mu1 + mu2 >= 0``.
    """
    if s.mu1 + s.mu2 < 0:
        raise ValueError('two-sided step bounds need mu1 + mu2 >= 0')
    lower = 0.5 * (s.mu1 + s.mu2)
    upper = None if (s.L1 == INF or s.L2 == INF) else 0.5 * (s.L1 + s.L2)
    for k, step_sq in enumerate(traj.step_norms_sq):
        drop = traj.objective[k] - traj.objective[k + 1]
        t = default_check_tol(traj.objective[k]) if tol is None else tol
        if drop < lower * step_sq - t:
            return False
        if upper is not None and drop > upper * step_sq + t:
            return False
    return True


def interpolation_check(triplets, mu: float, L: float,
                        tol: float = 1e-9) -> InterpolationResult:
    """Decide whether sampled triplets can extend to a function of class (mu, L).

    Evaluates the pairwise interpolation inequality for every ordered pair
    (i, j), i != j:

        f_i - f_j - <g_j, x_i - x_j>
            >= |g_i - g_j|^2 / (2 L)
               + mu / (2 L (L - mu)) |g_i - g_j - L (x_i - x_j)|^2.

    For ``L = inf`` the right side reduces to ``mu/2 |x_i - x_j|^2``.  The
    degenerate class ``mu = L`` forces exact quadratic behaviour, checked as
    an equality within tol.

    Returns
    -------
    InterpolationResult
        ``ok`` iff the worst slack is >= -tol; ``worst_pair`` is the (i, j)
        attaining it.
    """
    if not L > 0:
        raise ValueError(f'L = {L} must be positive')
    if mu > L:
        raise ValueError(f'mu = {mu} > L = {L}')
    ts = [Triplet(_vec(t.x), _vec(t.g), float(t.f)) for t in triplets]
    worst = INF
    worst_pair = None
    for i, ti in enumerate(ts):
        for j, tj in enumerate(ts):
            if i == j:
                continue
            dx = ti.x - tj.x
            lin = ti.f - tj.f - float(np.dot(tj.g, dx))
            if L == INF:
                slack = lin - 0.5 * mu * float(np.dot(dx, dx))
            elif mu == L:
                slack = -abs(lin - 0.5 * L * float(np.dot(dx, dx)))
            else:
                dg = ti.g - tj.g
                rest = dg - L * dx
                slack = (lin - float(np.dot(dg, dg)) / (2.0 * L)
                         - mu / (2.0 * L * (L - mu)) * float(np.dot(rest, rest)))
            if slack < worst:
                worst = slack
                worst_pair = (i, j)
    if worst_pair is None:
        return InterpolationResult(True, None, 0.0)
    return InterpolationResult(worst >= -tol, worst_pair, worst)
