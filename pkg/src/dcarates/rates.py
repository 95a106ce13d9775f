"""Sublinear rate bounds and the optimal curvature shift.

The one-step decrease coefficients telescope into a sublinear bound on the
best squared subgradient residual after N iterations.  Because the objective
is unchanged by moving quadratic curvature between the two parts,

    F = (f1 - lam/2 |.|^2) - (f2 - lam/2 |.|^2),

the rate denominator can be maximised over the shift ``lam``; the optimum
frequently makes the second part weakly convex.
"""

import math
from dataclasses import dataclass

from .curvature import INF, Splitting, SplittingError, validate_splitting
from .regimes import OutsideAllRegimesError, Regime, classify

__all__ = (
    'RateBound', 'ShiftResult', 'rate_bound', 'shifted_splitting',
    'optimize_shift', 'feasible_shift_interval', 'InvalidNError',
    'InfeasibleRangeError',
)

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class InvalidNError(ValueError):
    """Iteration count below one."""


class InfeasibleRangeError(ValueError):
    """The requested shift range contains no feasible shift."""


@dataclass(frozen=True)
class RateBound:
    """Bounds on min_k |g1^k - g2^k|^2 / 2 after N iterations.

    ``bound_simple`` uses the realised objective drop ``deltaF``;
    ``bound_flo`` uses the gap to the infimum of F and the extra denominator
    term ``1/(L1 - mu2)``, available only when F is nonconcave.
    """

    p: float
    N: int
    bound_simple: float
    bound_flo: float | None


@dataclass(frozen=True)
class ShiftResult:
    """Outcome of maximising the rate denominator over curvature shifts."""

    lambda_star: float
    p_star: float
    regime_at_star: Regime
    lambda_max: float
    p_profile: list | None = None   # (lam, p, regime value or None) samples


def rate_bound(s: Splitting, N: int, deltaF: float,
               Flo_gap: float | None = None) -> RateBound:
    """Sublinear bound on the best squared residual over N iterations.

    Parameters
    ----------
    s : Splitting
        Classifiable splitting.
    N : int
        Number of iterations, at least 1.
    deltaF : float
        Realised objective decrease F(x0) - F(xN), nonnegative.
    Flo_gap : float, optional
        F(x0) - inf F.  When given and F is nonconcave (L1 > mu2), the
        tightened bound ``Flo_gap / (p N + 1/(L1 - mu2))`` is also returned.
    """
    if N < 1:
        raise InvalidNError(f'N = {N} < 1')
    if deltaF < 0:
        raise ValueError(f'deltaF = {deltaF} < 0')
    p = classify(s).p
    bound_simple = deltaF / (p * N)
    bound_flo = None
    if Flo_gap is not None:
        if Flo_gap < 0:
            raise ValueError(f'Flo_gap = {Flo_gap} < 0')
        if s.L1 > s.mu2:
            extra = 0.0 if s.L1 == INF else 1.0 / (s.L1 - s.mu2)
            bound_flo = Flo_gap / (p * N + extra)
    return RateBound(p, int(N), bound_simple, bound_flo)


def shifted_splitting(s: Splitting, lam: float,
                      allow_no_decrease: bool = False) -> Splitting:
    """Subtract lam/2 |.|^2 from both parts: all four curvatures drop by lam.

    Infinite upper bounds stay infinite.  The shifted parameters are
    re-validated and validation errors propagate (for instance a shifted
    mu1 < 0).
    """
    L1 = INF if s.L1 == INF else s.L1 - lam
    L2 = INF if s.L2 == INF else s.L2 - lam
    return validate_splitting(s.mu1 - lam, L1, s.mu2 - lam, L2,
                              allow_no_decrease=allow_no_decrease)


def feasible_shift_interval(s: Splitting):
    """Feasible shifts ``[lo, hi]`` with ``lo = -inf``; hi closed iff mu2 >= mu1.

    A shift lam is feasible when the shifted splitting is admissible
    (``mu1 - lam >= 0``) and keeps the decrease guarantee.  That gives
    ``lam <= mu1`` and ``lam < (mu1 + mu2)/2``, i.e. the upper endpoint
    ``hi = min(mu1, (mu1 + mu2)/2)``, attained exactly when ``mu2 >= mu1``
    (the shifted pair is then convex with a valid guarantee).

    Returns
    -------
    (hi, closed) : (float, bool)
    """
    hi = min(s.mu1, (s.mu1 + s.mu2) / 2.0)
    return hi, s.mu2 >= s.mu1


def _shift_p(s: Splitting, lam: float) -> float:
    """Rate denominator of the shifted splitting, -inf when infeasible."""
    try:
        shifted = shifted_splitting(s, lam)
        return classify(shifted).p
    except (SplittingError, OutsideAllRegimesError):
        return -INF


def optimize_shift(s: Splitting, lambda_lo: float | None = None,
                   grid_points: int = 4096, refine_tol: float = 1e-10,
                   profile: bool = False) -> ShiftResult:
    """Maximise the rate denominator p over curvature shifts.

    A uniform grid over the feasible shift interval brackets the maximum and
    golden-section refinement narrows the bracket to ``refine_tol``; p is
    continuous and piecewise smooth in the shift, so derivative-free
    bracketing is robust across regime switches.  The search is fully
    deterministic.

    Parameters
    ----------
    s : Splitting
        May violate the decrease condition; a feasible shift restores it.
    lambda_lo : float, optional
        Left end of the search window.  Default
        ``mu2 - 10 * max(1, |mu1|, |mu2|)`` (p decays far left, so a finite
        window suffices).
    grid_points : int, optional
        Bracketing grid resolution (default 4096).
    refine_tol : float, optional
        Final bracket width in lam (default 1e-10).
    profile : bool, optional
        Also return the sampled (lam, p, regime) curve.

    Raises
    ------
    InfeasibleRangeError
        If the window contains no feasible shift.
    """
    lam_hi, closed = feasible_shift_interval(s)
    if lambda_lo is None:
        lambda_lo = s.mu2 - 10.0 * max(1.0, abs(s.mu1), abs(s.mu2))
    if lambda_lo > lam_hi or (lambda_lo == lam_hi and not closed):
        raise InfeasibleRangeError(
            f'no feasible shift in [{lambda_lo}, {lam_hi}'
            + (']' if closed else ')'))

    if grid_points < 1:
        raise ValueError('grid_points must be at least 1')
    if grid_points == 1 or lambda_lo == lam_hi:
        grid = [lambda_lo]
    else:
        n = int(grid_points)
        span = lam_hi - lambda_lo
        last = n - 1 if closed else n
        grid = [lambda_lo + span * i / last for i in range(n)]
    if lambda_lo < 0.0 < lam_hi and 0.0 not in grid:
        grid = sorted(grid + [0.0])

    values = [_shift_p(s, lam) for lam in grid]
    best = max(range(len(grid)), key=lambda i: values[i])
    best_lam, best_p = grid[best], values[best]
    if best_p == -INF:
        raise InfeasibleRangeError(
            f'no feasible shift in [{lambda_lo}, {lam_hi}]')

    # golden-section refinement inside the bracket around the best grid node
    a = grid[best - 1] if best > 0 else grid[best]
    b = grid[best + 1] if best + 1 < len(grid) else grid[best]
    if b - a > refine_tol:
        x1 = b - _GOLDEN * (b - a)
        x2 = a + _GOLDEN * (b - a)
        f1, f2 = _shift_p(s, x1), _shift_p(s, x2)
        while b - a > refine_tol:
            if f1 >= f2:
                b, x2, f2 = x2, x1, f1
                x1 = b - _GOLDEN * (b - a)
                f1 = _shift_p(s, x1)
            else:
                a, x1, f1 = x1, x2, f2
                x2 = a + _GOLDEN * (b - a)
                f2 = _shift_p(s, x2)
            for lam, val in ((x1, f1), (x2, f2)):
                if val > best_p:
                    best_lam, best_p = lam, val

    report = classify(shifted_splitting(s, best_lam))
    prof = None
    if profile:
        prof = []
        for lam, val in zip(grid, values):
            if val == -INF:
                prof.append((lam, None, None))
            else:
                prof.append(
                    (lam, val,
                     classify(shifted_splitting(s, lam)).regime.value))
    return ShiftResult(best_lam, best_p, report.regime,
                       lam_hi, prof)
