"""Validated curvature descriptions of difference-of-convex splittings.

A splitting describes an objective ``F = f1 - f2`` through the four curvature
bounds of its two parts: ``f1`` has lower curvature ``mu1 >= 0`` and upper
curvature ``L1 <= inf``, ``f2`` has lower curvature ``mu2`` (any real; negative
means weakly convex) and upper curvature ``L2 <= inf``.  Upper curvatures may
be ``math.inf``, which admits nonsmooth functions; that is the single infinity
used throughout the package (minus infinity is never represented, see
`objective_curvatures`).
"""

import math
from dataclasses import dataclass

INF = math.inf

__all__ = (
    'INF', 'inv', 'Splitting', 'ObjectiveCurvatures', 'validate_splitting',
    'objective_curvatures', 'SplittingError', 'CurvatureOrderError',
    'NegativeMu1Error', 'NoDecreaseGuaranteeError',
)


class SplittingError(ValueError):
    """A proposed splitting violates the admissible parameter set."""


class CurvatureOrderError(SplittingError):
    """mu1 >= L1 or mu2 >= L2."""


class NegativeMu1Error(SplittingError):
    """mu1 < 0; the conjugate step requires f1 convex."""


class NoDecreaseGuaranteeError(SplittingError):
    """mu1 + mu2 <= 0 without mu1 = mu2 = 0: no one-step decrease guarantee.

    Warning-grade: callers may override for exploratory use (for instance to
    search for a curvature shift that restores the guarantee).
    """


def inv(x: float) -> float:
    """Total reciprocal on [0, inf] extended to negative reals.

    ``inv(0) = inf`` and ``inv(inf) = 0``, so the function is an involution on
    {0, finite nonzero, inf}.
    """
    if x == INF:
        return 0.0
    if x == 0.0:
        return INF
    return 1.0 / x


@dataclass(frozen=True)
class Splitting:
    """Curvature bounds (mu1, L1, mu2, L2) of a splitting F = f1 - f2.

    Instances are immutable; construct through `validate_splitting` to get the
    admissibility checks.  ``L1`` and ``L2`` may be ``inf`` (nonsmooth part),
    all other fields are finite.  ``L2 <= 0`` is allowed and means f2 is
    concave.
    """

    mu1: float
    L1: float
    mu2: float
    L2: float

    def decrease_condition(self) -> bool:
        """True when a one-step objective decrease is guaranteed."""
        return self.mu1 + self.mu2 > 0 or (self.mu1 == 0 and self.mu2 == 0)

    def smooth_pair(self) -> bool:
        """True when at least one of f1, f2 is smooth (finite upper bound)."""
        return self.L1 < INF or self.L2 < INF

    def swapped(self) -> 'Splitting':
        """The splitting of -F = f2 - f1 (roles of f1 and f2 exchanged)."""
        return Splitting(self.mu2, self.L2, self.mu1, self.L1)


@dataclass(frozen=True)
class ObjectiveCurvatures:
    """Curvature class of F = f1 - f2 derived from a splitting.

    ``mu_F = mu1 - L2`` is reported as ``None`` with ``unbounded_below`` set
    when ``L2 = inf`` (the objective curvature is then below every real).
    ``L_F = L1 - mu2`` may be ``inf``.
    """

    mu_F: float | None
    L_F: float
    unbounded_below: bool
    nonconvex: bool
    nonconcave: bool


def validate_splitting(mu1: float, L1: float, mu2: float, L2: float,
                       allow_no_decrease: bool = False) -> Splitting:
    """Check raw curvature bounds and return an immutable `Splitting`.

    Parameters
    ----------
    mu1, L1, mu2, L2 : float
        Lower/upper curvatures of f1 and f2.  ``L1`` and ``L2`` accept
        ``math.inf``.
    allow_no_decrease : bool, optional
        Accept splittings with ``mu1 + mu2 <= 0`` (no convergence guarantee).
        Default False.

    Raises
    ------
    NegativeMu1Error
        If ``mu1 < 0``.
    CurvatureOrderError
        If ``mu1 >= L1`` or ``mu2 >= L2``.
    NoDecreaseGuaranteeError
        If the decrease condition fails and ``allow_no_decrease`` is False.
    """
    for name, value in (('mu1', mu1), ('L1', L1), ('mu2', mu2), ('L2', L2)):
        if math.isnan(value):
            raise SplittingError(f'{name} is NaN')
        if value == -INF:
            raise SplittingError(f'{name} = -inf is not representable')
    if mu1 == INF or mu2 == INF:
        raise SplittingError('lower curvatures mu1, mu2 must be finite')
    if mu1 < 0:
        raise NegativeMu1Error(f'mu1 = {mu1} < 0')
    if not mu1 < L1:
        raise CurvatureOrderError(f'mu1 = {mu1} >= L1 = {L1}')
    if not mu2 < L2:
        raise CurvatureOrderError(f'mu2 = {mu2} >= L2 = {L2}')
    s = Splitting(float(mu1), float(L1), float(mu2), float(L2))
    if not s.decrease_condition() and not allow_no_decrease:
        raise NoDecreaseGuaranteeError(
            f'mu1 + mu2 = {mu1 + mu2} <= 0 and not both zero: '
            'no decrease guarantee (pass allow_no_decrease=True to override)')
    return s


def objective_curvatures(s: Splitting) -> ObjectiveCurvatures:
    """Curvature class of the objective F for a valid splitting.

    ``F = f1 - f2`` lies in the class with lower curvature ``mu1 - L2`` and
    upper curvature ``L1 - mu2``.  F is nonconvex iff ``L2 > mu1`` and
    nonconcave iff ``L1 > mu2``.
    """
    unbounded = s.L2 == INF
    mu_F = None if unbounded else s.mu1 - s.L2
    L_F = INF if s.L1 == INF else s.L1 - s.mu2
    return ObjectiveCurvatures(
        mu_F=mu_F,
        L_F=L_F,
        unbounded_below=unbounded,
        nonconvex=s.L2 > s.mu1,
        nonconcave=s.L1 > s.mu2,
    )
