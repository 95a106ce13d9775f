"""Exact one-dimensional worst-case instances for regimes p1 and p2.

Both constructions pair a single quadratic with a piecewise quadratic whose
curvature alternates between its class bounds.  Running the iteration on the
result produces equal subgradient residuals at every iterate and attains the
sublinear bound exactly: min residual^2 / 2 = delta / (p N) after N steps.
"""

import bisect
import math
from dataclasses import dataclass

import numpy as np

from .curvature import INF, Splitting, validate_splitting
from .engine import DcOracles
from .regimes import Regime, boundary_e, regime_coefficients

__all__ = (
    'QuadPiece', 'PiecewiseQuadratic1D', 'WorstCaseInstance', 'instance_p1',
    'instance_p2', 'as_oracles', 'DomainViolationError', 'DegenerateMu1Error',
    'NonInvertibleDerivativeError',
)

_CONTINUITY_RTOL = 1e-12


class DomainViolationError(ValueError):
    """Parameters outside the regime domain of the requested construction."""


class DegenerateMu1Error(DomainViolationError):
    """mu1 = 0: flat pieces make the conjugate step set-valued."""


class NonInvertibleDerivativeError(RuntimeError):
    """Derivative inversion hit a flat piece; internal consistency failure."""


@dataclass(frozen=True)
class QuadPiece:
    """c2/2 (x - x_ref)^2 + c1 (x - x_ref) + c0 on one interval."""

    c2: float
    c1: float
    c0: float
    x_ref: float

    def value(self, x: float) -> float:
        d = x - self.x_ref
        return 0.5 * self.c2 * d * d + self.c1 * d + self.c0

    def derivative(self, x: float) -> float:
        return self.c2 * (x - self.x_ref) + self.c1


@dataclass(frozen=True)
class PiecewiseQuadratic1D:
    """Piecewise quadratic on the real line with unbounded end pieces.

    ``pieces[i]`` covers ``[breakpoints[i-1], breakpoints[i]]`` (the first and
    last pieces extend to -inf and +inf).  Construction verifies value and
    derivative continuity at every breakpoint to 1e-12 relative.
    """

    breakpoints: tuple
    pieces: tuple

    def __post_init__(self):
        bps, pieces = self.breakpoints, self.pieces
        if len(pieces) != len(bps) + 1:
            raise ValueError('need exactly len(breakpoints) + 1 pieces')
        for a, b in zip(bps, bps[1:]):
            if not a < b:
                raise ValueError('breakpoints must be strictly increasing')
        for i, b in enumerate(bps):
            left, right = pieces[i], pieces[i + 1]
            for what, lv, rv in (('value', left.value(b), right.value(b)),
                                 ('derivative', left.derivative(b),
                                  right.derivative(b))):
                if abs(lv - rv) > _CONTINUITY_RTOL * max(1.0, abs(lv), abs(rv)):
                    raise ValueError(
                        f'{what} jump {lv} != {rv} at breakpoint {b}')

    def piece_index(self, x: float) -> int:
        return bisect.bisect_left(self.breakpoints, x)

    def value(self, x: float) -> float:
        return self.pieces[self.piece_index(x)].value(x)

    def derivative(self, x: float) -> float:
        return self.pieces[self.piece_index(x)].derivative(x)

    def curvature_range(self):
        c2s = [p.c2 for p in self.pieces]
        return min(c2s), max(c2s)

    def in_class(self, mu: float, L: float, tol: float = 0.0) -> bool:
        lo, hi = self.curvature_range()
        return lo >= mu - tol and hi <= L + tol

    def invert_derivative(self, g: float) -> float:
        """Solve derivative(x) = g; requires a nondecreasing derivative.

        Raises `NonInvertibleDerivativeError` when g falls on a flat piece
        (the preimage is then an interval, not a point).
        """
        slopes = [self.pieces[i].derivative(b)
                  for i, b in enumerate(self.breakpoints)]
        idx = bisect.bisect_left(slopes, g)
        piece = self.pieces[idx]
        if piece.c2 <= 0.0:
            raise NonInvertibleDerivativeError(
                f'derivative not strictly increasing at level {g}')
        return piece.x_ref + (g - piece.c1) / piece.c2

    def to_dict(self) -> dict:
        return {
            'breakpoints': list(self.breakpoints),
            'pieces': [{'c2': p.c2, 'c1': p.c1, 'c0': p.c0, 'x_ref': p.x_ref}
                       for p in self.pieces],
        }


@dataclass(frozen=True)
class WorstCaseInstance:
    """A generated worst-case pair with its predicted trajectory.

    ``x_iters`` are the N+1 predicted iterates, ``xbar`` the N interior
    curvature switch points of the piecewise part, ``U`` the common signed
    residual value (every iterate has residual exactly ``U**2``), and
    ``predicted_min_residual_sq = 2 delta / (p N) = U**2``.
    """

    f1: PiecewiseQuadratic1D
    f2: PiecewiseQuadratic1D
    splitting: Splitting
    regime: Regime
    N: int
    delta: float
    U: float
    x_iters: tuple
    xbar: tuple
    predicted_min_residual_sq: float


def _alternating_pieces(x, xbar, g, f, c_outer, c_inner):
    """Assemble the piecewise part: curvature c_outer on [x^k, xbar^k] and
    c_inner on [xbar^k, x^{k+1}], extended by c_outer beyond both ends."""
    n = len(x) - 1
    breakpoints = [x[0]]
    pieces = [QuadPiece(c_outer, g[0], f[0], x[0])]
    for k in range(n):
        pieces.append(QuadPiece(c_outer, g[k], f[k], x[k]))
        # a switch point colliding with the next iterate (c_outer piece
        # spanning the whole step) would create an empty inner piece; skip it
        if xbar[k] < x[k + 1] - 1e-15 * max(1.0, abs(x[k + 1])):
            breakpoints.append(xbar[k])
            pieces.append(QuadPiece(c_inner, g[k + 1], f[k + 1], x[k + 1]))
        breakpoints.append(x[k + 1])
    pieces.append(QuadPiece(c_outer, g[n], f[n], x[n]))
    return PiecewiseQuadratic1D(tuple(breakpoints), tuple(pieces))


def _check_anchor_f1(f1_0, f2_0, delta):
    if f1_0 is None:
        return f2_0 + delta
    if abs(f1_0 - (f2_0 + delta)) > 1e-12 * max(1.0, abs(f1_0)):
        raise ValueError(
            f'anchor f1_0 = {f1_0} inconsistent with f2_0 + delta '
            f'= {f2_0 + delta}')
    return f1_0


def instance_p1(mu1: float, L1: float, mu2: float, L2: float, delta: float,
                N: int, x0: float = 0.0, f2_0: float = 0.0, g2_0: float = 0.0,
                f1_0: float | None = None) -> WorstCaseInstance:
    """Worst-case instance attaining the regime p1 sublinear rate.

    f2 is the single quadratic of curvature L2 through ``(x0, f2_0)`` with
    slope ``g2_0``; f1 alternates curvature L1 on ``[x^k, xbar^k]`` and mu1 on
    ``[xbar^k, x^{k+1}]``, interpolating the closed-form iterate ladder.

    Parameters
    ----------
    mu1, L1, mu2, L2 : float
        Must satisfy ``0 < mu1 < L2 <= L1 < inf``, ``mu2 < min(L1, L2)``, and
        either ``mu2 >= 0`` or ``mu1 > -mu2`` with the p1/p3 boundary
        diagnostic nonpositive.
    delta : float
        Initial objective gap ``f1(x0) - f2(x0) > 0``; the run decreases F by
        exactly delta.
    N : int
        Number of iterations the instance is tight for.
    x0, f2_0, g2_0 : float, optional
        Anchors; defaults give a canonical reproducible instance.
    f1_0 : float, optional
        Must equal ``f2_0 + delta`` when given.

    Raises
    ------
    DegenerateMu1Error
        If ``mu1 = 0`` (flat pieces would make the conjugate step set-valued).
    DomainViolationError
        If the parameters leave the regime p1 domain.
    """
    if N < 1:
        raise ValueError(f'N = {N} < 1')
    if not delta > 0:
        raise ValueError(f'delta = {delta} must be positive')
    if mu1 == 0:
        raise DegenerateMu1Error('mu1 = 0 not supported by the construction')
    if not (0 < mu1 < L2 <= L1 < INF):
        raise DomainViolationError(
            f'need 0 < mu1 < L2 <= L1 < inf, got mu1={mu1}, L2={L2}, L1={L1}')
    if not (mu2 < L2 and mu2 < L1):
        raise DomainViolationError(f'mu2 = {mu2} must be below L1 and L2')
    s = validate_splitting(mu1, L1, mu2, L2)
    if mu2 < 0:
        e = boundary_e(s)
        if not (mu1 > -mu2 and e <= 0):
            raise DomainViolationError(
                f'weakly convex sub-case needs mu1 > -mu2 and boundary '
                f'diagnostic <= 0, got {e}')

    f1_0 = _check_anchor_f1(f1_0, f2_0, delta)
    sigma, sigma_plus = regime_coefficients(s, Regime.P1)
    p = sigma + sigma_plus
    U = -math.sqrt(2.0 * delta / (p * N))

    f2 = PiecewiseQuadratic1D((), (QuadPiece(L2, g2_0, f2_0, x0),))
    x = [x0 - k * U / L2 for k in range(N + 1)]
    g1 = [g2_0 - (k - 1) * U for k in range(N + 1)]
    f1v = [f2.value(x[k]) + (N - k) / N * delta for k in range(N + 1)]
    xbar = [x[k] - (L2 - mu1) / (L1 - mu1) * U / L2 for k in range(N)]
    f1 = _alternating_pieces(x, xbar, g1, f1v, L1, mu1)

    return WorstCaseInstance(f1, f2, s, Regime.P1, int(N), float(delta), U,
                             tuple(x), tuple(xbar), U * U)


def instance_p2(mu1: float, L1: float, mu2: float, L2: float, delta: float,
                N: int, x0: float = 0.0, f2_0: float = 0.0, g1_0: float = 0.0,
                f1_0: float | None = None) -> WorstCaseInstance:
    """Worst-case instance attaining the regime p2 sublinear rate.

    Mirror of `instance_p1`: f1 is the single quadratic of curvature L1 and
    f2 alternates mu2 on ``[x^k, xbar^k]`` and L2 on ``[xbar^k, x^{k+1}]``.

    Parameters
    ----------
    mu1, L1, mu2, L2 : float
        Must satisfy ``mu1, mu2 >= 0`` and ``max(mu1, mu2) < L1 < L2 < inf``.
    delta, N, x0, f2_0 : see `instance_p1`.
    g1_0 : float, optional
        Slope of f1 at x0.
    """
    if N < 1:
        raise ValueError(f'N = {N} < 1')
    if not delta > 0:
        raise ValueError(f'delta = {delta} must be positive')
    if not (mu1 >= 0 and mu2 >= 0):
        raise DomainViolationError('regime p2 needs mu1, mu2 >= 0')
    if not (max(mu1, mu2) < L1 < L2 < INF):
        raise DomainViolationError(
            f'need max(mu1, mu2) < L1 < L2 < inf, got mu1={mu1}, mu2={mu2}, '
            f'L1={L1}, L2={L2}')
    s = validate_splitting(mu1, L1, mu2, L2)

    f1_0 = _check_anchor_f1(f1_0, f2_0, delta)
    sigma, sigma_plus = regime_coefficients(s, Regime.P2)
    p = sigma + sigma_plus
    U = -math.sqrt(2.0 * delta / (p * N))

    f1 = PiecewiseQuadratic1D((), (QuadPiece(L1, g1_0, f1_0, x0),))
    x = [x0 - k * U / L1 for k in range(N + 1)]
    g2 = [g1_0 - (k + 1) * U for k in range(N + 1)]
    f2v = [f1.value(x[k]) - (N - k) / N * delta for k in range(N + 1)]
    xbar = [x[k] - (L2 - L1) / (L2 - mu2) * U / L1 for k in range(N)]
    f2 = _alternating_pieces(x, xbar, g2, f2v, mu2, L2)

    return WorstCaseInstance(f1, f2, s, Regime.P2, int(N), float(delta), U,
                             tuple(x), tuple(xbar), U * U)


def as_oracles(inst: WorstCaseInstance) -> DcOracles:
    """Exact closed-form oracles of a generated instance.

    The conjugate step inverts the strictly increasing piecewise-linear
    derivative of f1; evaluation and subgradients are exact piece lookups.
    Points travel as length-1 arrays.
    """
    f1, f2 = inst.f1, inst.f2
    return DcOracles(
        eval_f1=lambda x: f1.value(float(x[0])),
        eval_f2=lambda x: f2.value(float(x[0])),
        subgrad_f1=lambda x: np.array([f1.derivative(float(x[0]))]),
        subgrad_f2=lambda x: np.array([f2.derivative(float(x[0]))]),
        conj_step_f1=lambda g: np.array([f1.invert_derivative(float(g[0]))]),
    )
