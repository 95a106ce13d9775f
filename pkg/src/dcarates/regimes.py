"""Regime classification and exact one-step decrease coefficients.

Each admissible splitting with a decrease guarantee falls into exactly one of
six parameter regimes (plus the degenerate fully-convex case mu1 = mu2 = 0).
Every regime carries a pair of nonnegative coefficients ``(sigma,
sigma_plus)`` such that one iteration satisfies

    F(x) - F(x+) >= sigma/2 * |g1 - g2|^2 + sigma_plus/2 * |g1+ - g2+|^2

with subgradients taken at the current and next iterate.  The sum
``p = sigma + sigma_plus`` is the denominator of the sublinear rate.

Two scalar diagnostics steer the classification for weakly convex f2:
``threshold_b = 1/mu1 + 1/mu2 + 1/L2`` (its sign separates the regimes with a
vanishing current-residual coefficient from the others) and ``boundary_e``
(separates regime p1 from p3 when L1 >= L2).
"""

import enum
from dataclasses import dataclass

from .curvature import INF, Splitting, inv

__all__ = (
    'Regime', 'RegimeReport', 'classify', 'regime_coefficients',
    'threshold_b', 'boundary_e', 'contour_grid', 'GridCell',
    'OutsideAllRegimesError', 'EmptyGridError',
)


class OutsideAllRegimesError(ValueError):
    """The splitting is not covered by the one-step decrease analysis."""


class EmptyGridError(ValueError):
    """A contour grid was requested over an empty sample set."""


class Regime(enum.Enum):
    """The six one-step decrease regimes plus the degenerate convex case."""

    P1 = 'p1'
    P2 = 'p2'
    P3 = 'p3'
    P4 = 'p4'
    P5 = 'p5'
    P6 = 'p6'
    P1P2_DEGENERATE = 'p1p2_degenerate'


@dataclass(frozen=True)
class RegimeReport:
    """Classification result for one splitting.

    Attributes
    ----------
    regime : Regime
    sigma, sigma_plus : float
        Nonnegative weights of the squared residual at the current and at the
        next iterate in the one-step decrease bound.
    p : float
        ``sigma + sigma_plus``, the sublinear-rate denominator.
    threshold_b : float
        ``1/mu1 + 1/mu2 + 1/L2`` in extended-real arithmetic (``1/0 = inf``).
    boundary_e : float or None
        Diagnostic separating regimes p1 and p3; defined only for ``mu2 < 0``
        (None otherwise).
    description : str
        Convexity classes of f1, f2 and F in words.
    concave_unbounded : bool
        Set for regime p6: F is concave and unbounded from below.
    """

    regime: Regime
    sigma: float
    sigma_plus: float
    p: float
    threshold_b: float
    boundary_e: float | None
    description: str
    concave_unbounded: bool = False


def threshold_b(s: Splitting) -> float:
    """Sign threshold ``1/mu1 + 1/mu2 + 1/L2`` (extended-real sum)."""
    return inv(s.mu1) + inv(s.mu2) + inv(s.L2)


def boundary_e(s: Splitting) -> float | None:
    """Regime p1 / p3 separator; defined only for mu2 < 0.

    Evaluated in the algebraically stable form

        (L2 + mu2) * (1/L1 - 1/L2) / (-mu2) + 1/mu1 - 1/L1

    which has the correct limit ``threshold_b(s)`` when ``L1 = inf``.
    """
    if s.mu2 >= 0:
        return None
    lead = INF if s.L2 == INF else s.L2 + s.mu2
    term = lead * (inv(s.L1) - inv(s.L2)) / (-s.mu2)
    return term + inv(s.mu1) - inv(s.L1)


def _coeffs_p1(mu1: float, L1: float, mu2: float, L2: float):
    # requires finite L2; L1 may be inf
    sigma = (L2 - mu1) / (L1 - mu1) / L2
    ratio = (inv(L2) - inv(L1)) / (inv(mu1) - inv(L1))
    sigma_plus = (1.0 + ratio) / L2
    return sigma, sigma_plus


def _coeffs_p2(mu1: float, L1: float, mu2: float, L2: float):
    # exact mirror of p1 under (mu1, L1) <-> (mu2, L2), sigma <-> sigma_plus
    sigma_plus, sigma = _coeffs_p1(mu2, L2, mu1, L1)
    return sigma, sigma_plus


def _coeffs_p3(mu1: float, L1: float, mu2: float, L2: float):
    b = inv(mu1) + inv(mu2) + inv(L2)
    # b -> 0 forces sigma -> 0; the explicit guard also covers L1 = inf, b = 0
    sigma = 0.0 if b == 0.0 else inv(L1) * b / (b - inv(L1))
    sigma_plus = inv(L2 + mu2)
    return sigma, sigma_plus


def _coeffs_p4(mu1: float, L1: float, mu2: float, L2: float):
    return 0.0, (mu1 + mu2) / (mu2 * mu2)


def _coeffs_p5(mu1: float, L1: float, mu2: float, L2: float):
    return 0.0, (L2 + mu1) / (L2 * L2)


def _coeffs_p6(mu1: float, L1: float, mu2: float, L2: float):
    sigma_plus, sigma = _coeffs_p5(mu2, L2, mu1, L1)
    return sigma, sigma_plus


_COEFFS = {
    Regime.P1: _coeffs_p1,
    Regime.P2: _coeffs_p2,
    Regime.P3: _coeffs_p3,
    Regime.P4: _coeffs_p4,
    Regime.P5: _coeffs_p5,
    Regime.P6: _coeffs_p6,
}


def regime_coefficients(s: Splitting, regime: Regime):
    """(sigma, sigma_plus) of the requested regime formula, without domain checks.

    Useful for probing adjacent regimes on a shared boundary, where both
    formulas must agree.  Outside its domain a formula may return meaningless
    values.
    """
    if regime is Regime.P1P2_DEGENERATE:
        return inv(s.L1), inv(s.L2)
    return _COEFFS[regime](s.mu1, s.L1, s.mu2, s.L2)


def _describe(s: Splitting) -> str:
    f1 = 'strongly convex' if s.mu1 > 0 else 'convex'
    if s.L2 <= 0:
        f2 = 'concave'
    elif s.mu2 < 0:
        f2 = 'nonconvex'
    elif s.mu2 == 0:
        f2 = 'convex'
    else:
        f2 = 'strongly convex'
    lo = -INF if s.L2 == INF else s.mu1 - s.L2
    hi = INF if s.L1 == INF else s.L1 - s.mu2
    if hi <= 0:
        F = 'concave'
    elif lo > 0:
        F = 'strongly convex'
    elif lo >= 0:
        F = 'convex'
    elif hi == INF and lo == -INF:
        F = 'nonconvex-nonconcave'
    else:
        F = 'nonconvex-nonconcave' if lo < 0 else 'convex'
    return f'f1 {f1}, f2 {f2}, F {F}'


def classify(s: Splitting, tol: float = 0.0) -> RegimeReport:
    """Identify the unique decrease regime of a splitting.

    Parameters
    ----------
    s : Splitting
        Must satisfy the decrease condition (``mu1 + mu2 > 0`` or
        ``mu1 = mu2 = 0``) and have at least one smooth part.
    tol : float, optional
        Widens boundary membership for noisy inputs; the default 0 compares
        exactly.  Widened domains may overlap, in which case the first regime
        in the order p1..p6 wins; the coefficient formulas of adjacent regimes
        coincide on shared boundaries, so the choice is observationally
        irrelevant.

    Returns
    -------
    RegimeReport

    Raises
    ------
    OutsideAllRegimesError
        If the decrease condition fails or both parts are nonsmooth.
    """
    mu1, L1, mu2, L2 = s.mu1, s.L1, s.mu2, s.L2
    if not s.decrease_condition():
        raise OutsideAllRegimesError(
            f'mu1 + mu2 = {mu1 + mu2} <= 0 and not both zero: '
            'no regime applies')
    if not s.smooth_pair():
        raise OutsideAllRegimesError(
            'L1 = L2 = inf: the analysis needs at least one smooth part')

    b = threshold_b(s)
    e = boundary_e(s)

    if mu1 == 0 and mu2 == 0:
        sigma, sigma_plus = inv(L1), inv(L2)
        return RegimeReport(
            Regime.P1P2_DEGENERATE, sigma, sigma_plus, sigma + sigma_plus,
            b, e, _describe(s))

    def ge(a, c):
        return a >= c - tol

    def gt(a, c):
        return a > c - tol

    regime = None
    if (ge(L1, L2) and ge(L2, mu1) and gt(L1, mu2)
            and (mu2 >= -tol or e <= tol)):
        regime = Regime.P1
    elif ge(L2, L1) and ge(L1, mu2) and mu2 >= -tol and gt(L2, mu1):
        regime = Regime.P2
    elif (mu2 < tol and mu1 > -tol and gt(L2, mu1) and gt(L1, mu2)
            and b <= tol and ((ge(L1, L2) and e is not None and e >= -tol)
                              or gt(L2, L1))):
        regime = Regime.P3
    elif (mu2 < tol and mu1 > -tol and gt(L1, mu2)
            and ((b > -tol and ge(L2, 0.0)) or (b <= tol and L2 <= tol))):
        regime = Regime.P4
    elif (gt(L1, mu1) and ge(mu1, L2) and L2 > -tol and gt(L1, mu2)
            and (mu2 >= -tol or b <= tol)):
        regime = Regime.P5
    elif gt(L2, mu2) and ge(mu2, L1) and gt(L1, mu1) and mu1 >= -tol:
        regime = Regime.P6

    if regime is None:
        raise OutsideAllRegimesError(
            f'no regime matched (mu1={mu1}, L1={L1}, mu2={mu2}, L2={L2})')

    sigma, sigma_plus = _COEFFS[regime](mu1, L1, mu2, L2)
    return RegimeReport(
        regime, sigma, sigma_plus, sigma + sigma_plus, b, e, _describe(s),
        concave_unbounded=regime is Regime.P6)


@dataclass(frozen=True)
class GridCell:
    """One cell of a contour grid over (mu2, L2)."""

    mu2: float
    L2: float
    regime: str      # regime value, or 'infeasible'
    p: float | None
    sigma: float | None
    sigma_plus: float | None


def contour_grid(mu1: float, L1: float, mu2_values, L2_values,
                 tol: float = 0.0) -> list[GridCell]:
    """Classify every (mu2, L2) cell of a grid at fixed (mu1, L1).

    Cells whose splitting is invalid or has no decrease guarantee are marked
    ``infeasible`` instead of raising.  Cell order follows the given sample
    order (outer loop mu2, inner loop L2).

    Raises
    ------
    EmptyGridError
        If either sample set is empty.
    """
    mu2_values = list(mu2_values)
    L2_values = list(L2_values)
    if not mu2_values or not L2_values:
        raise EmptyGridError('contour grid needs at least one sample per axis')
    cells = []
    for mu2 in mu2_values:
        for L2 in L2_values:
            cell = GridCell(float(mu2), float(L2), 'infeasible',
                            None, None, None)
            s = Splitting(mu1, L1, float(mu2), float(L2))
            if mu1 >= 0 and mu1 < L1 and mu2 < L2 and s.decrease_condition():
                try:
                    report = classify(s, tol=tol)
                except OutsideAllRegimesError:
                    pass
                else:
                    cell = GridCell(float(mu2), float(L2),
                                    report.regime.value, report.p,
                                    report.sigma, report.sigma_plus)
            cells.append(cell)
    return cells
